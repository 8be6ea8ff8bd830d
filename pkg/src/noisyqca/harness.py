"""Grid runs behind the command line: validation, execution, CSV output.

Run files are INI documents read with :mod:`configparser`::

    [grid]
    n = 8, 16
    p = 0.5
    q = 0.5
    phi1 = 0
    phi2 = 0, pi
    xi = 0.2, 0.4

    [protocol]
    delta = 1e-4
    t_max = 2000
    stride = 2
    samples = 200
    steps = 10

    [run]
    out = tirr.csv
    seed = 0
    jobs = 1

Every key is optional; missing ones fall back to :data:`DEFAULTS`.  Grid
values are comma-separated; phases also accept ``pi``, ``-pi``, ``pi/k`` and
``k*pi``.  The damping strength is always derived as ``p - q``.
"""

from __future__ import annotations

import configparser
import csv
import io
import itertools
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .automaton import AutomatonConfig, step_forward, step_inverse
from .errors import DomainError, InvariantViolation
from .metrics import (
    DEFAULT_DELTA,
    DEFAULT_STRIDE,
    DEFAULT_T_MAX,
    contraction_probe,
    fixed_point_residual,
    reversibility_curve,
)
from .oracle import MAX_SITES, embed_sector_state, full_step_forward, full_step_inverse, project_to_sector
from .sector import pure_site_state

COMMANDS = ("curve", "tirr-sweep", "contraction", "fixed-point", "oracle-check")
GRID_KEYS = ("n", "p", "q", "phi1", "phi2", "xi")
PARAM_COLUMNS = ["n", "p", "q", "phi1", "phi2", "xi", "eta"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

ORACLE_TOL = 1e-10
LEAK_TOL = 1e-12
RATIO_TOL = 1e-10

DEFAULTS = {
    "n": [8],
    "p": [0.5],
    "q": [0.5],
    "phi1": [0.0],
    "phi2": [0.0],
    "xi": [0.0],
    "delta": DEFAULT_DELTA,
    "t_max": DEFAULT_T_MAX,
    "stride": DEFAULT_STRIDE,
    "samples": 200,
    "steps": 10,
    "seed": 0,
    "jobs": 1,
}


class ValidationError(DomainError):
    """A run specification is unusable; the message names the field."""


@dataclass(frozen=True)
class RunSpec:
    command: str
    output_path: str
    grid: dict = field(default_factory=lambda: {k: list(DEFAULTS[k]) for k in GRID_KEYS})
    delta: float = DEFAULT_DELTA
    t_max: int = DEFAULT_T_MAX
    stride: int = DEFAULT_STRIDE
    samples: int = 200
    steps: int = 10
    seed: int = 0
    jobs: int = 1

    def configs(self) -> list[AutomatonConfig]:
        """Cartesian grid in key order n, p, q, phi1, phi2, xi."""
        return [
            AutomatonConfig.coupled(n, p, q, phi1, phi2, xi=xi)
            for n, p, q, phi1, phi2, xi in itertools.product(*(self.grid[k] for k in GRID_KEYS))
        ]


def parse_number(text: str) -> float:
    """Float, or a multiple/fraction of pi such as ``pi``, ``-pi/2``, ``3*pi/4``."""
    t = text.strip().replace(" ", "")
    sign = -1.0 if t.startswith("-") else 1.0
    body = t.lstrip("+-")
    if "pi" in body:
        coeff, _, div = body.partition("pi")
        return sign * float(coeff.rstrip("*") or 1) * math.pi / float(div.lstrip("/") or 1)
    return float(t)


def parse_list(name: str, text: str, kind=float) -> list:
    try:
        values = [parse_number(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError(f"{name}: cannot parse {text!r} ({exc})") from None
    if not values:
        raise ValidationError(f"{name}: empty list")
    if kind is int:
        if any(v != int(v) for v in values):
            raise ValidationError(f"{name}: expected integers, got {text!r}")
        values = [int(v) for v in values]
    return values


def read_config_file(path: str) -> dict:
    """Flatten a run file into a dict of raw string values."""
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ValidationError(f"config: cannot read {path!r} ({exc.strerror})") from None
    except configparser.Error as exc:
        raise ValidationError(f"config: malformed run file {path!r} ({exc})") from None
    raw = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            raw[key.replace("-", "_")] = value
    return raw


_SCALARS = {
    "delta": float,
    "t_max": int,
    "stride": int,
    "samples": int,
    "steps": int,
    "seed": int,
    "jobs": int,
}
_KNOWN = set(GRID_KEYS) | set(_SCALARS) | {"out"}


def build_spec(command: str, raw: dict) -> RunSpec:
    """Turn raw string/number settings into a validated :class:`RunSpec`."""
    if command not in COMMANDS:
        raise ValidationError(f"command: unknown command {command!r}")
    for forbidden in ("eta", "decoupled_noise"):
        if raw.get(forbidden) is not None:
            raise ValidationError(
                f"{forbidden}: independent damping is not available for reproduction runs; "
                "eta is always derived as p - q"
            )
    unknown = sorted(k for k, v in raw.items() if k not in _KNOWN and v is not None)
    if unknown:
        raise ValidationError(f"{unknown[0]}: unknown setting")

    grid = {}
    for key in GRID_KEYS:
        value = raw.get(key)
        if value is None:
            grid[key] = list(DEFAULTS[key])
        elif isinstance(value, str):
            grid[key] = parse_list(key, value, int if key == "n" else float)
        else:
            grid[key] = list(value)

    scalars = {}
    for key, kind in _SCALARS.items():
        value = raw.get(key)
        if value is None:
            scalars[key] = DEFAULTS[key]
            continue
        try:
            if not isinstance(value, str):
                scalars[key] = kind(value)
            elif kind is int:
                scalars[key] = int(value.strip())
            else:
                scalars[key] = parse_number(value)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{key}: invalid value {value!r} ({exc})") from None

    out = raw.get("out")
    if not out:
        raise ValidationError("out: no output path given (use --out or [run] out = ...)")
    spec = RunSpec(command=command, output_path=str(out), grid=grid, **scalars)
    validate(spec)
    return spec


def validate(spec: RunSpec) -> None:
    if not spec.delta > 0:
        raise ValidationError(f"delta: must be positive, got {spec.delta!r}")
    if spec.t_max < 0 or spec.t_max % 2:
        raise ValidationError(f"t_max: must be a non-negative even integer, got {spec.t_max!r}")
    if spec.stride < 2 or spec.stride % 2:
        raise ValidationError(f"stride: must be an even integer >= 2, got {spec.stride!r}")
    if spec.t_max and spec.t_max < spec.stride:
        raise ValidationError(f"t_max: {spec.t_max} is smaller than stride {spec.stride}")
    if spec.samples < 1:
        raise ValidationError(f"samples: must be >= 1, got {spec.samples!r}")
    if spec.steps < 0:
        raise ValidationError(f"steps: must be >= 0, got {spec.steps!r}")
    if not 0 <= spec.seed < 2**64:
        raise ValidationError(f"seed: must be an unsigned 64-bit integer, got {spec.seed!r}")
    if spec.jobs < 1:
        raise ValidationError(f"jobs: must be >= 1, got {spec.jobs!r}")
    if spec.command == "oracle-check":
        too_big = [n for n in spec.grid["n"] if n > MAX_SITES]
        if too_big:
            raise ValidationError(f"n: oracle-check supports at most {MAX_SITES} sites, got {too_big[0]}")
    for n, p, q, phi1, phi2, xi in itertools.product(*(spec.grid[k] for k in GRID_KEYS)):
        try:
            AutomatonConfig.coupled(n, p, q, phi1, phi2, xi=xi)
        except DomainError as exc:
            raise ValidationError(f"grid cell (n={n}, p={p}, q={q}, phi1={phi1}, phi2={phi2}, xi={xi}): {exc}") from None


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _params(config: AutomatonConfig) -> list:
    r = config.rule
    return [config.n_sites, r.p, r.q, r.phi1, r.phi2, config.noise.xi, config.noise.eta]


def _curve_rows(config, spec):
    rec = reversibility_curve(config, t_max=spec.t_max, stride=spec.stride, delta=spec.delta)
    return [_params(config) + [t, p1] for t, p1 in zip(rec.times, rec.p1_values)]


def _tirr_rows(config, spec):
    rec = reversibility_curve(config, t_max=spec.t_max, stride=2, delta=spec.delta)
    t_irr = -1 if rec.t_irr is None else rec.t_irr
    return [_params(config) + [spec.delta, spec.t_max, t_irr]]


def _contraction_rows(config, spec):
    report = contraction_probe(config, spec.samples, spec.seed)
    if report.max_ratio > 1.0 + RATIO_TOL:
        raise InvariantViolation(f"trace distance expanded by {report.max_ratio!r} for {config}")
    return [_params(config) + [spec.samples, spec.seed, report.max_ratio]]


def _fixed_point_rows(config, spec):
    return [_params(config) + [fixed_point_residual(config)]]


def oracle_discrepancy(config: AutomatonConfig, steps: int) -> tuple[float, float]:
    """Worst elementwise gap and leak between sector and full-space runs,
    over ``steps`` forward steps followed by ``steps`` inverse steps."""
    rho = pure_site_state(config.n_sites, config.initial_site)
    full = embed_sector_state(rho)
    gap = leak = 0.0
    for stepper, full_stepper in ((step_forward, full_step_forward), (step_inverse, full_step_inverse)):
        for _ in range(steps):
            rho = stepper(rho, config)
            full = full_stepper(full, config)
            projected, lost = project_to_sector(full)
            gap = max(gap, float(np.max(np.abs(projected.matrix - rho.matrix))))
            leak = max(leak, abs(lost))
    return gap, leak


def _oracle_rows(config, spec):
    gap, leak = oracle_discrepancy(config, spec.steps)
    if gap > ORACLE_TOL or leak > LEAK_TOL:
        raise InvariantViolation(f"oracle mismatch for {config}: gap {gap:.3e}, leak {leak:.3e}")
    return [_params(config) + [spec.steps, gap, leak]]


_COMMANDS = {
    "curve": (_curve_rows, ["T", "p1"]),
    "tirr-sweep": (_tirr_rows, ["delta", "t_max", "t_irr"]),
    "contraction": (_contraction_rows, ["samples", "seed", "max_ratio"]),
    "fixed-point": (_fixed_point_rows, ["residual"]),
    "oracle-check": (_oracle_rows, ["steps", "max_abs_diff", "max_leak"]),
}


def _cell(args):
    command, config, spec = args
    return _COMMANDS[command][0](config, spec)


def execute(spec: RunSpec) -> tuple[list[str], list[list]]:
    """Evaluate every grid cell; rows come back in grid order regardless of ``jobs``."""
    _, extra = _COMMANDS[spec.command]
    tasks = [(spec.command, cfg, spec) for cfg in spec.configs()]
    if spec.jobs == 1 or len(tasks) < 2:
        chunks = [_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            chunks = list(pool.map(_cell, tasks))
    return PARAM_COLUMNS + extra, [row for chunk in chunks for row in chunk]


def render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def check_writable(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(parent):
        raise OSError(f"output directory {parent!r} does not exist")
    if os.path.isdir(path):
        raise OSError(f"output path {path!r} is a directory")
    if not os.access(parent, os.W_OK) or (os.path.exists(path) and not os.access(path, os.W_OK)):
        raise OSError(f"output path {path!r} is not writable")


def run(spec: RunSpec) -> int:
    """Execute ``spec`` and write its CSV; return a process exit status."""
    try:
        validate(spec)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        check_writable(spec.output_path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        header, rows = execute(spec)
    except InvariantViolation as exc:
        print(f"error: numerical invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    try:
        with open(spec.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_csv(header, rows))
    except OSError as exc:
        print(f"error: cannot write {spec.output_path!r}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    print(f"{spec.command}: wrote {len(rows)} rows to {spec.output_path}", file=sys.stderr)
    return EXIT_OK

