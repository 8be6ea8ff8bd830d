"""``noisyqca`` command line: run a parameter grid and write a CSV."""

from __future__ import annotations

import argparse
import sys

from .harness import COMMANDS, EXIT_VALIDATION, ValidationError, build_spec, read_config_file, run

_HELP = {
    "curve": "return probability P1(T) on T = 0, stride, ..., t_max",
    "tirr-sweep": "irreversibility time for every grid cell",
    "contraction": "largest one-step trace-distance ratio over random state pairs",
    "fixed-point": "trace distance between step(I/N) and I/N",
    "oracle-check": "compare sector evolution with the full 2^N qubit simulation (N <= 8)",
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisyqca",
        description="Reversibility of noisy partitioned quantum cellular automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name, help=_HELP[name], description=_HELP[name])
        p.add_argument("--config", help="INI run file; flags override its values")
        p.add_argument("--out", help="output CSV path")
        p.add_argument("--seed", help="unsigned 64-bit seed (default 0)")
        p.add_argument("--jobs", help="worker processes (default 1)")
        grid = p.add_argument_group("grid (comma-separated lists)")
        for key in ("n", "p", "q", "phi1", "phi2", "xi"):
            grid.add_argument(f"--{key}", metavar="LIST")
        proto = p.add_argument_group("protocol")
        proto.add_argument("--delta", help="closeness to 1/N for T_irr (default 1e-4)")
        proto.add_argument("--t-max", dest="t_max", help="largest total time T (even, default 2000)")
        proto.add_argument("--stride", help="spacing of curve samples (even, default 2)")
        proto.add_argument("--samples", help="state pairs for contraction (default 200)")
        proto.add_argument("--steps", help="forward and inverse steps for oracle-check (default 10)")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None}
    try:
        raw = read_config_file(args.config) if args.config else {}
        raw.update(overrides)
        spec = build_spec(args.command, raw)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
