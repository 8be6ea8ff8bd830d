"""Reversibility observables of the noisy automaton.

The return probability ``P1(T)`` runs ``T/2`` forward steps from the initial
site projector, then ``T/2`` steps of the approximate inverse, and reads off
the population of the initial site.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .automaton import AutomatonConfig, propagator, step_forward
from .errors import DomainError, InvariantViolation
from .sector import maximally_mixed, pure_site_state, random_sector_state, trace_distance

DEFAULT_DELTA = 1e-4
DEFAULT_T_MAX = 2000
DEFAULT_STRIDE = 2
PERSISTENCE = 3
MIN_DISTANCE = 1e-8
P1_TOL = 1e-12


@dataclass(frozen=True)
class EvolutionRecord:
    config: AutomatonConfig
    times: list[int]
    p1_values: list[float]
    t_irr: Optional[int]
    delta: float
    t_max: int

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise InvariantViolation("times must be strictly increasing")
        if any(t % 2 for t in self.times):
            raise InvariantViolation("times must be even")
        bad = [p for p in self.p1_values if not -P1_TOL <= p <= 1.0 + P1_TOL]
        if bad:
            raise InvariantViolation(f"return probability out of range: {bad[0]!r}")
        if self.t_irr is not None and self.t_irr not in self.times:
            raise InvariantViolation(f"t_irr={self.t_irr} is not a sampled time")


@dataclass(frozen=True)
class ContractionReport:
    config: AutomatonConfig
    sample_count: int
    max_ratio: float
    seed: int


def _check_even(name: str, value: int) -> None:
    if int(value) != value or value < 0 or value % 2:
        raise DomainError(f"{name} must be a non-negative even integer, got {value!r}")


def return_probability(config: AutomatonConfig, total_time: int) -> float:
    """P1(T) by a direct forward-then-inverse run from the initial site."""
    _check_even("total_time", total_time)
    prop = propagator(config)
    m = pure_site_state(config.n_sites, config.initial_site).matrix.copy()
    for _ in range(total_time // 2):
        m = prop.forward(m)
    for _ in range(total_time // 2):
        m = prop.inverse(m)
    k = config.initial_site - 1
    return float(m[k, k].real)


def _return_probability_series(config: AutomatonConfig, half_times: list[int]) -> list[float]:
    """P1(2k) for every k in ``half_times`` in one O(max k) pass.

    With a_k the k-step forward state and b_k the initial-site projector
    pulled back k steps through the dual of the inverse map,
    P1(2k) = Tr[b_k a_k].  This gives the same numbers as independent
    direct runs without the quadratic cost.
    """
    prop = propagator(config)
    a = pure_site_state(config.n_sites, config.initial_site).matrix.copy()
    b = a.copy()
    wanted = set(half_times)
    out = {}
    for k in range(max(half_times) + 1):
        if k:
            a = prop.forward(a)
            b = prop.inverse_adjoint(b)
        if k in wanted:
            # b is Hermitian, so Tr[b a] = sum(b * a^T)
            out[k] = float(np.sum(b * a.T).real)
    return [out[k] for k in half_times]


def _first_persistent(times, values, target, delta, window=PERSISTENCE):
    hits = [abs(v - target) <= delta for v in values]
    for idx in range(len(times) - window + 1):
        if all(hits[idx : idx + window]):
            return times[idx]
    return None


def reversibility_curve(
    config: AutomatonConfig,
    t_max: int = DEFAULT_T_MAX,
    stride: int = DEFAULT_STRIDE,
    delta: float = DEFAULT_DELTA,
) -> EvolutionRecord:
    """P1 at T = 0, stride, 2*stride, ..., t_max and the irreversibility time.

    The irreversibility time is the first sampled T at which P1 sits within
    ``delta`` of 1/N for that sample and the next two; ``None`` if the curve
    never settles before ``t_max``.
    """
    _check_even("t_max", t_max)
    if int(stride) != stride or stride < 2 or stride % 2:
        raise DomainError(f"stride must be an even integer >= 2, got {stride!r}")
    if t_max and t_max < stride:
        raise DomainError(f"t_max={t_max} smaller than stride={stride}")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    times = list(range(0, t_max + 1, stride))
    p1 = _return_probability_series(config, [t // 2 for t in times])
    t_irr = _first_persistent(times, p1, 1.0 / config.n_sites, delta)
    return EvolutionRecord(config, times, p1, t_irr, delta, t_max)


def irreversibility_time(
    config: AutomatonConfig, delta: float = DEFAULT_DELTA, t_max: int = DEFAULT_T_MAX
) -> Optional[int]:
    """Smallest even T <= t_max with |P1 - 1/N| <= delta persisting for three
    consecutive even times, or ``None`` when that never happens."""
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    return reversibility_curve(config, t_max=t_max, stride=2, delta=delta).t_irr


def fixed_point_residual(config: AutomatonConfig) -> float:
    mixed = maximally_mixed(config.n_sites)
    return trace_distance(step_forward(mixed, config), mixed)


def sub_seeds(seed: int, count: int) -> list[int]:
    """``count`` distinct 64-bit seeds derived deterministically from ``seed``."""
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def contraction_probe(config: AutomatonConfig, sample_count: int, seed: int) -> ContractionReport:
    """Largest D(step(r1), step(r2)) / D(r1, r2) over random state pairs."""
    if int(sample_count) != sample_count or sample_count < 1:
        raise DomainError(f"sample_count must be >= 1, got {sample_count!r}")
    seeds = sub_seeds(seed, 2 * sample_count)
    n = config.n_sites
    max_ratio = 0.0
    for s1, s2 in zip(seeds[::2], seeds[1::2]):
        r1 = random_sector_state(n, s1)
        r2 = random_sector_state(n, s2)
        d0 = trace_distance(r1, r2)
        if d0 <= MIN_DISTANCE:
            continue
        d1 = trace_distance(step_forward(r1, config), step_forward(r2, config))
        max_ratio = max(max_ratio, d1 / d0)
    return ContractionReport(config, sample_count, max_ratio, seed)
