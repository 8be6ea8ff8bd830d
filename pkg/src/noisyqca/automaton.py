"""Partitioned two-site automaton on the single-excitation sector.

One elementary step sweeps partition A (pairs (1,2), (3,4), ...) and then
partition B (pairs (2,3), (4,5), ...).  On every pair it applies the block
unitary, then dephasing of strength ``xi``, then amplitude damping of signed
strength ``eta``.  The approximate inverse undoes the unitaries in reverse
partition order (B right-to-left, then A right-to-left) and re-applies the
same noise after each block.

The chain is open: a site not covered by any pair of a partition is left
alone by that partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DegenerateParameterError, DomainError
from .sector import SectorState

DEGENERACY_TOL = 1e-12
UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class RuleParams:
    """Hopping probabilities ``p`` (left) and ``q`` (right) plus two phases."""

    p: float
    q: float
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        for name in ("p", "q"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name}={v!r} outside [0, 1]")
        if 1.0 - self.p + self.q <= DEGENERACY_TOL:
            raise DegenerateParameterError(
                f"1 - p + q = {1.0 - self.p + self.q!r} vanishes (p={self.p}, q={self.q}); "
                "the block-unitary normalization 1/sqrt(1-p+q) is undefined"
            )


@dataclass(frozen=True)
class NoiseParams:
    xi: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.xi <= 1.0:
            raise DomainError(f"xi={self.xi!r} outside [0, 1]")
        if not abs(self.eta) <= 1.0:
            raise DomainError(f"eta={self.eta!r} outside [-1, 1]")


@dataclass(frozen=True)
class AutomatonConfig:
    """Chain length, rule and noise of one automaton.

    By default the damping strength must equal ``p - q``.  Setting
    ``decoupled_noise`` lifts that link so channels can be exercised with
    arbitrary ``(xi, eta)``; it is meant for unit tests, not reproduction runs.
    """

    n_sites: int
    rule: RuleParams
    noise: NoiseParams = field(default_factory=NoiseParams)
    initial_site: int = 1
    decoupled_noise: bool = False

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise DomainError(f"n_sites must be an integer >= 2, got {self.n_sites!r}")
        if not 1 <= self.initial_site <= self.n_sites:
            raise DomainError(f"initial_site {self.initial_site} outside 1..{self.n_sites}")
        if not self.decoupled_noise and self.noise.eta != self.rule.p - self.rule.q:
            raise DomainError(
                f"eta={self.noise.eta!r} must equal p - q = {self.rule.p - self.rule.q!r} "
                "unless decoupled_noise is set"
            )

    @classmethod
    def coupled(cls, n_sites, p, q, phi1=0.0, phi2=0.0, xi=0.0, initial_site=1):
        """Build a config whose damping strength is derived as ``eta = p - q``."""
        return cls(
            n_sites=n_sites,
            rule=RuleParams(p, q, phi1, phi2),
            noise=NoiseParams(xi=xi, eta=p - q),
            initial_site=initial_site,
        )


@dataclass(frozen=True, eq=False)
class BlockUnitary:
    """2x2 unitary on the ordered pair basis (|left>, |right>)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        if m.shape != (2, 2):
            raise DomainError(f"block unitary must be 2x2, got {m.shape}")
        defect = np.max(np.abs(m.conj().T @ m - np.eye(2)))
        if defect > UNITARITY_TOL:
            raise DomainError(f"matrix is not unitary (defect {defect:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def build_block_unitary(rule: RuleParams) -> BlockUnitary:
    norm = 1.0 - rule.p + rule.q
    if norm <= DEGENERACY_TOL:
        raise DegenerateParameterError(f"1 - p + q = {norm!r} vanishes")
    a = math.sqrt(1.0 - rule.p)
    b = math.sqrt(rule.q)
    e1 = np.exp(1j * rule.phi1)
    e2 = np.exp(1j * rule.phi2)
    m = np.array([[a, b * e2], [b * e1, -a * e1 * e2]]) / math.sqrt(norm)
    return BlockUnitary(m)


class Partition(str, Enum):
    A = "A"
    B = "B"


def partition_blocks(n_sites: int, partition: Partition | str) -> list[tuple[int, int]]:
    """1-based ``(left, right)`` pairs of one partition, left to right."""
    start = 1 if Partition(partition) is Partition.A else 2
    return [(i, i + 1) for i in range(start, n_sites, 2)]


def _check_block(n: int, block: tuple[int, int]) -> tuple[int, int]:
    i, j = block
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise DomainError(f"invalid block {block!r} for a chain of {n} sites")
    return i - 1, j - 1


def apply_block_unitary(rho: SectorState, block: tuple[int, int], u: BlockUnitary) -> SectorState:
    i, j = _check_block(rho.n_sites, block)
    idx = [i, j]
    m = rho.matrix.copy()
    m[idx, :] = u.matrix @ m[idx, :]
    m[:, idx] = m[:, idx] @ u.matrix.conj().T
    return SectorState(m)


def apply_block_dephasing(rho: SectorState, block: tuple[int, int], xi: float) -> SectorState:
    """Kraus {sqrt(1-xi)(P_i+P_j) + P_rest, sqrt(xi) P_i, sqrt(xi) P_j}."""
    if not 0.0 <= xi <= 1.0:
        raise DomainError(f"xi={xi!r} outside [0, 1]")
    i, j = _check_block(rho.n_sites, block)
    m = rho.matrix.copy()
    s = math.sqrt(1.0 - xi)
    d_ii, d_jj = m[i, i], m[j, j]
    # rows then columns: (i,j) gets s*s = 1-xi, block-exterior entries get s
    m[[i, j], :] *= s
    m[:, [i, j]] *= s
    m[i, i], m[j, j] = d_ii, d_jj
    return SectorState(m)


def apply_block_amplitude_damping(rho: SectorState, block: tuple[int, int], eta: float) -> SectorState:
    """Move a fraction ``|eta|`` of population towards the left site (eta > 0)
    or the right site (eta < 0) of ``block``."""
    if not abs(eta) <= 1.0:
        raise DomainError(f"eta={eta!r} outside [-1, 1]")
    i, j = _check_block(rho.n_sites, block)
    if eta == 0:
        return SectorState(rho.matrix)
    target, source = (i, j) if eta > 0 else (j, i)
    g = abs(eta)
    m = rho.matrix.copy()
    pop = m[source, source]
    s = math.sqrt(1.0 - g)
    m[source, :] *= s
    m[:, source] *= s
    m[target, target] += g * pop
    return SectorState(m)


class Propagator:
    """Whole-partition form of the block-wise step, for repeated application.

    Blocks of one partition act on disjoint index pairs, so their unitaries
    combine into a single N x N matrix, the dephasing and damping row/column
    factors into one elementwise mask, and the damping transfers into one
    diagonal update.  Methods work on raw complex arrays.
    """

    def __init__(self, config: AutomatonConfig):
        self.config = config
        n = config.n_sites
        u = build_block_unitary(config.rule).matrix
        xi, eta = config.noise.xi, config.noise.eta
        g = abs(eta)
        self.gain = g
        self.layers = {}
        for part in (Partition.A, Partition.B):
            blocks = partition_blocks(n, part)
            v = np.eye(n, dtype=np.complex128)
            deph = np.ones(n)
            damp = np.ones(n)
            src, tgt = [], []
            for left, right in blocks:
                i, j = left - 1, right - 1
                v[np.ix_([i, j], [i, j])] = u
                deph[[i, j]] = math.sqrt(1.0 - xi)
                if eta != 0:
                    t, s = (i, j) if eta > 0 else (j, i)
                    damp[s] = math.sqrt(1.0 - g)
                    src.append(s)
                    tgt.append(t)
            mask = np.outer(deph, deph)
            np.fill_diagonal(mask, 1.0)
            mask *= np.outer(damp, damp)
            self.layers[part] = (v, v.conj().T, mask, np.array(src, dtype=int), np.array(tgt, dtype=int))

    def _noisy_layer(self, m, part, inverse):
        v, vh, mask, src, tgt = self.layers[part]
        m = vh @ m @ v if inverse else v @ m @ vh
        pops = m[src, src]
        m *= mask
        m[tgt, tgt] += self.gain * pops
        return m

    def _layer_inverse_adjoint(self, m, part):
        v, vh, mask, src, tgt = self.layers[part]
        moved = m[tgt, tgt]
        m = m * mask
        m[src, src] += self.gain * moved
        return v @ m @ vh

    def forward(self, m: np.ndarray) -> np.ndarray:
        m = self._noisy_layer(m, Partition.A, inverse=False)
        return self._noisy_layer(m, Partition.B, inverse=False)

    def inverse(self, m: np.ndarray) -> np.ndarray:
        m = self._noisy_layer(m, Partition.B, inverse=True)
        return self._noisy_layer(m, Partition.A, inverse=True)

    def inverse_adjoint(self, m: np.ndarray) -> np.ndarray:
        """Heisenberg-picture dual of :meth:`inverse` under Tr[X^dag Y]."""
        m = self._layer_inverse_adjoint(m, Partition.A)
        return self._layer_inverse_adjoint(m, Partition.B)


@lru_cache(maxsize=256)
def propagator(config: AutomatonConfig) -> Propagator:
    return Propagator(config)


def _check_dims(rho: SectorState, config: AutomatonConfig) -> None:
    if rho.n_sites != config.n_sites:
        raise DomainError(f"state has {rho.n_sites} sites, config has {config.n_sites}")


def step_forward(rho: SectorState, config: AutomatonConfig) -> SectorState:
    """One noisy step: partition A, then partition B."""
    _check_dims(rho, config)
    return SectorState(propagator(config).forward(rho.matrix.copy()))


def step_inverse(rho: SectorState, config: AutomatonConfig) -> SectorState:
    """One step of the approximate inverse (exact when xi = eta = 0)."""
    _check_dims(rho, config)
    return SectorState(propagator(config).inverse(rho.matrix.copy()))
