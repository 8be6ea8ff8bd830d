"""Brute-force cross-check in the full 2^N qubit space.

Each site is a qubit; site n (1-based) is excited when bit n-1 of the basis
index is set.  Every block operation is written as a 4x4 two-qubit operator
on the local basis (|00>, |10>, |01>, |11>) (left bit first), embedded into
the full space by walking the basis, and applied as an explicit Kraus sum.
Nothing here reuses the sector-level channel code, only the 2x2 unitary
and the partition layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .automaton import AutomatonConfig, Partition, build_block_unitary, partition_blocks
from .errors import CapacityError, DegenerateProjectionError, DomainError
from .sector import SectorState

MAX_SITES = 8
MIN_SECTOR_WEIGHT = 1e-9


@dataclass(frozen=True, eq=False)
class FullState:
    n_sites: int
    matrix: np.ndarray

    def __post_init__(self):
        if not 2 <= self.n_sites <= MAX_SITES:
            raise CapacityError(f"full-space states support 2..{MAX_SITES} sites, got {self.n_sites}")
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        dim = 2**self.n_sites
        if m.shape != (dim, dim):
            raise DomainError(f"expected a {dim}x{dim} matrix, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def basis_index(n_sites: int, excited: list[int] | tuple[int, ...]) -> int:
    """Computational-basis index with the given 1-based sites excited."""
    return sum(1 << (s - 1) for s in excited)


def basis_state(n_sites: int, excited=()) -> FullState:
    dim = 2**n_sites
    m = np.zeros((dim, dim), dtype=np.complex128)
    k = basis_index(n_sites, excited)
    m[k, k] = 1.0
    return FullState(n_sites, m)


def embed_sector_state(rho: SectorState) -> FullState:
    """Place a sector density matrix on the one-excitation subspace."""
    n = rho.n_sites
    idx = [1 << k for k in range(n)]
    m = np.zeros((2**n, 2**n), dtype=np.complex128)
    m[np.ix_(idx, idx)] = rho.matrix
    return FullState(n, m)


def _local_unitary(u2: np.ndarray) -> np.ndarray:
    op = np.eye(4, dtype=np.complex128)
    op[1:3, 1:3] = u2
    return op


def _local_dephasing(xi: float) -> list[np.ndarray]:
    k0 = np.diag([1.0, math.sqrt(1 - xi), math.sqrt(1 - xi), 1.0]).astype(np.complex128)
    k1 = np.zeros((4, 4), dtype=np.complex128)
    k1[1, 1] = math.sqrt(xi)
    k2 = np.zeros((4, 4), dtype=np.complex128)
    k2[2, 2] = math.sqrt(xi)
    return [k0, k1, k2]


def _local_damping(eta: float) -> list[np.ndarray]:
    # |10> = left excited (local index 1), |01> = right excited (local index 2)
    g = abs(eta)
    target, source = (1, 2) if eta >= 0 else (2, 1)
    a0 = np.eye(4, dtype=np.complex128)
    a0[source, source] = math.sqrt(1 - g)
    a1 = np.zeros((4, 4), dtype=np.complex128)
    a1[target, source] = math.sqrt(g)
    return [a0, a1]


def embed_two_site(op4: np.ndarray, n_sites: int, left: int, right: int) -> np.ndarray:
    """Lift a 4x4 operator on sites (left, right) to the 2^N space."""
    dim = 2**n_sites
    bl, br = 1 << (left - 1), 1 << (right - 1)
    full = np.zeros((dim, dim), dtype=np.complex128)
    for x in range(dim):
        rest = x & ~(bl | br)
        col = (1 if x & bl else 0) + (2 if x & br else 0)
        for row in range(4):
            amp = op4[row, col]
            if amp != 0:
                y = rest | (bl if row & 1 else 0) | (br if row & 2 else 0)
                full[y, x] += amp
    return full


@lru_cache(maxsize=64)
def _block_channels(config: AutomatonConfig, inverse: bool):
    """Ordered list of Kraus sets, one per (block, channel) application."""
    n = config.n_sites
    if n > MAX_SITES:
        raise CapacityError(f"oracle supports at most {MAX_SITES} sites, got {n}")
    u2 = build_block_unitary(config.rule).matrix
    if inverse:
        u2 = u2.conj().T
        order = [(Partition.B, True), (Partition.A, True)]
    else:
        order = [(Partition.A, False), (Partition.B, False)]
    local = [
        [_local_unitary(u2)],
        _local_dephasing(config.noise.xi),
        _local_damping(config.noise.eta),
    ]
    ops = []
    for part, reverse in order:
        blocks = partition_blocks(n, part)
        for left, right in reversed(blocks) if reverse else blocks:
            for kraus in local:
                ops.append([embed_two_site(k, n, left, right) for k in kraus])
    return ops


def _apply(rho: FullState, config: AutomatonConfig, inverse: bool) -> FullState:
    if config.n_sites > MAX_SITES:
        raise CapacityError(f"oracle supports at most {MAX_SITES} sites, got {config.n_sites}")
    if rho.n_sites != config.n_sites:
        raise DomainError(f"state has {rho.n_sites} sites, config has {config.n_sites}")
    m = rho.matrix
    for kraus in _block_channels(config, inverse):
        m = sum(k @ m @ k.conj().T for k in kraus)
    return FullState(rho.n_sites, m)


def full_step_forward(rho: FullState, config: AutomatonConfig) -> FullState:
    return _apply(rho, config, inverse=False)


def full_step_inverse(rho: FullState, config: AutomatonConfig) -> FullState:
    return _apply(rho, config, inverse=True)


def project_to_sector(rho: FullState) -> tuple[SectorState, float]:
    """Renormalized one-excitation block and the weight lost outside it."""
    idx = [1 << k for k in range(rho.n_sites)]
    sub = rho.matrix[np.ix_(idx, idx)]
    weight = float(np.trace(sub).real)
    if weight < MIN_SECTOR_WEIGHT:
        raise DegenerateProjectionError(f"single-excitation weight {weight:.3e} too small to project")
    return SectorState(sub / weight), 1.0 - weight
