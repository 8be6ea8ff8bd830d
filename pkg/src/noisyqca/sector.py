"""Density matrices restricted to the single-excitation sector of a chain.

A chain of N two-level sites with exactly one excitation lives in an
N-dimensional space spanned by |n>, n = 1..N (excitation on site n).  States
are stored as dense N x N complex matrices; sites are 1-based everywhere in
the public API.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvariantViolation

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SectorState:
    """Density matrix over the single-excitation site basis.

    ``matrix[i, j]`` holds <i+1|rho|j+1>.  The array is copied and frozen on
    construction.  Invariants are not checked here (that would cost an
    eigendecomposition per step); call :meth:`validate` when needed.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DomainError(f"expected a non-empty square matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_sites(self) -> int:
        return self.matrix.shape[0]

    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def violations(self) -> dict[str, float]:
        """Return the size of each invariant defect (0 means perfectly satisfied)."""
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        trace = float(abs(np.trace(m) - 1.0))
        lam_min = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
        return {"hermitian": herm, "trace": trace, "psd": max(0.0, -lam_min)}

    def validate(self) -> SectorState:
        v = self.violations()
        if v["hermitian"] > HERMITIAN_TOL:
            raise InvariantViolation(f"state not Hermitian (defect {v['hermitian']:.3e})")
        if v["trace"] > TRACE_TOL:
            raise InvariantViolation(f"state trace off by {v['trace']:.3e}")
        if v["psd"] > PSD_TOL:
            raise InvariantViolation(f"state has eigenvalue {-v['psd']:.3e}")
        return self


def _check_n_sites(n_sites: int) -> None:
    if int(n_sites) != n_sites or n_sites < 1:
        raise DomainError(f"n_sites must be a positive integer, got {n_sites!r}")


def _check_site(n_sites: int, site: int) -> None:
    if int(site) != site or not 1 <= site <= n_sites:
        raise DomainError(f"site {site!r} outside 1..{n_sites}")


def pure_site_state(n_sites: int, site: int) -> SectorState:
    """Projector |site><site|."""
    _check_n_sites(n_sites)
    _check_site(n_sites, site)
    m = np.zeros((n_sites, n_sites), dtype=np.complex128)
    m[site - 1, site - 1] = 1.0
    return SectorState(m)


def maximally_mixed(n_sites: int) -> SectorState:
    _check_n_sites(n_sites)
    return SectorState(np.eye(n_sites, dtype=np.complex128) / n_sites)


def trace_distance(a: SectorState, b: SectorState) -> float:
    """Half the sum of absolute eigenvalues of ``a - b``."""
    if a.n_sites != b.n_sites:
        raise DomainError(f"dimension mismatch: {a.n_sites} vs {b.n_sites}")
    diff = a.matrix - b.matrix
    diff = (diff + diff.conj().T) / 2
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def random_sector_state(n_sites: int, seed: int) -> SectorState:
    """Full-rank state G G^dag / Tr(G G^dag) with complex Gaussian G."""
    _check_n_sites(n_sites)
    rng = np.random.default_rng(np.uint64(seed))
    g = rng.standard_normal((n_sites, n_sites)) + 1j * rng.standard_normal((n_sites, n_sites))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return SectorState(rho / np.trace(rho).real)


def fidelity_with_pure(rho: SectorState, site: int) -> float:
    """Tr[|site><site| rho], i.e. the population of ``site``."""
    _check_site(rho.n_sites, site)
    return float(rho.matrix[site - 1, site - 1].real)
