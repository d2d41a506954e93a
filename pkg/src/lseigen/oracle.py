"""Finite-difference Hamiltonian with Dirichlet walls, used as an independent check.

The lowest eigenvalues come from Sturm-sequence counting and bisection,
which needs nothing beyond numpy and brackets every eigenvalue to a chosen
absolute width.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .potentials import sample


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    grid: Grid
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.diagonal)

    def dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)


def build_fd_hamiltonian(grid: Grid, potential) -> TridiagonalHamiltonian:
    """``-d^2/dx^2 + U`` by the 3-point stencil; ``psi = 0`` just outside the box."""
    u = sample(potential, grid)
    inv_h2 = 1.0 / grid.h**2
    diag = 2.0 * inv_h2 + u
    off = np.full(grid.n_points - 1, -inv_h2)
    diag.setflags(write=False)
    off.setflags(write=False)
    return TridiagonalHamiltonian(grid, diag, off)


def sturm_count(H: TridiagonalHamiltonian, lam) -> np.ndarray:
    """Number of eigenvalues strictly below each ``lam``.

    Counts negative pivots of the LDL^T factorization of ``H - lam``;
    vectorized over an array of shifts.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    d, e2 = H.diagonal, H.off_diagonal**2
    tiny = np.finfo(float).tiny
    count = np.zeros(lam.shape, dtype=int)
    q = d[0] - lam
    for i in range(H.dimension):
        if i:
            q = d[i] - lam - e2[i - 1] / q
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0
    return count


def gershgorin_bounds(H: TridiagonalHamiltonian) -> tuple[float, float]:
    radius = np.zeros(H.dimension)
    radius[:-1] += np.abs(H.off_diagonal)
    radius[1:] += np.abs(H.off_diagonal)
    return float(np.min(H.diagonal - radius)), float(np.max(H.diagonal + radius))


def lowest_eigenvalues(H: TridiagonalHamiltonian, k: int, tol: float = 1e-10) -> list[float]:
    """The ``k`` smallest eigenvalues, each bracketed to ``tol`` absolute width."""
    if not 1 <= k <= H.dimension:
        raise ValueError(f"k must lie in 1..{H.dimension}")
    lo_bound, hi_bound = gershgorin_bounds(H)
    lo = np.full(k, lo_bound - tol)
    hi = np.full(k, hi_bound + tol)
    index = np.arange(k)
    # eigenvalue j (0-based) is the smallest lam with count(lam) > j
    while np.any(hi - lo > tol):
        mid = 0.5 * (lo + hi)
        above = sturm_count(H, mid) > index
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return [float(v) for v in 0.5 * (lo + hi)]


def eigenvalues_in(H: TridiagonalHamiltonian, E_min: float, E_max: float, tol: float = 1e-10) -> list[float]:
    """All eigenvalues inside ``[E_min, E_max)``."""
    below_min, below_max = sturm_count(H, [E_min, E_max])
    if below_max == 0:
        return []
    return lowest_eigenvalues(H, int(below_max), tol)[int(below_min):]
