"""Incoming states and the dense solve of the discretized Lippmann-Schwinger equation.

With Riemann weight ``h`` folded into the kernel the discrete equation reads::

    (I - G diag(U) h) psi = phi
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_solve
from scipy.linalg.lapack import dgecon, dgetrf
from scipy.optimize import brentq

from .grid import Grid
from .kernel import KernelMatrix, assemble_kernel
from .potentials import sample

log = logging.getLogger(__name__)

# reciprocal condition estimate below which (I - K) counts as singular
RCOND_MIN = 1e-15
RESIDUAL_TOL = 1e-10
REFINE_STEPS = 2

_EPS = np.finfo(float).eps
_EXTENDED = np.finfo(np.longdouble).eps < _EPS


class SolveFailure(RuntimeError):
    """The LS system is numerically singular at ``energy``."""

    def __init__(self, energy: float, reason: str):
        self.energy = energy
        self.reason = reason
        super().__init__(f"LS solve failed at E = {energy!r}: {reason}")


class IncomingKind(enum.Enum):
    MONOPOLE = "monopole"
    DIPOLE = "dipole"
    MONOPOLE_DECAYING = "monopole-decaying"
    DIPOLE_DECAYING = "dipole-decaying"

    @property
    def parity(self) -> str:
        return "even" if self in (IncomingKind.MONOPOLE, IncomingKind.MONOPOLE_DECAYING) else "odd"

    @property
    def decaying(self) -> bool:
        return self in (IncomingKind.MONOPOLE_DECAYING, IncomingKind.DIPOLE_DECAYING)


@dataclass(frozen=True)
class IncomingState:
    kind: IncomingKind
    samples: np.ndarray

    @property
    def parity(self) -> str:
        return self.kind.parity


def make_incoming(kind, grid: Grid) -> IncomingState:
    """Laplace-equation projectors ``1`` and ``x``, optionally times ``exp(-|x|)``."""
    kind = IncomingKind(kind)
    x = grid.points
    if kind is IncomingKind.MONOPOLE:
        phi = np.ones_like(x)
    elif kind is IncomingKind.DIPOLE:
        phi = x.copy()
    elif kind is IncomingKind.MONOPOLE_DECAYING:
        phi = np.exp(-np.abs(x))
    else:
        phi = x * np.exp(-np.abs(x))
    phi.setflags(write=False)
    return IncomingState(kind, phi)


def select_incoming(potential, parity: str, mode: str = "auto") -> IncomingKind:
    """Pick the incoming kind for a parity.

    ``auto`` uses the decaying forms for finite-depth potentials and the plain
    Laplace solutions for confining ones.
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if mode == "auto":
        decaying = bool(getattr(potential, "finite_depth", False))
    elif mode in ("decaying", "laplace"):
        decaying = mode == "decaying"
    else:
        raise ValueError(f"unknown incoming mode {mode!r}")
    if parity == "even":
        return IncomingKind.MONOPOLE_DECAYING if decaying else IncomingKind.MONOPOLE
    return IncomingKind.DIPOLE_DECAYING if decaying else IncomingKind.DIPOLE


@dataclass(frozen=True)
class Wavefunction:
    grid: Grid
    energy: float
    psi: np.ndarray
    parity: str
    rcond: float = float("nan")
    residual: float = 0.0


def system_matrix(kernel: KernelMatrix, u: np.ndarray) -> np.ndarray:
    """``I - G diag(U) h``."""
    h = kernel.grid.h
    a = kernel.entries * (u * h)[None, :]
    a *= -1.0
    a[np.diag_indices_from(a)] += 1.0
    return a


def backward_error(a: np.ndarray, psi: np.ndarray, phi: np.ndarray) -> float:
    """Normwise relative residual ``|phi - A psi| / (|A| |psi| + |phi|)`` in the infinity norm."""
    r = phi - a @ psi
    scale = np.linalg.norm(a, np.inf) * np.linalg.norm(psi, np.inf) + np.linalg.norm(phi, np.inf)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(r, np.inf) / scale)


def solve_system(a: np.ndarray, phi: np.ndarray, energy: float, rcond_min: float = RCOND_MIN):
    """LU solve with a condition check and iterative refinement. Returns ``(psi, rcond, residual)``.

    Residuals for refinement are accumulated in extended precision where the
    platform has it, which brings the forward error down to double rounding
    even for badly conditioned systems close to an eigenvalue.
    """
    anorm = np.linalg.norm(a, 1)
    lu, piv, info = dgetrf(a)
    if info > 0:
        raise SolveFailure(energy, f"exactly singular pivot {info}")
    if not np.all(np.isfinite(lu)):
        raise SolveFailure(energy, "non-finite LU factors")
    rcond, info = dgecon(lu, anorm, norm="1")
    if info != 0 or not rcond >= rcond_min:
        raise SolveFailure(energy, f"condition estimate {1.0 / max(rcond, 1e-300):.3e} above threshold")
    psi = lu_solve((lu, piv), phi, check_finite=False)
    wide = np.longdouble if _EXTENDED else float
    a_w, phi_w = a.astype(wide), phi.astype(wide)
    for _ in range(REFINE_STEPS):
        r = (phi_w - a_w @ psi.astype(wide)).astype(float)
        step = lu_solve((lu, piv), r, check_finite=False)
        psi = psi + step
        if np.linalg.norm(step, np.inf) <= _EPS * np.linalg.norm(psi, np.inf):
            break
    res = backward_error(a, psi, phi)
    if not np.all(np.isfinite(psi)):
        raise SolveFailure(energy, "non-finite solution")
    if res > RESIDUAL_TOL:
        raise SolveFailure(energy, f"residual {res:.3e} after refinement")
    if not np.any(psi):
        raise SolveFailure(energy, "solution vanishes identically")
    return psi, float(rcond), res


def solve_ls(
    grid: Grid,
    potential,
    E: float,
    incoming: IncomingState,
    *,
    branch: str = "decaying",
    kernel: KernelMatrix | None = None,
    u: np.ndarray | None = None,
    rcond_min: float = RCOND_MIN,
) -> Wavefunction:
    """Solve ``(I - K) psi = phi`` with ``K = G(E) diag(U) h``.

    ``kernel`` and ``u`` may be passed in to reuse a pre-assembled Green's
    matrix or potential vector.
    """
    if incoming.samples.shape != (grid.n_points,):
        raise ValueError("incoming state does not live on this grid")
    if u is None:
        u = sample(potential, grid)
    if kernel is None:
        kernel = assemble_kernel(grid, E, branch)
    elif kernel.grid is not grid and kernel.grid != grid:
        raise ValueError("kernel was assembled on a different grid")
    a = system_matrix(kernel, u)
    psi, rcond, res = solve_system(a, incoming.samples, E, rcond_min)
    return Wavefunction(grid, float(E), psi, incoming.parity, rcond, res)


class _SingularAt(Exception):
    def __init__(self, x: float):
        self.x = x


def bracketed_root(f, lo: float, hi: float, xtol: float = 1e-13) -> tuple[float, float]:
    """Root of ``f`` in a sign-change bracket by Brent's method; returns ``(x, |f| near x)``.

    An exact eigenvalue is also where the LS system turns singular, so the
    root finder may land on a point where ``f`` raises SolveFailure. That
    point is taken as the root and ``|f|`` is bounded by its values on both
    sides, at the smallest offset (growing tenfold from ``1e-10 |x|``) where
    the system is solvable again. A pole then shows up as a large residual.
    """
    def guarded(x):
        try:
            return f(x)
        except SolveFailure:
            raise _SingularAt(x) from None

    try:
        x = brentq(guarded, lo, hi, xtol=xtol, rtol=4 * _EPS)
        return x, abs(f(x))
    except _SingularAt as hit:
        x = hit.x
    d = max(xtol, 1e-10 * abs(x))
    while True:
        try:
            return x, max(abs(f(x - d)), abs(f(x + d)))
        except SolveFailure:
            d *= 10.0
            if d > 0.5 * (hi - lo):
                raise
