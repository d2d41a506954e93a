"""Energy functional ``eps(E) = <psi|H|psi> / <psi|psi>`` and its E-derivative."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .potentials import sample
from .solver import IncomingState, SolveFailure, solve_ls


@dataclass(frozen=True)
class EnergySample:
    E: float
    epsilon: float
    depsilon_dE: float
    solve_ok: bool = True


def rayleigh_quotient(psi: np.ndarray, u: np.ndarray, h: float) -> float:
    """Interior-node Rayleigh quotient with the 3-point Laplacian.

    Boundary nodes only enter as stencil neighbours.
    """
    psi = np.asarray(psi, dtype=float)
    inner = psi[1:-1]
    norm = float(np.dot(inner, inner))
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("energy functional needs a non-zero wavefunction")
    kinetic = -(psi[2:] - 2.0 * inner + psi[:-2]) / (h * h)
    num = np.dot(inner, kinetic) + np.dot(u[1:-1] * inner, inner)
    return float(num / norm)


def eigen_residual(psi: np.ndarray, u: np.ndarray, h: float) -> float:
    """``||(H - eps) psi|| / ||psi||`` over interior nodes, with ``eps`` the Rayleigh quotient.

    Small when ``psi`` is close to an eigenvector of the 3-point Hamiltonian.
    """
    psi = np.asarray(psi, dtype=float)
    inner = psi[1:-1]
    h_psi = -(psi[2:] - 2.0 * inner + psi[:-2]) / (h * h) + u[1:-1] * inner
    norm2 = float(np.dot(inner, inner))
    if norm2 == 0.0 or not np.isfinite(norm2):
        raise ValueError("eigen residual needs a non-zero wavefunction")
    eps = float(np.dot(inner, h_psi)) / norm2
    return float(np.linalg.norm(h_psi - eps * inner) / np.sqrt(norm2))


def energy_value(grid: Grid, potential, psi) -> float:
    samples = getattr(psi, "psi", psi)
    return rayleigh_quotient(samples, sample(potential, grid), grid.h)


def default_delta(E: float) -> float:
    return max(1e-4, 1e-4 * abs(E))


def epsilon_at(grid: Grid, potential, incoming: IncomingState, E: float, *, branch: str = "decaying", u=None) -> float:
    """Solve at ``E`` and return the energy functional."""
    if u is None:
        u = sample(potential, grid)
    wf = solve_ls(grid, potential, E, incoming, branch=branch, u=u)
    return rayleigh_quotient(wf.psi, u, grid.h)


def energy_derivative(
    grid: Grid,
    potential,
    incoming: IncomingState,
    E: float,
    deltaE: float | None = None,
    *,
    branch: str = "decaying",
    u=None,
) -> float:
    """Centered difference ``[eps(E + dE) - eps(E - dE)] / (2 dE)`` from two fresh solves."""
    if deltaE is None:
        deltaE = default_delta(E)
    if not deltaE > 0:
        raise ValueError("deltaE must be positive")
    if u is None:
        u = sample(potential, grid)
    hi = epsilon_at(grid, potential, incoming, E + deltaE, branch=branch, u=u)
    lo = epsilon_at(grid, potential, incoming, E - deltaE, branch=branch, u=u)
    return (hi - lo) / (2.0 * deltaE)


def energy_sample(grid: Grid, potential, incoming: IncomingState, E: float, deltaE=None, *, branch="decaying", u=None) -> EnergySample:
    """``eps`` and ``d eps / dE`` at one energy; failures are embedded, not raised."""
    if deltaE is None:
        deltaE = default_delta(E)
    if u is None:
        u = sample(potential, grid)
    try:
        eps = epsilon_at(grid, potential, incoming, E, branch=branch, u=u)
        deriv = energy_derivative(grid, potential, incoming, E, deltaE, branch=branch, u=u)
    except SolveFailure:
        return EnergySample(float(E), float("nan"), float("nan"), False)
    return EnergySample(float(E), eps, deriv, bool(np.isfinite(eps) and np.isfinite(deriv)))
