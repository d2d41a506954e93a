"""Regularizing coordinate maps for singular potentials.

Both maps turn ``-psi'' + U psi = E psi`` with ``E = -omega`` into a regular
problem in ``y`` whose *pseudo-energy* is fixed, while ``omega`` moves into
the potential:

square map, ``x = y^2`` (Coulomb ``-1/|x|``)
    ``-chi'' + [3/(4 y^2) + 4 omega y^2] chi = 4 chi``. The ``3/(4 y^2)``
    barrier comes from ``psi = sqrt(y) chi``; the ``printed`` variant drops it.
exponential map, ``|x| = exp(|y|)`` (``-beta/|x|^alpha``)
    ``-chi'' + [-beta exp((2 - alpha)|y|) + omega exp(2|y|)] chi = 0``.

An energy ``-omega`` is a bound state when the pseudo-energy curve
``eps(omega)`` meets the target. Only crossings with ``eps`` falling as the
physical energy ``E = -omega`` rises count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .energy import energy_derivative, rayleigh_quotient
from .grid import Grid, make_grid, make_symmetric_grid_excluding_zero
from .kernel import assemble_kernel
from .potentials import Potential
from .solver import IncomingKind, SolveFailure, bracketed_root, make_incoming, solve_ls

log = logging.getLogger(__name__)

MAPS = ("coulomb", "exp")
VARIANTS = ("corrected", "printed")
DEFAULT_LY = 8.0
DEFAULT_HY = 0.02


@dataclass(frozen=True)
class SquareMapWell(Potential):
    omega: float = 0.25
    corrected: bool = True

    even = True
    finite_depth = True

    @property
    def singular(self):
        return self.corrected

    def _values(self, y):
        u = 4.0 * self.omega * y**2
        if self.corrected:
            u = u + 0.75 / y**2
        return u


@dataclass(frozen=True)
class ExponentialMapWell(Potential):
    omega: float = 0.02
    alpha: float = 3.0
    beta: float = 5.0

    even = True
    finite_depth = True

    def _values(self, y):
        a = np.abs(y)
        return -self.beta * np.exp((2.0 - self.alpha) * a) + self.omega * np.exp(2.0 * a)


@dataclass(frozen=True)
class PseudoEnergyProblem:
    kind: str = "coulomb"
    variant: str = "corrected"
    alpha: float = 3.0
    beta: float = 5.0

    def __post_init__(self):
        if self.kind not in MAPS:
            raise ValueError(f"unknown map {self.kind!r}; expected one of {MAPS}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.kind == "exp":
            if self.alpha < 2:
                raise ValueError("the exponential map needs alpha >= 2")
            if not self.beta > 0:
                raise ValueError("beta must be positive")

    @property
    def target(self) -> float:
        return 4.0 if self.kind == "coulomb" else 0.0

    def potential(self, omega: float) -> Potential:
        if not omega > 0:
            raise ValueError("omega must be positive")
        if self.kind == "coulomb":
            return SquareMapWell(omega, self.variant == "corrected")
        return ExponentialMapWell(omega, self.alpha, self.beta)

    def default_grid(self, L_y: float = DEFAULT_LY, h: float = DEFAULT_HY) -> Grid:
        n_half = int(round(L_y / h))
        if self.kind == "coulomb":
            return make_symmetric_grid_excluding_zero(L_y, n_half)
        return make_grid(-L_y, L_y, 2 * n_half + 1)

    def describe(self) -> dict:
        out = {"map": self.kind, "target": self.target}
        if self.kind == "coulomb":
            out["variant"] = self.variant
        else:
            out.update(alpha=self.alpha, beta=self.beta)
        return out


@dataclass(frozen=True)
class PseudoCurve:
    parity: str
    omegas: np.ndarray
    epsilons: np.ndarray
    ok: np.ndarray


@dataclass(frozen=True)
class PseudoHit:
    omega: float
    energy: float
    parity: str
    residual: float
    stationarity: float
    cross_check_passed: bool
    bracket: tuple[float, float]


class _PseudoEvaluator:
    """eps(omega) with the kernel assembled once at the target pseudo-energy."""

    def __init__(self, problem: PseudoEnergyProblem, grid: Grid, parity: str):
        self.problem = problem
        self.grid = grid
        kind = IncomingKind.MONOPOLE_DECAYING if parity == "even" else IncomingKind.DIPOLE_DECAYING
        self.incoming = make_incoming(kind, grid)
        self.kernel = assemble_kernel(grid, problem.target, "decaying")

    def __call__(self, omega: float) -> float:
        pot = self.problem.potential(omega)
        u = pot.values(self.grid.points)
        wf = solve_ls(self.grid, pot, self.problem.target, self.incoming, kernel=self.kernel, u=u)
        return rayleigh_quotient(wf.psi, u, self.grid.h)

    def safe(self, omega: float) -> float:
        try:
            return self(omega)
        except SolveFailure:
            return float("nan")


def pseudo_energy_curve(
    problem: PseudoEnergyProblem,
    y_grid: Grid,
    omega_min: float,
    omega_max: float,
    steps: int,
    parity: str = "odd",
    threads: int = 1,
) -> PseudoCurve:
    """Sample ``eps(omega)`` at ``steps + 1`` equidistant ``omega``."""
    if not 0 < omega_min < omega_max:
        raise ValueError("need 0 < omega_min < omega_max")
    if steps < 2:
        raise ValueError("need at least 2 steps")
    ev = _PseudoEvaluator(problem, y_grid, parity)
    omegas = np.linspace(omega_min, omega_max, steps + 1)
    omegas[-1] = omega_max
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            eps = np.array(list(pool.map(ev.safe, omegas)))
    else:
        eps = np.array([ev.safe(w) for w in omegas])
    return PseudoCurve(parity, omegas, eps, np.isfinite(eps))


def solve_pseudo(
    problem: PseudoEnergyProblem,
    y_grid: Grid,
    omega_window: tuple[float, float],
    steps: int = 200,
    *,
    parities=("even", "odd"),
    tol_match: float = 1e-6,
    tol_stat: float = 0.05,
    threads: int = 1,
    diagnostics: list | None = None,
    curves: list | None = None,
) -> list[PseudoHit]:
    """Bound states ``E = -omega*`` from target crossings of the pseudo-energy curve.

    Each sign change of ``eps - target`` between neighbouring samples is
    refined with Brent's method (see :func:`bracketed_root`). A hit is kept when ``eps`` rises with
    ``omega`` there (falls with ``E``), the refined residual is below
    ``tol_match`` (this removes sign changes through poles), and the curve in
    the pseudo-energy variable is stationary at the target with ``omega*``
    held fixed.
    """
    notes = diagnostics if diagnostics is not None else []
    hits: list[PseudoHit] = []
    target = problem.target
    for parity in parities:
        curve = pseudo_energy_curve(problem, y_grid, omega_window[0], omega_window[1], steps, parity, threads)
        if curves is not None:
            curves.append(curve)
        ev = _PseudoEvaluator(problem, y_grid, parity)
        idx = np.flatnonzero(curve.ok)
        for i, j in zip(idx, idx[1:]):
            fl, fr = curve.epsilons[i] - target, curve.epsilons[j] - target
            if fl * fr > 0 or (fl == 0 and fr == 0):
                continue
            lo, hi = float(curve.omegas[i]), float(curve.omegas[j])
            if fr < fl:
                notes.append(("falling-in-omega", parity, 0.5 * (lo + hi)))
                continue
            try:
                w, res = bracketed_root(lambda o: ev(o) - target, lo, hi)
            except (SolveFailure, ValueError) as exc:
                notes.append(("refinement-failed", parity, 0.5 * (lo + hi), str(exc)))
                continue
            if not res <= tol_match * max(1.0, abs(target)):
                notes.append(("pole", parity, w, res))
                continue
            stat = pseudo_stationarity(problem, y_grid, w, parity)
            hits.append(PseudoHit(w, -w, parity, res, stat, bool(stat <= tol_stat), (lo, hi)))
    return sorted(hits, key=lambda hit: (hit.omega, hit.parity))


def pseudo_stationarity(problem: PseudoEnergyProblem, y_grid: Grid, omega: float, parity: str) -> float:
    """``|d eps / dE'|`` at the target pseudo-energy ``E'`` with ``U_y(omega)`` held fixed."""
    pot = problem.potential(omega)
    kind = IncomingKind.MONOPOLE_DECAYING if parity == "even" else IncomingKind.DIPOLE_DECAYING
    inc = make_incoming(kind, y_grid)
    try:
        return abs(energy_derivative(y_grid, pot, inc, problem.target, 1e-4, branch="decaying"))
    except SolveFailure:
        return math.inf


def unique_energies(hits, tol: float = 1e-4) -> list[float]:
    out: list[float] = []
    for hit in sorted(hits, key=lambda h: h.energy):
        if not out or abs(hit.energy - out[-1]) > tol:
            out.append(hit.energy)
    return out


def cutoff_sensitivity(
    problem: PseudoEnergyProblem,
    omega_window: tuple[float, float],
    L_values=(4.0, 6.0, 8.0),
    *,
    h: float = DEFAULT_HY,
    steps: int = 200,
    parities=("even", "odd"),
    threads: int = 1,
) -> list[tuple[float, list[float]]]:
    """Energies found for each truncation ``|y| <= L_y`` at fixed spacing."""
    rows = []
    for L in L_values:
        grid = problem.default_grid(L, h)
        hits = solve_pseudo(problem, grid, omega_window, steps, parities=parities, threads=threads)
        rows.append((float(L), unique_energies([hit for hit in hits if hit.cross_check_passed])))
    return rows
