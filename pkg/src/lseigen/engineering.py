"""Inverse design: choose a potential parameter so that a target energy becomes an eigenvalue.

The Green's function is assembled once at the target energy. Scanning the
parameter ``beta`` of ``U(x; beta)`` then gives a curve ``eps(beta)``; its
crossings of the target line are candidates. Only crossings where ``eps``
falls through the target are kept, and each survivor is confirmed by a
forward energy scan of the designed potential.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .energy import rayleigh_quotient
from .grid import Grid
from .kernel import KernelMatrix, assemble_kernel
from .potentials import EngineeredWell
from .scanner import detect_eigenvalues, scan_energies
from .solver import SolveFailure, bracketed_root, make_incoming, select_incoming, solve_ls

log = logging.getLogger(__name__)

PARAMS = ("a", "gamma")


@dataclass(frozen=True)
class ParameterHit:
    param: str
    value: float
    crossing_from_above: bool
    cross_check_passed: bool
    achieved_energy: float
    slope: float = float("nan")
    stationarity: float = float("nan")
    bracket: tuple = ()


@dataclass(frozen=True)
class ParametricCurve:
    param: str
    betas: np.ndarray
    epsilons: np.ndarray
    ok: np.ndarray


@dataclass
class EngineeringResult:
    target: float
    param: str
    hits: list = field(default_factory=list)
    rejected_upward: list = field(default_factory=list)
    rejected_cross_check: list = field(default_factory=list)
    curve: ParametricCurve | None = None

    @property
    def upward_count(self) -> int:
        return len(self.rejected_upward)


def _family(param: str, fixed_other: float, beta: float) -> EngineeredWell:
    if param == "a":
        return EngineeredWell(a=beta, gamma=fixed_other)
    if param == "gamma":
        return EngineeredWell(a=fixed_other, gamma=beta)
    raise ValueError(f"unknown parameter {param!r}; expected one of {PARAMS}")


class _ParametricEvaluator:
    def __init__(self, target_E: float, param: str, fixed_other: float, grid: Grid, parity: str, kernel=None):
        self.param = param
        self.fixed_other = fixed_other
        self.grid = grid
        self.target = float(target_E)
        base = _family(param, fixed_other, 1.0)
        self.incoming = make_incoming(select_incoming(base, parity), grid)
        self.kernel = kernel if kernel is not None else assemble_kernel(grid, self.target, "decaying")

    def __call__(self, beta: float) -> float:
        pot = _family(self.param, self.fixed_other, beta)
        u = pot.values(self.grid.points)
        wf = solve_ls(self.grid, pot, self.target, self.incoming, kernel=self.kernel, u=u)
        return rayleigh_quotient(wf.psi, u, self.grid.h)

    def safe(self, beta: float) -> float:
        try:
            return self(beta)
        except SolveFailure:
            return float("nan")


def parametric_energy(
    target_E: float,
    param: str,
    fixed_other: float,
    beta: float,
    grid: Grid,
    parity: str = "even",
    kernel: KernelMatrix | None = None,
) -> float:
    """``eps(beta)`` from one LS solve with the Green's function fixed at ``target_E``."""
    return _ParametricEvaluator(target_E, param, fixed_other, grid, parity, kernel)(beta)


def parametric_curve(evaluator: _ParametricEvaluator, lo: float, hi: float, steps: int, threads: int = 1) -> ParametricCurve:
    betas = np.linspace(lo, hi, steps + 1)
    betas[-1] = hi
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            eps = np.array(list(pool.map(evaluator.safe, betas)))
    else:
        eps = np.array([evaluator.safe(b) for b in betas])
    return ParametricCurve(evaluator.param, betas, eps, np.isfinite(eps))


def forward_check(
    grid: Grid,
    potential,
    target_E: float,
    *,
    half_width: float = 0.5,
    steps: int = 100,
    verify_tol: float = 2e-2,
    parity: str = "even",
    incoming_mode: str = "decaying",
):
    """Forward energy scan around the target; returns ``(passed, eigenvalue or None)``.

    The decaying projector is the default: in the deep double wells of this
    family the plain monopole curve can cross the target line without a
    resolvable stationary point.
    """
    kind = select_incoming(potential, parity, incoming_mode)
    scan = scan_energies(grid, potential, kind, target_E - half_width, target_E + half_width, steps)
    found = detect_eigenvalues(scan)
    if not found:
        return False, None
    best = min(found, key=lambda ev: abs(ev.energy - target_E))
    return abs(best.energy - target_E) <= verify_tol, best


def find_parameters(
    target_E: float,
    param: str,
    fixed_other: float,
    beta_range: tuple[float, float],
    steps: int,
    grid: Grid,
    *,
    parity: str = "even",
    tol_match: float = 1e-8,
    verify_tol: float = 2e-2,
    check_half_width: float = 0.5,
    check_steps: int = 100,
    threads: int = 1,
) -> EngineeringResult:
    """Parameter values that make ``target_E`` an eigenvalue of ``U(x; beta)``."""
    lo, hi = map(float, beta_range)
    if not lo < hi:
        raise ValueError("parameter range must satisfy lo < hi")
    if param not in PARAMS:
        raise ValueError(f"unknown parameter {param!r}; expected one of {PARAMS}")
    ev = _ParametricEvaluator(target_E, param, fixed_other, grid, parity)
    curve = parametric_curve(ev, lo, hi, steps, threads)
    result = EngineeringResult(float(target_E), param, curve=curve)
    idx = np.flatnonzero(curve.ok)
    for i, j in zip(idx, idx[1:]):
        fl = curve.epsilons[i] - target_E
        fr = curve.epsilons[j] - target_E
        if fl * fr > 0 or (fl == 0 and fr == 0):
            continue
        b_lo, b_hi = float(curve.betas[i]), float(curve.betas[j])
        if fr > fl:
            result.rejected_upward.append(0.5 * (b_lo + b_hi))
            continue
        try:
            beta, residual = bracketed_root(lambda b: ev(b) - target_E, b_lo, b_hi, xtol=1e-12)
        except (SolveFailure, ValueError) as exc:
            log.debug("refinement failed in [%g, %g]: %s", b_lo, b_hi, exc)
            continue
        if residual > tol_match * max(1.0, abs(target_E)):
            # sign change through a pole of eps(beta)
            continue
        d = 1e-6 * max(1.0, abs(beta))
        try:
            slope = (ev(beta + d) - ev(beta - d)) / (2 * d)
        except SolveFailure:
            slope = float("nan")
        pot = _family(param, fixed_other, beta)
        passed, found = forward_check(
            grid, pot, target_E, half_width=check_half_width, steps=check_steps, verify_tol=verify_tol, parity=parity
        )
        hit = ParameterHit(
            param=param,
            value=beta,
            crossing_from_above=True,
            cross_check_passed=passed,
            achieved_energy=found.energy if found else float("nan"),
            slope=slope,
            stationarity=found.stationarity if found else float("nan"),
            bracket=(b_lo, b_hi),
        )
        (result.hits if passed else result.rejected_cross_check).append(hit)
    return result
