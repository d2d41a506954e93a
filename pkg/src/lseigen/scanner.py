"""Energy sweeps and eigenvalue detection.

An eigenvalue is a stationary point ``E_s`` of the energy curve
(``d eps/dE = 0``) that also meets the energy line (``eps(E_s) = E_s``).
Stationary points are located first, from sign changes of the sampled
derivative, then refined by bisection; only afterwards is the line condition
tested.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .energy import default_delta, eigen_residual, energy_sample, rayleigh_quotient
from .grid import Grid
from .potentials import sample
from .solver import IncomingKind, SolveFailure, make_incoming, select_incoming, solve_ls

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyScan:
    parity: str
    incoming: IncomingKind
    E_min: float
    E_max: float
    step: float
    samples: tuple
    grid: Grid = field(repr=False)
    potential: object = field(repr=False)
    delta_e: float | None = None
    branch: str = "decaying"

    @property
    def energies(self) -> np.ndarray:
        return np.array([s.E for s in self.samples])

    @property
    def epsilons(self) -> np.ndarray:
        return np.array([s.epsilon for s in self.samples])

    @property
    def derivatives(self) -> np.ndarray:
        return np.array([s.depsilon_dE for s in self.samples])

    @property
    def ok(self) -> np.ndarray:
        return np.array([s.solve_ok for s in self.samples], dtype=bool)


@dataclass(frozen=True)
class Eigenvalue:
    """An accepted level.

    ``energy`` is the value of the energy curve at its refined stationary
    point ``stationary_at``; ``residual`` and ``stationarity`` are measured
    there. ``consistency`` is ``|eps(energy) - energy|`` and ``eigen_residual``
    is ``||(H - eps) psi|| / ||psi||`` at ``stationary_at``.
    """

    energy: float
    parity: str
    residual: float
    stationarity: float
    refined: bool = True
    stationary_at: float = float("nan")
    consistency: float = 0.0
    eigen_residual: float = float("nan")


@dataclass(frozen=True)
class Rejection:
    """A candidate that failed one of the detection tests."""

    energy: float
    parity: str
    reason: str
    residual: float = float("nan")
    stationarity: float = float("nan")


@dataclass(frozen=True)
class Tolerances:
    match: float | None = None
    stat: float | None = None
    xtol: float = 1e-7
    max_iter: int = 60
    eig: float | None = None

    def resolve(self, scan: EnergyScan) -> tuple[float, float, float]:
        match = self.match if self.match is not None else default_tol_match(scan)
        stat = self.stat if self.stat is not None else default_tol_stat(scan)
        eig = self.eig if self.eig is not None else default_tol_eig(scan)
        return match, stat, eig


def default_tol_match(scan: EnergyScan) -> float:
    return 5.0 * scan.step


def default_tol_stat(scan: EnergyScan) -> float:
    # the energy line spans the window, so its width sets the scale of eps
    return 1e-3 * max(scan.E_max - scan.E_min, 1.0)


def default_tol_eig(scan: EnergyScan) -> float:
    # genuine levels sit far below this, spurious extrema near poles far above
    return max(default_tol_match(scan), 2e-2 * max(scan.E_max - scan.E_min, 1.0))


def _sample_energies(E_min: float, E_max: float, steps: int) -> np.ndarray:
    es = np.linspace(E_min, E_max, steps + 1)
    es[0], es[-1] = E_min, E_max
    return es


def scan_energies(
    grid: Grid,
    potential,
    incoming,
    E_min: float,
    E_max: float,
    steps: int,
    *,
    delta_e: float | None = None,
    branch: str = "decaying",
    threads: int = 1,
) -> EnergyScan:
    """Evaluate ``eps`` and ``d eps/dE`` at ``steps + 1`` equidistant energies.

    Samples are independent; with ``threads > 1`` they are computed
    concurrently and the result is identical to the sequential one.
    """
    if not E_min < E_max:
        raise ValueError("E_min must be smaller than E_max")
    if steps < 2:
        raise ValueError("a scan needs at least 2 steps")
    if isinstance(incoming, (IncomingKind, str)):
        incoming = make_incoming(incoming, grid)
    u = sample(potential, grid)
    energies = _sample_energies(float(E_min), float(E_max), int(steps))

    def one(E):
        return energy_sample(grid, potential, incoming, float(E), delta_e, branch=branch, u=u)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = tuple(pool.map(one, energies))
    else:
        samples = tuple(one(E) for E in energies)
    return EnergyScan(
        parity=incoming.parity,
        incoming=incoming.kind,
        E_min=float(E_min),
        E_max=float(E_max),
        step=(float(E_max) - float(E_min)) / steps,
        samples=samples,
        grid=grid,
        potential=potential,
        delta_e=delta_e,
        branch=branch,
    )


class _Curve:
    """Memoized access to eps(E) and its centered derivative for one scan."""

    def __init__(self, scan: EnergyScan):
        self.scan = scan
        self.grid = scan.grid
        self.u = sample(scan.potential, scan.grid)
        self.incoming = make_incoming(scan.incoming, scan.grid)
        self._cache: dict[float, float] = {}

    def eps(self, E: float) -> float:
        E = float(E)
        if E not in self._cache:
            wf = solve_ls(self.grid, self.scan.potential, E, self.incoming, branch=self.scan.branch, u=self.u)
            self._cache[E] = rayleigh_quotient(wf.psi, self.u, self.grid.h)
        return self._cache[E]

    def residual(self, E: float) -> float:
        wf = solve_ls(self.grid, self.scan.potential, float(E), self.incoming, branch=self.scan.branch, u=self.u)
        return eigen_residual(wf.psi, self.u, self.grid.h)

    def deriv(self, E: float) -> float:
        d = self.scan.delta_e if self.scan.delta_e is not None else default_delta(E)
        return (self.eps(E + d) - self.eps(E - d)) / (2.0 * d)


def _bisect_stationary(curve: _Curve, a: float, b: float, da: float, db: float, tol: Tolerances):
    """Shrink ``[a, b]`` around a sign change of the derivative; returns the final bracket."""
    brackets = [(a, b)]
    for _ in range(tol.max_iter):
        if b - a <= tol.xtol * max(1.0, abs(a), abs(b)):
            break
        m = 0.5 * (a + b)
        dm = curve.deriv(m)
        if dm == 0.0:
            a = b = m
            da = db = 0.0
            brackets.append((a, b))
            break
        if math.copysign(1.0, dm) == math.copysign(1.0, da):
            a, da = m, dm
        else:
            b, db = m, dm
        brackets.append((a, b))
    return a, b, da, db, brackets


def detect_eigenvalues(
    scan: EnergyScan,
    tol_match: float | None = None,
    tol_stat: float | None = None,
    *,
    diagnostics: list | None = None,
    xtol: float = 1e-7,
    tol_eig: float | None = None,
) -> list[Eigenvalue]:
    """Eigenvalues of one parity scan, ascending.

    Every sign change of the sampled derivative between neighbouring
    successful samples is refined by bisection to a stationary point ``E_s``.
    The candidate is accepted when

    * ``|d eps/dE (E_s)| <= tol_stat``;
    * ``|eps(E_s) - E_s| <= tol_match``, i.e. the extremum is crossed by the
      energy line within the match tolerance;
    * the curve stays within ``tol_match`` of ``eps(E_s)`` at
      ``E_s +- step/2``, which rejects isolated pole spikes;
    * the wavefunction at ``E_s`` is close to an eigenvector of the 3-point
      Hamiltonian, ``||(H - eps) psi|| / ||psi|| <= tol_eig``. Extrema that
      only graze the line next to a pole fail this by orders of magnitude;
    * the level ``L = eps(E_s)`` is self-consistent,
      ``|eps(L) - L| <= |L - E_s| / 2``. An extremum on the flank of a steep
      stretch of the curve fails this, a genuine crossed extremum does not.

    The reported energy is the level ``L``: the extremal value is sharp even
    where the curve is flat and the location of its extremum is not. Values of
    one parity closer than ``tol_match`` are merged. Rejected candidates are
    appended to ``diagnostics`` when given.
    """
    tol = Tolerances(tol_match, tol_stat, xtol, eig=tol_eig)
    match, stat, eig = tol.resolve(scan)
    notes = diagnostics if diagnostics is not None else []
    ok = [s for s in scan.samples if s.solve_ok]
    if len(ok) < 2:
        return []
    curve = _Curve(scan)
    for s in ok:
        curve._cache.setdefault(s.E, s.epsilon)
    found: list[Eigenvalue] = []
    for left, right in zip(ok, ok[1:]):
        dl, dr = left.depsilon_dE, right.depsilon_dE
        if dl * dr > 0 or (dl == 0.0 and dr == 0.0):
            continue
        width = right.E - left.E
        near = min(abs(left.epsilon - left.E), abs(right.epsilon - right.E))
        if near > match + 2.0 * width:
            notes.append(Rejection(0.5 * (left.E + right.E), scan.parity, "far-from-line", near))
            continue
        try:
            cand = _refine(curve, left, right, tol, match, stat, eig, scan)
        except SolveFailure as exc:
            notes.append(Rejection(exc.energy, scan.parity, "solve-failure"))
            log.debug("refinement hit a singular system at E=%r", exc.energy)
            continue
        if isinstance(cand, Rejection):
            notes.append(cand)
        else:
            found.append(cand)
    found = _dedupe(found, match)
    _note_bare_crossings(ok, found, scan, notes)
    return found


def _refine(curve, left, right, tol, match, stat, eig, scan):
    a, b, _, _, _ = _bisect_stationary(curve, left.E, right.E, left.depsilon_dE, right.depsilon_dE, tol)
    e_stat = 0.5 * (a + b)
    d_stat = abs(curve.deriv(e_stat))
    level = curve.eps(e_stat)
    residual = abs(level - e_stat)
    if not d_stat <= stat:
        return Rejection(e_stat, scan.parity, "unresolved-stationarity", residual, d_stat)
    if not residual <= match:
        return Rejection(e_stat, scan.parity, "no-line-match", residual, d_stat)
    w = 0.5 * scan.step
    spread = max(abs(curve.eps(e_stat - w) - level), abs(curve.eps(e_stat + w) - level))
    if not spread <= match:
        return Rejection(e_stat, scan.parity, "narrow-spike", residual, d_stat)
    sigma = curve.residual(e_stat)
    if not sigma <= eig:
        return Rejection(e_stat, scan.parity, "not-an-eigenvector", residual, d_stat)
    consistency = abs(curve.eps(level) - level)
    if not consistency <= 0.5 * residual + 1e-9 * max(1.0, abs(level)):
        return Rejection(e_stat, scan.parity, "flank-extremum", residual, d_stat)
    return Eigenvalue(level, scan.parity, residual, d_stat, True, e_stat, consistency, sigma)


def _dedupe(values: list[Eigenvalue], radius: float) -> list[Eigenvalue]:
    """Merge same-parity values closer than ``radius``, keeping the most self-consistent."""
    out: list[Eigenvalue] = []
    last: dict[str, int] = {}
    for ev in sorted(values, key=lambda ev: ev.energy):
        i = last.get(ev.parity)
        if i is not None and ev.energy - out[i].energy <= radius:
            if ev.consistency < out[i].consistency:
                out[i] = ev
            continue
        last[ev.parity] = len(out)
        out.append(ev)
    return sorted(out, key=lambda ev: ev.energy)


def _note_bare_crossings(ok, found, scan, notes):
    """Record line crossings that carry no accepted eigenvalue."""
    for left, right in zip(ok, ok[1:]):
        fl, fr = left.epsilon - left.E, right.epsilon - right.E
        if fl * fr >= 0:
            continue
        lo, hi = left.E - scan.step, right.E + scan.step
        if any(lo <= ev.energy <= hi for ev in found):
            continue
        x = left.E + (right.E - left.E) * fl / (fl - fr)
        notes.append(Rejection(x, scan.parity, "crossing-without-stationarity", 0.0, abs(0.5 * (left.depsilon_dE + right.depsilon_dE))))


def line_crossings(scan: EnergyScan) -> list[float]:
    """Linearly interpolated energies where the sampled curve crosses ``eps = E``."""
    ok = [s for s in scan.samples if s.solve_ok]
    out = []
    for left, right in zip(ok, ok[1:]):
        fl, fr = left.epsilon - left.E, right.epsilon - right.E
        if fl * fr < 0:
            out.append(left.E + (right.E - left.E) * fl / (fl - fr))
    return out


def full_spectrum(
    grid: Grid,
    potential,
    window: tuple[float, float],
    steps: int,
    tolerances: Tolerances | None = None,
    *,
    parities=("even", "odd"),
    incoming_mode: str = "auto",
    branch: str = "decaying",
    threads: int = 1,
    delta_e: float | None = None,
    diagnostics: list | None = None,
    scans: list | None = None,
) -> list[Eigenvalue]:
    """Scan each parity with its projector, detect, and merge the results."""
    tolerances = tolerances or Tolerances()
    out: list[Eigenvalue] = []
    for parity in parities:
        kind = select_incoming(potential, parity, incoming_mode)
        scan = scan_energies(grid, potential, kind, window[0], window[1], steps, delta_e=delta_e, branch=branch, threads=threads)
        if scans is not None:
            scans.append(scan)
        out.extend(
            detect_eigenvalues(
                scan, tolerances.match, tolerances.stat, diagnostics=diagnostics, xtol=tolerances.xtol, tol_eig=tolerances.eig
            )
        )
    return sorted(out, key=lambda ev: ev.energy)
