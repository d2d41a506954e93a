"""Equidistant 1D lattices with a uniform Riemann-sum weight."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Equidistant lattice ``x_min + mu*h``, ``mu = 0..n_points-1``.

    Every node carries the same quadrature weight ``h`` (plain Riemann sum,
    endpoints included). Grids built with :func:`make_symmetric_grid_excluding_zero`
    set ``zero_free`` and have mirror-exact points ``+-(mu + 1/2) h``.
    """

    x_min: float
    x_max: float
    n_points: int
    zero_free: bool = False
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if self.n_points < 2:
            raise ValueError("a grid needs at least two points")
        if not self.x_min < self.x_max:
            raise ValueError("x_min must be smaller than x_max")
        if self.zero_free:
            if self.n_points % 2:
                raise ValueError("a zero-free symmetric grid has an even number of points")
            n_half = self.n_points // 2
            h = 2.0 * self.x_max / (2 * n_half - 1)
            half = (np.arange(n_half) + 0.5) * h
            pts = np.concatenate([-half[::-1], half])
        else:
            # lower half counts up from x_min, upper half down from x_max, so
            # both ends are exact and a box centred on 0 is mirror-exact
            n = self.n_points
            h = (self.x_max - self.x_min) / (n - 1)
            mu = np.arange(n)
            pts = np.where(mu < n // 2, self.x_min + mu * h, self.x_max - (n - 1 - mu) * h)
            if n % 2 and self.x_min == -self.x_max:
                pts[n // 2] = 0.0
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def h(self) -> float:
        if self.zero_free:
            return 2.0 * self.x_max / (self.n_points - 1)
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def weight(self) -> float:
        return self.h

    @property
    def is_mirror_symmetric(self) -> bool:
        return bool(np.array_equal(self.points, -self.points[::-1]))

    def point(self, mu: int) -> float:
        return float(self.points[mu])

    def integrate(self, values) -> float:
        """Riemann sum ``sum_mu f(x_mu) h``."""
        return float(np.sum(values) * self.h)

    def describe(self) -> dict:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "n_points": self.n_points,
            "h": self.h,
            "zero_free": self.zero_free,
        }


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid:
    if not (math.isfinite(x_min) and math.isfinite(x_max)):
        raise ValueError("grid bounds must be finite")
    if int(n_points) != n_points or n_points < 3:
        raise ValueError(f"n_points must be an integer >= 3, got {n_points!r}")
    return Grid(float(x_min), float(x_max), int(n_points))


def make_symmetric_grid_excluding_zero(L: float, n_half: int) -> Grid:
    """Points ``+-(mu + 1/2) h`` with ``h = L / n_half``; ``x = 0`` is never a node."""
    if not math.isfinite(L) or L <= 0:
        raise ValueError(f"half-width L must be positive and finite, got {L!r}")
    if int(n_half) != n_half or n_half < 1:
        raise ValueError(f"n_half must be a positive integer, got {n_half!r}")
    h = L / n_half
    edge = (n_half - 0.5) * h
    return Grid(-edge, edge, 2 * int(n_half), zero_free=True)
