"""Potential families ``U(x)`` and their sampling on a grid.

Each family is a small frozen dataclass with a vectorized ``values(x)``.
Singular families (``1/|x|`` type) refuse to evaluate at ``x = 0`` instead of
returning infinities; callers must use a zero-free grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import expr as _expr


class SingularPointError(ValueError):
    """Raised when a potential is evaluated at one of its singular points."""


@dataclass(frozen=True)
class Potential:
    """Base class. Subclasses implement ``_values``."""

    singular = False
    finite_depth = False
    even = False

    def values(self, x):
        x = np.asarray(x, dtype=float)
        if self.singular and np.any(x == 0.0):
            raise SingularPointError(f"{self.name} is singular at x = 0")
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            u = self._values(x)
        u = np.asarray(u, dtype=float)
        if not np.all(np.isfinite(u)):
            bad = np.ravel(np.broadcast_to(x, u.shape)[~np.isfinite(u)])[0]
            raise SingularPointError(f"{self.name} is not finite at x = {float(bad)!r}")
        return u

    def __call__(self, x):
        return self.values(x)

    def _values(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def name(self) -> str:
        return type(self).__name__

    def describe(self) -> dict:
        out = {"family": self.name}
        for key, value in vars(self).items():
            if not key.startswith("_"):
                out[key] = value
        return out


@dataclass(frozen=True)
class PowerLaw(Potential):
    """``a * x**n``; ``n = 2, a = 1`` is the harmonic oscillator, ``n = 4, a = 0.1`` the quartic one."""

    n: int = 2
    a: float = 1.0

    @property
    def even(self):
        return self.n % 2 == 0

    def _values(self, x):
        return self.a * x**self.n


@dataclass(frozen=True)
class DoubleWell(Potential):
    """``x^4/10 - skew*x^3 - 3/2 x^2``; symmetric for ``skew = 0``."""

    skew: float = 0.0

    @property
    def even(self):
        return self.skew == 0.0

    def _values(self, x):
        return 0.1 * x**4 - self.skew * x**3 - 1.5 * x**2


@dataclass(frozen=True)
class CoshWell(Potential):
    depth: float = 25.0

    finite_depth = True
    even = True

    def __post_init__(self):
        if not self.depth > 0:
            raise ValueError("cosh well depth must be positive")

    def _values(self, x):
        return -self.depth / np.cosh(x) ** 2

    def exact_levels(self) -> list[float]:
        """Closed-form bound-state energies ``-(sqrt(1+4 U0) - (2n+1))^2 / 4``."""
        root = math.sqrt(1.0 + 4.0 * self.depth)
        return [-0.25 * (root - (1 + 2 * n)) ** 2 for n in range(int((root - 1) / 2) + 1) if root - (1 + 2 * n) > 0]


@dataclass(frozen=True)
class Coulomb(Potential):
    """One-dimensional hydrogen, ``-1/|x|``; levels ``-1/(4 n^2)``."""

    singular = True
    finite_depth = True
    even = True

    def _values(self, x):
        return -1.0 / np.abs(x)


@dataclass(frozen=True)
class InversePower(Potential):
    """``-beta / |x|^alpha``."""

    alpha: float = 3.0
    beta: float = 5.0

    singular = True
    finite_depth = True
    even = True

    def __post_init__(self):
        if self.alpha < 2:
            raise ValueError("inverse-power order alpha must be >= 2")
        if not self.beta > 0:
            raise ValueError("inverse-power strength beta must be positive")

    def _values(self, x):
        return -self.beta / np.abs(x) ** self.alpha


@dataclass(frozen=True)
class EngineeredWell(Potential):
    """``x^4/10 - a |x|^gamma``, the family used for parameter design."""

    a: float = 1.5
    gamma: float = 2.0

    even = True

    def _values(self, x):
        return 0.1 * x**4 - self.a * np.abs(x) ** self.gamma

    def with_param(self, param: str, value: float) -> "EngineeredWell":
        if param == "a":
            return EngineeredWell(a=value, gamma=self.gamma)
        if param == "gamma":
            return EngineeredWell(a=self.a, gamma=value)
        raise ValueError(f"unknown engineering parameter {param!r}")


@dataclass(frozen=True)
class Expression(Potential):
    """User-supplied ``U(x)`` parsed from text."""

    text: str = "0"
    tree: object = field(default=None, compare=False, repr=False)
    finite: bool = False

    def __post_init__(self):
        if self.tree is None:
            object.__setattr__(self, "tree", _expr.parse(self.text))

    @property
    def even(self):
        return _expr.is_even(self.tree)

    @property
    def finite_depth(self):
        return self.finite

    def _values(self, x):
        out = _expr.evaluate(self.tree, x)
        return np.broadcast_to(out, np.shape(x)).astype(float) if np.ndim(x) else out

    def describe(self) -> dict:
        return {"family": self.name, "text": self.text, "finite_depth": self.finite}


def parse_potential(text: str) -> Expression:
    return Expression(text=text)


def evaluate(spec: Potential, x: float) -> float:
    return float(spec.values(np.float64(x)))


def sample(spec, grid) -> np.ndarray:
    """Vector ``U(x_mu)`` over the grid nodes."""
    if isinstance(spec, np.ndarray):
        if spec.shape != (grid.n_points,):
            raise ValueError("potential vector does not match the grid")
        return spec.astype(float)
    return spec.values(grid.points)
