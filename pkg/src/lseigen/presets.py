"""Named benchmark potentials with their default boxes and energy windows."""

from __future__ import annotations

from dataclasses import dataclass

from .grid import Grid, make_grid, make_symmetric_grid_excluding_zero
from .potentials import (
    CoshWell,
    Coulomb,
    DoubleWell,
    EngineeredWell,
    Expression,
    InversePower,
    Potential,
    PowerLaw,
)

POLY_BOX = 12.0
POLY_POINTS = 801
COSH_BOX = 10.0
COSH_POINTS = 801
HYDROGEN_BOX = 60.0
HYDROGEN_HALF = 600


@dataclass(frozen=True)
class Preset:
    name: str
    potential: Potential
    window: tuple[float, float]


def default_grid(potential: Potential, n_points: int | None = None, box: float | None = None) -> Grid:
    """Box and resolution on which the potential's bound states have decayed to the walls."""
    if isinstance(potential, CoshWell):
        return make_grid(-(box or COSH_BOX), box or COSH_BOX, n_points or COSH_POINTS)
    if potential.singular:
        half = (n_points // 2) if n_points else HYDROGEN_HALF
        return make_symmetric_grid_excluding_zero(box or HYDROGEN_BOX, half)
    return make_grid(-(box or POLY_BOX), box or POLY_BOX, n_points or POLY_POINTS)


def make_potential(name: str, **params) -> Potential:
    """Build a named potential; unknown keyword parameters are rejected."""
    builders = {
        "harmonic": lambda: PowerLaw(2, params.pop("a", 1.0)),
        "quartic": lambda: PowerLaw(4, params.pop("a", 0.1)),
        "power": lambda: PowerLaw(int(params.pop("n", 2)), params.pop("a", 1.0)),
        "doublewell": lambda: DoubleWell(params.pop("skew", 0.0)),
        "skew": lambda: DoubleWell(params.pop("skew", 0.1)),
        "cosh": lambda: CoshWell(params.pop("depth", 25.0)),
        "coulomb": lambda: Coulomb(),
        "hydrogen": lambda: Coulomb(),
        "inverse-power": lambda: InversePower(params.pop("alpha", 3.0), params.pop("beta", 5.0)),
        "engineered": lambda: EngineeredWell(params.pop("a", 1.5), params.pop("gamma", 2.0)),
    }
    if name not in builders:
        raise ValueError(f"unknown potential {name!r}; choose from {', '.join(sorted(builders))}")
    params = {k: v for k, v in params.items() if v is not None}
    pot = builders[name]()
    if params:
        raise ValueError(f"potential {name!r} takes no parameter(s) {', '.join(sorted(params))}")
    return pot


def expression_potential(text: str, finite_depth: bool = False) -> Expression:
    return Expression(text=text, finite=finite_depth)


PRESETS = {
    "harmonic": Preset("harmonic", PowerLaw(2, 1.0), (0.5, 12.0)),
    "quartic": Preset("quartic", PowerLaw(4, 0.1), (0.0, 10.5)),
    "doublewell": Preset("doublewell", DoubleWell(0.0), (-5.0, 4.0)),
    "skew": Preset("skew", DoubleWell(0.1), (-7.0, 5.5)),
    "cosh": Preset("cosh", CoshWell(25.0), (-22.0, -0.05)),
    "hydrogen": Preset("hydrogen", Coulomb(), (-0.3, -0.04)),
}
