"""Real stationary Green's function of ``d^2/dx^2 + E`` in one dimension.

Two branches are available for ``E < 0``:

``analytic``
    ``sinh(k d) / (2k)`` with ``k = sqrt(-E)``, the continuation of
    ``sin(sqrt(E) d) / (2 sqrt(E))`` that is even in ``sqrt(E)``. Continuous
    at ``E = 0`` and vanishing at ``d = 0``.
``decaying``
    ``-exp(-k d) / (2k)``, the bounded solution. It differs from the analytic
    branch by a homogeneous term, so the Helmholtz and jump conditions are the
    same, but the discrete Lippmann-Schwinger system stays well conditioned on
    wide boxes and the solution decays outside the potential.

Both coincide for ``E >= 0``, and for ``|E| < SERIES_THRESHOLD`` both use the
series of the analytic branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .grid import Grid

BRANCHES = ("analytic", "decaying")

# below this |E| the analytic branch switches to its Taylor series
SERIES_THRESHOLD = 1e-10


def kernel_value(E: float, d, branch: str = "analytic"):
    """Green's function value at energy ``E`` and separation ``d >= 0``.

    Works elementwise on arrays of separations.
    """
    if branch not in BRANCHES:
        raise ValueError(f"unknown kernel branch {branch!r}; expected one of {BRANCHES}")
    if not math.isfinite(E):
        raise ValueError("energy must be finite")
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("separation must be non-negative")
    if abs(E) < SERIES_THRESHOLD:
        # both branches; the decaying one has no finite limit at E = 0
        out = 0.5 * d - E * d**3 / 12.0 + E * E * d**5 / 240.0
    elif E < 0 and branch == "decaying":
        k = math.sqrt(-E)
        out = -np.exp(-k * d) / (2.0 * k)
    elif E > 0:
        k = math.sqrt(E)
        out = np.sin(k * d) / (2.0 * k)
    else:
        k = math.sqrt(-E)
        with np.errstate(over="ignore"):
            out = np.sinh(k * d) / (2.0 * k)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class KernelMatrix:
    energy: float
    grid: Grid
    entries: np.ndarray
    branch: str = "analytic"


def assemble_kernel(grid: Grid, E: float, branch: str = "analytic") -> KernelMatrix:
    """Dense ``G[mu, nu] = kernel_value(E, |x_mu - x_nu|)``.

    The lattice is equidistant, so the matrix is Toeplitz and only ``n``
    distinct kernel values are computed.
    """
    column = kernel_value(E, np.arange(grid.n_points) * grid.h, branch)
    entries = toeplitz(np.atleast_1d(column))
    entries.setflags(write=False)
    return KernelMatrix(float(E), grid, entries, branch)
