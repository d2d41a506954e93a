"""Bound-state eigenvalues of 1D Schroedinger operators from the discretized
Lippmann-Schwinger equation."""

from .energy import EnergySample, energy_derivative, energy_value, rayleigh_quotient
from .grid import Grid, make_grid, make_symmetric_grid_excluding_zero
from .kernel import KernelMatrix, assemble_kernel, kernel_value
from .potentials import (
    CoshWell,
    Coulomb,
    DoubleWell,
    EngineeredWell,
    Expression,
    InversePower,
    PowerLaw,
    SingularPointError,
    evaluate,
    parse_potential,
    sample,
)
from .scanner import EnergyScan, Eigenvalue, Tolerances, detect_eigenvalues, full_spectrum, scan_energies
from .solver import IncomingKind, IncomingState, SolveFailure, Wavefunction, make_incoming, solve_ls

__version__ = "0.1.0"

__all__ = [
    "CoshWell", "Coulomb", "DoubleWell", "Eigenvalue", "EnergySample", "EnergyScan", "EngineeredWell",
    "Expression", "Grid", "IncomingKind", "IncomingState", "InversePower", "KernelMatrix", "PowerLaw",
    "SingularPointError", "SolveFailure", "Tolerances", "Wavefunction", "assemble_kernel",
    "detect_eigenvalues", "energy_derivative", "energy_value", "evaluate", "full_spectrum", "kernel_value",
    "make_grid", "make_incoming", "make_symmetric_grid_excluding_zero", "parse_potential",
    "rayleigh_quotient", "sample", "scan_energies", "solve_ls",
]
