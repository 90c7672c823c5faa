"""Traveling waves of the nonlocal unidirectional plasma wave equation.

Submodules:
    spectral       periodic grid, FFT differentiation, nonlocal operators
    equilibria     branch roots, thresholds, regions, wave-type prediction
    solver         profile solvers (Petviashvili fixed point, damped Newton)
    phaseportrait  profile-ODE integration and unstable-manifold shooting
    evolution      pseudospectral time stepping and periodic branches
    cli            command-line interface
"""

from .equilibria import Branch, WaveParameters
from .spectral import Field, Grid, make_grid

__all__ = ["Branch", "WaveParameters", "Field", "Grid", "make_grid"]

__version__ = "0.1.0"
