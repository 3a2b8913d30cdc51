"""p-wave optics of thin metal films with a kinetic description of the electron plasma."""

__version__ = "0.1.0"

from .conductivity import ConductivityResult, phi, sigma_d
from .dispersion import DispersionContext, dispersion, find_eta0, lambda0, make_context
from .errors import (ConvergenceError, DegenerateModeError, DispersionZeroError, ImpedancePoleError,
                     NoResonanceError, PlasmaFilmError)
from .fieldmode import GResult, field_profile, g1, g2, g_quadrature, g_series, relative_error
from .medium import SODIUM, FilmProblem, Material, ReducedParams, load_material, reduce
from .numerics import Tolerance
from .optics import Coefficients, coefficients, spectrum
from .resonance import find_resonances, invert, thickness_from_resonance

__all__ = [
    "ConductivityResult", "phi", "sigma_d",
    "DispersionContext", "dispersion", "find_eta0", "lambda0", "make_context",
    "ConvergenceError", "DegenerateModeError", "DispersionZeroError", "ImpedancePoleError",
    "NoResonanceError", "PlasmaFilmError",
    "GResult", "field_profile", "g1", "g2", "g_quadrature", "g_series", "relative_error",
    "SODIUM", "FilmProblem", "Material", "ReducedParams", "load_material", "reduce",
    "Tolerance", "Coefficients", "coefficients", "spectrum",
    "find_resonances", "invert", "thickness_from_resonance",
]
