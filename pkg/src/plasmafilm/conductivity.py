"""Thickness-averaged conductivity of the film with partly diffuse surfaces.

The Fuchs size-effect function enters as

    1/Phi(w) = 1/w - (3/(2 w**2)) (1 - p) int_1^inf (t**-3 - t**-5)
               (1 - exp(-w t)) / (1 - p exp(-w t)) dt,

with the complex size parameter ``w = (d/v_F)(nu - i omega)``, and the
averaged conductivity is ``sigma_d = sigma_0(omega) w / Phi(w)``.
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .medium import C_LIGHT, FilmProblem
from .numerics import DEFAULT_TOL, Tolerance, integrate_semi_infinite

log = logging.getLogger(__name__)

# k*l above which the local Fuchs form is flagged as outside its validity
KL_WARN = 0.1


class NonlocalityWarning(UserWarning):
    """The mean free path is not small compared with the wavelength."""


@dataclass(frozen=True)
class ConductivityResult:
    """Averaged conductivity relative to the bulk value.

    Attributes
    ----------
    sigma_d_over_sigma0 : complex
        sigma_d / sigma_0(omega) = w / Phi(w).
    w : complex
        Size parameter (d/v_F)(nu - i omega).
    p : float
    kl : float
        Wavenumber times static mean free path.
    sigma_scaled : complex
        Dimensionless 2 pi sigma_d d / c_light used by the optics.
    """

    sigma_d_over_sigma0: complex
    w: complex
    p: float
    kl: float
    sigma_scaled: complex


def _fuchs_integral(w: complex, p: float, tol: Tolerance) -> complex:
    # rotate t = 1 + s exp(i phi) so that w (t - 1) = |w| s is real
    rot = cmath.exp(-1j * cmath.phase(w))

    def f(s):
        t = 1.0 + s * rot
        x = w * t
        one_minus = -np.expm1(-x)
        frac = one_minus / ((1.0 - p) + p * one_minus)
        return (t * t - 1.0) / t**5 * frac * rot

    return integrate_semi_infinite(f, 0.0, tol).value


def phi(w: complex, p: float, tol: Tolerance = DEFAULT_TOL) -> complex:
    """Fuchs function Phi(w) for specularity ``p``.

    Raises
    ------
    ValueError
        If Re(w) <= 0 or p is outside [0, 1].
    """
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)) or w.real <= 0:
        raise ValueError(f"need Re(w) > 0, got {w}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if p == 1.0:
        return w
    inv = 1.0 / w - 1.5 / (w * w) * (1.0 - p) * _fuchs_integral(w, p, tol)
    return 1.0 / inv


def size_parameter(problem: FilmProblem, Omega: float) -> complex:
    """w = (omega_p d / v_F)(eps - i Omega), equal to twice z0."""
    m = problem.material
    return (m.omega_p * problem.d_cm / m.v_F) * complex(problem.eps, -Omega)


def sigma_d(problem: FilmProblem, Omega: float, tol: Tolerance = DEFAULT_TOL) -> ConductivityResult:
    """Averaged conductivity at reduced frequency ``Omega >= 0``."""
    Omega = float(Omega)
    if not (math.isfinite(Omega) and Omega >= 0):
        raise ValueError(f"Omega must be finite and non-negative, got {Omega}")
    m = problem.material
    w = size_parameter(problem, Omega)
    kl = Omega * m.v_F / (C_LIGHT * problem.eps)
    if problem.p < 1.0 and kl > KL_WARN:
        warnings.warn(f"k*l = {kl:.3g} is not small; the local conductivity model is stretched",
                      NonlocalityWarning, stacklevel=2)
    ratio = w / phi(w, problem.p, tol)
    # allowed for nearly imaginary w, where 1 - 3(1-p)/(8w) has modulus above 1
    if abs(ratio) > 1.0 + 1e-9:
        log.debug("|sigma_d/sigma_0| = %.12g exceeds 1 at w=%s, p=%s", abs(ratio), w, problem.p)
    drude = (m.omega_p * problem.d_cm / (2.0 * C_LIGHT)) / complex(problem.eps, -Omega)
    return ConductivityResult(ratio, w, problem.p, kl, drude * ratio)
