"""Transmission, reflection and absorption of a p-wave by the film.

Two impedance variants are offered. ``full`` keeps the ``i k d / 2``
propagation terms; ``reduced`` drops them (long-wave limit k d << 1). Both
are written through the dimensionless groups ``kd`` and
``D = 2 pi sigma_d d / c_light``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conductivity import ConductivityResult, sigma_d
from .dispersion import make_context
from .errors import ImpedancePoleError
from .fieldmode import GResult, g1, g2, g_quadrature, g_series
from .medium import FilmProblem, reduce
from .numerics import DEFAULT_TOL, Tolerance

VARIANTS = ("full", "reduced")
G_METHODS = ("auto", "g2", "series", "quadrature", "g1")
# below this reduced frequency the continuous spectrum is not negligible
G2_THRESHOLD = 0.9
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Coefficients:
    """T, R, A at one frequency with the intermediate quantities."""

    T: float
    R: float
    A: float
    variant: str
    G: complex
    sigma_scaled: complex
    Z1: complex
    Z2: complex
    P1: complex
    P2: complex
    Omega: float = math.nan
    eta0: complex | None = None
    g_method: str = ""
    sigma_ratio: complex = complex("nan")


def impedances(kd: float, G: complex, sigma_scaled: complex, theta: float, variant: str = "reduced"):
    """Surface impedances (Z1, Z2) for the symmetric and antisymmetric field cases.

    ``Z2`` is returned as complex infinity when its denominator vanishes
    (non-conducting film in the reduced variant).
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    s2 = math.sin(theta) ** 2
    if variant == "full":
        z1 = 0.5j * kd * (1.0 - G * s2)
        den = 1j * kd - 2.0 * sigma_scaled
    else:
        z1 = -0.5j * kd * G * s2
        den = -sigma_scaled
    z2 = complex("inf") if den == 0 else (2.0 if variant == "full" else 1.0) / den
    return complex(z1), complex(z2)


def _p_factors(kd, G, D, theta, variant):
    cos = math.cos(theta)
    s2 = math.sin(theta) ** 2
    if variant == "full":
        a = 0.5j * kd * (1.0 - G * s2)
        b = (2.0 * D - 1j * kd) * cos
        pairs = ((cos + a, cos - a), (b - 2.0, b + 2.0))
    else:
        a = 0.5j * kd * G * s2
        b = D * cos
        pairs = ((cos - a, cos + a), (b - 1.0, b + 1.0))
    out = []
    for j, (num, den) in enumerate(pairs, start=1):
        # den is a sum of two terms; treat cancellation to rounding level as a pole
        if not np.isfinite(den) or abs(den) <= 64 * _EPS * max(abs(num), abs(den - num), 1e-300):
            raise ImpedancePoleError(
                f"P{j} denominator vanishes (kd={kd}, G={G}, D={D}, theta={theta})")
        out.append(complex(num / den))
    return out


def coefficients_from_inputs(kd: float, G: complex, sigma_scaled: complex, theta: float,
                             variant: str = "reduced") -> Coefficients:
    """T, R, A from kd, the field factor G and D = 2 pi sigma_d d / c_light.

    Raises
    ------
    ImpedancePoleError
        If cos(theta) equals an impedance (a P denominator vanishes).
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if not 0.0 <= theta < math.pi / 2:
        raise ValueError(f"theta must lie in [0, pi/2), got {theta}")
    p1, p2 = _p_factors(kd, G, sigma_scaled, theta, variant)
    z1, z2 = impedances(kd, G, sigma_scaled, theta, variant)
    T = 0.25 * abs(p1 - p2) ** 2
    R = 0.25 * abs(p1 + p2) ** 2
    return Coefficients(T=T, R=R, A=1.0 - T - R, variant=variant, G=complex(G),
                        sigma_scaled=complex(sigma_scaled), Z1=z1, Z2=z2, P1=p1, P2=p2)


def reduced_closed_form(kd: float, G: complex, sigma_scaled: complex, theta: float):
    """Factored long-wave expressions for (T, R)."""
    cos = math.cos(theta)
    a = 0.5j * kd * G * math.sin(theta) ** 2
    den = (cos + a) * (1.0 + sigma_scaled * cos)
    T = cos**2 * abs((1.0 - a * sigma_scaled) / den) ** 2
    R = abs((a - sigma_scaled * cos**2) / den) ** 2
    return T, R


def field_factor(problem: FilmProblem, Omega: float, g_method: str = "auto",
                 tol: Tolerance = DEFAULT_TOL) -> tuple[GResult, complex | None]:
    """G at one frequency by the requested method, with eta0 when computed."""
    if g_method not in G_METHODS:
        raise ValueError(f"g_method must be one of {G_METHODS}")
    if g_method == "auto":
        g_method = "g2" if Omega >= G2_THRESHOLD else "series"
    rp = reduce(problem, Omega)
    needs_zero = g_method in ("g2", "quadrature")
    ctx = make_context(rp, tol, with_zero=needs_zero)
    fn = {"g2": g2, "g1": g1, "series": lambda c: g_series(c, tol),
          "quadrature": lambda c: g_quadrature(c, tol)}[g_method]
    return fn(ctx), ctx.eta0


def coefficients(problem: FilmProblem, Omega: float, variant: str = "reduced",
                 g_method: str = "auto", tol: Tolerance = DEFAULT_TOL) -> Coefficients:
    """T, R, A of ``problem`` at reduced frequency ``Omega``.

    By default G is the Drude plus Debye pair for Omega >= 0.9 and the
    full residue series below.
    """
    rp = reduce(problem, Omega)
    g, eta0 = field_factor(problem, Omega, g_method, tol)
    cond: ConductivityResult = sigma_d(problem, Omega, tol)
    c = coefficients_from_inputs(rp.kd, g.value, cond.sigma_scaled, problem.theta, variant)
    return Coefficients(**{**c.__dict__, "Omega": float(Omega), "eta0": eta0,
                           "g_method": g.method, "sigma_ratio": cond.sigma_d_over_sigma0})


def spectrum(problem: FilmProblem, omegas, variant: str = "reduced", g_method: str = "auto",
             tol: Tolerance = DEFAULT_TOL) -> list[Coefficients]:
    """Coefficients on a frequency grid (errors propagate)."""
    return [coefficients(problem, float(om), variant, g_method, tol) for om in np.asarray(omegas)]
