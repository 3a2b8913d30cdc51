"""Electric field inside the film and its average G.

G is available four ways: the full quadrature over the continuous spectrum
plus the discrete mode, the residue series over the poles of tanh(z0/eta),
the one-term truncation of that series, and the Drude plus Debye pair.

Both series are summed in a resummed form. Writing
``1/lambda = 1/c**2 + (c**2 - lambda)/(c**2 lambda)`` splits off a part that
sums in closed form; the remaining terms decay like ``k**-4`` from the
start instead of ``k**-2`` up to ``k ~ |z0|/|eta_1|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .dispersion import (DispersionContext, c2_minus_lambda, dispersion, dispersion_derivative,
                         eta_star, lambda_pm)
from .errors import ConvergenceError, DegenerateModeError
from .numerics import DEFAULT_TOL, Tolerance, integrate_finite, sum_series

METHODS = ("quadrature", "series", "G1", "G2")
DEGENERACY_GAP = 1e-12


@dataclass(frozen=True)
class GResult:
    """Field-average factor with its provenance.

    Attributes
    ----------
    value : complex
    method : str
        One of ``quadrature``, ``series``, ``G1``, ``G2``.
    terms_or_evals : int
        Series terms or integrand evaluations used (0 for closed forms).
    error_estimate : float
    """

    value: complex
    method: str
    terms_or_evals: int = 0
    error_estimate: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be non-negative")


def stable_tanh(w):
    """tanh for complex arguments of any size, without overflow."""
    w = np.asarray(w, dtype=complex)
    flip = w.real < 0
    u = np.where(flip, -w, w)
    e = np.exp(-2.0 * u)
    out = (1.0 - e) / (1.0 + e)
    out = np.where(flip, -out, out)
    return out if out.ndim else complex(out)


def cosh_ratio(a, s):
    """cosh(a s) / cosh(a) for |s| <= 1, stable for large |a|."""
    a = complex(a)
    if a.real < 0:
        a = -a
    s = np.asarray(s, dtype=float)
    e2 = math.exp(-2.0 * a.real) * complex(math.cos(2 * a.imag), -math.sin(2 * a.imag))
    return (np.exp(a * (s - 1.0)) + np.exp(-a * (s + 1.0))) / (1.0 + e2)


def check_degeneracy(ctx: DispersionContext) -> None:
    """Raise when some pole eta_k* coincides with the Drude root eta_1."""
    rp = ctx.rp
    e1 = ctx.eta1
    k_real = (-2j * rp.z0 / (math.pi * e1)).real
    for sign in (1.0, -1.0):
        k_near = round((sign * k_real - 1.0) / 2.0)
        for k in (k_near - 1, k_near, k_near + 1):
            if k >= 0 and abs(eta_star(k, rp) ** 2 - rp.ac) < DEGENERACY_GAP:
                raise DegenerateModeError(f"mode k={k} coincides with the Drude pole")


def _drude_term(ctx: DispersionContext) -> complex:
    """(eta_1/z0) tanh(z0/eta_1)."""
    e1 = ctx.eta1
    return e1 / ctx.rp.z0 * stable_tanh(ctx.rp.z0 / e1)


def _raw_terms(k, ctx: DispersionContext):
    """eta_k**4 / (lambda(eta_k) (eta_k**2 - eta_1**2))."""
    eta = eta_star(np.asarray(k), ctx.rp)
    return eta**4 / (dispersion(eta, ctx.rp) * (eta * eta - ctx.rp.ac))


def _resummed_terms(k, ctx: DispersionContext):
    """eta_k**4 (c**2 - lambda) / (c**2 lambda (eta_k**2 - eta_1**2))."""
    rp = ctx.rp
    eta = eta_star(np.asarray(k), rp)
    lam = dispersion(eta, rp)
    return eta**4 * c2_minus_lambda(eta, rp) / (rp.c2 * lam * (eta * eta - rp.ac))


def g1(ctx: DispersionContext) -> GResult:
    """First member of the residue series (k = 0)."""
    rp = ctx.rp
    check_degeneracy(ctx)
    val = _drude_term(ctx) - 2.0 * rp.lambda_1 / rp.z0**2 * complex(_raw_terms(0, ctx))
    return GResult(val, "G1", 1, 0.0)


def g2(ctx: DispersionContext) -> GResult:
    """Drude plus Debye approximant: the pole at lambda_inf and the discrete mode eta0."""
    rp = ctx.rp
    e0 = ctx.require_eta0()
    debye = 2.0 * rp.lambda_1 * e0 * e0 * stable_tanh(rp.z0 / e0) / (
        rp.z0 * (rp.ac - e0 * e0) * dispersion_derivative(e0, rp))
    return GResult(rp.lambda_1 / rp.lambda_inf + debye, "G2", 0, 0.0)


def _hurwitz_tail(last_term: complex, last_k: int) -> complex:
    """Tail sum_{j > K} t_j assuming t_j ~ A / (2j+1)**4 fitted at j = K."""
    amp = last_term * (2 * last_k + 1) ** 4
    return amp * zeta(4.0, last_k + 1.5) / 16.0


def g_series(ctx: DispersionContext, tol: Tolerance = DEFAULT_TOL, *, resummed: bool = True) -> GResult:
    """Residue series over the poles eta_k* of tanh(z0/eta).

    With ``resummed=False`` the raw terms are summed directly. Those decay
    like k**-2 until ``|eta_k*| ~ |eta_1|`` and need far more terms.

    Raises
    ------
    DegenerateModeError
        If ``|eta_k***2 - eta_1**2| < 1e-12`` for some k.
    ConvergenceError
        If the series does not settle within ``tol.max_evals`` terms.
    """
    rp = ctx.rp
    check_degeneracy(ctx)
    th = _drude_term(ctx)
    scale = -2.0 * rp.lambda_1 / rp.z0**2
    inner = Tolerance(rel=tol.rel * 1e-2, abs=tol.abs * 1e-2, max_evals=tol.max_evals)
    if resummed:
        head = th + rp.lambda_1 / rp.c2 * (1.0 - th)
        res = sum_series(lambda k: _resummed_terms(k, ctx), inner)
        last = complex(_resummed_terms(res.terms_used - 1, ctx))
    else:
        head = th
        res = sum_series(lambda k: _raw_terms(k, ctx), inner)
        last = complex(_raw_terms(res.terms_used - 1, ctx))
    tail = _hurwitz_tail(last, res.terms_used - 1)
    value = head + scale * (res.value + tail)
    return GResult(complex(value), "series", res.terms_used, float(abs(scale * tail)))


def _quadrature_breakpoints(rp, floor: float, cap: int = 50_000) -> np.ndarray:
    """|Re eta_m*| in (floor, 1): where tanh(z0/tau) nearly blows up on the real axis."""
    top = abs(2.0 * rp.z0.imag) / math.pi
    m_max = min(int(top / floor) // 2 + 1, cap)
    pts = top / (2 * np.arange(m_max + 1) + 1)
    return np.sort(pts[(pts > floor) & (pts < 1.0)])


def continuous_spectrum(ctx: DispersionContext, tol: Tolerance = DEFAULT_TOL):
    """(lambda_1/z0) int_0^1 tanh(z0/tau) tau**3 / (lambda^+ lambda^-) dtau.

    Returns the QuadResult of the bare integral (without the prefactor).
    """
    rp = ctx.rp
    floor = min(abs(rp.z0.real) / 40.0, 0.5)

    def f(t):
        lp, lm = lambda_pm(t, rp)
        return stable_tanh(rp.z0 / t) * t**3 / (lp * lm)

    pts = _quadrature_breakpoints(rp, floor)
    # each near-pole needs a few bisections of its own
    budget = max(tol.max_evals, 600 * (pts.size + 1))
    inner = Tolerance(rel=tol.rel, abs=tol.abs, max_evals=budget)
    return integrate_finite(f, 0.0, 1.0, inner, points=pts)


def g_quadrature(ctx: DispersionContext, tol: Tolerance = DEFAULT_TOL) -> GResult:
    """G from the discrete mode plus the continuous-spectrum integral."""
    rp = ctx.rp
    base = g2(ctx)
    res = continuous_spectrum(ctx, tol)
    pref = rp.lambda_1 / rp.z0
    return GResult(complex(base.value + pref * res.value), "quadrature", res.evals,
                   float(abs(pref) * res.error))


def _profile_coefficients(ctx: DispersionContext, tol: Tolerance):
    """Resummed cosine-series coefficients r_k, truncated by a k**-4 tail bound."""
    n = 1024
    while True:
        k = np.arange(n)
        eta = eta_star(k, ctx.rp)
        lam = dispersion(eta, ctx.rp)
        r = eta**3 * c2_minus_lambda(eta, ctx.rp) / (ctx.rp.c2 * lam * (eta * eta - ctx.rp.ac))
        mag = np.abs(r)
        tail = mag * (2 * k + 1) / 6.0
        ok = np.flatnonzero(tail <= max(tol.abs, tol.rel * mag[0]))
        if ok.size:
            return r[: ok[0] + 1]
        if n >= tol.max_evals:
            raise ConvergenceError(f"field series needs more than {n} terms", estimate=r)
        n = min(4 * n, tol.max_evals)


def field_profile(x_over_d, ctx: DispersionContext, tol: Tolerance = DEFAULT_TOL, *,
                  n_terms: int | None = None):
    """Electric field e(x) normalised to 1 at the surfaces.

    Parameters
    ----------
    x_over_d : array_like
        Depth as a fraction of the thickness, in [0, 1].
    n_terms : int, optional
        Fixed number of modes; default picks it from the tolerance.

    Returns
    -------
    complex ndarray (or complex for scalar input)
    """
    x = np.asarray(x_over_d, dtype=float)
    if np.any((x < 0) | (x > 1)) or not np.all(np.isfinite(x)):
        raise ValueError("x/d must lie in [0, 1]")
    rp = ctx.rp
    check_degeneracy(ctx)
    if n_terms is None:
        r = _profile_coefficients(ctx, tol)
    else:
        k = np.arange(n_terms)
        eta = eta_star(k, rp)
        r = eta**3 * c2_minus_lambda(eta, rp) / (rp.c2 * dispersion(eta, rp) * (eta * eta - rp.ac))
    k = np.arange(r.size)
    # cos(...)/(i (-1)^k) folded into the coefficients
    coef = r * (-1j) * np.where(k % 2 == 0, 1.0, -1.0)
    s = (2.0 * x.ravel() - 1.0)
    out = np.empty(s.shape, dtype=complex)
    chunk = max(1, 2_000_000 // max(r.size, 1))
    for i in range(0, s.size, chunk):
        ss = s[i:i + chunk]
        out[i:i + chunk] = np.cos(0.5 * np.pi * np.outer(ss, 2 * k + 1)) @ coef
    a = rp.z0 / ctx.eta1
    e = rp.lambda_1 / rp.c2 + rp.ac / rp.c2 * cosh_ratio(a, s) - 2.0 * rp.lambda_1 / rp.z0 * out
    e = e.reshape(x.shape)
    return e if e.ndim else complex(e)


def field_profile_raw(x_over_d, ctx: DispersionContext, n_terms: int):
    """Plain partial sum of the mode series with ``n_terms`` modes (reference use)."""
    x = np.atleast_1d(np.asarray(x_over_d, dtype=float))
    rp = ctx.rp
    s = 2.0 * x - 1.0
    acc = np.zeros(s.shape, dtype=complex)
    block = 200_000
    for start in range(0, n_terms, block):
        k = np.arange(start, min(start + block, n_terms))
        eta = eta_star(k, rp)
        t = eta**3 / (dispersion(eta, rp) * (eta * eta - rp.ac)) * (-1j) * np.where(k % 2 == 0, 1.0, -1.0)
        for j, sj in enumerate(s):
            acc[j] += np.cos(0.5 * np.pi * (2 * k + 1) * sj) @ t
    return cosh_ratio(rp.z0 / ctx.eta1, s) - 2.0 * rp.lambda_1 / rp.z0 * acc


def relative_error(g_ref: GResult | complex, g_approx: GResult | complex) -> float:
    """|G - G_a| / |G| in percent."""
    ref = g_ref.value if isinstance(g_ref, GResult) else complex(g_ref)
    app = g_approx.value if isinstance(g_approx, GResult) else complex(g_approx)
    if ref == 0:
        raise ValueError("reference G is zero")
    return 100.0 * abs(ref - app) / abs(ref)
