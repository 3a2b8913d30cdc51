"""Kinetic dispersion function of the degenerate plasma slab and its zero.

The dispersion function is evaluated from the closed form

    lambda(z) = lambda_1 - (z**2 - ac) * lambda0(z),
    lambda0(z) = 1 + (z/2) Ln((z - 1)/(z + 1)),

which is analytic off the cut [-1, 1]. Its discrete zero eta0 is first
estimated from the factorization integral and then polished by Newton's
method on lambda itself.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DispersionZeroError, NewtonError
from .medium import ReducedParams
from .numerics import DEFAULT_TOL, Tolerance, integrate_finite, newton_polish, unwrapped_log

# |z| above which lambda0 is summed from its asymptotic series in 1/z**2
_SERIES_RADIUS = 4.0
_SERIES_N = np.arange(1, 25)
_SERIES_COEF = 1.0 / (2 * _SERIES_N + 1)


def _tail_lambda0(w2):
    """-sum_{n>=1} w2**n / (2n+1), the large-|z| form of lambda0."""
    acc = np.zeros_like(w2)
    for c in _SERIES_COEF[::-1]:
        acc = (acc + c) * w2
    return -acc


def _tail_dlambda0(w, w2):
    acc = np.zeros_like(w2)
    for n, c in zip(_SERIES_N[::-1], _SERIES_COEF[::-1]):
        acc = (acc + 2 * n * c) * w2
    return acc * w


def _log_ratio(z):
    """Ln((z-1)/(z+1)); real principal value on the real axis."""
    if np.iscomplexobj(z):
        on_axis = z.imag == 0
        out = np.log((z - 1) / (z + 1))
        if np.any(on_axis):
            x = z.real[on_axis]
            out[on_axis] = np.log(np.abs((x - 1) / (x + 1)))
        return out
    return np.log(np.abs((z - 1) / (z + 1)))


def _check_branch_points(z):
    if np.any(np.abs(z - 1) == 0) or np.any(np.abs(z + 1) == 0):
        raise ValueError("lambda0 is singular at z = +-1")


def lambda0(z):
    """``1 + (z/2) Ln((z-1)/(z+1))`` with the principal logarithm.

    Real arguments in (-1, 1) (and complex ones with zero imaginary part)
    return the real principal value ``1 + (t/2) ln((1-t)/(1+t))``.
    """
    z_arr = np.asarray(z)
    if not np.iscomplexobj(z_arr):
        z_arr = z_arr.astype(float)
    _check_branch_points(z_arr)
    z1 = np.atleast_1d(z_arr)
    out = 1.0 + 0.5 * z1 * _log_ratio(z1)
    big = np.abs(z1) > _SERIES_RADIUS
    if np.any(big):
        w2 = 1.0 / z1[big] ** 2
        out[big] = _tail_lambda0(w2)
    return out.reshape(z_arr.shape) if z_arr.ndim else out[0]


def dlambda0(z):
    """Derivative ``(1/2) Ln((z-1)/(z+1)) + z/(z**2 - 1)``."""
    z_arr = np.asarray(z)
    if not np.iscomplexobj(z_arr):
        z_arr = z_arr.astype(float)
    _check_branch_points(z_arr)
    z1 = np.atleast_1d(z_arr)
    out = 0.5 * _log_ratio(z1) + z1 / (z1 * z1 - 1.0)
    big = np.abs(z1) > _SERIES_RADIUS
    if np.any(big):
        w = 1.0 / z1[big]
        out[big] = _tail_dlambda0(w, w * w)
    return out.reshape(z_arr.shape) if z_arr.ndim else out[0]


def _check_off_cut(z):
    z = np.asarray(z)
    if np.any((np.imag(z) == 0) & (np.abs(np.real(z)) < 1)):
        raise ValueError("dispersion function requested on the cut (-1, 1); use lambda_pm")


def dispersion(z, rp: ReducedParams):
    """Dispersion function lambda(z) off the cut."""
    _check_off_cut(z)
    z = np.asarray(z, dtype=complex)
    out = rp.lambda_1 - (z * z - rp.ac) * lambda0(z)
    return out if out.ndim else complex(out)


def dispersion_derivative(z, rp: ReducedParams):
    """lambda'(z) = -2 z lambda0(z) - (z**2 - ac) lambda0'(z)."""
    _check_off_cut(z)
    z = np.asarray(z, dtype=complex)
    out = -2.0 * z * lambda0(z) - (z * z - rp.ac) * dlambda0(z)
    return out if out.ndim else complex(out)


def c2_minus_lambda(z, rp: ReducedParams):
    """``c**2 - lambda(z)`` without cancellation for small ``|z|``.

    Uses ``c**2 - lambda = ac (1 - lambda0) + z**2 lambda0`` with
    ``1 - lambda0 = -(z/2) Ln((z-1)/(z+1))``.
    """
    _check_off_cut(z)
    z = np.asarray(z, dtype=complex)
    l0 = lambda0(z)
    one_minus = np.where(np.abs(z) > _SERIES_RADIUS, 1.0 - l0, -0.5 * z * _log_ratio(np.atleast_1d(z)).reshape(z.shape))
    out = rp.ac * one_minus + z * z * l0
    return out if out.ndim else complex(out)


def lambda_pm(tau, rp: ReducedParams):
    """Boundary values lambda^(+/-)(tau) on the cut from above / below."""
    tau = np.asarray(tau, dtype=float)
    if np.any((tau <= 0) | (tau >= 1)):
        raise ValueError("tau must lie in (0, 1)")
    l0 = lambda0(tau)
    jump = 0.5j * np.pi * tau
    q = tau * tau - rp.ac
    return rp.lambda_1 - q * (l0 + jump), rp.lambda_1 - q * (l0 - jump)


@dataclass(frozen=True)
class GlBranch:
    """Continuous branch of ``G_l(tau) = ln(lambda^+ / lambda^-)`` on (0, 1).

    The unwrapped phase is tabulated on a grid refined geometrically toward
    both ends; evaluation takes the principal logarithm at ``tau`` and shifts
    it by the multiple of ``2*pi`` closest to the interpolated table value.
    The branch starts at 0 for tau -> 0+. Its phase tends to ``2*pi`` (not 0)
    as tau -> 1-, approached logarithmically slowly.
    """

    rp: ReducedParams
    grid: np.ndarray = field(repr=False)
    phase: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, rp: ReducedParams, n_base: int = 4096, max_refine: int = 40) -> "GlBranch":
        grid = np.unique(np.concatenate([
            np.geomspace(1e-12, 1.0 / n_base, 64),
            np.linspace(0.0, 1.0, n_base + 1)[1:-1],
            1.0 - np.geomspace(1.0 / n_base, 1e-15, 160),
        ]))
        for _ in range(max_refine):
            lp, lm = lambda_pm(grid, rp)
            ratio = lp / lm
            steps = np.abs(np.angle(ratio[1:] / ratio[:-1]))
            coarse = np.flatnonzero(steps > 0.25 * np.pi)
            if coarse.size == 0:
                break
            grid = np.unique(np.concatenate([grid, 0.5 * (grid[coarse] + grid[coarse + 1])]))
        lp, lm = lambda_pm(grid, rp)
        logs = unwrapped_log(lp / lm, grid)
        return cls(rp=rp, grid=grid, phase=logs.imag)

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        lp, lm = lambda_pm(tau, self.rp)
        principal = np.log(lp / lm)
        ref = np.interp(tau, self.grid, self.phase)
        turns = np.round((ref - principal.imag) / (2.0 * np.pi))
        return principal + 2j * np.pi * turns


def G_l(tau, rp: ReducedParams):
    """Continuous-branch ``ln(lambda^+(tau) / lambda^-(tau))``."""
    return GlBranch.build(rp)(tau)


def eta_star(k, rp: ReducedParams):
    """Poles of tanh(z0/eta): eta_k* = -2 i z0 / (pi (2k + 1)), k >= 0."""
    k_arr = np.asarray(k)
    if np.any(k_arr < 0):
        raise ValueError("k must be non-negative")
    out = -2j * rp.z0 / (np.pi * (2 * k_arr + 1))
    return out if k_arr.ndim else complex(out)


def lambda_at_i(rp: ReducedParams) -> complex:
    """lambda(i) = lambda_1 + (1 + ac)(1 - pi/4)."""
    return rp.lambda_1 + (1.0 + rp.ac) * (1.0 - math.pi / 4.0)


@dataclass(frozen=True)
class DispersionContext:
    """Reduced parameters together with the polished dispersion zero.

    ``eta0`` is None when the context was built without solving for the zero
    (only the mode ladder is then available).
    """

    rp: ReducedParams
    eta0: complex | None = None
    eta0_residual: float = math.nan
    eta0_unpolished: complex | None = None
    branch: GlBranch | None = field(default=None, repr=False)

    @property
    def eta1(self) -> complex:
        """Square root of ac, sign chosen so that Re(z0/eta1) >= 0."""
        e1 = cmath.sqrt(self.rp.ac)
        return -e1 if (self.rp.z0 / e1).real < 0 else e1

    def require_eta0(self) -> complex:
        if self.eta0 is None:
            raise DispersionZeroError("context was built without the dispersion zero")
        return self.eta0

    def dlambda_eta0(self) -> complex:
        return dispersion_derivative(self.require_eta0(), self.rp)


def _canonical_root(z: complex) -> complex:
    if z.real < 0 or (z.real == 0 and z.imag < 0):
        return -z
    return z


# G_l varies logarithmically at tau -> 1; start the quadrature with a graded mesh there
_EDGE_POINTS = np.concatenate([np.linspace(0.0, 1.0, 9)[1:-1], 1.0 - np.geomspace(0.1, 1e-13, 13)])


def eta0_squared_factorized(rp: ReducedParams, tol: Tolerance = DEFAULT_TOL,
                            branch: GlBranch | None = None) -> complex:
    """eta0**2 from the factorization of lambda evaluated at z = i:

    eta0**2 = -1 + (2 lambda(i)/lambda_inf) exp[(i/pi) int_0^1 tau G_l/(tau**2+1) dtau].
    """
    if rp.lambda_inf == 0:
        raise DispersionZeroError("lambda_inf vanishes")
    branch = branch or GlBranch.build(rp)
    res = integrate_finite(lambda t: t * branch(t) / (t * t + 1.0), 0.0, 1.0, tol,
                           points=_EDGE_POINTS)
    return -1.0 + 2.0 * lambda_at_i(rp) / rp.lambda_inf * cmath.exp(1j * res.value / math.pi)


def find_eta0(rp: ReducedParams, tol: Tolerance = DEFAULT_TOL) -> DispersionContext:
    """Locate the discrete zero eta0 of lambda (Re eta0 >= 0).

    Raises
    ------
    DispersionZeroError
        If Newton polishing fails or lands far from the factorization
        estimate, or the zero sits on the branch cut.
    """
    branch = GlBranch.build(rp)
    eta2 = eta0_squared_factorized(rp, tol, branch)
    guess = _canonical_root(cmath.sqrt(eta2))
    if abs(guess.imag) == 0 and abs(guess.real) <= 1:
        raise DispersionZeroError(f"zero estimate {guess!r} lies on the cut", unpolished=guess)

    def f(z):
        return complex(dispersion(z, rp))

    def fp(z):
        return complex(dispersion_derivative(z, rp))

    try:
        root = newton_polish(f, fp, guess, Tolerance(rel=tol.rel, abs=1e-14))
    except (NewtonError, ValueError) as exc:
        raise DispersionZeroError(f"Newton polish failed from {guess!r}: {exc}", unpolished=guess) from exc
    root = _canonical_root(root)
    if abs(root - guess) > 1e-5 * max(abs(guess), 1.0):
        raise DispersionZeroError(
            f"Newton moved from {guess!r} to {root!r}; no discrete zero near the estimate",
            unpolished=guess)
    residual = abs(f(root))
    if residual > 1e-10 * max(1.0, abs(root) ** 2):
        raise DispersionZeroError(f"residual {residual:.2e} at {root!r} too large", unpolished=guess)
    return DispersionContext(rp=rp, eta0=root, eta0_residual=residual,
                             eta0_unpolished=guess, branch=branch)


def make_context(rp: ReducedParams, tol: Tolerance = DEFAULT_TOL, *, with_zero: bool = True) -> DispersionContext:
    """Build a context; skip the zero search when ``with_zero`` is false."""
    if with_zero:
        return find_eta0(rp, tol)
    return DispersionContext(rp=rp)


def factor_X(z: complex, ctx: DispersionContext, tol: Tolerance = DEFAULT_TOL) -> complex:
    """X(z) = exp(V0(z)) / (z - 1), V0(z) = (1/2 pi i) int_0^1 G_l(tau)/(tau - z) dtau."""
    branch = ctx.branch or GlBranch.build(ctx.rp)
    v0 = integrate_finite(lambda t: branch(t) / (t - z), 0.0, 1.0, tol).value / (2j * math.pi)
    return cmath.exp(v0) / (z - 1.0)


def factorized_dispersion(z: complex, ctx: DispersionContext, tol: Tolerance = DEFAULT_TOL) -> complex:
    """lambda_inf (eta0**2 - z**2) X(z) X(-z): the factorized form of lambda."""
    e0 = ctx.require_eta0()
    return ctx.rp.lambda_inf * (e0 * e0 - z * z) * factor_X(z, ctx, tol) * factor_X(-z, ctx, tol)
