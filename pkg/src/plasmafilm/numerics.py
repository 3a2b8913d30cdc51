"""Numerical kernels: adaptive quadrature, series summation, Newton polishing
and continuous-phase logarithms.

All integrands and series terms are expected to be vectorized: they receive a
1-D ``numpy`` array and must return an array of the same length (real or
complex).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConvergenceError, NewtonError, NonFiniteError, PhaseStepError

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerance:
    """Accuracy request shared by the kernels.

    Parameters
    ----------
    rel : float
        Relative tolerance, > 0.
    abs : float
        Absolute tolerance, >= 0.
    max_evals : int
        Budget of integrand evaluations, series terms or Newton steps
        (whichever applies), >= 64.
    """

    rel: float = 1e-10
    abs: float = 1e-12
    max_evals: int = 200_000

    def __post_init__(self):
        if not self.rel > 0:
            raise ValueError(f"rel must be positive, got {self.rel}")
        if not self.abs >= 0:
            raise ValueError(f"abs must be non-negative, got {self.abs}")
        if self.max_evals < 64:
            raise ValueError(f"max_evals must be >= 64, got {self.max_evals}")

    def target(self, value) -> float:
        return max(self.abs, self.rel * abs(value))


DEFAULT_TOL = Tolerance()


class QuadResult(NamedTuple):
    value: complex
    error: float
    evals: int


class SeriesResult(NamedTuple):
    value: complex
    terms_used: int


# Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half) and weights.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_KW = np.concatenate([_WK[:-1], _WK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[7] = _WG[3]
_GW[8:15] = _GW[6::-1]


def _gk15(f, lo, hi):
    """Apply the 15-point rule to every interval [lo_i, hi_i] in one call."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise NonFiniteError(f"integrand is not finite at x={bad!r}")
    kron = fx @ _KW
    gauss = fx @ _GW
    mean = kron / 2.0
    resasc = np.abs(fx - mean[:, None]) @ _KW * np.abs(half)
    resabs = np.abs(fx) @ _KW * np.abs(half)
    err = np.abs((kron - gauss) * half)
    # QUADPACK error scaling
    scale = np.ones_like(err)
    nz = (resasc != 0) & (err != 0)
    scale[nz] = np.minimum(1.0, (200.0 * err[nz] / resasc[nz]) ** 1.5)
    err = np.where(nz, resasc * scale, err)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(err, floor)
    return kron * half, err


def integrate_finite(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: Tolerance = DEFAULT_TOL,
    points=None,
) -> QuadResult:
    """Globally adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    Intervals are bisected in order of decreasing error until the summed
    error estimate is below ``max(tol.abs, tol.rel * |I|)``. Endpoints are
    never evaluated, so mild endpoint singularities (logarithmic, or power
    laws weaker than x**-0.5) are handled by repeated bisection. ``points``
    are interior breakpoints (for example near sharp peaks) that the initial
    partition must respect.

    Raises
    ------
    ConvergenceError
        When ``tol.max_evals`` evaluations did not reach the tolerance.
    NonFiniteError
        When the integrand returns NaN or infinity.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    edges = [a]
    if points is not None:
        inner = np.unique(np.asarray(points, dtype=float))
        edges.extend(inner[(inner > a) & (inner < b)].tolist())
    edges.append(b)
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])

    val, err = _gk15(f, lo, hi)
    evals = 15 * lo.size
    while True:
        total = val.sum()
        total_err = err.sum()
        target = tol.target(total)
        if total_err <= target:
            return QuadResult(complex(total) if np.iscomplexobj(total) else float(total),
                              float(total_err), evals)
        width = hi - lo
        floor = np.maximum(4.0 * _EPS * np.maximum(np.abs(lo), np.abs(hi)), 1e-15 * (b - a))
        splittable = width > floor
        if not splittable.any():
            raise ConvergenceError(
                f"roundoff limits quadrature: error {total_err:.3e} > {target:.3e}",
                estimate=total, error=total_err)
        # bisect the largest-error intervals until the rest fits in half the target
        cand = np.flatnonzero(splittable)
        cand = cand[np.argsort(-err[cand])]
        remaining = total_err - np.cumsum(err[cand])
        n_pick = int(np.searchsorted(-remaining, -0.5 * target)) + 1
        pick = cand[:n_pick]
        if evals + 30 * pick.size > tol.max_evals:
            raise ConvergenceError(
                f"quadrature budget of {tol.max_evals} evaluations exhausted; "
                f"error {total_err:.3e} > {target:.3e}",
                estimate=total, error=total_err)
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        new_val, new_err = _gk15(f, new_lo, new_hi)
        evals += 15 * new_lo.size
        keep = np.ones(lo.size, dtype=bool)
        keep[pick] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], new_val])
        err = np.concatenate([err[keep], new_err])


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    tol: Tolerance = DEFAULT_TOL,
) -> QuadResult:
    """Integrate ``f`` over ``[a, inf)``.

    For ``a > 0`` the substitution ``t = a/u`` maps the range onto ``(0, 1]``;
    otherwise ``t = a + (1 - u)/u`` is used. The integrand must decay at least
    like ``t**-2`` for the transformed integrand to stay bounded.
    """
    a = float(a)
    if a > 0:
        def g(u):
            return f(a / u) * (a / (u * u))
    else:
        def g(u):
            return f(a + (1.0 - u) / u) / (u * u)
    return integrate_finite(g, 0.0, 1.0, tol)


def sum_series(
    term: Callable[[np.ndarray], np.ndarray],
    tol: Tolerance = DEFAULT_TOL,
    start: int = 0,
) -> SeriesResult:
    """Sum ``term(k)`` for ``k = start, start+1, ...``.

    Terms are requested in geometrically growing blocks. Summation stops at
    the first run of three consecutive terms that each fall below
    ``max(tol.abs, tol.rel * |partial sum|)``.

    Raises
    ------
    ConvergenceError
        After ``tol.max_evals`` terms without meeting the stop rule.
    """
    total = 0.0
    used = 0
    block = 64
    carry = np.zeros(2, dtype=bool)
    while used < tol.max_evals:
        n = min(block, tol.max_evals - used)
        k = np.arange(start + used, start + used + n)
        t = np.asarray(term(k))
        if not np.all(np.isfinite(t)):
            raise NonFiniteError(f"series term not finite near k={k[~np.isfinite(t)][0]}")
        partial = total + np.cumsum(t)
        small = np.abs(t) < np.maximum(tol.abs, tol.rel * np.abs(partial))
        ext = np.concatenate([carry, small])
        hit = np.flatnonzero(ext[2:] & ext[1:-1] & ext[:-2])
        if hit.size:
            i = int(hit[0])
            return SeriesResult(partial[i], used + i + 1)
        carry = ext[-2:]
        total = partial[-1]
        used += n
        block *= 2
    raise ConvergenceError(
        f"series did not converge within {tol.max_evals} terms", estimate=total)


def newton_polish(
    f: Callable[[complex], complex],
    fprime: Callable[[complex], complex],
    z_init: complex,
    tol: Tolerance = DEFAULT_TOL,
    max_iter: int = 50,
) -> complex:
    """Refine a simple root of an analytic function by damped Newton steps.

    A step is accepted only if it lowers ``|f|``; otherwise it is halved up
    to 30 times. Iteration stops once ``|f| <= tol.abs`` or the step is at
    the rounding level of ``z``.

    Raises
    ------
    NewtonError
        On a vanishing derivative, a step that cannot reduce ``|f|`` while
        still far from the rounding level, or ``max_iter`` exhaustion.
    """
    z = complex(z_init)
    fz = f(z)
    res = abs(fz)
    for _ in range(max_iter):
        if not np.isfinite(res):
            raise NewtonError(f"non-finite residual at z={z!r}", estimate=z)
        if res <= tol.abs:
            return z
        d = fprime(z)
        if abs(d) < 1e-300 or not np.isfinite(abs(d)):
            raise NewtonError(f"derivative vanishes near z={z!r}", estimate=z)
        step = fz / d
        if abs(step) <= 4.0 * _EPS * max(abs(z), 1.0):
            return z
        for _ in range(30):
            z_new = z - step
            f_new = f(z_new)
            if np.isfinite(abs(f_new)) and abs(f_new) < res:
                break
            step *= 0.5
            if abs(step) <= 4.0 * _EPS * max(abs(z), 1.0):
                return z
        else:
            raise NewtonError(f"Newton diverges from z={z!r}", estimate=z)
        z, fz, res = z_new, f_new, abs(f_new)
    raise NewtonError(f"no convergence in {max_iter} Newton steps", estimate=z)


def unwrapped_log(
    g: Callable[[np.ndarray], np.ndarray] | np.ndarray,
    grid: np.ndarray,
    max_step: float = 0.5 * np.pi,
) -> np.ndarray:
    """Logarithm of ``g`` along ``grid`` on a continuous branch.

    Returns ``ln|g| + i*phi`` where ``phi`` has no ``2*pi`` jumps and starts
    on the principal branch. ``g`` may be a callable or precomputed samples.

    Raises
    ------
    PhaseStepError
        If ``g`` vanishes on the grid or a wrapped phase increment exceeds
        ``max_step`` (the grid is then too coarse to track the branch).
    """
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(g(grid) if callable(g) else g, dtype=complex)
    mag = np.abs(vals)
    if np.any(mag == 0) or not np.all(np.isfinite(vals)):
        i = int(np.flatnonzero((mag == 0) | ~np.isfinite(vals))[0])
        raise PhaseStepError(f"function vanishes or is not finite at {grid[i]!r}")
    ang = np.angle(vals)
    steps = np.angle(vals[1:] / vals[:-1])
    if steps.size and np.max(np.abs(steps)) > max_step:
        i = int(np.argmax(np.abs(steps)))
        raise PhaseStepError(
            f"phase step {steps[i]:.3f} between {grid[i]!r} and {grid[i + 1]!r} "
            f"exceeds {max_step:.3f}; refine the grid")
    phase = ang[0] + np.concatenate([[0.0], np.cumsum(steps)])
    return np.log(mag) + 1j * phase


def unwrapped_log_ratio(num, den, grid, max_step=0.5 * np.pi) -> np.ndarray:
    """Continuous-branch ``ln(num/den)`` sampled on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    n = np.asarray(num(grid) if callable(num) else num, dtype=complex)
    d = np.asarray(den(grid) if callable(den) else den, dtype=complex)
    return unwrapped_log(n / d, grid, max_step=max_step)


__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "QuadResult",
    "SeriesResult",
    "integrate_finite",
    "integrate_semi_infinite",
    "sum_series",
    "newton_polish",
    "unwrapped_log",
    "unwrapped_log_ratio",
]
