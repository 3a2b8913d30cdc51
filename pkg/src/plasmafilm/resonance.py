"""Resonance extrema of computed spectra and thickness inversion.

A resonance of order n sits where the discrete-mode phase
``Re(i z0 / eta0)`` equals ``pi/2 + pi n``. Because ``eta0`` depends on the
frequency and collision rate but not on the thickness, each detected
extremum gives a thickness estimate

    d = pi v_F (1 + 2n) / (omega_p Re[(Omega_n + i eps) / eta0]).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import find_eta0
from .errors import NoResonanceError
from .medium import NM_TO_CM, FilmProblem, Material, reduce
from .numerics import DEFAULT_TOL, Tolerance

KINDS = {"R": "min", "T": "min", "A": "max"}


@dataclass(frozen=True)
class Resonance:
    n: int
    omega: float
    quality: float


@dataclass(frozen=True)
class ResonanceSet:
    """Detected extrema of one coefficient, ordered by frequency."""

    kind: str
    entries: tuple[Resonance, ...]

    def __post_init__(self):
        om = [e.omega for e in self.entries]
        if any(b <= a for a, b in zip(om, om[1:])):
            raise ValueError("resonance frequencies must be strictly increasing")
        ns = [e.n for e in self.entries]
        if any(b != a + 1 for a, b in zip(ns, ns[1:])):
            raise ValueError("resonance indices must be consecutive")

    @property
    def omegas(self) -> np.ndarray:
        return np.array([e.omega for e in self.entries])

    @property
    def indices(self) -> np.ndarray:
        return np.array([e.n for e in self.entries])

    def __len__(self):
        return len(self.entries)


def find_extrema(x, y, mode: str = "min"):
    """Interior local extrema by the 3-point test, refined by a parabola.

    Returns
    -------
    positions, curvatures : ndarray
        Vertex abscissae and second derivatives of the fitted parabolas.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 3:
        raise ValueError("need matching 1-D arrays with at least 3 points")
    if np.any(np.diff(x) <= 0):
        raise ValueError("abscissae must be strictly increasing")
    s = -y if mode == "max" else y
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    i = np.flatnonzero((s[1:-1] < s[:-2]) & (s[1:-1] <= s[2:])) + 1
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    d01 = (y1 - y0) / (x1 - x0)
    d12 = (y2 - y1) / (x2 - x1)
    curv = 2.0 * (d12 - d01) / (x2 - x0)
    # d01 is the parabola's slope at (x0+x1)/2 and the slope changes at rate curv
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = np.where(curv != 0, 0.5 * (x0 + x1) - d01 / curv, x1)
    vertex = np.clip(vertex, x0, x2)
    return vertex, curv


def resonance_phase(Omega, eps: float, d_nm: float, material: Material,
                    tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Discrete-mode phase Re(i z0 / eta0) on a frequency grid."""
    om = np.atleast_1d(np.asarray(Omega, dtype=float))
    prob = FilmProblem(material, d_nm, eps=eps)
    out = np.empty(om.shape)
    for j, w in enumerate(om):
        rp = reduce(prob, w)
        out[j] = (1j * rp.z0 / find_eta0(rp, tol).eta0).real
    return out


def _phase_rate(Omega: float, material: Material, eps: float, tol: Tolerance) -> float:
    """Re[(Omega + i eps)/eta0] * omega_p / (2 v_F): phase per cm of thickness."""
    rp = reduce(FilmProblem(material, 1.0, eps=eps), Omega)
    eta0 = find_eta0(rp, tol).eta0
    return (complex(Omega, eps) / eta0).real * material.omega_p / (2.0 * material.v_F)


def find_resonances(omega, values, kind: str = "R", problem: FilmProblem | None = None,
                    tol: Tolerance = DEFAULT_TOL) -> ResonanceSet:
    """Detect the resonance comb in a sampled spectrum.

    Parameters
    ----------
    omega, values : array_like
        Frequency grid and coefficient samples.
    kind : {"R", "T", "A"}
        Minima of R or T, maxima of A.
    problem : FilmProblem, optional
        When given, the first index is the order of the nearest zero of
        cos(Re(i z0/eta0)); otherwise indices start at 0.

    Raises
    ------
    NoResonanceError
        If no interior extremum exists.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {sorted(KINDS)}")
    pos, curv = find_extrema(omega, values, KINDS[kind])
    if pos.size == 0:
        raise NoResonanceError(f"no {KINDS[kind]}ima of {kind} in the spectrum")
    n0 = 0
    if problem is not None:
        ph = resonance_phase(pos, problem.eps, problem.d, problem.material, tol)
        n0 = int(round(float(np.mean(ph / math.pi - 0.5 - np.arange(pos.size)))))
    entries = tuple(Resonance(n0 + j, float(w), float(abs(c))) for j, (w, c) in enumerate(zip(pos, curv)))
    return ResonanceSet(kind, entries)


def thickness_from_resonance(Omega_n: float, n: int, material: Material, eps: float,
                             tol: Tolerance = DEFAULT_TOL) -> float:
    """Film thickness in nm from the order-n resonance frequency.

    Raises
    ------
    ValueError
        If n < 0 or the phase rate is not positive.
    """
    if n < 0:
        raise ValueError("resonance order must be non-negative")
    rate = _phase_rate(Omega_n, material, eps, tol)
    if not rate > 0:
        raise ValueError(f"non-positive phase rate at Omega={Omega_n}")
    d_cm = math.pi * (0.5 + n) / rate
    return d_cm / NM_TO_CM


@dataclass(frozen=True)
class Inversion:
    """Thickness estimates from a resonance set.

    ``per_resonance`` uses each (n, Omega_n) alone; ``lsq`` fits one
    thickness to all phases at once.
    """

    resonances: ResonanceSet
    per_resonance: np.ndarray
    mean: float
    spread: float
    lsq: float
    index_offset: int


def assign_indices(omegas, material: Material, eps: float, max_order: int = 200,
                   tol: Tolerance = DEFAULT_TOL) -> tuple[int, float, np.ndarray]:
    """Least-squares choice of the order of the first resonance.

    For each candidate first order n1, the phases ``rate_i * d`` are fitted to
    ``pi (n1 + i + 1/2)`` with one common d; the n1 with the smallest
    residual wins.

    Returns
    -------
    n1, d_nm, rates
    """
    rates = np.array([_phase_rate(w, material, eps, tol) for w in np.atleast_1d(omegas)])
    i = np.arange(rates.size)
    best = (math.inf, 0, math.nan)
    for n1 in range(max_order + 1):
        target = math.pi * (n1 + i + 0.5)
        d = float(rates @ target / (rates @ rates))
        # compare in units of one order so large n1 are not favoured
        resid = float(np.sum((rates * d - target) ** 2)) / math.pi**2
        if resid < best[0]:
            best = (resid, n1, d)
    return best[1], best[2] / NM_TO_CM, rates


def invert(omega, values, material: Material, eps: float, kind: str = "R",
           first_order: int | None = None, tol: Tolerance = DEFAULT_TOL) -> Inversion:
    """Detect resonances in a spectrum and convert them into thicknesses."""
    res = find_resonances(omega, values, kind)
    if first_order is None:
        n1, d_lsq, rates = assign_indices(res.omegas, material, eps, tol=tol)
    else:
        n1 = int(first_order)
        rates = np.array([_phase_rate(w, material, eps, tol) for w in res.omegas])
        target = math.pi * (n1 + np.arange(rates.size) + 0.5)
        d_lsq = float(rates @ target / (rates @ rates)) / NM_TO_CM
    res = ResonanceSet(kind, tuple(Resonance(n1 + j, e.omega, e.quality) for j, e in enumerate(res.entries)))
    per = np.pi * (res.indices + 0.5) / rates / NM_TO_CM
    spread = float(per.std(ddof=1)) if per.size > 1 else 0.0
    return Inversion(res, per, float(per.mean()), spread, d_lsq, n1)
