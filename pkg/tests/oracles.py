"""Brute-force reference computations, independent of the package code.

Everything here is written from the defining formulas with mpmath or plain
numpy: no adaptive quadrature, no resummation, no contour rotation. Running
this file prints the values frozen in ``frozen.py``.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

OMEGA_P = 6.5e15
V_F = 8.52e7
C = 2.998e10


def params(d_nm, Omega, eps):
    """Dimensionless parameters, straight from the definitions."""
    d = d_nm * 1e-7
    z0 = OMEGA_P * d / (2 * V_F) * complex(eps, -Omega)
    ac = (eps**2 - 1j * eps * Omega) / 3
    lam1 = -(Omega**2 + 1j * eps * Omega) / 3
    lam_inf = (1 - Omega**2 - 1j * eps * Omega) / 3
    return z0, ac, lam1, lam_inf


def lambda0_mp(z, dps=40):
    with mp.workdps(dps):
        z = mp.mpc(z)
        return complex(1 + z / 2 * mp.log((z - 1) / (z + 1)))


def lam_mp(z, d_nm, Omega, eps, dps=40):
    _, ac, lam1, _ = params(d_nm, Omega, eps)
    with mp.workdps(dps):
        z = mp.mpc(z)
        return lam1 - (z * z - ac) * (1 + z / 2 * mp.log((z - 1) / (z + 1)))


def eta0_mp(guess, d_nm, Omega, eps):
    with mp.workdps(40):
        root = mp.findroot(lambda z: lam_mp(z, d_nm, Omega, eps), mp.mpc(guess))
        return complex(root)


def eta0_continued(Omega, eps, start=17.3356 - 17.3054j, steps=50):
    """Follow the zero from Omega = 1 to the requested frequency."""
    root = eta0_mp(start, 10, 1.0, eps)
    for om in np.linspace(1.0, Omega, steps + 1)[1:]:
        root = eta0_mp(root, 10, float(om), eps)
    return root


def _lam_np(z, ac, lam1):
    return lam1 - (z * z - ac) * (1 + z / 2 * np.log((z - 1) / (z + 1)))


def g_raw_sum(d_nm, Omega, eps, n_terms=10**6):
    """G from the plain residue series with n_terms poles."""
    z0, ac, lam1, _ = params(d_nm, Omega, eps)
    e1 = np.sqrt(ac + 0j)
    th = e1 / z0 * np.tanh(z0 / e1)
    total = 0j
    for start in range(0, n_terms, 250_000):
        k = np.arange(start, min(start + 250_000, n_terms))
        eta = -2j * z0 / (np.pi * (2 * k + 1))
        t = eta**4 / (_lam_np(eta, ac, lam1) * (eta**2 - ac))
        total += t[::-1].sum()
    return th - 2 * lam1 / z0**2 * total


def g1_direct(d_nm, Omega, eps):
    z0, ac, lam1, _ = params(d_nm, Omega, eps)
    e1 = np.sqrt(ac + 0j)
    eta = -2j * z0 / np.pi
    return e1 / z0 * np.tanh(z0 / e1) - 2 * lam1 / z0**2 * eta**4 / (_lam_np(eta, ac, lam1) * (eta**2 - ac))


def g2_direct(d_nm, Omega, eps, eta0):
    z0, ac, lam1, lam_inf = params(d_nm, Omega, eps)
    with mp.workdps(40):
        z = mp.mpc(eta0)
        log = mp.log((z - 1) / (z + 1))
        dl = complex(-2 * z * (1 + z / 2 * log) - (z * z - ac) * (log / 2 + z / (z * z - 1)))
    return lam1 / lam_inf + 2 * lam1 * eta0**2 * np.tanh(z0 / eta0) / (z0 * (ac - eta0**2) * dl)


def field_raw_sum(s, d_nm, Omega, eps, n_terms=10**6):
    """e(x) at s = 2x/d - 1 from the mode series with n_terms poles."""
    z0, ac, lam1, _ = params(d_nm, Omega, eps)
    e1 = np.sqrt(ac + 0j)
    with mp.workdps(30):
        a = mp.mpc(z0) / mp.sqrt(mp.mpc(ac))
        first = complex(mp.cosh(a * s) / mp.cosh(a))
    total = 0j
    for start in range(0, n_terms, 250_000):
        k = np.arange(start, min(start + 250_000, n_terms))
        eta = -2j * z0 / (np.pi * (2 * k + 1))
        t = eta**3 / (_lam_np(eta, ac, lam1) * (eta**2 - ac))
        t = t * np.cos(np.pi * (2 * k + 1) * s / 2) / (1j * (-1.0) ** k)
        total += t[::-1].sum()
    return first - 2 * lam1 / z0 * total


def fuchs_phi_simpson(w, p, n=10**6):
    """Phi(w) by composite Simpson on t = 1/u over u in [0, 1] (n even)."""
    u = np.linspace(0.0, 1.0, n + 1)
    g = np.zeros_like(u)
    uu = u[1:]
    e = np.exp(-w / uu)
    g[1:] = (uu - uu**3) * (1 - e) / (1 - p * e)
    h = 1.0 / n
    integral = h / 3 * (g[0] + g[-1] + 4 * g[1:-1:2].sum() + 2 * g[2:-1:2].sum())
    return 1 / (1 / w - 1.5 / w**2 * (1 - p) * integral)


def gl_phase_dense(d_nm, Omega, eps, taus, n=2_000_001):
    """Continuous phase of lambda+/lambda- by np.unwrap on a dense grid."""
    _, ac, lam1, _ = params(d_nm, Omega, eps)
    grid = np.linspace(0.0, 1.0, n)[1:-1]
    l0 = 1 + grid / 2 * np.log((1 - grid) / (1 + grid))
    q = grid**2 - ac
    lp = lam1 - q * (l0 + 0.5j * np.pi * grid)
    lm = lam1 - q * (l0 - 0.5j * np.pi * grid)
    phase = np.unwrap(np.angle(lp / lm))
    return np.interp(taus, grid, phase)


def thickness_eq28(Omega_n, n, eps, eta0):
    return 1e7 * math.pi * V_F * (1 + 2 * n) / (OMEGA_P * (complex(Omega_n, eps) / eta0).real)


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    print("LAMBDA0_I =", repr(lambda0_mp(1j)))
    print("LAMBDA0_2I =", repr(lambda0_mp(2j)))
    print("LAMBDA0_5 =", repr(lambda0_mp(5.0)))
    print("LAMBDA0_3P4I =", repr(lambda0_mp(3 + 4j)))
    e0 = eta0_mp(17.3 - 17.3j, 10, 1.0, 1e-3)
    print("ETA0_OMEGA1 =", repr(e0))
    e0b = eta0_mp(1.28 - 0.0004j, 10, 1.3, 1e-3)
    print("ETA0_OMEGA13 =", repr(e0b))
    for d in (1, 5, 10):
        g = g_raw_sum(d, 1.0, 1e-3)
        o1 = 100 * abs(g - g1_direct(d, 1.0, 1e-3)) / abs(g)
        o2 = 100 * abs(g - g2_direct(d, 1.0, 1e-3, e0)) / abs(g)
        print(f"G_RAW[{d}] =", repr(g), " O1 =", o1, " O2 =", o2)
    print("FIELD_MID_10NM =", repr(field_raw_sum(0.0, 10, 1.0, 1e-3)))
    print("FIELD_Q_10NM =", repr(field_raw_sum(-0.5, 10, 1.0, 1e-3)))
    for w in (0.01, 1.0, 10.0):
        for p in (0.0, 0.5):
            print(f"PHI[{w}, {p}] =", repr(fuchs_phi_simpson(w, p)))
    print("GL_PHASE =", repr(gl_phase_dense(10, 1.0, 1e-3, np.array([0.1, 0.5, 0.9, 0.999]))))
    e0c = eta0_continued(1.025, 1e-3)
    print("ETA0_1025 =", repr(e0c), " D3 =", thickness_eq28(1.025, 3, 1e-3, e0c))
