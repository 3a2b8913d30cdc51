"""Materials, experiment geometry and the reduced (dimensionless) parameters.

Units are CGS-Gaussian throughout; film thickness is accepted in nanometres
and converted once.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

C_LIGHT = 2.998e10  # cm/s
NM_TO_CM = 1e-7

MATERIAL_DIR_ENV = "PLASMAFILM_MATERIALS"


@dataclass(frozen=True)
class Material:
    """Bulk metal described by its plasma frequency and Fermi velocity.

    Parameters
    ----------
    omega_p : float
        Plasma frequency, rad/s.
    v_F : float
        Fermi velocity, cm/s.
    name : str
        Label.
    """

    omega_p: float
    v_F: float
    name: str = "custom"

    def __post_init__(self):
        if not (math.isfinite(self.omega_p) and self.omega_p > 0):
            raise ValueError(f"omega_p must be positive, got {self.omega_p}")
        if not (math.isfinite(self.v_F) and 0 < self.v_F < C_LIGHT):
            raise ValueError(f"v_F must lie in (0, c), got {self.v_F}")

    @property
    def delta0_cm(self) -> float:
        """Infrared skin depth c/omega_p, cm."""
        return C_LIGHT / self.omega_p

    @property
    def debye_radius_sq(self) -> float:
        """r_D**2 = 3 v_F**2 / omega_p**2, cm**2."""
        return 3.0 * self.v_F**2 / self.omega_p**2

    def tau(self, eps: float) -> float:
        """Collision time 1/nu for reduced collision rate ``eps``, s."""
        return 1.0 / (eps * self.omega_p)

    def sigma0(self, eps: float) -> float:
        """Static bulk conductivity omega_p**2 tau / (4 pi), 1/s."""
        return self.omega_p**2 * self.tau(eps) / (4.0 * math.pi)


SODIUM = Material(omega_p=6.5e15, v_F=8.52e7, name="sodium")

PRESETS = {"sodium": SODIUM}


def parse_material(text: str, default_name: str = "custom") -> Material:
    """Parse a ``key = value`` material description (name, omega_p, v_F)."""
    fields = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        fields[key] = value
    missing = {"omega_p", "v_F"} - fields.keys()
    if missing:
        raise ValueError(f"material file lacks {sorted(missing)}")
    return Material(
        omega_p=float(fields["omega_p"]),
        v_F=float(fields["v_F"]),
        name=fields.get("name", default_name),
    )


def load_material(spec: str) -> Material:
    """Resolve a material by preset name, file path, or name inside the
    directory given by ``$PLASMAFILM_MATERIALS``."""
    if spec in PRESETS:
        return PRESETS[spec]
    path = Path(spec)
    if not path.is_file():
        base = os.environ.get(MATERIAL_DIR_ENV)
        if base:
            for candidate in (Path(base) / spec, Path(base) / f"{spec}.txt"):
                if candidate.is_file():
                    path = candidate
                    break
    if not path.is_file():
        raise ValueError(f"unknown material {spec!r}")
    return parse_material(path.read_text(), default_name=path.stem)


@dataclass(frozen=True)
class FilmProblem:
    """A free-standing film illuminated by a p-wave.

    Parameters
    ----------
    material : Material
    d : float
        Thickness, nm.
    theta : float
        Incidence angle, rad, in [0, pi/2).
    eps : float
        Reduced collision rate nu/omega_p, > 0.
    p : float
        Specularity coefficient in [0, 1].
    """

    material: Material
    d: float
    theta: float = 0.0
    eps: float = 1e-3
    p: float = 1.0

    def __post_init__(self):
        for name in ("d", "theta", "eps", "p"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.d > 0:
            raise ValueError(f"thickness must be positive, got {self.d}")
        if not 0 <= self.theta < math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2), got {self.theta}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    @property
    def d_cm(self) -> float:
        return self.d * NM_TO_CM

    @property
    def mean_free_path_cm(self) -> float:
        """Static mean free path v_F / nu, cm."""
        return self.material.v_F / (self.eps * self.material.omega_p)


@dataclass(frozen=True)
class ReducedParams:
    """Dimensionless bundle consumed by the dispersion, field and optics code.

    ``ac`` is the product a*c of the kinetic parameters (the squared Drude
    root eta_1**2), ``lambda_1 = c**2 - ac`` and ``lambda_inf = 1/3 + lambda_1``.
    ``drude`` is 2*pi*sigma_0(omega)*d/c_light for a bulk conductivity.
    """

    Omega: float
    eps: float
    z0: complex
    ac: complex
    lambda_1: complex
    lambda_inf: complex
    kd: float
    drude: complex

    @property
    def c2(self) -> complex:
        """Square of the kinetic parameter c."""
        return self.ac + self.lambda_1


def reduce(problem: FilmProblem, Omega: float) -> ReducedParams:
    """Derive the reduced parameters of ``problem`` at frequency ``Omega``."""
    Omega = float(Omega)
    if not math.isfinite(Omega):
        raise ValueError("Omega must be finite")
    if not Omega > 0:
        raise ValueError(f"Omega must be positive, got {Omega}")
    eps = problem.eps
    wp = problem.material.omega_p
    d = problem.d_cm
    s = complex(eps, -Omega)
    z0 = (wp * d / (2.0 * problem.material.v_F)) * s
    ac = (eps * eps - 1j * eps * Omega) / 3.0
    lambda_1 = -(Omega * Omega + 1j * eps * Omega) / 3.0
    lambda_inf = (1.0 - Omega * Omega - 1j * eps * Omega) / 3.0
    kd = Omega * wp * d / C_LIGHT
    drude = (wp * d / (2.0 * C_LIGHT)) / s
    return ReducedParams(
        Omega=Omega, eps=eps, z0=z0, ac=ac, lambda_1=lambda_1,
        lambda_inf=lambda_inf, kd=kd, drude=drude,
    )
