import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasmafilm.errors import ImpedancePoleError
from plasmafilm.medium import SODIUM, FilmProblem, reduce
from plasmafilm.optics import (coefficients, coefficients_from_inputs, impedances, reduced_closed_form,
                               spectrum)
from plasmafilm.resonance import find_extrema

finite = dict(allow_nan=False, allow_infinity=False)


def test_normal_incidence_reduced_has_no_symmetric_impedance():
    z1, _ = impedances(0.2, 3 - 4j, 0.5 + 1j, 0.0, "reduced")
    assert z1 == 0
    c = coefficients_from_inputs(0.2, 3 - 4j, 0.5 + 1j, 0.0, "reduced")
    assert c.P1 == 1


def test_vanishing_conductivity_reduced():
    _, z2 = impedances(0.2, 1.0, 0.0, 0.3, "reduced")
    assert math.isinf(abs(z2))
    c = coefficients_from_inputs(0.2, 1.0, 0.0, 0.3, "reduced")
    assert c.P2 == -1


def test_full_and_reduced_symmetric_impedances_differ_by_half_kd():
    prob = FilmProblem(SODIUM, 10.0, theta=math.radians(75))
    full = coefficients(prob, 1.05, "full")
    red = coefficients(prob, 1.05, "reduced")
    kd = reduce(prob, 1.05).kd
    assert np.isfinite(full.Z1) and np.isfinite(full.Z2)
    assert abs(full.Z1 - red.Z1) == pytest.approx(kd / 2, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-4, 2.0), st.floats(0.0, 1.5))
def test_non_conducting_limit(kd, theta):
    c = coefficients_from_inputs(kd, 1.0, 0.0, theta, "full")
    assert abs(c.T - 1) < 1e-9 and abs(c.R) < 1e-9 and abs(c.A) < 1e-9


@pytest.mark.parametrize("variant", ["full", "reduced"])
@pytest.mark.parametrize("Omega", [0.95, 1.05, 1.3])
def test_grazing_incidence(variant, Omega):
    prob = FilmProblem(SODIUM, 10.0, theta=math.pi / 2 - 1e-6)
    c = coefficients(prob, Omega, variant)
    assert c.T < 1e-6 and c.R > 1 - 1e-5 and abs(c.A) < 1e-5


def test_grazing_limit_of_p_factors():
    c = coefficients_from_inputs(0.2, 2 - 1j, 0.3 + 2j, math.pi / 2 - 1e-9)
    assert abs(c.P1 + 1) < 1e-6 and abs(c.P2 + 1) < 1e-6


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-3, 1.0), st.complex_numbers(max_magnitude=1e3, **finite),
       st.complex_numbers(max_magnitude=1e3, **finite), st.floats(0.0, 1.5))
def test_closed_forms_match_p_factors(kd, G, D, theta):
    try:
        c = coefficients_from_inputs(kd, G, D, theta, "reduced")
    except ImpedancePoleError:
        return
    T, R = reduced_closed_form(kd, G, D, theta)
    assert T == pytest.approx(c.T, rel=1e-12, abs=1e-12)
    assert R == pytest.approx(c.R, rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-3, 1.0), st.complex_numbers(max_magnitude=1e3, **finite),
       st.complex_numbers(max_magnitude=1e3, **finite), st.floats(0.0, 1.5),
       st.sampled_from(["full", "reduced"]))
def test_energy_balance_by_construction(kd, G, D, theta, variant):
    try:
        c = coefficients_from_inputs(kd, G, D, theta, variant)
    except ImpedancePoleError:
        return
    assert c.A + c.T + c.R == pytest.approx(1.0, abs=1e-12 * max(1.0, c.T + c.R))


def test_pole_reported():
    kd, theta = 0.2, 0.7
    G = 2j * math.cos(theta) / (kd * math.sin(theta) ** 2)
    with pytest.raises(ImpedancePoleError):
        coefficients_from_inputs(kd, G, 1.0, theta, "reduced")


def test_bad_variant_and_angle():
    with pytest.raises(ValueError):
        coefficients_from_inputs(0.1, 1.0, 1.0, 0.1, "exact")
    with pytest.raises(ValueError):
        coefficients_from_inputs(0.1, 1.0, 1.0, math.pi / 2)


def test_variants_converge_as_kd_shrinks():
    # keep G*kd and D fixed while kd -> 0
    gkd, D, theta = 0.3 - 0.2j, 0.8 + 0.4j, 0.9
    diffs = []
    for kd in (1e-1, 1e-2, 1e-3, 1e-4):
        a = coefficients_from_inputs(kd, gkd / kd, D, theta, "full")
        b = coefficients_from_inputs(kd, gkd / kd, D, theta, "reduced")
        diffs.append(abs(a.T - b.T))
    assert diffs[-1] < 2e-3 * diffs[0]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))


def test_default_g_method_switches_at_threshold():
    prob = FilmProblem(SODIUM, 10.0, theta=0.5)
    assert coefficients(prob, 0.85).g_method == "series"
    assert coefficients(prob, 0.95).g_method == "G2"
    assert coefficients(prob, 0.85).eta0 is None


@pytest.mark.parametrize("p", [1.0, 0.3])
def test_passive_over_a_spectrum(p):
    prob = FilmProblem(SODIUM, 5.0, theta=math.radians(60), eps=1e-2, p=p)
    with pytest.warns() if p < 1 else _nullcontext():
        out = spectrum(prob, np.linspace(0.7, 1.4, 71))
    for c in out:
        assert 0 <= c.T <= 1 and 0 <= c.R <= 1 and c.A >= -1e-9


class _nullcontext:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


@pytest.fixture(scope="module")
def comb_sweeps():
    om = np.round(np.arange(1.0, 1.1 + 5e-5, 1e-4), 10)
    out = {}
    for deg in (45, 60, 75):
        prob = FilmProblem(SODIUM, 10.0, theta=math.radians(deg))
        out[deg] = spectrum(prob, om)
    return om, out


@pytest.mark.parametrize("kind", ["T", "R", "A"])
def test_extrema_positions_do_not_depend_on_angle(comb_sweeps, kind):
    om, sweeps = comb_sweeps
    mode = "max" if kind == "A" else "min"
    pos = [find_extrema(om, np.array([getattr(c, kind) for c in sweeps[d]]), mode)[0] for d in (45, 60, 75)]
    assert len({p.size for p in pos}) == 1
    spread = np.max(pos, axis=0) - np.min(pos, axis=0)
    assert np.all(spread <= 1e-4), f"{kind} extrema spread across angles: {spread}"


def test_comb_extrema_nearly_shared_across_angles(comb_sweeps):
    # the positions agree to a few grid steps, tightest for low orders
    om, sweeps = comb_sweeps
    pos = [find_extrema(om, np.array([c.R for c in sweeps[d]]), "min")[0] for d in (45, 60, 75)]
    spread = np.max(pos, axis=0) - np.min(pos, axis=0)
    assert np.all(spread < 5e-4)
    assert spread[0] <= 1e-4
