import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen
from plasmafilm.dispersion import find_eta0, make_context
from plasmafilm.errors import DegenerateModeError
from plasmafilm.fieldmode import (GResult, _raw_terms, _resummed_terms, continuous_spectrum, cosh_ratio,
                                  field_profile, g1, g2, g_quadrature, g_series, relative_error,
                                  stable_tanh)
from plasmafilm.medium import SODIUM, FilmProblem, reduce
from plasmafilm.numerics import integrate_finite


def ctx_at(d=10.0, Omega=1.0, eps=1e-3, zero=True):
    rp = reduce(FilmProblem(SODIUM, d, eps=eps), Omega)
    return find_eta0(rp) if zero else make_context(rp, with_zero=False)


@pytest.fixture(scope="module")
def ctx10():
    return ctx_at()


def test_gresult_validation():
    with pytest.raises(ValueError):
        GResult(1.0, "guess")
    with pytest.raises(ValueError):
        GResult(1.0, "G1", 0, -1.0)


@pytest.mark.parametrize("w", [0.3 + 2j, -40 + 3j, 800 - 1e4j, -1e5 + 0.1j])
def test_stable_tanh_is_finite_and_correct(w):
    val = stable_tanh(w)
    assert np.isfinite(val)
    if abs(w.real) < 300:
        assert val == pytest.approx(np.tanh(w), rel=1e-12)


def test_cosh_ratio_large_argument():
    a = 40.0 - 3000j
    s = np.array([-1.0, 0.0, 1.0])
    out = cosh_ratio(a, s)
    assert out[0] == pytest.approx(1.0) and out[2] == pytest.approx(1.0)
    assert abs(out[1]) < 1e-15


@pytest.mark.parametrize("d", [1, 5, 10])
def test_series_matches_raw_million_term_sum(d):
    g = g_series(ctx_at(float(d)))
    assert abs(g.value - frozen.G_RAW[d]) < 1e-8 * abs(frozen.G_RAW[d])
    assert g.method == "series"


def test_raw_and_resummed_series_agree():
    ctx = ctx_at(5.0, 1.1)
    a = g_series(ctx).value
    b = g_series(ctx, resummed=False).value
    assert abs(a - b) < 1e-8 * abs(a)


@pytest.mark.parametrize("d", [1, 5, 10])
@pytest.mark.parametrize("Omega", [0.8, 1.0, 1.3])
def test_quadrature_equals_series(d, Omega):
    ctx = ctx_at(float(d), Omega)
    q = g_quadrature(ctx)
    s = g_series(ctx)
    assert abs(q.value - s.value) < 1e-6 * abs(s.value)
    assert q.method == "quadrature" and q.terms_or_evals > 0


def test_continuous_spectrum_integrand_is_even(ctx10):
    # the bare integrand tanh(z0/tau) tau**3/(lambda+ lambda-) is odd*odd*even
    from plasmafilm.dispersion import lambda_pm
    rp = ctx10.rp
    t = np.array([0.2, 0.6])
    lp, lm = lambda_pm(t, rp)
    f_pos = stable_tanh(rp.z0 / t) * t**3 / (lp * lm)
    f_neg = stable_tanh(rp.z0 / -t) * (-t) ** 3 / (lp * lm)
    assert np.allclose(f_pos, f_neg)


@pytest.mark.parametrize("d", [1, 5, 10])
def test_o1_o2_against_raw_oracle(d):
    ctx = ctx_at(float(d))
    ref = g_series(ctx)
    assert relative_error(ref, g1(ctx)) == pytest.approx(frozen.O1_RAW[d], rel=1e-6)
    assert relative_error(ref, g2(ctx)) == pytest.approx(frozen.O2_RAW[d], rel=1e-4)


def test_fidelity_ordering():
    o2 = {d: relative_error(g_series(ctx_at(d)), g2(ctx_at(d))) for d in (1.0, 5.0)}
    assert o2[5.0] < o2[1.0]
    for d in (1.0, 5.0, 10.0):
        assert 1.0 <= relative_error(g_series(ctx_at(d)), g1(ctx_at(d))) <= 2.0


def test_g1_and_series_do_not_need_the_zero():
    ctx = ctx_at(zero=False)
    assert g1(ctx).method == "G1"
    assert g_series(ctx).value == pytest.approx(frozen.G_RAW[10], rel=1e-8)


def test_resummed_terms_decay_like_fourth_power(ctx10):
    ratio = abs(_resummed_terms(10, ctx10)) / abs(_resummed_terms(5, ctx10))
    assert ratio == pytest.approx((11 / 21) ** 4, rel=0.2)


def test_raw_terms_are_not_yet_in_the_fourth_power_regime(ctx10):
    # |eta_k|**2 >> |ac| for small k, so the plain terms have not reached k**-4
    ratio = abs(_raw_terms(10, ctx10)) / abs(_raw_terms(5, ctx10))
    assert abs(ratio / (11 / 21) ** 4 - 1) > 0.2


def test_field_mid_and_quarter_against_raw_sum(ctx10):
    e = field_profile([0.5, 0.25], ctx10)
    assert abs(e[0] - frozen.FIELD_MID_10NM) < 1e-6
    assert abs(e[1] - frozen.FIELD_QUARTER_10NM) < 1e-6


def test_field_is_one_at_surfaces(ctx10):
    e = field_profile([0.0, 1.0], ctx10)
    assert np.allclose(e, 1.0, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 1.0))
def test_field_mirror_symmetry(x):
    ctx = ctx_at(5.0, 1.05)
    e = field_profile([x, 1.0 - x], ctx)
    assert abs(e[0] - e[1]) <= 1e-10 * max(1.0, abs(e[0]))


@pytest.mark.parametrize("d, Omega", [(10.0, 1.0), (1.0, 1.2), (5.0, 0.8)])
def test_field_mean_equals_g(d, Omega):
    ctx = ctx_at(d, Omega)
    mean = integrate_finite(lambda x: field_profile(x, ctx), 0.0, 1.0).value
    G = g_series(ctx).value
    assert abs(mean - G) < 1e-8 * abs(G)


def test_field_rejects_outside_film(ctx10):
    with pytest.raises(ValueError):
        field_profile(1.2, ctx10)


def test_degenerate_mode_reported(monkeypatch):
    ctx = ctx_at()
    import plasmafilm.fieldmode as fm
    monkeypatch.setattr(fm, "DEGENERACY_GAP", 1e9)
    with pytest.raises(DegenerateModeError):
        g_series(ctx)


def test_relative_error_basics():
    assert relative_error(1.0, 1.0) == 0.0
    assert relative_error(1.0, 0.99) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        relative_error(0.0, 1.0)


def test_g2_error_small_above_plasma_frequency():
    errs = [relative_error(g_series(ctx_at(10.0, om)), g2(ctx_at(10.0, om))) for om in (1.0, 1.1, 1.3)]
    assert max(errs) < 0.2


def test_continuous_spectrum_reports_error(ctx10):
    res = continuous_spectrum(ctx10)
    assert res.error >= 0
