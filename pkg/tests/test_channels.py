import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from satrelay import channels
from satrelay.channels import (AVERAGE_SHADOWING, HEAVY_SHADOWING, ShadowedRicianParams,
                               TermSum)

PARAMS = [HEAVY_SHADOWING, AVERAGE_SHADOWING,
          ShadowedRicianParams(2, 0.126, 0.835), ShadowedRicianParams(3, 0.2, 1.5),
          ShadowedRicianParams(10, 0.158, 1.29)]

sr_params = st.builds(ShadowedRicianParams, st.integers(1, 12), st.floats(0.02, 1.0),
                      st.floats(1e-3, 3.0))


@pytest.mark.parametrize("p", PARAMS)
def test_pdf_normalizes(p):
    total, _ = integrate.quad(lambda x: channels.sr_pdf(p, x), 0, np.inf,
                              epsabs=1e-13, epsrel=1e-12, limit=500)
    assert abs(total - 1.0) < 1e-9


@pytest.mark.parametrize("p", PARAMS)
def test_cdf_at_zero_and_infinity(p):
    assert abs(channels.sr_cdf(p, 0.0)) < 1e-12
    assert channels.sr_cdf(p, 1e4) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("p", PARAMS)
def test_cdf_is_integral_of_pdf(p):
    for x in (0.01, 0.3, 2.0):
        ref, _ = integrate.quad(lambda t: channels.sr_pdf(p, t), 0, x, epsabs=1e-14)
        assert channels.sr_cdf(p, x) == pytest.approx(ref, abs=1e-11)


@pytest.mark.parametrize("p", PARAMS)
def test_mean_matches_pdf(p):
    m, _ = integrate.quad(lambda x: x * channels.sr_pdf(p, x), 0, np.inf, limit=500)
    assert p.mean == pytest.approx(m, rel=1e-8)
    assert p.mean == pytest.approx(2 * p.b + p.omega)


@settings(max_examples=40, deadline=None)
@given(sr_params)
def test_cdf_monotone_in_unit_interval(p):
    x = np.linspace(0, 10 * p.mean, 60)
    f = channels.sr_cdf(p, x)
    assert np.all(np.diff(f) >= -1e-12)
    assert np.all((f >= -1e-12) & (f <= 1 + 1e-12))


def test_mixture_weights_sum_to_one():
    for p in PARAMS:
        w = p.mixture_weights()
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(w >= 0)


@pytest.mark.parametrize("p", [HEAVY_SHADOWING, AVERAGE_SHADOWING])
@pytest.mark.parametrize("sampler", [channels.sr_sample, channels.sr_sample_mixture])
def test_sampler_ks(p, sampler):
    rng = np.random.default_rng(12345)
    draws = sampler(p, rng, 100_000)
    assert stats.kstest(draws, lambda x: channels.sr_cdf(p, x)).pvalue > 0.01


def test_exponential_sampler_ks():
    rng = np.random.default_rng(3)
    d = channels.exp_sample(2.5, rng, 100_000)
    assert stats.kstest(d, lambda x: channels.exp_cdf(2.5, x)).pvalue > 0.01


@pytest.mark.parametrize("relays", [
    (HEAVY_SHADOWING,) * 3,
    (AVERAGE_SHADOWING,) * 3,
    (HEAVY_SHADOWING, AVERAGE_SHADOWING),
    (HEAVY_SHADOWING, AVERAGE_SHADOWING, PARAMS[2], PARAMS[3]),
])
def test_best_relay_terms_match_product(relays):
    terms = channels.best_relay_cdf_terms(relays)
    scale = max(p.mean for p in relays)
    x = np.linspace(0, 8 * scale, 20)
    direct = np.prod([channels.sr_cdf(p, x) for p in relays], axis=0)
    assert np.max(np.abs(terms(x) - direct)) < 1e-12


def test_termsum_merges_equal_rates():
    t = TermSum([(1.0, 1, 2.0), (2.0, 1, 2.0 * (1 + 1e-14)), (1.0, 0, 2.0)], 0.5)
    assert len(t) == 2
    assert sorted(t.coeffs.tolist()) == [1.0, 3.0]


def test_termsum_product_symbolic():
    a = TermSum([(-1.0, 0, 1.0)], 1.0)  # 1 - e^{-x}
    b = TermSum([(-1.0, 1, 2.0)], 1.0)  # 1 - x e^{-2x}
    x = np.linspace(0, 5, 9)
    assert np.allclose((a * b)(x), a(x) * b(x), atol=1e-15)


def test_best_relay_eval_flags_bad_expansion():
    bad = TermSum([(2.0, 0, 1.0)], 1.0)
    with pytest.raises(ArithmeticError):
        channels.best_relay_cdf_eval(bad, 0.0)


@pytest.mark.parametrize("args", [(0, 0.1, 0.1), (1.5, 0.1, 0.1), (1, 0.0, 0.1), (1, 0.1, -1.0)])
def test_params_validation(args):
    with pytest.raises(ValueError):
        ShadowedRicianParams(*args)
