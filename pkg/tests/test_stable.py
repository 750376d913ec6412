import math

import numpy as np
import pytest

from stablekit.errors import AccuracyError, ParameterError
from stablekit.stable import (StableParams, cf_eval, combine_stable,
                              scale_shift_transform, stable_cdf, stable_pdf)


# ---------------------------------------------------------------- oracles

def cf_oracle(alpha, beta, gamma, mu, t):
    """Arbitrary-precision direct evaluation of the closed-form CF."""
    import mpmath as mp
    with mp.workdps(50):
        a, b, g, m, tt = map(mp.mpf, (alpha, beta, gamma, mu, t))
        at = abs(tt)
        if at == 0:
            return complex(1.0, 0.0)
        w = mp.tan(mp.pi * a / 2) if a != 1 else -2 / mp.pi * mp.log(at)
        sgn = 1 if tt > 0 else -1
        expo = 1j * m * tt - g**a * at**a * (1 - 1j * b * sgn * w)
        return complex(mp.exp(expo))


def pdf_oracle(alpha, beta, gamma, x):
    """Independent inversion quadrature (tanh-sinh, high precision)."""
    import mpmath as mp
    with mp.workdps(30):
        a, b, g, xx = map(mp.mpf, (alpha, beta, gamma, x))
        w = mp.tan(mp.pi * a / 2)

        def integrand(t):
            expo = -(g * t) ** a * (1 - 1j * b * w)
            return (mp.exp(expo) * mp.exp(-1j * xx * t)).real

        val = mp.quad(integrand, [0, 1, 5, 15, 60]) / mp.pi
        return float(val)


# ---------------------------------------------------------------- cf_eval

def test_cf_cauchy_reduces_to_exponential():
    p = StableParams(1.0, 0.0, 1.0, 0.0)
    assert cf_eval(p, 2.0) == pytest.approx(math.exp(-2.0), abs=1e-15)
    assert abs(cf_eval(p, 2.0).imag) < 1e-15


def test_cf_gaussian_case_skew_term_vanishes():
    p = StableParams(2.0, 0.0, 1.0, 0.0)
    assert cf_eval(p, 1.0) == pytest.approx(math.exp(-1.0), abs=1e-15)
    # tan(pi alpha/2) is exactly zero at alpha=2, any beta
    ps = StableParams(2.0, 0.9, 1.0, 0.0)
    assert cf_eval(ps, 1.0).imag == 0.0


def test_cf_at_zero_is_one_exactly():
    for p in (StableParams(1.0, 0.7, 2.0, 3.0), StableParams(0.5, -1.0, 1.0, 0.0)):
        assert cf_eval(p, 0.0) == 1.0 + 0.0j


def test_cf_matches_high_precision_oracle():
    p = StableParams(1.5, 0.5, 2.0, 1.0)
    got = cf_eval(p, 0.3)
    want = cf_oracle(1.5, 0.5, 2.0, 1.0, 0.3)
    assert abs(got - want) <= 1e-12


@pytest.mark.parametrize("params", [
    StableParams(0.5, -1.0, 2.0, 1.0),
    StableParams(1.0, 0.5, 1.0, -2.0),
    StableParams(1.5, 0.3, 0.5, 0.0),
    StableParams(2.0, 0.9, 1.5, 3.0),
])
def test_cf_hermitian_and_modulus(params):
    ts = np.array([0.05, 0.3, 1.0, 2.5, 7.0])
    plus = cf_eval(params, ts)
    minus = cf_eval(params, -ts)
    assert np.max(np.abs(minus - np.conj(plus))) <= 1e-12
    mod = np.exp(-(params.gamma * ts) ** params.alpha)
    assert np.max(np.abs(np.abs(plus) - mod)) <= 1e-12


def test_params_validation():
    with pytest.raises(ParameterError):
        StableParams(0.0, 0.0)
    with pytest.raises(ParameterError):
        StableParams(2.1, 0.0)
    with pytest.raises(ParameterError):
        StableParams(1.0, 1.5)
    with pytest.raises(ParameterError):
        StableParams(1.0, 0.0, -1.0)
    with pytest.raises(ParameterError):
        StableParams(1.0, 0.0, 1.0, math.inf)


# ------------------------------------------------------ scale_shift_transform

def test_scale_shift_identity():
    assert scale_shift_transform(5.0, StableParams(1.5, 0.0, 1.0, 0.0)) == 5.0


def test_scale_shift_alpha_one_log_correction():
    got = scale_shift_transform(0.0, StableParams(1.0, 1.0, math.e, 0.0))
    assert got == pytest.approx(2.0 * math.e / math.pi, abs=1e-14)


def test_scale_shift_plain_affine():
    got = scale_shift_transform(1.0, StableParams(0.5, -1.0, 3.0, 2.0))
    assert got == 5.0


# ------------------------------------------------------------- combine_stable

def test_combine_symmetric_fixed_point():
    comps = [StableParams(1.5, 0.0, 1.0, 0.0)] * 3
    out = combine_stable(comps)
    assert (out.alpha, out.beta, out.gamma, out.mu) == (1.5, 0.0, 1.0, 0.0)


def test_combine_alpha_one_location():
    # beta_hat and gamma_hat by hand; mu_hat pinned by the closure identity
    # cf(combined, t) = prod_j cf(comp_j, t/n): the rescaling by 1/n adds
    # +(2 ln n)/(n pi) sum beta_j gamma_j for alpha = 1.
    comps = [StableParams(1.0, 1.0, 1.0, 0.0), StableParams(1.0, 0.0, 1.0, 0.0)]
    out = combine_stable(comps)
    assert out.beta == pytest.approx(0.5, abs=1e-15)
    assert out.gamma == pytest.approx(1.0, abs=1e-15)
    assert out.mu == pytest.approx(math.log(2.0) / math.pi, abs=1e-15)


def test_combine_antisymmetric_skews_cancel():
    comps = [StableParams(0.5, 1.0, 1.0, 0.0), StableParams(0.5, -1.0, 1.0, 0.0)]
    out = combine_stable(comps)
    assert out.beta == 0.0
    assert out.gamma == pytest.approx(1.0, abs=1e-15)
    assert out.mu == 0.0


@pytest.mark.parametrize("comps", [
    [StableParams(1.5, 0.5, 2.0, 0.0), StableParams(1.5, -0.3, 0.7, 0.0),
     StableParams(1.5, 1.0, 1.2, 0.0)],
    [StableParams(1.0, 1.0, 1.0, 0.0), StableParams(1.0, 0.0, 1.0, 0.0)],
    [StableParams(1.0, 0.8, 2.0, 0.0), StableParams(1.0, -0.5, 0.5, 0.0),
     StableParams(1.0, 0.1, 1.0, 0.0)],
    [StableParams(0.7, -1.0, 3.0, 0.0), StableParams(0.7, 0.2, 0.4, 0.0)],
])
def test_combine_closure_consistency(comps):
    out = combine_stable(comps)
    n = len(comps)
    for t in (0.1, 0.5, 1.0, 2.0, -0.1, -0.5, -1.0, -2.0):
        prod = 1.0 + 0.0j
        for c in comps:
            prod *= cf_eval(c, t / n ** (1.0 / c.alpha))
        assert abs(cf_eval(out, t) - prod) <= 1e-10


def test_combine_rejects_mixed_alpha_and_nonzero_mu():
    with pytest.raises(ParameterError):
        combine_stable([StableParams(1.0, 0.0), StableParams(1.5, 0.0)])
    with pytest.raises(ParameterError):
        combine_stable([StableParams(1.0, 0.0, 1.0, 1.0)])
    with pytest.raises(ParameterError):
        combine_stable([])


# ----------------------------------------------------------------- stable_pdf

def test_pdf_cauchy_closed_form():
    p = StableParams(1.0, 0.0, 1.0, 0.0)
    assert stable_pdf(p, 0.0, 1e-9) == pytest.approx(1.0 / math.pi, abs=1e-9)


def test_pdf_gaussian_closed_form():
    p = StableParams(2.0, 0.0, 1.0, 0.0)
    assert stable_pdf(p, 0.0, 1e-9) == pytest.approx(1 / (2 * math.sqrt(math.pi)),
                                                     abs=1e-9)


def test_pdf_matches_refinement_oracle():
    got = stable_pdf(StableParams(1.5, 0.3, 1.0, 0.0), 1.0, 1e-10)
    want = pdf_oracle(1.5, 0.3, 1.0, 1.0)
    assert got == pytest.approx(want, abs=1e-8)


def test_pdf_symmetry_when_beta_zero():
    p = StableParams(1.3, 0.0, 1.0, 0.0)
    for x in (0.3, 1.0, 2.7):
        assert abs(stable_pdf(p, x, 1e-10) - stable_pdf(p, -x, 1e-10)) <= 1e-10


def test_pdf_location_shift():
    a = stable_pdf(StableParams(1.5, 0.5, 1.0, 2.0), 2.5, 1e-10)
    b = stable_pdf(StableParams(1.5, 0.5, 1.0, 0.0), 0.5, 1e-10)
    assert a == pytest.approx(b, abs=1e-10)


def _tail_amplitude(alpha, beta, gamma):
    """x^(alpha+1) f(x) -> this constant as x -> +infinity (alpha < 2)."""
    from scipy.special import gamma as G
    return (gamma**alpha * (1 + beta) * alpha * math.sin(math.pi * alpha / 2)
            * G(alpha) / math.pi)


@pytest.mark.parametrize("alpha,beta", [(1.5, 0.3), (0.8, 0.5)])
def test_pdf_tail_law(alpha, beta):
    c_plus = _tail_amplitude(alpha, beta, 1.0)
    # x beyond the 0.999 quantile, located via the tail estimate itself
    x = (c_plus / (alpha * 1e-3)) ** (1.0 / alpha)
    val = stable_pdf(StableParams(alpha, beta, 1.0, 0.0), x, 1e-12)
    assert x ** (alpha + 1.0) * val == pytest.approx(c_plus, rel=0.10)


def test_pdf_normalization_with_tail_estimate():
    # mass inside [-X, X] plus the analytic tail estimate c+-+ X^-a / a -> 1
    from scipy import integrate
    alpha, beta = 1.5, 0.3
    p = StableParams(alpha, beta, 1.0, 0.0)
    cp = _tail_amplitude(alpha, beta, 1.0)
    cm = _tail_amplitude(alpha, -beta, 1.0)
    x_cut = 200.0
    mass, err = integrate.quad(lambda x: stable_pdf(p, x, 1e-9), -x_cut, x_cut,
                               limit=300, epsabs=1e-8)
    tail = (cp + cm) * x_cut ** (-alpha) / alpha
    assert mass + tail == pytest.approx(1.0, abs=1e-6)


def test_pdf_accuracy_error_reports_achieved():
    with pytest.raises(AccuracyError) as exc:
        stable_pdf(StableParams(1.5, 0.3, 1.0, 0.0), 1.0, 1e-16)
    assert exc.value.achieved is not None and exc.value.achieved > 1e-16


def test_pdf_rejects_bad_tol():
    with pytest.raises(ParameterError):
        stable_pdf(StableParams(1.0, 0.0), 0.0, 0.0)


# ----------------------------------------------------------------- stable_cdf

def test_cdf_cauchy_values():
    p = StableParams(1.0, 0.0, 1.0, 0.0)
    assert stable_cdf(p, 0.0, 1e-9) == pytest.approx(0.5, abs=1e-9)
    assert stable_cdf(p, 1.0, 1e-9) == pytest.approx(0.75, abs=1e-9)
    assert stable_cdf(p, -5.0, 1e-9) == pytest.approx(0.5 - math.atan(5.0) / math.pi,
                                                      abs=1e-9)


def test_cdf_symmetric_median():
    assert stable_cdf(StableParams(1.5, 0.0, 1.0, 0.0), 0.0, 1e-9) == \
        pytest.approx(0.5, abs=1e-9)


def test_cdf_monotone_and_limits():
    p = StableParams(0.8, 0.6, 1.3, -0.5)
    xs = np.linspace(-40, 40, 41)
    vals = [stable_cdf(p, float(x), 1e-9) for x in xs]
    assert all(b - a >= -1e-9 for a, b in zip(vals, vals[1:]))
    assert vals[0] < 0.05 and vals[-1] > 0.95
    assert 0.0 <= min(vals) and max(vals) <= 1.0


def test_cdf_consistent_with_pdf_quadrature():
    from scipy import integrate
    p = StableParams(1.5, 0.5, 1.0, 0.0)
    lo, hi = -1.0, 2.0
    mass = integrate.quad(lambda x: stable_pdf(p, x, 1e-10), lo, hi,
                          limit=200, epsabs=1e-9)[0]
    diff = stable_cdf(p, hi, 1e-10) - stable_cdf(p, lo, 1e-10)
    assert mass == pytest.approx(diff, abs=1e-8)
