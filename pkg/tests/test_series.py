import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from discops.series import (
    DEFAULT_DEGREE,
    TruncatedSeries,
    add,
    antiderivative,
    cauchy_mul,
    coeffs_from_samples,
    compose,
    constant,
    deflate_at,
    derivative,
    evaluate,
    exp_series,
    from_json,
    identity,
    log_series,
    monomial,
    pow_series,
    random_series,
    sample_circle,
    to_json,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def coeff_err(f, g):
    return float(np.max(np.abs(f.coeffs - g.coeffs)))


# -- construction ------------------------------------------------------------

def test_short_lists_pad_to_working_degree():
    f = TruncatedSeries([0, 1])
    assert f.degree == DEFAULT_DEGREE
    assert f.effective_degree == 1
    assert f.is_polynomial


def test_explicit_degree_truncates():
    f = TruncatedSeries([1, 2, 3, 4], degree=2)
    assert list(f.coeffs) == [1, 2, 3]
    assert not f.is_polynomial


@pytest.mark.parametrize("bad", [np.nan, np.inf, complex(0, np.nan)])
def test_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        TruncatedSeries([1, bad])


def test_coefficients_are_read_only():
    f = identity()
    with pytest.raises(ValueError):
        f.coeffs[0] = 3


# -- add / multiply ----------------------------------------------------------

def test_add_examples():
    assert (TruncatedSeries([1, 1]) + TruncatedSeries([1, -1])).allclose(constant(2), 0)
    f = random_series(1, 10)
    assert add(f, constant(0, f.degree)).allclose(f, 0)
    assert (monomial(2) + 3 * monomial(2)).allclose(monomial(2, coeff=4), 0)


def test_add_takes_min_degree():
    assert add(monomial(1, 5), monomial(1, 9)).degree == 5


def test_cauchy_examples():
    assert cauchy_mul(identity(), identity()).allclose(monomial(2), 0)
    n = 12
    geo = TruncatedSeries(np.ones(n + 1), degree=n)
    assert cauchy_mul(TruncatedSeries([1, -1], degree=n), geo).allclose(constant(1, n), 1e-15)


def test_cauchy_degree_extension_is_exact():
    f = TruncatedSeries([1, 2], degree=1)
    g = TruncatedSeries([3, 4], degree=1)
    assert list(cauchy_mul(f, g, degree=2).coeffs) == [3, 10, 8]
    with pytest.raises(ValueError):
        cauchy_mul(f, g, degree=3)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_ring_axioms(seed):
    ss = np.random.SeedSequence(seed).spawn(3)
    f, g, h = (random_series(s, 32, 0.8) for s in ss)
    one = constant(1.0, f.degree)
    assert coeff_err(cauchy_mul(f, g), cauchy_mul(g, f)) < 1e-13
    assert coeff_err(cauchy_mul(cauchy_mul(f, g), h), cauchy_mul(f, cauchy_mul(g, h))) < 1e-13
    assert coeff_err(cauchy_mul(f, g + h), cauchy_mul(f, g) + cauchy_mul(f, h)) < 1e-13
    assert coeff_err(f + g, g + f) == 0
    assert coeff_err((f + g) + h, f + (g + h)) < 1e-15
    assert cauchy_mul(one, f).allclose(f, 0)


# -- calculus ----------------------------------------------------------------

def test_derivative_and_antiderivative():
    assert derivative(monomial(5)).allclose(monomial(4, coeff=5), 0)
    assert antiderivative(constant(1)).allclose(identity(), 0)
    assert derivative(monomial(5, 10)).degree == 9
    assert antiderivative(monomial(5, 10)).degree == 11


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_fundamental_theorem(seed):
    g = random_series(seed, 20, 0.9)
    assert derivative(antiderivative(g)).allclose(g, 1e-15)
    f = antiderivative(derivative(g))
    assert f.allclose(g - g.coeffs[0], 1e-15)


# -- evaluation --------------------------------------------------------------

def test_evaluate_examples():
    assert evaluate(monomial(2), 0.5) == 0.25
    h10 = TruncatedSeries([0] + [1 / k for k in range(1, 11)])
    exact = float(sum(Fraction(1, k) for k in range(1, 11)))
    assert abs(evaluate(h10, 1) - exact) < 1e-14
    assert abs(exact - 2.9289682539682538) < 1e-15
    f = random_series(3, 10)
    assert evaluate(f, 0) == f.coeffs[0]


def test_evaluate_vectorised():
    f = random_series(4, 10)
    pts = np.array([0.1, 0.2j, -0.5])
    assert np.allclose(evaluate(f, pts), [evaluate(f, p) for p in pts], atol=1e-15)


# -- composition -------------------------------------------------------------

def test_compose_scaling():
    f = random_series(5, 30, 0.9)
    a = 0.7 - 0.2j
    out = compose(f, identity() * a)
    k = np.arange(f.degree + 1)
    assert np.allclose(out.coeffs, a**k * f.coeffs, atol=1e-15)


def test_compose_examples():
    assert compose(monomial(2), monomial(2)).allclose(monomial(4), 0)
    zz = TruncatedSeries([0, 0, 0.5])  # z (*) z
    assert compose(zz, monomial(2)).allclose(monomial(4, coeff=0.5), 0)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_compose_associative_on_exact_path(seed):
    ss = np.random.SeedSequence(seed).spawn(3)
    f = random_series(ss[0], 8, 0.8)
    phi = random_series(ss[1], 3, 0.5) - random_series(ss[1], 3, 0.5).coeffs[0]
    psi = random_series(ss[2], 3, 0.5) - random_series(ss[2], 3, 0.5).coeffs[0]
    lhs = compose(compose(f, phi), psi)
    rhs = compose(f, compose(phi, psi))
    assert coeff_err(lhs, rhs) < 1e-11


def test_compose_resampling_matches_direct_expansion():
    # (1 + z)^3 with phi = 0.3 + 0.5 z, compared with exact binomial expansion
    f = TruncatedSeries([1, 3, 3, 1])
    phi = TruncatedSeries([0.3, 0.5])
    out, err = compose(f, phi, return_error=True)
    # f(phi) = (1.3 + 0.5 z)^3
    exact = [math.comb(3, k) * 1.3 ** (3 - k) * 0.5**k for k in range(4)]
    assert np.allclose(out.coeffs[:4], exact, atol=1e-14)
    assert np.all(out.coeffs[4:] == 0)
    assert err < 1e-12


def test_compose_rejects_full_series_with_big_symbol():
    f = TruncatedSeries(np.ones(11), degree=10)
    with pytest.raises(ValueError):
        compose(f, TruncatedSeries([0.5, 0.6], degree=10))


def test_compose_tail_estimate_for_full_series():
    # geometric series 1/(1-w) truncated, with phi = 0.2 + 0.3 z
    n = 40
    f = TruncatedSeries(np.ones(n + 1), degree=n)
    out, err = compose(f, TruncatedSeries([0.2, 0.3], degree=n), return_error=True)
    # 1/(1 - 0.2 - 0.3 z) = (1/0.8) sum (0.375 z)^k
    exact = (1 / 0.8) * 0.375 ** np.arange(n + 1)
    assert np.max(np.abs(out.coeffs - exact)) <= err + 1e-14
    assert 0 < err < 1e-7


# -- deflation ---------------------------------------------------------------

def test_deflate_examples():
    w = 0.3 + 0.4j
    assert deflate_at(monomial(2, 5), w).allclose(TruncatedSeries([w, 1], degree=4), 1e-15)
    f = random_series(7, 10)
    assert deflate_at(f, 0).allclose(TruncatedSeries(f.coeffs[1:]), 0)


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(0, 0.99), st.floats(0, 2 * math.pi))
def test_deflate_round_trip(seed, r, t):
    w = r * complex(math.cos(t), math.sin(t))
    f = random_series(seed, 30, 0.9)
    g = deflate_at(f, w)
    back = cauchy_mul(TruncatedSeries([-w, 1], degree=f.degree), g.with_degree(f.degree))
    assert coeff_err(back + complex(evaluate(f, w)), f) < 1e-12


def test_deflate_rejects_boundary_point():
    with pytest.raises(ValueError):
        deflate_at(identity(), 1.0)


# -- exp / log / pow ---------------------------------------------------------

def test_exp_of_zero():
    assert exp_series(constant(0)).allclose(constant(1), 0)


def test_exp_matches_factorials():
    e = exp_series(identity(20))
    assert np.allclose(e.coeffs, [1 / math.factorial(k) for k in range(21)], rtol=1e-14)


def test_log_of_geometric_series():
    n = 30
    g = log_series(TruncatedSeries(np.ones(n + 1), degree=n))
    expect = [0] + [1 / k for k in range(1, n + 1)]
    assert np.allclose(g.coeffs, expect, atol=1e-14)


def test_pow_identity_and_square_root():
    f = random_series(8, 10) + 3
    assert pow_series(f, 1).allclose(f, 1e-13)
    r = pow_series(f, 0.5)
    assert cauchy_mul(r, r).allclose(f, 1e-12)


def test_pow_matches_binomial_series():
    # (1 - z)^(-gamma) has coefficients gamma (gamma+1) ... / k!
    g = 0.25
    s = pow_series(TruncatedSeries([1, -1], degree=15), -g)
    expect = [1.0]
    for k in range(1, 16):
        expect.append(expect[-1] * (g + k - 1) / k)
    assert np.allclose(s.coeffs, expect, rtol=1e-13)


@pytest.mark.parametrize("fn", [log_series, lambda f: pow_series(f, 0.5)])
def test_log_pow_reject_zero_constant(fn):
    with pytest.raises(ValueError):
        fn(identity())


def test_pow_rejects_non_finite_exponent():
    with pytest.raises(ValueError):
        pow_series(constant(1), np.inf)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_log_exp_inverse(seed):
    rng = np.random.default_rng(seed)
    f = TruncatedSeries(rng.uniform(-1, 1, 21) + 1j * rng.uniform(-1, 1, 21), degree=20) * 0.7
    assert log_series(exp_series(f)).allclose(f, 1e-11)


# -- sampling ----------------------------------------------------------------

def test_sampling_round_trip():
    f = random_series(9, 63, 0.95, degree=63)
    back = coeffs_from_samples(sample_circle(f, 1.0, 64), 1.0, 63)
    assert coeff_err(back, f) < 1e-12


def test_sampling_examples():
    assert np.allclose(sample_circle(constant(1), 0.5, 16), 1, atol=1e-15)
    back = coeffs_from_samples(sample_circle(monomial(5), 0.8, 32), 0.8)
    # dividing by r**k amplifies rounding by up to 0.8**-31
    assert np.allclose(back.coeffs, np.eye(32)[5], atol=1e-12)


@pytest.mark.parametrize("r", [0.0, -0.5, 1.5])
def test_sampling_rejects_bad_radius(r):
    with pytest.raises(ValueError):
        sample_circle(identity(), r, 8)


# -- random series and JSON --------------------------------------------------

def test_random_series_is_deterministic():
    assert random_series(11, 20).allclose(random_series(11, 20), 0)
    assert not random_series(11, 20).allclose(random_series(12, 20), 0)


def test_random_series_bounds():
    f = random_series(13, 64, 0.5, 1.0)
    zeta_max = np.max(np.abs(f.coeffs / 0.5 ** np.arange(65)))
    sup = np.max(np.abs(sample_circle(f, 1.0, 512)))
    assert sup <= 2 * zeta_max
    assert random_series(1, 10, 0.5, 0.0).effective_degree == 0


def test_json_round_trip():
    f = random_series(14, 10)
    assert from_json(to_json(f)).allclose(f, 0)
    assert from_json("[1, [0, 2]]").allclose(TruncatedSeries([1, 2j]), 0)
    with pytest.raises(ValueError):
        from_json('[["a", 1]]')
