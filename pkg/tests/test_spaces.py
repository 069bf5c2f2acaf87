import math

import mpmath
import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from discops.operators import odd_partial_sum
from discops.series import TruncatedSeries, constant, identity, monomial, pow_series, random_series
from discops.spaces import (
    SpaceSpec,
    besov_growth_check,
    besov_growth_ratio,
    besov_mass,
    besov_multiplier_check,
    besov_multiplier_sides,
    bloch_growth_check,
    circle_max,
    circle_mean,
    little_bloch_defect,
    monomial_norm_closed_form,
    norm,
    weighted_value_bound,
    weighted_value_sup,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)

ALL_SPACES = ["hardy:p=1", "hardy:p=2", "hardy:p=3", "bergman:p=2,a=0", "bergman:p=1,a=-0.5",
              "bloch", "little-bloch", "besov:p=2", "besov:p=1.5", "besov:p=1", "sup"]


def bloch_monomial(n):
    # max of (1 - r^2) n r^(n-1), attained at r^2 = (n-1)/(n+1)
    if n == 1:
        return 1.0
    return n * (2 / (n + 1)) * ((n - 1) / (n + 1)) ** ((n - 1) / 2)


# -- SpaceSpec ---------------------------------------------------------------

@pytest.mark.parametrize("text", ["hardy:p=2", "bergman:p=2,a=0", "bloch", "little-bloch",
                                  "besov:p=2", "sup", "bergman:p=4,a=-0.5"])
def test_spec_round_trip(text):
    assert str(SpaceSpec.parse(text)) == text


@pytest.mark.parametrize("text", ["hardy:p=0.5", "bergman:p=2,a=-1", "besov:p=0.9", "nope",
                                  "hardy:q=2", "bergman:p=x"])
def test_spec_rejects_bad(text):
    with pytest.raises(ValueError):
        SpaceSpec.parse(text)


def test_hardy_infinity_is_sup():
    assert SpaceSpec.hardy(math.inf).kind == "sup"


# -- named examples ----------------------------------------------------------

@pytest.mark.parametrize("p", [1, 2, 3, 4.5])
@pytest.mark.parametrize("n", [0, 1, 7, 40])
def test_hardy_monomials(p, n):
    assert abs(norm(monomial(n), SpaceSpec.hardy(p)).value - 1) < 1e-13


def test_bergman_z():
    assert abs(norm(identity(), "bergman:p=2,a=0").value - math.sqrt(0.5)) < 1e-14


def test_bloch_examples():
    assert abs(norm(identity(), "bloch").value - 1) < 1e-14
    assert abs(norm(monomial(2), "bloch").value - 4 / (3 * math.sqrt(3))) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 5, 17, 60, 200])
def test_bloch_monomials_closed_form(n):
    f = monomial(n, max(n, 64))
    assert abs(norm(f, "bloch").value - bloch_monomial(n)) < 1e-12


def test_bloch_includes_constant_term():
    f = identity() + 0.5
    assert abs(norm(f, "bloch").value - 1.5) < 1e-14


def test_sup_norm():
    f = TruncatedSeries([0.5, 0.3j, -0.2])
    ref = max(abs(f(complex(math.cos(t), math.sin(t)))) for t in np.linspace(0, 2 * np.pi, 200001))
    assert abs(norm(f, "sup").value - ref) < 1e-9
    assert norm(f, "sup").value >= ref - 1e-15


def test_hardy_p1_matches_adaptive_quadrature():
    f = TruncatedSeries([1, -0.7, 0.2j, 0.4])
    ref = quad(lambda t: abs(f(complex(math.cos(t), math.sin(t)))), 0, 2 * math.pi,
               limit=200, epsabs=1e-14)[0] / (2 * math.pi)
    assert abs(norm(f, "hardy:p=1").value - ref) < 1e-12


def test_bergman_matches_mpmath_area_integral():
    # int_D |1 + z|^3 (1-|z|^2)^(-1/2) (1/2) dA computed independently in polar form
    f = TruncatedSeries([1, 1])
    mpmath.mp.dps = 20

    def integrand(r, t):
        return abs(1 + r * mpmath.expj(t)) ** 3 * (1 - r * r) ** -0.5 * 0.5 * r / mpmath.pi

    ref = float(mpmath.quad(integrand, [0, 1], [0, mpmath.pi, 2 * mpmath.pi])) ** (1 / 3)
    assert abs(norm(f, "bergman:p=3,a=-0.5").value - ref) < 1e-9


# -- closed forms ------------------------------------------------------------

def test_closed_form_examples():
    assert abs(monomial_norm_closed_form("bergman:p=2,a=0", 2) ** 2 - 1 / 3) < 1e-15
    for n in (1, 5, 30):
        v = monomial_norm_closed_form("besov:p=2", n) / n
        assert abs(v**2 - 1 / n) < 1e-14
        assert monomial_norm_closed_form("hardy:p=3", n) == 1.0
    with pytest.raises(ValueError):
        monomial_norm_closed_form("bloch", 3)


@pytest.mark.parametrize("p,a", [(1, -0.5), (2, 0), (4, 1), (1, 2)])
def test_bergman_closed_form_vs_scipy_beta(p, a):
    for n in (1, 9, 33):
        ref = ((a + 1) * sc.beta(n * p / 2 + 1, a + 1)) ** (1 / p)
        assert abs(monomial_norm_closed_form(SpaceSpec.bergman(p, a), n) / ref - 1) < 1e-12


@pytest.mark.parametrize("p,a", [(p, a) for p in (1, 2, 4) for a in (-0.5, 0, 1, 2)])
def test_bergman_quadrature_vs_closed_form(p, a):
    sp = SpaceSpec.bergman(p, a)
    for n in range(1, 33):
        got = norm(monomial(n), sp).value
        assert abs(got / monomial_norm_closed_form(sp, n) - 1) < 1e-10


@pytest.mark.parametrize("p", [1.5, 2, 3])
def test_besov_quadrature_vs_closed_form(p):
    sp = SpaceSpec.besov(p)
    for n in range(1, 33):
        got = norm(monomial(n), sp).value
        assert abs(got / monomial_norm_closed_form(sp, n) - 1) < 1e-10


def test_besov_p1_monomials():
    sp = SpaceSpec.besov(1)
    for n in range(1, 12):
        assert abs(norm(monomial(n), sp).value - monomial_norm_closed_form(sp, n)) < 1e-11


def test_normalised_monomials_decay():
    ns = (10, 100, 1000, 10000)
    # at p = 2 the value is exactly 1/sqrt(n), so it reaches 0.01 at n = 10**4
    vals = [monomial_norm_closed_form("besov:p=2", n) / n for n in ns]
    assert all(abs(v - n**-0.5) < 1e-12 for v, n in zip(vals, ns))
    assert all(b < a for a, b in zip(vals, vals[1:]))
    vals3 = [monomial_norm_closed_form("besov:p=3", n) / n for n in ns]
    assert all(b < a for a, b in zip(vals3, vals3[1:]))
    assert vals3[-1] < 0.01
    berg = [monomial_norm_closed_form("bergman:p=2,a=1", n) for n in (10, 100, 1000)]
    assert all(b < a for a, b in zip(berg, berg[1:]))


# -- norm axioms and monotonicity --------------------------------------------

@settings(max_examples=10, deadline=None)
@given(seeds, st.sampled_from(ALL_SPACES))
def test_homogeneity_and_triangle(seed, space):
    ss = np.random.SeedSequence(seed).spawn(2)
    f = random_series(ss[0], 12, 0.8)
    g = random_series(ss[1], 12, 0.8)
    c = 0.3 - 1.7j
    nf = norm(f, space).value
    assert abs(norm(f * c, space).value - abs(c) * nf) <= 1e-12 * max(1, abs(c) * nf)
    assert norm(f + g, space).value <= nf + norm(g, space).value + 1e-12


@settings(max_examples=20, deadline=None)
@given(seeds, st.floats(1, 4))
def test_circle_means_nondecreasing(seed, p):
    f = random_series(seed, 20, 0.9)
    radii = np.linspace(0.05, 1, 12)
    means = [circle_mean(f, p, r) for r in radii]
    assert all(b >= a - 1e-12 for a, b in zip(means, means[1:]))


def test_circle_max_refines_grid():
    f = TruncatedSeries([0, 1, 0.9j, -0.3])
    v, gain = circle_max(f, 1.0)
    dense = np.max(np.abs(f(np.exp(1j * np.linspace(0, 2 * np.pi, 400001)))))
    assert v >= dense - 1e-14
    assert gain >= 0


# -- Bloch instruments -------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 10, 50, 200])
def test_odd_partial_sums_in_unit_ball(n):
    pn = odd_partial_sum(np.exp(0.4j), n)
    assert norm(pn, "bloch").value <= 1 + 1e-9


def test_little_bloch_defect():
    assert little_bloch_defect(constant(0), 0.5) == 0
    f = random_series(3, 20, 0.9)
    fp_max = circle_max(TruncatedSeries(f.coeffs[1:] * np.arange(1, 21)), 1.0)[0]
    assert little_bloch_defect(f, 0.99) <= (1 - 0.99**2) * fp_max + 1e-12
    # z^n: interior maximiser sqrt((n-1)/(n+1)) when above r0
    n = 9
    assert abs(little_bloch_defect(monomial(n), 0.5) - bloch_monomial(n)) < 1e-12
    r0 = 0.95
    assert abs(little_bloch_defect(monomial(n), r0) - (1 - r0**2) * n * r0 ** (n - 1)) < 1e-12
    with pytest.raises(ValueError):
        little_bloch_defect(f, 1.0)


def test_bloch_growth_examples():
    assert bloch_growth_check(constant(2.0), 0.5)
    assert bloch_growth_check(identity(), 0.9)
    assert abs(0.5 * math.log(1.9 / 0.1) - 1.4722) < 1e-4


@settings(max_examples=25, deadline=None)
@given(seeds, st.floats(0, 0.99), st.floats(0, 2 * math.pi))
def test_bloch_growth_random(seed, r, t):
    f = random_series(seed, 24, 0.85)
    assert bloch_growth_check(f, r * complex(math.cos(t), math.sin(t)))


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_weighted_value_sup_bounded(seed):
    f = random_series(seed, 24, 0.85)
    assert weighted_value_sup(f) <= weighted_value_bound(f) + 1e-12


# -- Besov instruments -------------------------------------------------------

def test_besov_mass_examples():
    assert abs(besov_mass(constant(1), 2) - 1) < 1e-14
    assert abs(besov_mass(identity(), 2) - 0.5) < 1e-14
    with pytest.raises(ValueError):
        besov_mass(identity(), 1)


def test_besov_log_power_function_finite():
    # (log(2/(1-z)))^gamma for gamma < 1 - 1/p; coefficients via the series recurrences
    from discops.series import log_series

    n = 256
    g = log_series(TruncatedSeries([2.0], degree=n)) - log_series(TruncatedSeries([1, -1], degree=n))
    norms = []
    for gam in (0.1, 0.25, 0.45):
        f = pow_series(g, gam)
        norms.append(norm(f, "besov:p=2").value)
    assert all(math.isfinite(v) for v in norms)
    assert norms[0] < norms[1] < norms[2]


def test_besov_growth_ratio_and_check():
    f = random_series(5, 10, 0.8)
    r = besov_growth_ratio(f, 2.0, 0.7j)
    assert r > 0
    assert besov_growth_check(f, 2.0, 0.7j, r)
    assert not besov_growth_check(f, 2.0, 0.7j, 0.5 * r)


def test_besov_multiplier_examples():
    f = random_series(6, 10, 0.8)
    lhs, _ = besov_multiplier_sides(f, constant(1.0), 2.0)
    from discops.spaces import besov_integral

    assert abs(lhs - besov_integral(f, 2.0)) < 1e-12
    assert besov_multiplier_check(f, TruncatedSeries([1, 0, 1]), 2.0)
    lhs0, rhs0 = besov_multiplier_sides(constant(0.0), TruncatedSeries([1, 0, 1]), 2.0)
    assert lhs0 == 0 and rhs0 == 0


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_besov_multiplier_random(p):
    for s in range(5):
        assert besov_multiplier_check(random_series(s, 8, 0.8), TruncatedSeries([1, 0, 1]), p)
