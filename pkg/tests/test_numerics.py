import math

import numpy as np
import pytest
from scipy import integrate, special

from core.errors import DomainError, QuadratureError, SeriesConvergenceError
from gini.numerics import (
    LogRegularizedGamma,
    integrate_survival_squared,
    _log_p_series,
    _log_q_continued_fraction,
    log_gamma,
    log_gamma_kernel,
    log_reg_gamma_p,
    log_reg_gamma_q,
    reg_gamma_p,
    reg_gamma_q,
)


def test_log_gamma_known_values():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    assert log_gamma(10.0) == pytest.approx(math.log(362880.0), rel=1e-14)


@pytest.mark.parametrize("s", [0.1, 0.5, 1.0, 3.7, 50.0, 1e3, 1e6])
def test_log_gamma_recurrence(s):
    assert math.exp(log_gamma(s + 1) - log_gamma(s)) == pytest.approx(s, rel=1e-10)


@pytest.mark.parametrize("s", [0.0, -1.0, math.inf, math.nan])
def test_log_gamma_rejects_bad_argument(s):
    with pytest.raises(DomainError):
        log_gamma(s)


@pytest.mark.parametrize("x", [0.1, 1.0, 2.5, 10.0, 40.0])
def test_p_of_shape_one_is_exponential_cdf(x):
    assert reg_gamma_p(1.0, x) == pytest.approx(-math.expm1(-x), abs=1e-12)


def test_p_at_zero_cutoff():
    assert reg_gamma_p(3.0, 0.0) == 0.0
    assert reg_gamma_q(3.0, 0.0) == 1.0
    assert log_reg_gamma_p(3.0, 0.0) == -math.inf
    assert log_reg_gamma_q(3.0, 0.0) == 0.0


@pytest.mark.parametrize("s, x", [
    (0.5, 0.2), (0.5, 3.0), (2.0, 1.0), (2.0, 8.0), (100.0, 80.0), (100.0, 120.0),
    (1e4, 9.9e3), (1e4, 1.01e4), (1e6, 1e6), (1e5, 100380.295), (1e6, 1e6 - 3e3), (1e6, 1e6 + 300.0),
])
def test_p_plus_q_is_one_and_matches_scipy(s, x):
    p = reg_gamma_p(s, x)
    q = reg_gamma_q(s, x)
    assert p + q == pytest.approx(1.0, abs=1e-12)
    assert p == pytest.approx(special.gammainc(s, x), abs=1e-12)
    assert q == pytest.approx(special.gammaincc(s, x), abs=1e-12)


def test_p_matches_direct_quadrature_of_integrand():
    # P(100, 100) = int_0^100 t^99 e^-t dt / Gamma(100)
    integrand = lambda t: math.exp(99.0 * math.log(t) - t - log_gamma(100.0)) if t > 0 else 0.0
    expected, _ = integrate.quad(integrand, 0.0, 100.0, epsabs=1e-12, epsrel=1e-10, limit=200)
    assert reg_gamma_p(100.0, 100.0) == pytest.approx(expected, abs=1e-9)


def test_p_is_monotone_in_cutoff(rng):
    s = 37.5
    xs = np.sort(rng.uniform(0.0, 120.0, size=100))
    values = [reg_gamma_p(s, float(x)) for x in xs]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_random_pairs_agree_with_scipy(rng):
    shapes = rng.uniform(0.05, 500.0, size=100)
    cutoffs = shapes * rng.uniform(0.2, 2.0, size=100)
    for s, x in zip(shapes, cutoffs):
        assert reg_gamma_p(float(s), float(x)) == pytest.approx(special.gammainc(s, x), abs=1e-12)


def test_log_p_far_in_the_left_tail_stays_finite():
    # P(1e4, 5e3) underflows a double, its log does not
    log_p = log_reg_gamma_p(1e4, 5e3)
    assert math.isfinite(log_p)
    assert log_p < -700.0
    assert log_reg_gamma_p(1e4, 5.1e3) > log_p


@pytest.mark.parametrize("s", [1e4, 1e5, 1e6])
@pytest.mark.parametrize("k", [-3.0, -1.0, -0.3, 0.3, 1.0, 3.0])
def test_kernel_near_the_mode_at_large_shape(s, k):
    # P(s, x) - P(s + 1, x) = x^s e^-x / Gamma(s + 1)
    x = s + k * math.sqrt(s)
    expected = special.gammainc(s, x) - special.gammainc(s + 1.0, x)
    assert math.exp(log_gamma_kernel(s + 1.0, x)) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("s, x", [(3.0, 2.0), (9.5, 12.0), (10.0, 4.0), (250.0, 260.0)])
def test_kernel_matches_direct_formula_at_moderate_shape(s, x):
    assert log_gamma_kernel(s, x) == pytest.approx(s * math.log(x) - x - log_gamma(s), abs=1e-11)


@pytest.mark.parametrize("s", [1e4, 1e5, 1e6])
def test_log_space_fallbacks_agree_with_scipy_near_the_mode(s):
    below = s - math.sqrt(s)
    above = s + math.sqrt(s)
    series = math.exp(_log_p_series(s, below, 1e-15, 10 ** 6))
    fraction = math.exp(_log_q_continued_fraction(s, above, 1e-15, 10 ** 6))
    assert series == pytest.approx(special.gammainc(s, below), abs=1e-12)
    assert fraction == pytest.approx(special.gammaincc(s, above), abs=1e-12)


def test_log_q_far_in_the_right_tail_stays_finite():
    log_q = log_reg_gamma_q(100.0, 1e4)
    assert math.isfinite(log_q)
    assert log_q == pytest.approx(log_gamma_kernel(100.0, 1e4) - math.log(1e4), rel=1e-3)


def test_domain_errors():
    with pytest.raises(DomainError):
        reg_gamma_p(0.0, 1.0)
    with pytest.raises(DomainError):
        reg_gamma_p(1.0, -0.5)
    with pytest.raises(DomainError):
        reg_gamma_q(-2.0, 1.0)


def test_iteration_budget_exhaustion_raises():
    with pytest.raises(SeriesConvergenceError):
        log_reg_gamma_p(1e4, 5e3, max_iter=1)
    with pytest.raises(SeriesConvergenceError):
        log_reg_gamma_q(100.0, 1e4, max_iter=1)


def test_log_regularized_gamma_accessors():
    pair = LogRegularizedGamma(shape=4.0, cutoff=3.0)
    assert pair.p == pytest.approx(special.gammainc(4.0, 3.0), abs=1e-12)
    assert pair.q == pytest.approx(1.0 - pair.p, abs=1e-12)
    assert math.exp(pair.log_p) == pytest.approx(pair.p, rel=1e-12)
    assert math.exp(pair.log_q) == pytest.approx(pair.q, rel=1e-12)


def test_survival_squared_exponential():
    # Exponential(1): G = 1/2
    gini = integrate_survival_squared(lambda x: math.exp(-x), 0.0, 1.0)
    assert gini == pytest.approx(0.5, abs=1e-9)


@pytest.mark.parametrize("alpha", [1.1, 1.5, 2.0, 3.0])
def test_survival_squared_pareto(alpha):
    survival = lambda x: (1.0 / x) ** alpha if x > 1.0 else 1.0
    gini = integrate_survival_squared(survival, 1.0, alpha / (alpha - 1.0))
    assert gini == pytest.approx(1.0 / (2.0 * alpha - 1.0), abs=1e-6)


def test_survival_squared_point_mass():
    # X = 2 almost surely: survival is zero above the lower bound
    gini = integrate_survival_squared(lambda x: 0.0, 2.0, 2.0)
    assert gini == pytest.approx(0.0, abs=1e-15)


def test_survival_squared_reports_failed_quadrature():
    step = lambda x: 1.0 if int(x * 37.0) % 2 else 0.0
    with pytest.raises(QuadratureError) as info:
        integrate_survival_squared(step, 0.0, 1.0, tol=1e-14, limit=1)
    assert info.value.bracket is not None


def test_survival_squared_rejects_bad_mean():
    with pytest.raises(DomainError):
        integrate_survival_squared(lambda x: 0.0, 1.0, 0.0)
