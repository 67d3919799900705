import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import integrate, stats

from core.errors import InsufficientDataError, UndefinedMeanError
from gini.distributions import (
    Family,
    LomaxSpec,
    ParetoSpec,
    Sample,
    analytic_gini,
    cdf,
    distribution_mean,
    lomax_pdf,
    make_spec,
    open_uniform,
    pareto_pdf,
    quadrature_gini,
    sample,
    sample_lomax,
    sample_pareto,
)
from gini.experiments import derive_stream


def test_pareto_gini_at_alpha_1_1():
    assert analytic_gini(ParetoSpec(alpha=1.1, scale_L=1.0)) == pytest.approx(0.833333333333, abs=1e-10)


def test_lomax_gini_closed_form():
    assert analytic_gini(LomaxSpec(alpha=2.0)) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert analytic_gini(LomaxSpec(alpha=1.1, scale_lambda=5.0)) == pytest.approx(1.1 / 1.2, abs=1e-12)


@pytest.mark.parametrize("alpha", [1.1, 1.5, 2.0, 3.0])
def test_quadrature_matches_pareto_closed_form(alpha):
    spec = ParetoSpec(alpha=alpha, scale_L=1.0)
    assert quadrature_gini(spec) == pytest.approx(1.0 / (2.0 * alpha - 1.0), abs=1e-6)


def test_quadrature_matches_closed_form_for_random_specs(rng):
    for _ in range(20):
        alpha = float(rng.uniform(1.05, 5.0))
        scale = float(rng.uniform(0.1, 10.0))
        family = Family.PARETO_I if rng.uniform() < 0.5 else Family.LOMAX
        spec = make_spec(family, alpha, scale)
        assert quadrature_gini(spec) == pytest.approx(analytic_gini(spec), abs=1e-6)


def test_gini_is_scale_free():
    assert analytic_gini(ParetoSpec(alpha=1.7, scale_L=1.0)) == analytic_gini(ParetoSpec(alpha=1.7, scale_L=250.0))


@pytest.mark.parametrize("spec", [ParetoSpec(alpha=1.0, scale_L=1.0), LomaxSpec(alpha=0.8)])
def test_no_gini_without_finite_mean(spec):
    with pytest.raises(UndefinedMeanError):
        analytic_gini(spec)
    with pytest.raises(UndefinedMeanError):
        distribution_mean(spec)


def test_means():
    assert distribution_mean(ParetoSpec(alpha=1.1, scale_L=1.0)) == pytest.approx(11.0)
    assert distribution_mean(LomaxSpec(alpha=3.0, scale_lambda=2.0)) == pytest.approx(1.0)


@pytest.mark.parametrize("bad", [{"alpha": 0.0, "scale_L": 1.0}, {"alpha": 1.5, "scale_L": -1.0},
                                 {"alpha": float("nan"), "scale_L": 1.0}])
def test_spec_validation(bad):
    with pytest.raises(ValidationError):
        ParetoSpec(**bad)


def test_specs_are_frozen():
    spec = ParetoSpec(alpha=1.5, scale_L=1.0)
    with pytest.raises(ValidationError):
        spec.alpha = 2.0


def test_pdfs_vanish_outside_support():
    assert pareto_pdf(ParetoSpec(alpha=1.5, scale_L=2.0), 1.0) == 0.0
    assert lomax_pdf(LomaxSpec(alpha=1.5), -0.1) == 0.0
    assert pareto_pdf(ParetoSpec(alpha=2.0, scale_L=1.0), 2.0) == pytest.approx(2.0 / 8.0)
    assert pareto_pdf(ParetoSpec(alpha=1.0, scale_L=1.0), 1.0) == 1.0
    assert pareto_pdf(ParetoSpec(alpha=1.1, scale_L=1.0), 2.0) == pytest.approx(0.25665, abs=1e-4)
    assert pareto_pdf(ParetoSpec(alpha=1.1, scale_L=1.0), 2.0) == pytest.approx(1.1 * 2.0 ** -2.1, rel=1e-14)
    assert pareto_pdf(ParetoSpec(alpha=1.0, scale_L=1.0), np.nextafter(1.0, 0.0)) == 0.0


def test_open_uniform_never_hits_the_endpoints(rng):
    u = open_uniform(rng, 100_000)
    assert u.min() > 0.0
    assert u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01


def test_sampling_is_deterministic():
    spec = ParetoSpec(alpha=1.1, scale_L=1.0)
    first = sample(spec, 1000, derive_stream(42, 7)).values
    second = sample(spec, 1000, derive_stream(42, 7)).values
    third = sample(spec, 1000, derive_stream(42, 8)).values
    assert np.array_equal(first, second)
    assert not np.array_equal(first, third)


def test_pareto_sample_respects_scale(rng):
    data = sample_pareto(ParetoSpec(alpha=1.1, scale_L=3.0), 10_000, rng)
    assert len(data) == 10_000
    assert data.values.min() >= 3.0
    assert data.source == "simulated:pareto-I"


def test_lomax_sample_is_nonnegative(rng):
    data = sample_lomax(LomaxSpec(alpha=1.5, scale_lambda=2.0), 10_000, rng)
    assert data.values.min() >= 0.0


@pytest.mark.parametrize("spec", [ParetoSpec(alpha=1.1, scale_L=1.0), ParetoSpec(alpha=3.0, scale_L=0.5),
                                  LomaxSpec(alpha=1.5, scale_lambda=2.0)])
def test_samples_pass_ks_against_analytic_cdf(spec, rng):
    data = sample(spec, 20_000, rng)
    result = stats.kstest(data.values, lambda x: cdf(spec, x))
    assert result.pvalue > 0.001


def pdf_of(spec):
    return (lambda x: pareto_pdf(spec, x)) if isinstance(spec, ParetoSpec) else (lambda x: lomax_pdf(spec, x))


def equiprobable_edges(spec, bins):
    # inverse cdf at k / bins
    q = np.arange(1, bins) / bins
    tail = (1.0 - q) ** (-1.0 / spec.alpha)
    inner = spec.scale_L * tail if isinstance(spec, ParetoSpec) else spec.scale_lambda * (tail - 1.0)
    return np.concatenate([[spec.lower], inner, [np.inf]])


@pytest.mark.parametrize("spec", [ParetoSpec(alpha=1.1, scale_L=1.0), ParetoSpec(alpha=3.0, scale_L=0.5),
                                  LomaxSpec(alpha=1.5, scale_lambda=2.0)])
def test_histogram_of_draws_matches_pdf(spec):
    draws = sample(spec, 100_000, derive_stream(11, 100_000)).values
    edges = equiprobable_edges(spec, 50)
    observed, _ = np.histogram(draws, bins=edges)
    pdf = pdf_of(spec)
    masses = np.array([integrate.quad(pdf, a, b, limit=200)[0] for a, b in zip(edges[:-1], edges[1:])])
    assert masses.sum() == pytest.approx(1.0, abs=1e-7)
    expected = masses / masses.sum() * draws.size
    assert stats.chisquare(observed, expected).pvalue > 0.01


@pytest.mark.slow
@pytest.mark.parametrize("spec", [ParetoSpec(alpha=1.5, scale_L=1.0), ParetoSpec(alpha=2.0, scale_L=3.0),
                                  ParetoSpec(alpha=3.0, scale_L=1.0), LomaxSpec(alpha=2.5, scale_lambda=1.0)])
def test_analytic_gini_matches_brute_force_pairing(spec):
    # G = E|X - X'| / (2 mu) over independent pairs
    rng = derive_stream(12, 10 ** 6)
    first = sample(spec, 10 ** 6, rng).values
    second = sample(spec, 10 ** 6, rng).values
    differences = np.abs(first - second)
    mean = distribution_mean(spec)
    estimate = differences.mean() / (2.0 * mean)
    standard_error = differences.std(ddof=1) / math.sqrt(differences.size) / (2.0 * mean)
    assert abs(estimate - analytic_gini(spec)) < 3.0 * standard_error


def test_sample_rejects_bad_counts(rng):
    with pytest.raises(InsufficientDataError):
        sample(ParetoSpec(alpha=1.5, scale_L=1.0), 0, rng)


def test_sample_values_are_read_only():
    data = Sample(values=[1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        data.values[0] = 5.0


@pytest.mark.parametrize("values", [[], [1.0, -2.0], [1.0, float("inf")]])
def test_sample_rejects_invalid_values(values):
    with pytest.raises(ValidationError):
        Sample(values=values)


def test_sample_accepts_zeros():
    assert len(Sample(values=[0.0, 0.0, 1.0])) == 3
