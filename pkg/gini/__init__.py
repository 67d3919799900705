"""
Fat-Tail Gini Toolkit: __init__.py
Description: Direct and tail-exponent (ML) Gini estimation for fat-tailed data

Library surface re-exported for convenience:

    from gini import ParetoSpec, sample_pareto, gini_ordered, ml_alpha, derived_gini
"""

from .numerics import (
    LogRegularizedGamma,
    integrate_survival_squared,
    log_gamma,
    log_gamma_kernel,
    log_reg_gamma_p,
    log_reg_gamma_q,
    reg_gamma_p,
    reg_gamma_q,
)
from .distributions import (
    Family,
    LomaxSpec,
    ParetoSpec,
    Sample,
    analytic_gini,
    distribution_mean,
    make_spec,
    pareto_pdf,
    quadrature_gini,
    sample,
    sample_lomax,
    sample_pareto,
)
from .direct_estimation import (
    GiniMethod,
    GiniResult,
    Normalization,
    UnionGiniResult,
    direct_gini,
    gini_of_union,
    gini_ordered,
    gini_pairwise,
)
from .tail_ml import (
    DerivedGiniDistribution,
    MomentSeries,
    TailEstimate,
    acceptance_probability,
    cdf_alpha_hat,
    derived_gini,
    fit_tail,
    gini_moment,
    gini_std,
    ml_alpha,
    pdf_alpha_debiased,
    pdf_alpha_hat,
    pdf_alpha_truncated,
    pdf_derived_gini,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    derive_stream,
    emit_histogram,
    run_aggregation_experiment,
    run_convergence_study,
    run_std_decline_study,
    run_table_experiment,
)

__version__ = "1.0.0"
