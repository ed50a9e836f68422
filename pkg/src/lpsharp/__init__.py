"""Numerical toolkit for sharpened triangle inequalities for sums of N functions in L^p."""

from .exponents import alpha_coeff, nec_bound, r_limit, r_main, r_tilde
from .inequalities import (
    DEFAULT_TOL,
    Direction,
    InequalityReport,
    baseline_report,
    clarkson_residual,
    corollary_report,
    equivalence_nf5_nf5B,
    improved_triangle_report,
    main_report,
    p2_identity_residual,
    pair_bounds_report,
    pre_scalar,
    replicated_bound,
    scalar_final,
    scalar_nf5,
    scalar_nf5B,
    tri3_limit,
)
from .measure import (
    DomainError,
    FunctionFamily,
    MeasureSpace,
    load_scenario,
    lp_mass,
    lp_norm,
    normalize_family,
    parse_scenario,
)
from .overlap import gamma_p, gamma_tilde_p, pairwise_product_mean
from .search import SearchResult, fuzz_main, max_r_scalar, max_r_trial
from .trial import K_value, TrialConfig, make_trial, taylor_coeffs, trial_closed_forms

__version__ = "0.1.0"
