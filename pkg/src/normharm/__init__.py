"""Numerical analysis of normal harmonic mappings on the unit disk.

A harmonic mapping f = h + conj(g) (h, g analytic) is normal when the
chordal/hyperbolic Lipschitz quotient sup chi(f(z), f(w)) / rho(z, w) is
finite, equivalently when the pointwise density

    (1 - |z|^2) (|h'(z)| + |g'(z)|) / (1 + |f(z)|^2)

is bounded over the disk.  The package estimates that supremum, classifies
maps with witnesses, checks the classical sufficiency criteria, and measures
the subharmonic Riesz-mass quantities behind the integral criterion.
"""

from .expr import (
    BranchCutError,
    EvalError,
    Expr,
    ExprError,
    ParseError,
    PoleError,
    differentiate,
    evaluate,
    evaluate_masked,
    parse_expr,
    substitute,
    to_source,
)
from .geometry import (
    INF,
    DiskAutomorphism,
    chordal,
    geodesic_point,
    hyperbolic,
    image_circle,
    random_automorphism,
    spherical_length,
)
from .harmonic import (
    AffineCoefficients,
    HarmonicMap,
    affine_transform,
    catalog,
    density,
    dilatation,
    eval_map,
    jacobian,
    koebe_transform,
    load_map_file,
    map_from_dict,
    precompose,
    reciprocal_density,
    resolve_map,
)
from .normality import (
    GridConfig,
    NormEstimate,
    Verdict,
    WitnessPair,
    classify,
    density_profile,
    equicontinuity_probe,
    estimate_norm,
    pair_ratio_sup,
    separation_witness,
)
from .criteria import (
    IntegralConditionReport,
    bounded_bound_check,
    circle_average,
    growth_ratio_check,
    integral_condition_check,
    omega_sup,
    sheil_small_lower,
    starlike_check,
    univalent_criterion_report,
)
from .subharmonic import (
    SubharmonicProfile,
    circle_max,
    counting_function,
    ks_inequality_fit,
    riesz_mass,
    subharmonic_profile,
)
from .invariants import run_invariant_suite

__version__ = "0.1.0"
