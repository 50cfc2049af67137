import pytest

from normharm.invariants import SUITES, run_invariant_suite

FAST_SUITES = [
    "parse_print_roundtrip",
    "eval_pure",
    "chordal_metric_axioms",
    "hyperbolic_automorphism_invariance",
    "image_circle_fit",
    "geodesic_additivity",
    "analytic_reduction",
    "reciprocal_density",
    "schwarz_pick_contraction",
    "affine_closure",
    "sheil_small_monotone",
    "green_bound",
    "fitted_c_monotone",
]


@pytest.mark.parametrize("name", FAST_SUITES)
def test_fast_suite_passes(name):
    res = SUITES[name](seed=0)
    assert res.passed, f"{name}: worst={res.worst_residual} tol={res.tolerance}"


def test_derivative_fd_suite():
    res = SUITES["derivative_matches_fd"](seed=0)
    assert res.passed
    assert res.worst_residual <= 1e-6


def test_automorphism_invariance_suite():
    res = SUITES["automorphism_invariance"](seed=0)
    assert res.passed
    assert res.worst_residual <= 1e-10


def test_run_named_subset():
    results = run_invariant_suite(["eval_pure", "sheil_small_monotone"], seed=1)
    assert [r.name for r in results] == ["eval_pure", "sheil_small_monotone"]
    assert all(r.passed for r in results)


def test_unknown_name_raises():
    with pytest.raises(KeyError):
        run_invariant_suite(["definitely_not_a_suite"])
