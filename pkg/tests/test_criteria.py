import math

import numpy as np
import pytest

from normharm.expr import parse_expr
from normharm.geometry import DiskAutomorphism
from normharm.harmonic import catalog
from normharm.normality import VERDICT_NORMAL, GridConfig, classify
from normharm.criteria import (
    bounded_bound_check,
    circle_average,
    growth_ratio_check,
    integral_condition_check,
    omega_sup,
    sheil_small_lower,
    starlike_check,
    univalent_criterion_report,
)

FAST = GridConfig(levels=24, base_angles=32, max_angles=512, refine_iters=10)


class TestOmegaSup:
    def test_analytic_map(self):
        assert omega_sup(catalog("scaled", c=2), FAST).value == 0.0

    def test_half_plane_map(self):
        cfg = GridConfig(levels=40)
        om = omega_sup(catalog("L"), cfg)
        # omega = -z: the sup is 1, approached but never attained
        assert om.value >= 1 - 2.0 ** (-40)
        assert om.value <= 1.0
        assert om.boundary_suspect

    def test_constant_dilatation(self):
        om = omega_sup(catalog("shear_koebe", w0=0.5), FAST)
        assert om.value == pytest.approx(0.5, abs=1e-9)
        assert not om.boundary_suspect


class TestStarlike:
    def test_linear(self):
        res = starlike_check(parse_expr("z"), FAST)
        assert res.passed
        assert res.min_margin == pytest.approx(1.0, abs=1e-12)

    def test_koebe_function(self):
        res = starlike_check(parse_expr("z/(1-z)^2"), GridConfig())
        assert res.passed
        assert 0 < res.min_margin < 0.05

    def test_non_starlike_polynomial(self):
        res = starlike_check(parse_expr("z+2*z^2"), FAST)
        assert not res.passed
        assert res.min_margin < 0

    def test_origin_flag(self):
        res = starlike_check(parse_expr("z+1"), FAST)
        assert not res.origin_normalized


class TestGrowthRatio:
    def test_analytic_map(self):
        res = growth_ratio_check(catalog("scaled", c=2), FAST)
        assert res.passed
        assert res.max_ratio == 0.0

    def test_constant_shear_half(self):
        res = growth_ratio_check(catalog("shear_koebe", w0=0.5), FAST)
        assert res.passed
        assert res.max_ratio == pytest.approx(0.5, abs=1e-12)

    def test_constant_shear_imaginary(self):
        res = growth_ratio_check(catalog("shear_koebe", w0=0.3j), FAST)
        assert res.passed
        assert res.max_ratio == pytest.approx(0.3, abs=1e-9)


class TestSheilSmall:
    def test_zero_at_origin(self):
        assert sheil_small_lower(1.0, 0.0) == 0.0

    def test_third(self):
        assert sheil_small_lower(1.0, 1 / 3) == pytest.approx(0.25, rel=1e-12)

    def test_monotone_bounded(self):
        for alpha in (0.5, 1.0, 3.0):
            ts = np.linspace(0, 0.999, 300)
            vals = [sheil_small_lower(alpha, float(t)) for t in ts]
            assert all(b > a for a, b in zip(vals, vals[1:]))
            assert max(vals) <= 1 / (2 * alpha)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            sheil_small_lower(0.0, 0.5)


class TestUnivalentCriterion:
    def test_shear_satisfies_bound(self):
        rep = univalent_criterion_report(catalog("shear_koebe", w0=0.5), 3.0, FAST)
        assert rep.applicable
        assert rep.passed
        assert rep.worst_margin > 0
        assert rep.probes
        assert all(abs(z) >= 0.5 for z, _, _ in rep.probes)

    def test_log_tail_not_applicable(self):
        rep = univalent_criterion_report(catalog("E"), 3.0, FAST)
        assert not rep.applicable
        assert rep.omega_sup >= 2.0
        assert rep.passed is None
        assert "does not apply" in rep.note

    def test_identity_trivially_passes(self):
        rep = univalent_criterion_report(catalog("identity"), 3.0, FAST)
        assert rep.applicable
        assert rep.omega_sup == 0.0
        assert rep.passed
        assert rep.jacobian_signs[1] == 0  # never sense-reversing


class TestBoundedBound:
    def test_zero_map(self):
        res = bounded_bound_check(catalog("scaled", c=0), 1.0, FAST)
        assert res.passed
        assert res.estimate == 0.0
        assert res.precondition_ok

    def test_sharpness_witness(self):
        res = bounded_bound_check(catalog("arg_extremal", k=1), 1.0, GridConfig())
        assert res.precondition_ok
        assert res.passed
        assert res.estimate == pytest.approx(res.bound, abs=1e-3)
        assert res.bound == pytest.approx(4 / math.pi, rel=1e-15)

    def test_small_scaled(self):
        res = bounded_bound_check(catalog("scaled", c=0.5), 0.5, FAST)
        assert res.passed
        assert res.estimate == pytest.approx(0.5, abs=1e-6)
        assert res.bound == pytest.approx(2 / math.pi, rel=1e-15)

    def test_precondition_violation_reported(self):
        res = bounded_bound_check(catalog("scaled", c=3), 1.0, FAST)
        assert not res.precondition_ok


class TestIntegralCondition:
    def test_small_scaled_passes_everywhere(self):
        rep = integral_condition_check(catalog("scaled", c=0.5), 0.5)
        assert rep.passed
        assert rep.worst_margin > 0
        assert all(s.average == pytest.approx(0.5, abs=1e-12) for s in rep.samples)

    def test_scaled_two_fails_past_quarter(self):
        rep = integral_condition_check(catalog("scaled", c=2), 0.5)
        assert not rep.passed
        for s in rep.samples:
            # closed form: margin = r^{-1/2} - 2, zero exactly at r = 1/4
            assert s.margin == pytest.approx(s.r ** -0.5 - 2.0, abs=1e-9)
            if s.r > 0.25:
                assert s.margin < 0
            else:
                assert s.margin >= -1e-9

    def test_log_tail_violation_near_boundary(self):
        rep = integral_condition_check(
            catalog("E"), 0.5, xi_samples=[0], r_samples=[0.99], quad_points=2048
        )
        assert not rep.passed
        assert rep.samples[0].average > 40

    def test_report_schema(self):
        rep = integral_condition_check(catalog("scaled", c=0.5), 0.5)
        doc = rep.to_json_dict()
        assert set(doc) == {"alpha", "samples", "worst_margin", "passed"}
        assert set(doc["samples"][0]) == {
            "xi_re", "xi_im", "r", "average", "bound", "margin",
        }

    def test_consistency_with_classifier(self):
        # a map that clears the condition on a dense sample and omits a value
        # must not classify as NotNormal
        f = catalog("scaled", c=1)
        rep = integral_condition_check(
            f, 0.5, r_samples=[0.1, 0.3, 0.5, 0.7, 0.9, 0.97]
        )
        assert rep.passed
        assert classify(f, FAST).kind == VERDICT_NORMAL

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            integral_condition_check(catalog("identity"), 1.5)
        with pytest.raises(ValueError):
            integral_condition_check(catalog("identity"), 0.5, quad_points=32)


class TestCircleAverage:
    def test_rotation_of_parametrization_is_immaterial(self):
        f = catalog("E")
        xi = 0.4 + 0.2j
        base = DiskAutomorphism.koebe(xi)
        for alpha in (0.7, 2.9):
            rot = DiskAutomorphism(
                base.a * complex(math.cos(-alpha), math.sin(-alpha)),
                base.theta + alpha,
            )
            for r in (0.3, 0.7):
                assert circle_average(f, rot, r, 1024) == pytest.approx(
                    circle_average(f, base, r, 1024), abs=1e-10
                )

    def test_doubling_stability(self):
        f = catalog("L")
        s = DiskAutomorphism.koebe(0.5)
        a1 = circle_average(f, s, 0.55, 4096)
        a2 = circle_average(f, s, 0.55, 8192)
        assert abs(a1 - a2) < 1e-8
