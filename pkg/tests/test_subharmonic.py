import math

import numpy as np
import pytest

from normharm.expr import EvalError, evaluate, parse_expr
from normharm.harmonic import HarmonicMap, catalog
from normharm.subharmonic import (
    circle_max,
    counting_function,
    ks_inequality_fit,
    riesz_mass,
    subharmonic_profile,
)


@pytest.fixture(scope="module")
def square_map():
    return HarmonicMap("sq", parse_expr("z^2"), parse_expr("0"))


@pytest.fixture(scope="module")
def identity():
    return catalog("identity")


class TestCircleMax:
    def test_identity(self, identity):
        assert circle_max(identity, 0.5) == pytest.approx(0.5, rel=1e-12)

    def test_square(self, square_map):
        assert circle_max(square_map, 0.5) == pytest.approx(0.25, rel=1e-12)

    def test_monotone_in_radius(self):
        for name in ("L", "E", "shear_koebe"):
            f = catalog(name, w0=0.5) if name == "shear_koebe" else catalog(name)
            vals = [circle_max(f, r, 256) for r in (0.2, 0.4, 0.6, 0.8)]
            assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_off_center_peak(self):
        f = HarmonicMap("shift", parse_expr("z - (0.3+0.4*i)"), parse_expr("0"))
        # max of |z - c| on |z| = r sits at z = -r c/|c|
        assert circle_max(f, 0.5) == pytest.approx(1.0, rel=1e-10)

    def test_rejects_bad_input(self, identity):
        with pytest.raises(ValueError):
            circle_max(identity, 1.0)
        with pytest.raises(ValueError):
            circle_max(identity, 0.5, n=16)


class TestRieszMass:
    def test_identity_cone(self, identity):
        # Laplacian of |z| integrates to 2 pi t over B(0, t)
        assert riesz_mass(identity, 0.5) == pytest.approx(math.pi, abs=1e-8)
        assert riesz_mass(identity, 0.25) == pytest.approx(math.pi / 2, abs=1e-8)

    def test_square(self, square_map):
        # Laplacian of |z^2| is constant 4
        assert riesz_mass(square_map, 0.5) == pytest.approx(math.pi, abs=1e-6)

    def test_green_bound(self, square_map):
        n = 512
        th = 2 * math.pi * np.arange(n) / n
        for f in (catalog("identity"), square_map, catalog("shear_koebe", w0=0.5)):
            for t in (0.25, 0.5, 0.75):
                z = t * np.exp(1j * th)
                lam = np.abs(evaluate(f.hp, z)) + np.abs(evaluate(f.gp, z))
                lam_integral = float(np.sum(lam)) * (2 * math.pi / n) * t
                assert riesz_mass(f, t, n) <= lam_integral + 1e-8

    def test_green_equality_for_identity(self, identity):
        t = 0.4
        assert riesz_mass(identity, t) == pytest.approx(2 * math.pi * t, abs=1e-10)

    def test_zero_on_circle_is_error(self):
        f = HarmonicMap("ring", parse_expr("z - 0.5"), parse_expr("0"))
        with pytest.raises(EvalError):
            riesz_mass(f, 0.5)

    def test_monotone(self, square_map):
        vals = [riesz_mass(square_map, t, 256) for t in np.linspace(0.1, 0.9, 9)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


class TestCountingFunction:
    def test_identity(self, identity):
        assert counting_function(identity, 0.5, steps=256, n=512) == pytest.approx(
            math.pi, abs=1e-4
        )

    def test_square(self, square_map):
        assert counting_function(square_map, 0.5, steps=256, n=512) == pytest.approx(
            math.pi / 2, abs=1e-4
        )

    def test_vanishes_at_small_radius(self, identity):
        small = counting_function(identity, 1e-3, steps=64, n=128)
        assert 0 < small < 1e-2

    def test_zero_inside_probe_region_is_error(self, square_map):
        # |z^2| drops below the zero tolerance on tiny circles
        with pytest.raises(EvalError):
            counting_function(square_map, 1e-3, steps=64, n=128)

    def test_monotone(self, identity):
        vals = [counting_function(identity, r, 64, 256) for r in (0.2, 0.4, 0.6, 0.8)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))


class TestInequalityFit:
    def test_identity(self, identity):
        fit = ks_inequality_fit(identity, 0.5, [0.2, 0.4, 0.6, 0.8])
        assert fit.fitted_c == pytest.approx(1 / math.pi, abs=1e-3)

    def test_square(self, square_map):
        fit = ks_inequality_fit(square_map, 0.5, [0.2, 0.4, 0.6, 0.8])
        assert fit.fitted_c == pytest.approx(2 / math.pi, abs=1e-3)

    def test_constant_map_needs_no_mass(self):
        f = HarmonicMap("one", parse_expr("1"), parse_expr("0"))
        fit = ks_inequality_fit(f, 0.5, [0.2, 0.4])
        assert fit.fitted_c == 0.0

    def test_monotone_in_delta(self, square_map):
        cs = [
            ks_inequality_fit(square_map, d, [0.2, 0.4, 0.6], n=256, steps=64).fitted_c
            for d in (0.3, 0.5, 0.7)
        ]
        assert all(b <= a + 1e-12 for a, b in zip(cs, cs[1:]))

    def test_rejects_deep_product(self, identity):
        with pytest.raises(ValueError):
            ks_inequality_fit(identity, 0.8, [0.7])  # 0.56 >= 1/2


class TestProfile:
    def test_columns_consistent(self, identity):
        prof = subharmonic_profile(identity, [0.2, 0.4, 0.6], delta=0.5)
        assert prof.u0 == 0.0
        assert prof.M_values == pytest.approx([0.2, 0.4, 0.6], rel=1e-9)
        assert prof.mu_values == pytest.approx(
            [2 * math.pi * r for r in (0.2, 0.4, 0.6)], abs=1e-8
        )
        assert prof.N_values == pytest.approx(
            [2 * math.pi * r for r in (0.2, 0.4, 0.6)], abs=1e-3
        )
        assert prof.fitted_c == pytest.approx(1 / math.pi, abs=1e-3)
