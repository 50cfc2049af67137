"""Named invariant suites: the identities and inequalities the library must honor.

Each suite runs a randomized (seeded, deterministic) or exhaustive check and
returns the worst residual it saw together with its tolerance.  The CLI
``invariants`` command and the test suite share these implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import criteria, normality, subharmonic
from .expr import (
    Const,
    Exp,
    Log,
    Neg,
    Pow,
    Z,
    differentiate,
    evaluate,
    parse_expr,
    to_source,
)
from .geometry import (
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
    eval_map,
    precompose,
    reciprocal_density,
)


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    worst_residual: float
    tolerance: float
    detail: str = ""


def _result(name, worst, tol, detail=""):
    worst = float(worst)
    return InvariantResult(
        name=name,
        passed=bool(worst <= tol),
        worst_residual=worst,
        tolerance=float(tol),
        detail=detail,
    )


def _normal_catalog():
    return [
        catalog("identity"),
        catalog("scaled", c=3),
        catalog("L"),
        catalog("E_n", n=4),
        catalog("arg_extremal", k=1),
        catalog("shear_koebe", w0=0.5),
    ]


def _full_catalog():
    return _normal_catalog() + [catalog("E"), catalog("E_n", n=16)]


def _disk_points(rng, n, radius=0.9):
    return radius * np.sqrt(rng.random(n)) * np.exp(2j * math.pi * rng.random(n))


# --- expression suites ---------------------------------------------------------

def _random_safe_expr(rng, depth):
    """Random tree whose value and first few derivatives stay tame on |z| <= 0.8."""
    def const():
        return Const(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))

    def safe_denominator():
        c = (1.5 + rng.uniform(0, 1.5)) * np.exp(2j * math.pi * rng.random())
        return Const(complex(c)) - Z

    if depth == 0:
        return Z if rng.random() < 0.5 else const()
    kind = rng.integers(0, 9)
    if kind == 0:
        return _random_safe_expr(rng, depth - 1) + _random_safe_expr(rng, depth - 1)
    if kind == 1:
        return _random_safe_expr(rng, depth - 1) - _random_safe_expr(rng, depth - 1)
    if kind == 2:
        return _random_safe_expr(rng, depth - 1) * _random_safe_expr(rng, depth - 1)
    if kind == 3:
        return Neg(_random_safe_expr(rng, depth - 1))
    if kind == 4:
        return _random_safe_expr(rng, depth - 1) / safe_denominator()
    if kind == 5:
        return Pow(_random_safe_expr(rng, max(depth - 2, 0)), int(rng.integers(-3, 5)))
    if kind == 6:
        offset = Const(complex(2.0 + rng.uniform(0, 1), rng.uniform(-0.5, 0.5)))
        scale = Const(complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)))
        return Log(offset + scale * Z)
    if kind == 7:
        scale = Const(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
        return Exp(scale * Z + const())
    return Z if rng.random() < 0.5 else const()


def derivative_matches_fd(seed: int = 0) -> InvariantResult:
    """Symbolic derivative vs central finite differences with step 1e-6."""
    rng = np.random.default_rng(seed)
    h = 1e-6
    worst = 0.0
    checked = 0
    while checked < 1000:
        e = _random_safe_expr(rng, int(rng.integers(1, 7)))
        z = complex(_disk_points(rng, 1, 0.8)[0])
        try:
            sym = evaluate(differentiate(e), z)
            fd = (evaluate(e, z + h) - evaluate(e, z - h)) / (2 * h)
        except Exception:
            continue
        if not (np.isfinite(sym) and np.isfinite(fd)) or abs(sym) > 1e9:
            continue
        worst = max(worst, abs(sym - fd) / (1.0 + abs(sym)))
        checked += 1
    return _result("derivative_matches_fd", worst, 1e-6)


def parse_print_roundtrip(seed: int = 0) -> InvariantResult:
    """parse -> print -> parse is a fixpoint, and the value is preserved."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst_val = 0.0
    for _ in range(500):
        e = _random_safe_expr(rng, int(rng.integers(0, 7)))
        s1 = to_source(parse_expr(to_source(e)))
        s2 = to_source(parse_expr(s1))
        if s1 != s2:
            failures += 1
        z = complex(_disk_points(rng, 1, 0.8)[0])
        try:
            a = evaluate(e, z)
            b = evaluate(parse_expr(s1), z)
        except Exception:
            continue
        worst_val = max(worst_val, abs(a - b) / (1.0 + abs(a)))
    return _result("parse_print_roundtrip", float(failures) + worst_val, 1e-12)


def eval_pure(seed: int = 0) -> InvariantResult:
    """Identical inputs give bitwise-identical outputs."""
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(50):
        e = _random_safe_expr(rng, 5)
        z = _disk_points(rng, 64, 0.8)
        try:
            a = evaluate(e, z)
            b = evaluate(e, z)
        except Exception:
            continue
        if not np.array_equal(a, b):
            failures += 1
    return _result("eval_pure", float(failures), 0.0)


# --- geometry suites -------------------------------------------------------------

def chordal_metric_axioms(seed: int = 0) -> InvariantResult:
    """Range [0, 1], symmetry, triangle inequality with 1e-12 slack."""
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=10_000) * 3 + 1j * rng.normal(size=10_000) * 3
    a, b, c = pts, np.roll(pts, 1), np.roll(pts, 2)
    ab, ba = chordal(a, b), chordal(b, a)
    ac, cb = chordal(a, c), chordal(c, b)
    worst = max(
        float(np.max(np.abs(ab - ba))),
        float(np.max(ab) - 1.0),
        float(-np.min(ab)),
        float(np.max(ab - (ac + cb))),
    )
    return _result("chordal_metric_axioms", worst, 1e-12)


def hyperbolic_automorphism_invariance(seed: int = 0) -> InvariantResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        s = random_automorphism(rng)
        z, w = _disk_points(rng, 2, 0.95)
        worst = max(worst, abs(hyperbolic(s(z), s(w)) - hyperbolic(z, w)))
    return _result("hyperbolic_automorphism_invariance", worst, 1e-10)


def spherical_length_lower_bound(seed: int = 0) -> InvariantResult:
    """Spherical length of a segment dominates the chordal gap of its endpoints."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        p = complex(rng.normal() * 2, rng.normal() * 2)
        q = complex(rng.normal() * 2, rng.normal() * 2)
        worst = max(worst, chordal(p, q) - spherical_length([p, q]))
    return _result("spherical_length_lower_bound", worst, 1e-10)


def image_circle_fit(seed: int = 0) -> InvariantResult:
    """Closed-form image circle against a 16-point fit."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        s = random_automorphism(rng)
        r = 0.05 + 0.9 * rng.random()
        center, radius = image_circle(s, r)
        pts = s(r * np.exp(2j * math.pi * np.arange(16) / 16))
        worst = max(worst, float(np.max(np.abs(np.abs(pts - center) - radius))))
    return _result("image_circle_fit", worst, 1e-10)


def geodesic_additivity(seed: int = 0) -> InvariantResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        z, w = (complex(v) for v in _disk_points(rng, 2, 0.9))
        t = rng.random()
        g = geodesic_point(z, w, t)
        total = hyperbolic(z, w)
        worst = max(
            worst,
            abs(hyperbolic(z, g) + hyperbolic(g, w) - total),
            abs(hyperbolic(z, g) - t * total),
        )
    return _result("geodesic_additivity", worst, 1e-10)


# --- harmonic suites -------------------------------------------------------------

def analytic_reduction(seed: int = 0) -> InvariantResult:
    """For g = 0 the density is the spherical-derivative expression."""
    rng = np.random.default_rng(seed)
    maps = [
        catalog("identity"),
        catalog("scaled", c=2.5),
        HarmonicMap("sq", parse_expr("z^2"), Const(0.0)),
        HarmonicMap("expm", parse_expr("exp(z)"), Const(0.0)),
    ]
    worst = 0.0
    for f in maps:
        for z in _disk_points(rng, 200, 0.9):
            z = complex(z)
            hv = evaluate(f.h, z)
            hp = evaluate(f.hp, z)
            fsharp = abs(hp) / (1.0 + abs(hv) ** 2)
            direct = density(f, z)
            worst = max(worst, abs(direct - (1.0 - abs(z) ** 2) * fsharp))
    return _result("analytic_reduction", worst, 1e-12)


def reciprocal_density_identity(seed: int = 0) -> InvariantResult:
    """density(f, z) equals the density of 1/f computed through Wirtinger calculus."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for f in _full_catalog():
        for z in _disk_points(rng, 200, 0.95):
            z = complex(z)
            try:
                fv = eval_map(f, z)
            except Exception:
                continue
            if not 1e-6 <= abs(fv) <= 1e6:
                continue
            d = density(f, z)
            rd = reciprocal_density(f, z)
            worst = max(worst, abs(d - rd) / max(d, 1e-300))
    return _result("reciprocal_density_identity", worst, 1e-10)


def automorphism_invariance(seed: int = 0, pairs: int = 10_000) -> InvariantResult:
    """density(f o sigma, z) = density(f, sigma(z)), sigma a disk automorphism."""
    rng = np.random.default_rng(seed)
    maps = _full_catalog()
    per_map = max(pairs // len(maps), 1)
    n_sigma = 20
    worst = 0.0
    for f in maps:
        for _ in range(n_sigma):
            sigma = random_automorphism(rng)
            comp = precompose(f, sigma)
            zs = _disk_points(rng, max(per_map // n_sigma, 1), 0.9)
            from .harmonic import density_grid

            lhs, ok1 = density_grid(comp, zs)
            rhs, ok2 = density_grid(f, sigma(zs))
            ok = ok1 & ok2
            if np.any(ok):
                rel = np.abs(lhs[ok] - rhs[ok]) / np.maximum(rhs[ok], 1e-300)
                worst = max(worst, float(np.max(rel)))
    return _result("automorphism_invariance", worst, 1e-10)


def schwarz_pick_contraction(seed: int = 0) -> InvariantResult:
    """density(f o phi, z) <= density(f, phi(z)) for analytic self-maps phi."""
    rng = np.random.default_rng(seed)
    phis = [parse_expr("z/2 + 0.25"), parse_expr("(z^2+z)/4 + 0.125")]
    worst = 0.0
    for f in _full_catalog():
        for phi in phis:
            comp = precompose(f, phi)
            for z in _disk_points(rng, 100, 0.95):
                z = complex(z)
                try:
                    lhs = density(comp, z)
                    rhs = density(f, complex(evaluate(phi, z)))
                except Exception:
                    continue
                worst = max(worst, lhs - rhs)
    return _result("schwarz_pick_contraction", worst, 1e-12)


def affine_closure(seed: int = 0) -> InvariantResult:
    """eval(affine(f), z) = a f(z) + b conj(f(z)) pointwise."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for f in _normal_catalog():
        for _ in range(20):
            a = complex(rng.normal(), rng.normal())
            b = complex(rng.normal(), rng.normal())
            if abs(abs(a) - abs(b)) <= 1e-6:
                continue
            co = AffineCoefficients(a, b)
            g = affine_transform(f, co)
            for z in _disk_points(rng, 25, 0.9):
                z = complex(z)
                fv = eval_map(f, z)
                lhs = eval_map(g, z)
                rhs = a * fv + b * fv.conjugate()
                worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
    return _result("affine_closure", worst, 1e-12)


# --- normality suites -------------------------------------------------------------

def norm_monotone_levels(seed: int = 0) -> InvariantResult:
    """Estimates never decrease when four levels are added."""
    worst = -math.inf
    for f in [catalog("identity"), catalog("L"), catalog("E_n", n=4)]:
        lo = normality.estimate_norm(f, normality.GridConfig(levels=20)).value
        hi = normality.estimate_norm(f, normality.GridConfig(levels=24)).value
        worst = max(worst, lo - hi)
    return _result("norm_monotone_levels", worst, 1e-12)


def pair_ratio_bound(seed: int = 0) -> InvariantResult:
    """Sampled chordal/hyperbolic ratios never beat a converged estimate."""
    worst = -math.inf
    for f in [catalog("identity"), catalog("L"), catalog("scaled", c=3)]:
        est = normality.estimate_norm(f)
        if est.status != normality.STATUS_CONVERGED:
            continue
        ratio = normality.pair_ratio_sup(f, 20_000, seed)
        worst = max(worst, ratio - est.value)
    return _result("pair_ratio_bound", worst, 1e-6)


def norm_automorphism_invariance(seed: int = 0) -> InvariantResult:
    """Norm estimates agree within 1% after precomposition with automorphisms."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    cfg = normality.GridConfig(levels=28, refine_iters=20)
    for f in [catalog("identity"), catalog("L"), catalog("E_n", n=4)]:
        base = normality.estimate_norm(f, cfg).value
        for _ in range(3):
            sigma = random_automorphism(rng, max_modulus=0.7)
            comp = normality.estimate_norm(precompose(f, sigma), cfg).value
            worst = max(worst, abs(comp - base) / base)
    return _result("norm_automorphism_invariance", worst, 0.01)


# --- criteria suites -------------------------------------------------------------

def quadrature_doubling(seed: int = 0) -> InvariantResult:
    """Circle averages are stable under doubling the node count.

    Radii avoid r = |xi|: there the image circle passes through the origin,
    where |g'| of the catalog maps can have an absolute-value kink that
    degrades the trapezoid rule's spectral accuracy.
    """
    worst = 0.0
    for f in [catalog("scaled", c=2), catalog("L"), catalog("E"), catalog("shear_koebe", w0=0.5)]:
        for xi in (0.0, 0.5, 0.5j):
            sigma = DiskAutomorphism.koebe(xi)
            for r in (0.3, 0.55, 0.75, 0.9):
                a1 = criteria.circle_average(f, sigma, r, 4096)
                a2 = criteria.circle_average(f, sigma, r, 8192)
                worst = max(worst, abs(a2 - a1))
    return _result("quadrature_doubling", worst, 1e-8)


def integral_rotation_invariance(seed: int = 0) -> InvariantResult:
    """Pre-rotating the automorphism leaves the boundary region, so the average."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for f in [catalog("L"), catalog("E"), catalog("scaled", c=2)]:
        for _ in range(5):
            xi = complex(_disk_points(rng, 1, 0.8)[0])
            alpha = 2.0 * math.pi * rng.random()
            base = DiskAutomorphism.koebe(xi)
            # sigma(e^{i alpha} z) in the stored (a, theta) convention
            rot = DiskAutomorphism(
                base.a * complex(math.cos(-alpha), math.sin(-alpha)),
                base.theta + alpha,
            )
            for r in (0.3, 0.7):
                worst = max(
                    worst,
                    abs(
                        criteria.circle_average(f, base, r, 2048)
                        - criteria.circle_average(f, rot, r, 2048)
                    ),
                )
    return _result("integral_rotation_invariance", worst, 1e-10)


def sheil_small_monotone(seed: int = 0) -> InvariantResult:
    """Strictly increasing in t and bounded by 1/(2 alpha)."""
    worst = 0.0
    for alpha in (0.5, 1.0, 3.0):
        ts = np.linspace(0.0, 0.999, 400)
        vals = np.array([criteria.sheil_small_lower(alpha, float(t)) for t in ts])
        worst = max(worst, float(np.max(vals[:-1] - vals[1:])))
        worst = max(worst, float(np.max(vals)) - 1.0 / (2.0 * alpha))
    return _result("sheil_small_monotone", worst, 0.0)


# --- subharmonic suites -------------------------------------------------------------

def flux_area_consistency(seed: int = 0) -> InvariantResult:
    """For analytic nonvanishing f, the flux mass matches the area integral of
    |f'|^2/|f| to 1% at 512 boundary nodes."""
    maps = [
        HarmonicMap("expz", parse_expr("exp(z)"), Const(0.0)),
        HarmonicMap("poly", parse_expr("z^2 + 2"), Const(0.0)),
    ]
    worst = 0.0
    for f in maps:
        for t in (0.3, 0.6, 0.9):
            flux = subharmonic.riesz_mass(f, t, 512)
            # polar-grid area quadrature of the Laplacian of |f|
            nr, na = 400, 512
            rr = t * (np.arange(nr) + 0.5) / nr
            th = 2.0 * math.pi * np.arange(na) / na
            zz = rr[:, None] * np.exp(1j * th[None, :])
            hv = evaluate(f.h, zz)
            hp = evaluate(f.hp, zz)
            integrand = np.abs(hp) ** 2 / np.abs(hv)
            area = float(np.sum(integrand * rr[:, None]) * (t / nr) * (2 * math.pi / na))
            worst = max(worst, abs(flux - area) / max(area, 1e-300))
    return _result("flux_area_consistency", worst, 0.01)


def green_bound(seed: int = 0) -> InvariantResult:
    """mu(B(0, t)) never exceeds the circle integral of |h'| + |g'|."""
    maps = [
        catalog("identity"),
        catalog("scaled", c=2),
        catalog("shear_koebe", w0=0.5),
        HarmonicMap("sq", parse_expr("z^2"), Const(0.0)),
        HarmonicMap("expz", parse_expr("exp(z)"), Const(0.0)),
    ]
    worst = -math.inf
    equality_gap = math.inf
    n = 512
    th = 2.0 * math.pi * np.arange(n) / n
    for f in maps:
        for t in (0.25, 0.5, 0.75):
            mu = subharmonic.riesz_mass(f, t, n)
            z = t * np.exp(1j * th)
            lam = np.abs(evaluate(f.hp, z)) + np.abs(evaluate(f.gp, z))
            lam_int = float(np.sum(lam)) * (2.0 * math.pi / n) * t
            worst = max(worst, mu - lam_int)
            if f.name == "identity":
                equality_gap = min(equality_gap, abs(mu - lam_int))
    detail = f"identity equality gap {equality_gap:.2e}"
    return _result("green_bound", worst, 1e-8, detail)


def mu_n_monotone(seed: int = 0) -> InvariantResult:
    """Riesz mass and counting function are nondecreasing in the radius."""
    maps = [
        catalog("identity"),
        catalog("shear_koebe", w0=0.5),
        HarmonicMap("sq", parse_expr("z^2"), Const(0.0)),
    ]
    worst = -math.inf
    ts = np.linspace(0.1, 0.9, 9)
    for f in maps:
        mus = [subharmonic.riesz_mass(f, float(t), 256) for t in ts]
        ns = [subharmonic.counting_function(f, float(t), 64, 256) for t in ts]
        worst = max(worst, max(a - b for a, b in zip(mus, mus[1:])))
        worst = max(worst, max(a - b for a, b in zip(ns, ns[1:])))
    return _result("mu_n_monotone", worst, 1e-8)


def fitted_c_monotone(seed: int = 0) -> InvariantResult:
    """The fitted inequality constant does not increase with delta."""
    f = HarmonicMap("sq", parse_expr("z^2"), Const(0.0))
    radii = [0.2, 0.4, 0.6]
    cs = [
        subharmonic.ks_inequality_fit(f, d, radii, n=256, steps=64).fitted_c
        for d in (0.3, 0.5, 0.7)
    ]
    worst = max(b - a for a, b in zip(cs, cs[1:]))
    return _result("fitted_c_monotone", worst, 1e-12)


SUITES = {
    fn.__name__.replace("reciprocal_density_identity", "reciprocal_density"): fn
    for fn in (
        derivative_matches_fd,
        parse_print_roundtrip,
        eval_pure,
        chordal_metric_axioms,
        hyperbolic_automorphism_invariance,
        spherical_length_lower_bound,
        image_circle_fit,
        geodesic_additivity,
        analytic_reduction,
        reciprocal_density_identity,
        automorphism_invariance,
        schwarz_pick_contraction,
        affine_closure,
        norm_monotone_levels,
        pair_ratio_bound,
        norm_automorphism_invariance,
        quadrature_doubling,
        integral_rotation_invariance,
        sheil_small_monotone,
        flux_area_consistency,
        green_bound,
        mu_n_monotone,
        fitted_c_monotone,
    )
}


def run_invariant_suite(names=None, seed: int = 0) -> list:
    """Run the named suites (all when empty); raises KeyError on unknown names."""
    if not names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown invariant suite(s): {', '.join(unknown)}")
    return [SUITES[n](seed) for n in names]
