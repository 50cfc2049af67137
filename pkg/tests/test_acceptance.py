"""Acceptance gate: every criterion at its stated tolerance, one line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
PASS lines.
"""

import math

import numpy as np
import pytest

from normharm.cli import main as cli_main
from normharm.expr import parse_expr
from normharm.geometry import random_automorphism
from normharm.harmonic import (
    AffineCoefficients,
    HarmonicMap,
    affine_transform,
    catalog,
    density,
    density_grid,
    eval_map,
    map_grid,
    precompose,
    reciprocal_density,
)
from normharm.normality import (
    STATUS_CONVERGED,
    VERDICT_NORMAL,
    VERDICT_NOT_NORMAL,
    GridConfig,
    classify,
    density_profile,
    equicontinuity_probe,
    estimate_norm,
    pair_ratio_sup,
    separation_witness,
)
from normharm.criteria import (
    bounded_bound_check,
    growth_ratio_check,
    integral_condition_check,
    starlike_check,
)
from normharm.subharmonic import counting_function, ks_inequality_fit, riesz_mass

FAST = GridConfig(levels=24, base_angles=32, max_angles=512, refine_iters=8)


def _report(num: int, ok: bool, detail: str):
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def norm_estimates():
    return {
        "identity": estimate_norm(catalog("identity")),
        "L": estimate_norm(catalog("L")),
        "E": estimate_norm(catalog("E")),
        "arg": estimate_norm(catalog("arg_extremal", k=1)),
    }


def test_criterion_1_sharp_bounded_bound(norm_estimates):
    est = norm_estimates["arg"]
    gap = abs(est.value - 4 / math.pi)
    check = bounded_bound_check(catalog("arg_extremal", k=1), 1.0, GridConfig())
    slack = check.bound - check.estimate
    ok = (
        gap <= 1e-3
        and est.status == STATUS_CONVERGED
        and check.passed
        and check.precondition_ok
        and abs(slack) <= 1e-3
    )
    _report(1, ok, f"norm estimate 4k/pi gap={gap:.2e}, bound slack={slack:.2e}")


def test_criterion_2_half_plane_map_normal():
    verdict = classify(catalog("L"))
    e32 = estimate_norm(catalog("L"), GridConfig(levels=32))
    e44 = estimate_norm(catalog("L"), GridConfig(levels=44))
    drift = abs(e44.value - e32.value) / e44.value
    ok = verdict.kind == VERDICT_NORMAL and drift <= 0.02
    _report(2, ok, f"verdict={verdict.kind}, K32/K44 drift={drift:.2e}")


def test_criterion_3_log_tail_not_normal():
    verdict = classify(catalog("E"))
    worst = math.inf
    for r in (0.9, 0.99, 0.999):
        d = density_profile(catalog("E"), 0.0, [r])[0][1]
        floor = (1 + r) ** 2 / ((1 - r) * (1 + math.log(1 - r) ** 2))
        worst = min(worst, d / floor - 1.0)
    ok = verdict.kind == VERDICT_NOT_NORMAL and worst >= -1e-9
    _report(3, ok, f"verdict={verdict.kind}, worst density/floor excess={worst:.2e}")


def test_criterion_4_invariance_identities(norm_estimates):
    rng = np.random.default_rng(4)
    maps = [
        catalog("identity"),
        catalog("scaled", c=3),
        catalog("L"),
        catalog("E"),
        catalog("E_n", n=4),
        catalog("E_n", n=16),
        catalog("arg_extremal", k=1),
        catalog("shear_koebe", w0=0.5),
    ]
    # 10^4 (sigma, z) pairs spread across the catalog
    sigmas_per_map, pts_per_sigma = 25, 50
    worst_inv = 0.0
    for f in maps:
        for _ in range(sigmas_per_map):
            sigma = random_automorphism(rng)
            comp = precompose(f, sigma)
            zs = 0.9 * np.sqrt(rng.random(pts_per_sigma)) * np.exp(
                2j * math.pi * rng.random(pts_per_sigma)
            )
            lhs, ok1 = density_grid(comp, zs)
            rhs, ok2 = density_grid(f, sigma(zs))
            good = ok1 & ok2
            if np.any(good):
                rel = np.abs(lhs[good] - rhs[good]) / np.maximum(rhs[good], 1e-300)
                worst_inv = max(worst_inv, float(np.max(rel)))

    worst_pair = -math.inf
    for name in ("identity", "L"):
        est = norm_estimates[name]
        if est.status == STATUS_CONVERGED:
            ratio = pair_ratio_sup(catalog(name), 20_000, seed=4)
            worst_pair = max(worst_pair, ratio - est.value)

    worst_recip = 0.0
    for f in maps:
        for z in 0.95 * np.sqrt(rng.random(150)) * np.exp(2j * math.pi * rng.random(150)):
            z = complex(z)
            try:
                fv = eval_map(f, z)
            except Exception:
                continue
            if not 1e-6 <= abs(fv) <= 1e6:
                continue
            d = density(f, z)
            worst_recip = max(worst_recip, abs(d - reciprocal_density(f, z)) / max(d, 1e-300))

    ok = worst_inv <= 1e-10 and worst_pair <= 1e-6 and worst_recip <= 1e-10
    _report(
        4,
        ok,
        f"automorphism invariance={worst_inv:.2e}, pair-ratio excess={worst_pair:.2e}, "
        f"reciprocal identity={worst_recip:.2e}",
    )


def test_criterion_5_affine_invariance():
    rng = np.random.default_rng(5)
    base_maps = [
        catalog("identity"),
        catalog("scaled", c=3),
        catalog("L"),
        catalog("E_n", n=4),
        catalog("shear_koebe", w0=0.5),
    ]
    base_est = {f.name: estimate_norm(f, FAST).value for f in base_maps}
    n_pairs = 100
    worst_margin = math.inf
    all_normal = True
    for i in range(n_pairs):
        f = base_maps[i % len(base_maps)]
        while True:
            a = complex(rng.normal(), rng.normal())
            b = complex(rng.normal(), rng.normal())
            if abs(abs(a) - abs(b)) > 1e-6:
                break
        g = affine_transform(f, AffineCoefficients(a, b))
        verdict = classify(g, FAST)
        all_normal = all_normal and verdict.kind == VERDICT_NORMAL
        # proof-chain density bound at grid probes
        norm_f = base_est[f.name]
        for k in range(0, 11, 2):
            r = 1 - 2.0 ** (-k)
            zs = r * np.exp(2j * math.pi * np.arange(16) / 16)
            n_af, ok1 = density_grid(g, zs)
            n_f, ok2 = density_grid(f, zs)
            fv, ok3 = map_grid(f, zs)
            good = ok1 & ok2 & ok3
            if not np.any(good):
                continue
            f2 = np.abs(fv[good]) ** 2
            rhs = (
                (abs(a) + abs(b))
                * np.minimum(n_f[good], norm_f * (1 + 1e-9))
                * (1 + f2)
                / (1 + (abs(a) - abs(b)) ** 2 * f2)
            )
            worst_margin = min(worst_margin, float(np.min(rhs * (1 + 1e-6) - n_af[good])))
    ok = all_normal and worst_margin >= 0.0
    _report(
        5,
        ok,
        f"{n_pairs} affine transforms all Normal={all_normal}, "
        f"worst chain-bound margin={worst_margin:.2e}",
    )


def test_criterion_6_family_bounds_grow():
    bounds = []
    all_normal = True
    for n in (2, 4, 8, 16):
        verdict = classify(catalog("E_n", n=n), GridConfig(levels=28))
        all_normal = all_normal and verdict.kind == VERDICT_NORMAL
        bounds.append(verdict.bound if verdict.bound is not None else math.nan)
    increasing = all(b > a for a, b in zip(bounds, bounds[1:]))
    ok = all_normal and increasing
    _report(6, ok, f"bounds={['%.2f' % b for b in bounds]}, strictly increasing={increasing}")


def test_criterion_7_shear_chain():
    ok = True
    details = []
    for w0 in (0.3, 0.5, 0.9):
        f = catalog("shear_koebe", w0=w0)
        st = starlike_check(f.h, FAST)
        gr = growth_ratio_check(f, FAST)
        verdict = classify(f, FAST)
        good = (
            st.passed
            and gr.passed
            and abs(gr.max_ratio - w0) <= 1e-6
            and verdict.kind == VERDICT_NORMAL
        )
        ok = ok and good
        details.append(f"w0={w0}: starlike={st.passed}, ratio={gr.max_ratio:.6f}, {verdict.kind}")
    _report(7, ok, "; ".join(details))


def test_criterion_8_integral_condition():
    pass_small = all(
        integral_condition_check(catalog("scaled", c=c), 0.5).passed
        for c in (0.25, 0.5, 1.0)
    )
    rep2 = integral_condition_check(catalog("scaled", c=2), 0.5)
    threshold_ok = all(
        (s.margin < 0) == (s.r > 0.25) and abs(s.margin - (s.r**-0.5 - 2.0)) <= 1e-9
        for s in rep2.samples
    )
    rep_e = integral_condition_check(
        catalog("E"), 0.5, xi_samples=[0], r_samples=[0.99], quad_points=2048
    )
    e_ok = (not rep_e.passed) and rep_e.samples[0].average > 40
    ok = pass_small and (not rep2.passed) and threshold_ok and e_ok
    _report(
        8,
        ok,
        f"scaled<=1 pass={pass_small}, scaled(2) threshold exact={threshold_ok}, "
        f"E average={rep_e.samples[0].average:.1f}",
    )


def test_criterion_9_subharmonic_oracles():
    ident = catalog("identity")
    sq = HarmonicMap("sq", parse_expr("z^2"), parse_expr("0"))
    errs = []
    for t in (0.25, 0.5):
        errs.append(abs(riesz_mass(ident, t, 512) - 2 * math.pi * t))
        errs.append(abs(riesz_mass(sq, t, 512) - 4 * math.pi * t * t))
    for r in (0.25, 0.5):
        errs.append(abs(counting_function(ident, r, 512, 512) - 2 * math.pi * r))
        errs.append(abs(counting_function(sq, r, 512, 512) - 2 * math.pi * r * r))
    worst = max(errs)

    green_ok = True
    theta = 2 * math.pi * np.arange(512) / 512
    from normharm.expr import evaluate

    for f in (ident, sq, catalog("shear_koebe", w0=0.5)):
        for t in (0.25, 0.5, 0.75):
            z = t * np.exp(1j * theta)
            lam = np.abs(evaluate(f.hp, z)) + np.abs(evaluate(f.gp, z))
            lam_int = float(np.sum(lam)) * (2 * math.pi / 512) * t
            green_ok = green_ok and riesz_mass(f, t, 512) <= lam_int + 1e-8

    fit = ks_inequality_fit(ident, 0.5, [0.2, 0.4, 0.6, 0.8], n=512, steps=512)
    fit_gap = abs(fit.fitted_c - 1 / math.pi)
    ok = worst <= 1e-4 and green_ok and fit_gap <= 1e-3
    _report(
        9,
        ok,
        f"closed-form worst error={worst:.2e}, green bound={green_ok}, "
        f"fit gap={fit_gap:.2e}",
    )


def test_criterion_10_determinism(tmp_path, capsys):
    identical = True
    for command, extra in (
        ("norm", ["--levels", "20"]),
        ("classify", ["--levels", "20"]),
        ("profile", ["--levels", "12", "--angles", "16"]),
    ):
        blobs = []
        for threads in ("1", "3"):
            out = tmp_path / f"{command}-{threads}.out"
            args = [command, "--map", "builtin:L", "--seed", "9", "--out", str(out)]
            args += extra + ["--threads", threads]
            assert cli_main(args) == 0
            blobs.append(out.read_bytes())
        identical = identical and blobs[0] == blobs[1]
    capsys.readouterr()
    _report(10, identical, "JSON/CSV byte-identical across --threads")


def test_qualitative_witnesses():
    w_e = separation_witness(catalog("E"), max_depth=20)
    w_l = separation_witness(catalog("L"), max_depth=20)
    e_ok = w_e is not None and all(q > 1e3 for q in w_e.ratios[-5:])
    l_ok = w_l is None
    m = equicontinuity_probe(catalog("E"), 0.5, 200, seed=11)
    probe_ok = math.isfinite(m)
    ok = e_ok and l_ok and probe_ok
    _report(
        11,
        ok,
        f"E witness tail ratio={w_e.ratios[-1]:.2e} (>1e3), L witness=None={l_ok}, "
        f"equicontinuity modulus={m:.2f} finite",
    )
