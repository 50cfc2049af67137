"""Command-line front end.

Subcommands: eval, norm, classify, profile, invariants, criteria, subharmonic.
Maps come from ``builtin:NAME`` (optionally ``builtin:NAME(arg)``) or a JSON
file {"name":..., "h":..., "g":...} in the expression grammar.

Exit codes: 0 success, 2 precondition or input violations (message in the
JSON "error" field), 1 internal errors.  Same arguments and seed give
byte-identical outputs regardless of --threads.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import traceback

from . import criteria, invariants, normality, subharmonic
from .expr import EvalError, ExprError, ParseError
from .harmonic import (
    eval_map,
    format_complex,
    parse_complex_literal,
    resolve_map,
)


def _fmt17(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".17g")


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out_path):
    _emit(json.dumps(payload) + "\n", out_path)


def _grid_config(args) -> normality.GridConfig:
    kwargs = {}
    if args.levels is not None:
        kwargs["levels"] = args.levels
    if args.angles is not None:
        kwargs["base_angles"] = args.angles
    if args.refine is not None:
        kwargs["refine_iters"] = args.refine
    return normality.GridConfig(**kwargs)


def _add_common(p, grid=True):
    p.add_argument("--map", required=True, help="builtin:NAME or a JSON map file path")
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    if grid:
        p.add_argument("--levels", type=int, default=None, help="annulus levels")
        p.add_argument("--angles", type=int, default=None, help="base angular samples")
        p.add_argument("--refine", type=int, default=None, help="local refinement passes")
        p.add_argument("--threads", type=int, default=1, help="worker threads for the grid scan")
    p.add_argument("--seed", type=int, default=0, help="seed for stochastic operations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normharm",
        description="Normality analysis of planar harmonic mappings on the unit disk.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate f at a point")
    _add_common(p, grid=False)
    p.add_argument("--at", required=True, help='evaluation point, e.g. "0.3+0.4i"')

    p = sub.add_parser("norm", help="estimate the normality norm")
    _add_common(p)

    p = sub.add_parser("classify", help="Normal / NotNormal / Inconclusive verdict")
    _add_common(p)

    p = sub.add_parser("profile", help="density profile CSV over the grid rays")
    _add_common(p)

    p = sub.add_parser("invariants", help="run named invariant suites (all when omitted)")
    p.add_argument("names", nargs="*", help="suite names")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("criteria", help="sufficiency-criteria report")
    _add_common(p)
    p.add_argument("--alpha", type=float, default=0.5, help="integral-condition exponent in (0,1)")
    p.add_argument(
        "--univalent-alpha",
        type=float,
        default=3.0,
        help="coefficient-bound parameter for the univalent criterion (no agreed value; 3 is conventional)",
    )
    p.add_argument("--quad-points", type=int, default=2048)

    p = sub.add_parser("subharmonic", help="r,M,mu,N profile CSV plus inequality fit")
    _add_common(p, grid=False)
    p.add_argument("--delta", type=float, default=0.5, help="inner-radius factor of the fit")
    p.add_argument("--radii", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")

    return parser


def _cmd_eval(args) -> int:
    f = resolve_map(args.map)
    z = parse_complex_literal(args.at)
    if abs(z) >= 1.0:
        raise ValueError("evaluation point must lie inside the unit disk")
    value = eval_map(f, z)
    _emit(format_complex(value) + "\n", args.out)
    return 0


def _norm_payload(est: normality.NormEstimate, levels: int) -> dict:
    return {
        "value": est.value,
        "status": est.status,
        "argmax_re": est.argmax.real,
        "argmax_im": est.argmax.imag,
        "levels": levels,
        "annulus_maxima": [
            [r, (None if math.isnan(m) else m)] for r, m in est.annulus_maxima
        ],
    }


def _cmd_norm(args) -> int:
    f = resolve_map(args.map)
    cfg = _grid_config(args)
    est = normality.estimate_norm(f, cfg, threads=args.threads)
    _emit_json(_norm_payload(est, cfg.levels), args.out)
    return 0


def _cmd_classify(args) -> int:
    f = resolve_map(args.map)
    cfg = _grid_config(args)
    verdict = normality.classify(f, cfg, threads=args.threads)
    payload = {"verdict": verdict.kind}
    if verdict.kind == normality.VERDICT_NORMAL:
        payload["bound"] = verdict.bound
    elif verdict.kind == normality.VERDICT_NOT_NORMAL:
        payload["witness_theta"] = verdict.witness_theta
        payload["profile"] = [[r, d] for r, d in verdict.profile]
    else:
        payload["reason"] = verdict.reason
    _emit_json(payload, args.out)
    return 0


def _cmd_profile(args) -> int:
    f = resolve_map(args.map)
    cfg = _grid_config(args)
    radii = [normality.level_radius(k) for k in range(cfg.levels + 1)]
    lines = ["theta,r,density"]
    for j in range(cfg.base_angles):
        theta = 2.0 * math.pi * j / cfg.base_angles
        for r, d in normality.density_profile(f, theta, radii):
            lines.append(f"{_fmt17(theta)},{_fmt17(r)},{_fmt17(d)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_invariants(args) -> int:
    results = invariants.run_invariant_suite(args.names, seed=args.seed)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name} worst_residual={res.worst_residual:.6e} tol={res.tolerance:g}")
    payload = {
        "suites": [
            {
                "name": r.name,
                "passed": r.passed,
                "worst_residual": r.worst_residual,
                "tolerance": r.tolerance,
            }
            for r in results
        ],
        "all_passed": all(r.passed for r in results),
    }
    _emit_json(payload, args.out)
    return 0 if payload["all_passed"] else 1


def _cmd_criteria(args) -> int:
    f = resolve_map(args.map)
    cfg = _grid_config(args)
    om = criteria.omega_sup(f, cfg)
    payload = {
        "omega_sup": {
            "value": om.value,
            "argmax_re": om.argmax.real,
            "argmax_im": om.argmax.imag,
            "boundary_suspect": om.boundary_suspect,
        }
    }
    try:
        st = criteria.starlike_check(f.h, cfg)
        payload["starlike"] = {
            "passed": st.passed,
            "min_margin": st.min_margin,
            "origin_normalized": st.origin_normalized,
        }
        starlike_ok = st.passed
    except (EvalError, ValueError) as exc:
        payload["starlike"] = {"error": str(exc)}
        starlike_ok = False
    if starlike_ok and om.value < 1.0:
        gr = criteria.growth_ratio_check(f, cfg)
        payload["growth_ratio"] = {
            "passed": gr.passed,
            "max_ratio": gr.max_ratio,
            "omega_sup": gr.omega_sup_value,
        }
    else:
        payload["growth_ratio"] = {
            "skipped": "requires a starlike analytic part and dilatation sup < 1"
        }
    # bounded check against the sampled maximum modulus itself
    bb = criteria.bounded_bound_check(f, max(_sampled_bound(f, cfg), 1e-12), cfg)
    payload["bounded"] = {
        "k": bb.sampled_max,
        "passed": bb.passed,
        "estimate": bb.estimate,
        "bound": bb.bound,
        "sampled_max": bb.sampled_max,
        "precondition_ok": bb.precondition_ok,
    }
    rep = criteria.univalent_criterion_report(f, args.univalent_alpha, cfg)
    payload["univalent"] = {
        "alpha": rep.alpha,
        "omega_sup": rep.omega_sup,
        "applicable": rep.applicable,
        "jacobian_signs": list(rep.jacobian_signs),
        "worst_margin": rep.worst_margin,
        "passed": rep.passed,
        "note": rep.note,
    }
    ic = criteria.integral_condition_check(f, args.alpha, quad_points=args.quad_points)
    payload["integral_condition"] = ic.to_json_dict()
    payload["integral_condition"]["note"] = (
        "passed means no violation found on this finite sample, "
        "not that the condition holds everywhere"
    )
    _emit_json(payload, args.out)
    return 0


def _sampled_bound(f, cfg) -> float:
    import numpy as np

    from .harmonic import map_grid

    worst = 0.0
    for k in range(cfg.levels + 1):
        r = normality.level_radius(k)
        n = min(normality.level_angle_count(cfg, k), 512)
        z = r * np.exp(2j * math.pi * np.arange(n) / n)
        fv, ok = map_grid(f, z)
        mod = np.abs(fv)
        good = ok & np.isfinite(mod)
        if np.any(good):
            worst = max(worst, float(np.max(mod[good])))
    return worst


def _cmd_subharmonic(args) -> int:
    f = resolve_map(args.map)
    radii = [float(tok) for tok in args.radii.split(",") if tok.strip()]
    prof = subharmonic.subharmonic_profile(f, radii, delta=args.delta)
    lines = ["r,M,mu,N"]
    for r, m, mu, nn in zip(prof.radii, prof.M_values, prof.mu_values, prof.N_values):
        lines.append(f"{_fmt17(r)},{_fmt17(m)},{_fmt17(mu)},{_fmt17(nn)}")
    _emit("\n".join(lines) + "\n", args.out)
    print(json.dumps({"fitted_c": prof.fitted_c, "delta": prof.delta, "u0": prof.u0}))
    return 0


_COMMANDS = {
    "eval": _cmd_eval,
    "norm": _cmd_norm,
    "classify": _cmd_classify,
    "profile": _cmd_profile,
    "invariants": _cmd_invariants,
    "criteria": _cmd_criteria,
    "subharmonic": _cmd_subharmonic,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, ExprError, EvalError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        payload = {"error": str(exc)}
        try:
            _emit_json(payload, getattr(args, "out", None))
        except OSError:
            print(json.dumps(payload))
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
