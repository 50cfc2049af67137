"""Sufficient-condition checkers for normality.

* bounded maps: norm <= 4k/pi when |f| <= k, sharp;
* starlike analytic part with dilatation sup below 1;
* univalent + ||omega||_inf < 1, with the coefficient-bound growth estimate
  (its alpha has no agreed numeric value and is a required user parameter;
  3 is the conventional choice);
* the circle-average integral condition: for Omega = sigma(D(0, r)), the
  arc-length average of |h'| + |g'| over the boundary must stay below r^-alpha.

A finite sample can only refute the integral condition, never certify it;
reports say "no violation found", not "condition holds".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .expr import Div, EvalError, Expr, Mul, PoleError, Z, evaluate, evaluate_masked
from .geometry import DiskAutomorphism
from .harmonic import HarmonicMap, density_grid, dilatation, map_grid
from .normality import (
    GridConfig,
    estimate_norm,
    level_angle_count,
    level_radius,
    _sup_scan,
)

DEFAULT_XI_SAMPLES = (
    0.0,
    0.5,
    0.9,
    0.5j,
    -0.7,
    0.9 * (0.6 + 0.6j) / abs(0.6 + 0.6j),
)
DEFAULT_R_SAMPLES = (0.1, 0.25, 0.5, 0.75, 0.9, 0.99)


@dataclass(frozen=True)
class OmegaSupEstimate:
    value: float
    argmax: complex
    boundary_suspect: bool   # annulus maxima still rising at the last levels


def omega_sup(f: HarmonicMap, cfg: Optional[GridConfig] = None) -> OmegaSupEstimate:
    """sup |g'/h'| over the annulus grid plus local refinement."""
    cfg = cfg or GridConfig()
    ratio = Div(f.gp, f.hp)

    def field(z, _one_minus_r2):
        vals, ok = evaluate_masked(ratio, z)
        out = np.abs(vals)
        ok = ok & np.isfinite(out)
        if not np.all(ok):
            raise PoleError("h' vanishes at a grid probe point")
        return out, ok

    def scalar_field(r, theta):
        if not 0.0 <= r < 1.0:
            return -math.inf
        z = np.array([r * complex(math.cos(theta), math.sin(theta))])
        vals, ok = evaluate_masked(ratio, z)
        v = abs(vals[0])
        return float(v) if ok[0] and math.isfinite(v) else -math.inf

    value, argmax, maxima, _, _, _ = _sup_scan(field, scalar_field, cfg, threads=1)
    finite = [m for _, m in maxima if math.isfinite(m)]
    w = min(cfg.divergence_window, len(finite) - 1)
    suspect = w > 0 and all(b > a for a, b in zip(finite[-w - 1:], finite[-w:]))
    return OmegaSupEstimate(value=value, argmax=argmax, boundary_suspect=suspect)


@dataclass(frozen=True)
class StarlikeResult:
    passed: bool
    min_margin: float
    origin_normalized: bool   # h(0) = 0 and h'(0) != 0


def starlike_check(h: Expr, cfg: Optional[GridConfig] = None) -> StarlikeResult:
    """min over the grid of Re(z h'(z)/h(z)); starlike iff positive.

    The limit value 1 is substituted at z = 0 (valid for normalized h).
    """
    from .expr import differentiate

    cfg = cfg or GridConfig()
    hp = differentiate(h)
    h0 = evaluate(h, 0j)
    hp0 = evaluate(hp, 0j)
    origin_ok = abs(h0) <= 1e-12 and abs(hp0) > 1e-12
    q = Mul(Z, Div(hp, h))
    worst = 1.0   # the substituted value at z = 0
    # a minimum can hide in any interior ring, so radii are uniform here,
    # unlike the boundary-weighted annulus schedule of the sup estimators
    n = min(cfg.base_angles * 8, cfg.max_angles)
    theta = np.exp(2j * math.pi * np.arange(n) / n)
    for j in range(1, cfg.levels + 1):
        r = j / (cfg.levels + 1.0)
        vals, ok = evaluate_masked(q, r * theta)
        re = np.real(vals)
        ok = ok & np.isfinite(re)
        if not np.all(ok):
            raise EvalError("h vanishes at a probe point z != 0")
        worst = min(worst, float(np.min(re)))
    return StarlikeResult(passed=worst > 0.0, min_margin=worst, origin_normalized=origin_ok)


@dataclass(frozen=True)
class GrowthRatioResult:
    passed: bool
    max_ratio: float
    omega_sup_value: float


def growth_ratio_check(f: HarmonicMap, cfg: Optional[GridConfig] = None) -> GrowthRatioResult:
    """max |g(z)|/|h(z)| off the origin; bounded by ||omega||_inf for starlike h."""
    cfg = cfg or GridConfig()
    om = omega_sup(f, cfg).value
    ratio = Div(f.g, f.h)
    worst = 0.0
    for k in range(1, cfg.levels + 1):
        r = level_radius(k)
        n = level_angle_count(cfg, k)
        z = r * np.exp(2j * math.pi * np.arange(n) / n)
        vals, ok = evaluate_masked(ratio, z)
        mod = np.abs(vals)
        ok = ok & np.isfinite(mod)
        if not np.all(ok):
            raise EvalError("h vanishes at a probe point z != 0")
        worst = max(worst, float(np.max(mod)))
    return GrowthRatioResult(passed=worst <= om + 1e-6, max_ratio=worst, omega_sup_value=om)


def sheil_small_lower(alpha: float, t: float) -> float:
    """Coefficient-bound growth floor (1/(2 alpha)) (1 - ((1-t)/(1+t))^alpha)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not 0.0 <= t < 1.0:
        raise ValueError("t must lie in [0, 1)")
    return (1.0 - ((1.0 - t) / (1.0 + t)) ** alpha) / (2.0 * alpha)


@dataclass(frozen=True)
class UnivalentCriterionReport:
    alpha: float
    omega_sup: float
    applicable: bool          # omega_sup < 1; univalence itself is caller-declared
    b1: Optional[complex]
    jacobian_signs: tuple     # (positive, negative, zero) at sampled points
    probes: list              # (z, density, bound) at |z| >= 1/2
    worst_margin: Optional[float]
    passed: Optional[bool]
    note: str = ""


def univalent_criterion_report(
    f: HarmonicMap, alpha: float, cfg: Optional[GridConfig] = None
) -> UnivalentCriterionReport:
    """Density bound derived from the growth floor, at probe points |z| >= 1/2.

    Orientation is only sampled (Jacobian signs), never proven.  When the
    dilatation sup estimate is >= 1 the bound does not apply and the report
    says so instead of inventing one.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    cfg = cfg or GridConfig()
    om = omega_sup(f, cfg)
    try:
        b1 = dilatation(f, 0j)
    except EvalError:
        b1 = None

    signs = [0, 0, 0]
    sample_k = [k for k in range(0, cfg.levels + 1, max(cfg.levels // 8, 1))]
    for k in sample_k:
        r = level_radius(k)
        n = min(level_angle_count(cfg, k), 64)
        z = r * np.exp(2j * math.pi * np.arange(n) / n)
        pv, ok1 = evaluate_masked(f.hp, z)
        qv, ok2 = evaluate_masked(f.gp, z)
        jac = (np.real(pv) ** 2 + np.imag(pv) ** 2) - (np.real(qv) ** 2 + np.imag(qv) ** 2)
        ok = ok1 & ok2 & np.isfinite(jac)
        signs[0] += int(np.count_nonzero(ok & (jac > 0)))
        signs[1] += int(np.count_nonzero(ok & (jac < 0)))
        signs[2] += int(np.count_nonzero(ok & (jac == 0)))

    if om.value >= 1.0 or b1 is None:
        return UnivalentCriterionReport(
            alpha=alpha,
            omega_sup=om.value,
            applicable=False,
            b1=b1,
            jacobian_signs=tuple(signs),
            probes=[],
            worst_margin=None,
            passed=None,
            note="dilatation sup estimate >= 1: the criterion does not apply",
        )

    probes = []
    worst = math.inf
    for k in range(1, cfg.levels + 1):
        r = level_radius(k)
        if r < 0.5:
            continue
        n = min(level_angle_count(cfg, k), 64)
        z = r * np.exp(2j * math.pi * np.arange(n) / n)
        dens, ok = density_grid(f, z, (1.0 - r) * (1.0 + r))
        floor = 2.0 * alpha / (1.0 - ((1.0 - r) / (1.0 + r)) ** alpha)
        bound = 2.0 * floor * (1.0 + abs(b1)) / (1.0 - om.value)
        for j in np.nonzero(ok)[0]:
            probes.append((complex(z[j]), float(dens[j]), bound))
            worst = min(worst, bound - float(dens[j]))
    return UnivalentCriterionReport(
        alpha=alpha,
        omega_sup=om.value,
        applicable=True,
        b1=b1,
        jacobian_signs=tuple(signs),
        probes=probes,
        worst_margin=worst,
        passed=worst >= 0.0,
    )


@dataclass(frozen=True)
class BoundedBoundResult:
    passed: bool
    estimate: float
    bound: float
    sampled_max: float
    precondition_ok: bool    # sampled max |f| <= k (reported, never assumed)


def bounded_bound_check(
    f: HarmonicMap, k: float, cfg: Optional[GridConfig] = None
) -> BoundedBoundResult:
    """Check the sharp bounded-map estimate: norm <= 4k/pi when |f| <= k."""
    if k <= 0:
        raise ValueError("k must be positive")
    cfg = cfg or GridConfig()
    sampled = 0.0
    for lvl in range(cfg.levels + 1):
        r = level_radius(lvl)
        n = level_angle_count(cfg, lvl)
        z = r * np.exp(2j * math.pi * np.arange(n) / n)
        fv, ok = map_grid(f, z)
        mod = np.abs(fv)
        good = ok & np.isfinite(mod)
        if np.any(good):
            sampled = max(sampled, float(np.max(mod[good])))
    est = estimate_norm(f, cfg)
    bound = 4.0 * k / math.pi
    return BoundedBoundResult(
        passed=est.value <= bound + 1e-3,
        estimate=est.value,
        bound=bound,
        sampled_max=sampled,
        precondition_ok=sampled <= k,
    )


# --- integral condition -----------------------------------------------------------

@dataclass(frozen=True)
class IntegralSample:
    xi: complex
    r: float
    average: float
    bound: float
    margin: float


@dataclass(frozen=True)
class IntegralConditionReport:
    alpha: float
    samples: list
    worst_margin: float
    passed: bool
    excluded: int = 0    # samples dropped because of a pole on the circle

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "samples": [
                {
                    "xi_re": s.xi.real,
                    "xi_im": s.xi.imag,
                    "r": s.r,
                    "average": s.average,
                    "bound": s.bound,
                    "margin": s.margin,
                }
                for s in self.samples
            ],
            "worst_margin": self.worst_margin,
            "passed": self.passed,
        }


def circle_average(f: HarmonicMap, sigma: DiskAutomorphism, r: float, quad_points: int) -> float:
    """Arc-length average of |h'| + |g'| over the boundary of sigma(D(0, r)).

    Trapezoidal rule on the periodic parametrization zeta(t) = sigma(r e^{it})
    with weight |sigma'(r e^{it})| r; spectrally accurate for smooth maps.
    """
    t = 2.0 * math.pi * np.arange(quad_points) / quad_points
    zc = r * np.exp(1j * t)
    zeta = sigma(zc)
    weight = np.abs(sigma.deriv(zc)) * r
    pv, ok1 = evaluate_masked(f.hp, zeta)
    qv, ok2 = evaluate_masked(f.gp, zeta)
    lam = np.abs(pv) + np.abs(qv)
    if not np.all(ok1 & ok2 & np.isfinite(lam)):
        raise PoleError("pole on an integration circle")
    return float(np.sum(lam * weight) / np.sum(weight))


def integral_condition_check(
    f: HarmonicMap,
    alpha: float,
    xi_samples=None,
    r_samples=None,
    quad_points: int = 256,
) -> IntegralConditionReport:
    """Compare circle averages of |h'| + |g'| against r^-alpha per (xi, r).

    ``passed`` means no violation was found on this finite sample; it is not a
    certificate that the condition holds for every automorphism and radius.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if quad_points < 64:
        raise ValueError("quad_points must be >= 64")
    xis = [complex(x) for x in (DEFAULT_XI_SAMPLES if xi_samples is None else xi_samples)]
    rs = [float(r) for r in (DEFAULT_R_SAMPLES if r_samples is None else r_samples)]
    if any(abs(x) >= 1.0 for x in xis):
        raise ValueError("xi samples must lie inside the disk")
    if any(not 0.0 < r < 1.0 for r in rs):
        raise ValueError("r samples must lie in (0, 1)")
    samples = []
    excluded = 0
    for xi in xis:
        sigma = DiskAutomorphism.koebe(xi)
        for r in rs:
            try:
                avg = circle_average(f, sigma, r, quad_points)
            except PoleError:
                excluded += 1
                continue
            bound = r ** (-alpha)
            samples.append(
                IntegralSample(xi=xi, r=r, average=avg, bound=bound, margin=bound - avg)
            )
    if not samples:
        raise EvalError("every integral sample hit a pole")
    worst = min(s.margin for s in samples)
    return IntegralConditionReport(
        alpha=alpha, samples=samples, worst_margin=worst, passed=worst >= 0.0,
        excluded=excluded,
    )
