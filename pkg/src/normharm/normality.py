"""Estimation of the normality norm and numeric normal/not-normal verdicts.

The supremum of the pointwise density is estimated on an annulus grid
r_k = 1 - 2^{-k}, k = 0..levels, with angular resolution doubling per level
(capped), followed by coordinate-wise golden-section refinement around the
best grid point.  Status:

* Converged    the running maximum moved by less than ``convergence_tol``
               (relatively) over the last ``convergence_window`` levels;
* Diverging    annulus maxima grew by a factor >= ``divergence_growth`` per
               level over the last ``divergence_window`` levels, or any
               annulus maximum exceeded ``absolute_cap``;
* Inconclusive anything else, including more than 1% of grid points lost to
               poles.  Never a silent default.

All stochastic operations take explicit seeds and are deterministic; grid
levels are independent, so multi-threaded evaluation reduces in level order
and cannot change any output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .expr import EvalError
from .geometry import DiskAutomorphism, chordal, random_automorphism
from .harmonic import HarmonicMap, density_grid, map_grid

STATUS_CONVERGED = "Converged"
STATUS_DIVERGING = "Diverging"
STATUS_INCONCLUSIVE = "Inconclusive"

VERDICT_NORMAL = "Normal"
VERDICT_NOT_NORMAL = "NotNormal"
VERDICT_INCONCLUSIVE = "Inconclusive"

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
MAX_SKIPPED_FRACTION = 0.01


@dataclass(frozen=True)
class GridConfig:
    """Annulus-grid and verdict thresholds for supremum estimation."""

    levels: int = 40
    base_angles: int = 64
    max_angles: int = 4096
    refine_iters: int = 40
    convergence_window: int = 6
    convergence_tol: float = 1e-4
    divergence_window: int = 8
    divergence_growth: float = 1.15
    absolute_cap: float = 1e8

    def __post_init__(self):
        if self.levels < 8:
            raise ValueError("levels must be >= 8")
        if self.base_angles < 16:
            raise ValueError("base_angles must be >= 16")
        if self.max_angles < self.base_angles:
            raise ValueError("max_angles must be >= base_angles")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")
        if self.divergence_growth <= 1:
            raise ValueError("divergence_growth must exceed 1")
        if self.refine_iters < 0 or self.convergence_window < 1 or self.divergence_window < 1:
            raise ValueError("window and iteration counts must be positive")


def level_radius(k: int) -> float:
    return 1.0 - 2.0 ** (-k)

def level_angle_count(cfg: GridConfig, k: int) -> int:
    return int(min(cfg.base_angles << k, cfg.max_angles))


@dataclass(frozen=True)
class NormEstimate:
    """Result of the supremum scan; ``value`` dominates every probed point."""

    value: float
    argmax: complex
    annulus_maxima: list
    status: str
    skipped: int = 0
    total: int = 0
    reason: str = ""


@dataclass(frozen=True)
class Verdict:
    kind: str
    bound: Optional[float] = None
    witness_theta: Optional[float] = None
    profile: Optional[list] = None
    reason: str = ""


@dataclass(frozen=True)
class WitnessPair:
    """Boundary sequences with shrinking hyperbolic gaps but separated images."""

    z: list
    z_prime: list
    f_z: list
    f_z_prime: list
    rho_gaps: list
    chi_gaps: list

    def __post_init__(self):
        mods = [abs(p) for p in self.z]
        if any(b <= a for a, b in zip(mods, mods[1:])):
            raise ValueError("witness moduli must increase toward 1")
        if any(b >= a for a, b in zip(self.rho_gaps, self.rho_gaps[1:])):
            raise ValueError("witness hyperbolic gaps must decrease")

    @property
    def ratios(self) -> list:
        return [c / r for c, r in zip(self.chi_gaps, self.rho_gaps)]


# --- grid scan ----------------------------------------------------------------

@dataclass
class _Level:
    k: int
    r: float
    n: int
    best: float = -math.inf
    best_j: int = -1
    ok_count: int = 0


def _scan_level(field: Callable, cfg: GridConfig, k: int) -> _Level:
    r = level_radius(k)
    n = level_angle_count(cfg, k)
    theta = 2.0 * math.pi * np.arange(n) / n
    z = r * np.exp(1j * theta)
    one_minus_r2 = (1.0 - r) * (1.0 + r)
    vals, ok = field(z, one_minus_r2)
    lv = _Level(k=k, r=r, n=n, ok_count=int(np.count_nonzero(ok)))
    if lv.ok_count:
        masked = np.where(ok, vals, -math.inf)
        j = int(np.argmax(masked))        # ties resolve to the lowest angle index
        lv.best = float(masked[j])
        lv.best_j = j
    return lv


def _scan_levels(field: Callable, cfg: GridConfig, threads: int) -> list:
    ks = range(cfg.levels + 1)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda k: _scan_level(field, cfg, k), ks))
    return [_scan_level(field, cfg, k) for k in ks]


def _gss_max(fun: Callable[[float], float], lo: float, hi: float, evals: int):
    """Golden-section maximization on [lo, hi]; returns the best point seen."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    for _ in range(max(evals - 2, 0)):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
            if fd > best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def _nelder_mead_max(fun, x0: float, y0: float, scale: float, evals: int):
    """Deterministic 2-D Nelder-Mead maximization; follows ridges the
    coordinate-wise passes cannot (rotated anisotropic peaks)."""
    pts = [
        np.array([x0, y0]),
        np.array([x0 + scale, y0]),
        np.array([x0, y0 + scale]),
    ]
    vals = [fun(p[0], p[1]) for p in pts]
    used = 3
    while used < evals:
        order = sorted(range(3), key=lambda i: -vals[i])
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        centroid = (pts[0] + pts[1]) / 2.0
        refl = centroid + (centroid - pts[2])
        f_refl = fun(refl[0], refl[1])
        used += 1
        if f_refl > vals[0]:
            expand = centroid + 2.0 * (centroid - pts[2])
            f_exp = fun(expand[0], expand[1])
            used += 1
            if f_exp > f_refl:
                pts[2], vals[2] = expand, f_exp
            else:
                pts[2], vals[2] = refl, f_refl
        elif f_refl > vals[1]:
            pts[2], vals[2] = refl, f_refl
        else:
            contract = centroid + 0.5 * (pts[2] - centroid)
            f_con = fun(contract[0], contract[1])
            used += 1
            if f_con > vals[2]:
                pts[2], vals[2] = contract, f_con
            else:
                for i in (1, 2):
                    pts[i] = (pts[i] + pts[0]) / 2.0
                    vals[i] = fun(pts[i][0], pts[i][1])
                    used += 1
    best = max(range(3), key=lambda i: vals[i])
    return vals[best], (pts[best][0], pts[best][1])


def _refine(scalar_field: Callable[[float, float], float], lv: _Level, cfg: GridConfig):
    """Alternating golden-section passes in (r, theta) around a grid maximum.

    Brackets re-center on the incumbent and shrink each pass, so refine_iters
    passes reach far below the convergence tolerances.
    """
    r_floor = level_radius(lv.k - 1) if lv.k > 0 else 0.0
    r_ceil = level_radius(lv.k + 1)
    theta0 = 2.0 * math.pi * lv.best_j / lv.n
    r_half = (r_ceil - r_floor) / 2.0
    # at the center the grid carries no angular information at all
    t_half = math.pi if lv.k == 0 else 4.0 * math.pi / lv.n
    r_cur, t_cur = lv.r, theta0
    best_val, best_pt = lv.best, (lv.r, theta0)
    for it in range(cfg.refine_iters):
        if it % 2 == 0:
            lo = max(r_cur - r_half, r_floor)
            hi = min(r_cur + r_half, r_ceil)
            x, fx = _gss_max(lambda r: scalar_field(r, t_cur), lo, hi, 12)
            r_cur = x
            r_half *= 0.35
        else:
            x, fx = _gss_max(
                lambda t: scalar_field(r_cur, t), t_cur - t_half, t_cur + t_half, 12
            )
            t_cur = x
            t_half *= 0.35
        if fx > best_val:
            best_val, best_pt = fx, (r_cur, t_cur)
    if cfg.refine_iters > 0:
        # simplex finisher: the peak of a precomposed map is generally rotated
        # against the (r, theta) axes, which stalls pure coordinate descent
        r_b, t_b = best_pt
        x0, y0 = r_b * math.cos(t_b), r_b * math.sin(t_b)

        def cart(x: float, y: float) -> float:
            return scalar_field(math.hypot(x, y), math.atan2(y, x))

        scale = max((r_ceil - r_floor) / 8.0, 1e-6)
        nm_val, (xb, yb) = _nelder_mead_max(cart, x0, y0, scale, 4 * cfg.refine_iters)
        if nm_val > best_val:
            best_val, best_pt = nm_val, (math.hypot(xb, yb), math.atan2(yb, xb))
    return best_val, best_pt


def _sup_scan(field, scalar_field, cfg: GridConfig, threads: int):
    """Shared annulus-scan + refinement used for density and dilatation suprema."""
    levels = _scan_levels(field, cfg, threads)
    total = sum(lv.n for lv in levels)
    skipped = sum(lv.n - lv.ok_count for lv in levels)
    valid = [lv for lv in levels if lv.ok_count]
    if not valid:
        raise EvalError("all grid points are poles")
    best_lv = valid[0]
    for lv in valid[1:]:
        if lv.best > best_lv.best:
            best_lv = lv
    value, argmax = best_lv.best, best_lv.r * complex(
        math.cos(2.0 * math.pi * best_lv.best_j / best_lv.n),
        math.sin(2.0 * math.pi * best_lv.best_j / best_lv.n),
    )
    if cfg.refine_iters > 0:
        rv, (rr, tt) = _refine(scalar_field, best_lv, cfg)
        if rv > value:
            value = rv
            argmax = rr * complex(math.cos(tt), math.sin(tt))
    maxima = [(lv.r, lv.best if lv.ok_count else math.nan) for lv in levels]
    return value, argmax, maxima, skipped, total, best_lv


def _estimate_status(maxima, cfg: GridConfig):
    finite = [m for _, m in maxima if math.isfinite(m)]
    if not finite:
        return STATUS_INCONCLUSIVE, "no evaluable annulus maxima"
    if any(m > cfg.absolute_cap for m in finite):
        return STATUS_DIVERGING, f"annulus maximum exceeded {cfg.absolute_cap:g}"
    ratios = [b / a for a, b in zip(finite, finite[1:]) if a > 0]
    w = cfg.divergence_window
    if len(ratios) >= w and all(q >= cfg.divergence_growth for q in ratios[-w:]):
        return (
            STATUS_DIVERGING,
            f"annulus maxima grew by >= {cfg.divergence_growth:g} per level "
            f"over the last {w} levels",
        )
    running = []
    cur = -math.inf
    for m in finite:
        cur = max(cur, m)
        running.append(cur)
    cw = cfg.convergence_window
    if len(running) > cw:
        change = running[-1] - running[-1 - cw]
        if change <= cfg.convergence_tol * max(running[-1], 1e-300):
            return STATUS_CONVERGED, ""
    return STATUS_INCONCLUSIVE, (
        "no convergence or divergence signal over the final window"
    )


def estimate_norm(f: HarmonicMap, cfg: Optional[GridConfig] = None, threads: int = 1) -> NormEstimate:
    """Estimate sup of the normality density of ``f`` over the disk."""
    cfg = cfg or GridConfig()

    def field(z, one_minus_r2):
        return density_grid(f, z, one_minus_r2)

    def scalar_field(r, theta):
        if not 0.0 <= r < 1.0:
            return -math.inf
        z = np.array([r * complex(math.cos(theta), math.sin(theta))])
        d, ok = density_grid(f, z, (1.0 - r) * (1.0 + r))
        return float(d[0]) if ok[0] else -math.inf

    value, argmax, maxima, skipped, total, _ = _sup_scan(field, scalar_field, cfg, threads)
    status, reason = _estimate_status(maxima, cfg)
    if skipped > MAX_SKIPPED_FRACTION * total:
        status = STATUS_INCONCLUSIVE
        reason = f"{skipped}/{total} grid points skipped (poles)"
    return NormEstimate(
        value=value,
        argmax=argmax,
        annulus_maxima=maxima,
        status=status,
        skipped=skipped,
        total=total,
        reason=reason,
    )


def density_profile(f: HarmonicMap, theta: float, radii) -> list:
    """Density along the ray angle theta at the given radii, in order."""
    radii = [float(r) for r in radii]
    if any(not 0.0 <= r < 1.0 for r in radii):
        raise ValueError("profile radii must lie in [0, 1)")
    direction = complex(math.cos(theta), math.sin(theta))
    out = []
    for r in radii:
        d, ok = density_grid(f, np.array([r * direction]), (1.0 - r) * (1.0 + r))
        if not ok[0]:
            raise EvalError(f"pole on the ray at r={r}")
        out.append((r, float(d[0])))
    return out


def classify(f: HarmonicMap, cfg: Optional[GridConfig] = None, threads: int = 1) -> Verdict:
    """Normal / NotNormal / Inconclusive verdict with a witness profile."""
    cfg = cfg or GridConfig()
    est = estimate_norm(f, cfg, threads)
    if est.status == STATUS_CONVERGED:
        return Verdict(kind=VERDICT_NORMAL, bound=est.value)
    if est.status == STATUS_DIVERGING:
        theta = math.atan2(est.argmax.imag, est.argmax.real) % (2.0 * math.pi)
        radii = np.array([r for r, m in est.annulus_maxima if math.isfinite(m)])
        # masked scan: isolated cut or pole hits on the ray drop out instead
        # of aborting the verdict
        direction = complex(math.cos(theta), math.sin(theta))
        dens, ok = density_grid(f, radii * direction, (1.0 - radii) * (1.0 + radii))
        profile = [(float(r), float(d)) for r, d, good in zip(radii, dens, ok) if good]
        w = min(cfg.convergence_window, len(profile) - 1)
        tail = [d for _, d in profile[-(w + 1):]]
        if len(profile) < 2 or any(b <= a for a, b in zip(tail, tail[1:])):
            return Verdict(
                kind=VERDICT_INCONCLUSIVE,
                reason="divergence signal without a monotone ray profile",
            )
        return Verdict(kind=VERDICT_NOT_NORMAL, witness_theta=theta, profile=profile)
    return Verdict(kind=VERDICT_INCONCLUSIVE, reason=est.reason)


# --- pair ratio ------------------------------------------------------------------

_SCAN_CFG = GridConfig(levels=16, base_angles=32, max_angles=128, refine_iters=8)


def _uniform_disk(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    phi = 2.0 * math.pi * rng.random(n)
    return r * np.exp(1j * phi)


def _hyperbolic_raw(z, w):
    return np.arctanh(np.abs((z - w) / (1.0 - np.conj(z) * w)))


def pair_ratio_sup(f: HarmonicMap, samples: int, seed: int) -> float:
    """Max over sampled pairs of chordal(f(z), f(w)) / hyperbolic(z, w).

    Mixes uniform pairs with near-coincident pairs (w = z + eps * direction,
    eps in {1e-3, 1e-5}) concentrated around the density argmax, including a
    deterministic direction fan at the argmax itself.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    try:
        z0 = estimate_norm(f, _SCAN_CFG).argmax
    except EvalError:
        z0 = 0j

    zs, ws = [], []
    n_uniform = samples // 2
    if n_uniform:
        zs.append(_uniform_disk(rng, n_uniform, 0.999))
        ws.append(_uniform_disk(rng, n_uniform, 0.999))

    n_near = samples - n_uniform
    if n_near:
        fan = np.exp(2j * math.pi * np.arange(16) / 16)
        det_z, det_w = [], []
        for eps in (1e-3, 1e-5):
            cand = z0 + eps * fan
            keep = np.abs(cand) < 1.0
            det_z.append(np.full(int(keep.sum()), z0))
            det_w.append(cand[keep])
        move = DiskAutomorphism.point_to_zero(z0)
        n_rand = max(n_near - sum(len(a) for a in det_w), 0)
        n_cloud = n_rand // 2
        cloud = move(_uniform_disk(rng, n_cloud, 0.2)) if n_cloud else np.empty(0, complex)
        spread = _uniform_disk(rng, n_rand - n_cloud, 0.99)
        base = np.concatenate([cloud, spread])
        eps = np.where(np.arange(len(base)) % 2 == 0, 1e-3, 1e-5)
        w = base + eps * np.exp(2j * math.pi * rng.random(len(base)))
        keep = np.abs(w) < 1.0
        zs.extend(det_z + [base[keep]])
        ws.extend(det_w + [w[keep]])

    z = np.concatenate(zs)
    w = np.concatenate(ws)
    fz, ok_z = map_grid(f, z)
    fw, ok_w = map_grid(f, w)
    rho = _hyperbolic_raw(z, w)
    with np.errstate(all="ignore"):
        ratio = chordal(fz, fw) / rho
    ok = ok_z & ok_w & (rho > 0) & np.isfinite(ratio)
    if not np.any(ok):
        return 0.0
    return float(np.max(ratio[ok]))


# --- separation witness -----------------------------------------------------------

_WITNESS_RATIO = 1e3          # sustained chi/rho ratio that flags non-normality
_WITNESS_TAIL = 5
_MIN_EUCLID_GAP = 3e-14       # pairs closer than this are not resolvable in doubles


def _quarter_radius(q: int) -> float:
    # quarter-level annulus schedule, strictly increasing in q
    return 1.0 - 2.0 ** (-q / 4.0)


def separation_witness(
    f: HarmonicMap, cfg: Optional[GridConfig] = None, max_depth: int = 20
) -> Optional[WitnessPair]:
    """Search for boundary pair sequences whose images stay chordally separated.

    At depth n the hyperbolic gap is rho_n = 1e-2 * 2^{-n}; base points walk
    out along the worst ray over a quarter-level annulus schedule (strictly
    increasing moduli, budgeted so the walk stays representable in doubles
    through the final depth) and the partner point sits at exact hyperbolic
    distance rho_n in the chordally worst of 16 directions.  A witness is
    returned when the chi/rho ratios of the last 5 depths all exceed 1e3,
    which a map of normality norm below that level can never sustain;
    otherwise None.
    """
    cfg = cfg or GridConfig()
    scan = estimate_norm(
        f,
        GridConfig(
            levels=min(cfg.levels, 24),
            base_angles=cfg.base_angles,
            max_angles=min(cfg.max_angles, 512),
            refine_iters=0,
        ),
    )
    theta = math.atan2(scan.argmax.imag, scan.argmax.real)
    direction = complex(math.cos(theta), math.sin(theta))
    fan = np.exp(2j * math.pi * np.arange(16) / 16)

    def representable(q: int, t: float) -> bool:
        r = _quarter_radius(q)
        return t * (1.0 - r * r) >= _MIN_EUCLID_GAP

    def q_cap(depth: int) -> int:
        t = math.tanh(1e-2 * 2.0 ** (-depth))
        q = 4
        while representable(q + 1, t):
            q += 1
        return q

    # leave room to increase the modulus at every remaining depth
    final_cap = q_cap(max_depth - 1)

    zs, zps, rhos, chis = [], [], [], []
    prev_q = 0
    for depth in range(max_depth):
        rho_n = 1e-2 * 2.0 ** (-depth)
        t = math.tanh(rho_n)
        budget = min(q_cap(depth), final_cap - (max_depth - 1 - depth))
        qs = [q for q in range(prev_q + 1, budget + 1)]
        if not qs:
            break
        base = np.array([_quarter_radius(q) * direction for q in qs])
        zmat = np.repeat(base, len(fan))
        offs = np.tile(t * fan, len(base))
        zpmat = (zmat - offs) / (1.0 - np.conj(zmat) * offs)
        fz, ok1 = map_grid(f, zmat)
        fzp, ok2 = map_grid(f, zpmat)
        with np.errstate(all="ignore"):
            chi = chordal(fz, fzp)
        ok = ok1 & ok2 & np.isfinite(chi) & (np.abs(zpmat) < 1.0)
        if not np.any(ok):
            break
        j = int(np.argmax(np.where(ok, chi, -1.0)))
        prev_q = qs[j // len(fan)]
        z_best, zp_best = complex(zmat[j]), complex(zpmat[j])
        zs.append(z_best)
        zps.append(zp_best)
        rhos.append(float(_hyperbolic_raw(np.asarray(z_best), np.asarray(zp_best))))
        chis.append(float(chi[j]))

    if len(chis) < _WITNESS_TAIL:
        return None
    tail_ratios = [c / r for c, r in zip(chis[-_WITNESS_TAIL:], rhos[-_WITNESS_TAIL:])]
    if not all(q >= _WITNESS_RATIO for q in tail_ratios):
        return None
    fz, _ = map_grid(f, np.array(zs))
    fzp, _ = map_grid(f, np.array(zps))
    return WitnessPair(
        z=zs,
        z_prime=zps,
        f_z=[complex(v) for v in fz],
        f_z_prime=[complex(v) for v in fzp],
        rho_gaps=rhos,
        chi_gaps=chis,
    )


# --- equicontinuity probe ----------------------------------------------------------

def equicontinuity_probe(f: HarmonicMap, r0: float, n_autos: int, seed: int) -> float:
    """Empirical Lipschitz modulus of {f o sigma} over |z| <= r0.

    Maximum of chordal(f(sigma(z)), f(sigma(z1))) / |z - z1| over random
    automorphisms and random pairs in the closed disk of radius r0.
    """
    if not 0.0 < r0 < 1.0:
        raise ValueError("r0 must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    pairs_per_auto = 32
    worst = 0.0
    for _ in range(max(n_autos, 1)):
        sigma = random_automorphism(rng)
        z = _uniform_disk(rng, pairs_per_auto, r0)
        z1 = _uniform_disk(rng, pairs_per_auto, r0)
        gap = np.abs(z - z1)
        fz, ok1 = map_grid(f, sigma(z))
        fz1, ok2 = map_grid(f, sigma(z1))
        with np.errstate(all="ignore"):
            ratio = chordal(fz, fz1) / gap
        ok = ok1 & ok2 & (gap > 0) & np.isfinite(ratio)
        if np.any(ok):
            worst = max(worst, float(np.max(ratio[ok])))
    return worst
