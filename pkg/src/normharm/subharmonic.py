"""Riesz-mass machinery for u = |f| with f a harmonic mapping.

For f nonvanishing on a circle |z| = t, Green's theorem turns the Riesz mass
of the disk B(0, t) into a boundary flux:

    mu(B(0, t)) = integral over |z| = t of  d|f|/dr  arclength
                = integral of 2 Re(e^{i angle} d_z|f|) t d(angle),

with d_z|f| = (conj(f) h' + f g') / (2 |f|).  The counting function is
N(r, u) = integral_0^r mu(B(0, t))/t dt, and M(r, u) is the circle maximum.
The fit routine measures the smallest c with M(r, u) <= 2 u(0) + c N(delta r, u)
on a given radius sample; c and delta are empirical here, nothing universal is
claimed.

Zeros of f on a probe circle are errors, not warnings: |f| is not
differentiable there and the flux formula breaks, so callers shift radii.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expr import EvalError, evaluate_masked
from .harmonic import HarmonicMap, eval_map

ZERO_TOL = 1e-8

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def circle_max(f: HarmonicMap, r: float, n: int = 512) -> float:
    """max |f| over |z| = r: n uniform angles plus golden-section refinement."""
    if not 0.0 < r < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    if n < 64:
        raise ValueError("need at least 64 circle nodes")
    theta = 2.0 * math.pi * np.arange(n) / n
    hv, ok1 = evaluate_masked(f.h, r * np.exp(1j * theta))
    gv, ok2 = evaluate_masked(f.g, r * np.exp(1j * theta))
    mod = np.abs(hv + np.conj(gv))
    if not np.all(ok1 & ok2 & np.isfinite(mod)):
        raise EvalError("pole on the probe circle")
    j = int(np.argmax(mod))
    best = float(mod[j])

    def at(t: float) -> float:
        return abs(eval_map(f, r * complex(math.cos(t), math.sin(t))))

    a = theta[j] - 2.0 * math.pi / n
    b = theta[j] + 2.0 * math.pi / n
    for _ in range(40):
        c = b - _INVPHI * (b - a)
        d = a + _INVPHI * (b - a)
        if at(c) >= at(d):
            b = d
        else:
            a = c
    best = max(best, at((a + b) / 2.0))
    return best


def _flux_batch(f: HarmonicMap, ts: np.ndarray, n: int) -> np.ndarray:
    """mu(B(0, t)) for each t via the boundary flux, trapezoid with n nodes."""
    theta = 2.0 * math.pi * np.arange(n) / n
    ray = np.exp(1j * theta)
    z = ts[:, None] * ray[None, :]
    hv, ok1 = evaluate_masked(f.h, z)
    gv, ok2 = evaluate_masked(f.g, z)
    pv, ok3 = evaluate_masked(f.hp, z)
    qv, ok4 = evaluate_masked(f.gp, z)
    fv = hv + np.conj(gv)
    mod = np.abs(fv)
    if not np.all(ok1 & ok2 & ok3 & ok4):
        raise EvalError("pole on a probe circle")
    if np.any(mod < ZERO_TOL):
        raise EvalError(
            "f vanishes on a probe circle; the flux form of the Riesz mass "
            "breaks at zeros of |f|"
        )
    dzu = (np.conj(fv) * pv + fv * qv) / (2.0 * mod)
    radial = 2.0 * np.real(ray[None, :] * dzu)
    return (2.0 * math.pi / n) * ts * np.sum(radial, axis=1)


def riesz_mass(f: HarmonicMap, t: float, n: int = 512) -> float:
    """Riesz mass mu(B(0, t)) of |f| by the Green boundary flux."""
    if not 0.0 < t < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    if n < 64:
        raise ValueError("need at least 64 circle nodes")
    return float(_flux_batch(f, np.array([t]), n)[0])


def counting_function(f: HarmonicMap, r: float, steps: int = 256, n: int = 512) -> float:
    """N(r, u) = integral_0^r mu(B(0, t))/t dt, composite trapezoid.

    The integrand extends continuously to t = 0; the initial segment
    [0, r/steps] uses the one-sided value, which is exact whenever mu is
    asymptotically linear in t there.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    if steps < 8:
        raise ValueError("need at least 8 radial steps")
    ts = r * np.arange(1, steps + 1) / steps
    mus = _flux_batch(f, ts, n)
    integrand = mus / ts
    head = float(integrand[0]) * ts[0]          # one-sided extension over [0, t_1]
    return head + float(np.trapezoid(integrand, ts))


@dataclass(frozen=True)
class KsFit:
    fitted_c: float
    witness_r: float
    delta: float


def ks_inequality_fit(
    f: HarmonicMap,
    delta: float,
    radii,
    n: int = 512,
    steps: int = 256,
) -> KsFit:
    """Smallest c >= 0 with M(r, u) <= 2 u(0) + c N(delta r, u) on the sample.

    Requires r * delta < 1/2 for every radius.  When some radius needs
    M > 2 u(0) while N(delta r) vanishes, no finite c works and the fit is
    reported as infinite.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    radii = [float(r) for r in radii]
    if not radii:
        raise ValueError("need at least one radius")
    if any(not 0.0 < r < 1.0 for r in radii) or any(r * delta >= 0.5 for r in radii):
        raise ValueError("radii must lie in (0, 1) with r * delta < 1/2")
    u0 = abs(eval_map(f, 0j))
    best_c, witness = 0.0, radii[0]
    for r in radii:
        excess = circle_max(f, r, n) - 2.0 * u0
        if excess <= 0.0:
            continue
        n_val = counting_function(f, delta * r, steps, n)
        c = math.inf if n_val <= 0.0 else excess / n_val
        if c > best_c:
            best_c, witness = c, r
    return KsFit(fitted_c=best_c, witness_r=witness, delta=delta)


@dataclass(frozen=True)
class SubharmonicProfile:
    radii: list
    M_values: list
    mu_values: list
    N_values: list
    u0: float
    delta: float
    fitted_c: float


def subharmonic_profile(
    f: HarmonicMap,
    radii,
    delta: float = 0.5,
    n: int = 512,
    steps: int = 256,
) -> SubharmonicProfile:
    """M, mu, N at each radius plus the fitted inequality constant."""
    radii = [float(r) for r in radii]
    if any(not 0.0 < r < 1.0 for r in radii):
        raise ValueError("radii must lie in (0, 1)")
    M = [circle_max(f, r, n) for r in radii]
    mu = [riesz_mass(f, r, n) for r in radii]
    N = [counting_function(f, r, steps, n) for r in radii]
    fit_radii = [r for r in radii if r * delta < 0.5]
    fit = ks_inequality_fit(f, delta, fit_radii, n, steps) if fit_radii else None
    return SubharmonicProfile(
        radii=radii,
        M_values=M,
        mu_values=mu,
        N_values=N,
        u0=abs(eval_map(f, 0j)),
        delta=delta,
        fitted_c=fit.fitted_c if fit else math.nan,
    )
