"""Metrics and Moebius machinery of the unit disk and the extended plane.

Distances:

* chordal  ``chi(p, q) = |p - q| / sqrt((1 + |p|^2)(1 + |q|^2))`` with
  ``chi(p, inf) = (1 + |p|^2)^(-1/2)``; values in [0, 1].
* hyperbolic ``rho(z, w) = atanh |(z - w)/(1 - conj(z) w)|`` on the open disk.
* spherical length of a polyline, ``integral |dxi| / (1 + |xi|^2)``.

Disk automorphisms are stored as ``sigma(z) = e^{i theta} (a - z)/(1 - conj(a) z)``
with |a| < 1.  All functions accept scalars or numpy arrays and are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expr import Const, Div, Expr, Mul, Sub, Z

#: Point at infinity of the extended plane (any non-finite complex works).
INF = complex(math.inf, 0.0)


def _abs2(z):
    z = np.asarray(z)
    return np.real(z) ** 2 + np.imag(z) ** 2


def chordal(p, q):
    """Chordal distance on the extended plane; accepts non-finite = infinity."""
    p = np.asarray(p, dtype=np.complex128)
    q = np.asarray(q, dtype=np.complex128)
    scalar = p.ndim == 0 and q.ndim == 0
    p_inf = ~np.isfinite(p)
    q_inf = ~np.isfinite(q)
    ps = np.where(p_inf, 0.0, p)
    qs = np.where(q_inf, 0.0, q)
    with np.errstate(all="ignore"):
        base = np.abs(ps - qs) / np.sqrt((1.0 + _abs2(ps)) * (1.0 + _abs2(qs)))
        only_p = 1.0 / np.sqrt(1.0 + _abs2(qs))
        only_q = 1.0 / np.sqrt(1.0 + _abs2(ps))
    out = np.where(
        p_inf & q_inf, 0.0, np.where(p_inf, only_p, np.where(q_inf, only_q, base))
    )
    return float(out) if scalar else out


def hyperbolic(z, w):
    """Poincare distance between points of the open unit disk."""
    z = np.asarray(z, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    if np.any(_abs2(z) >= 1.0) or np.any(_abs2(w) >= 1.0):
        raise ValueError("hyperbolic distance requires |z| < 1 and |w| < 1")
    r = np.abs((z - w) / (1.0 - np.conj(z) * w))
    out = np.arctanh(r)
    return float(out) if out.ndim == 0 else out


def _segment_spherical(p: complex, q: complex) -> float:
    # adaptive midpoint rule, halving until the relative change is < 1e-9
    length = abs(q - p)
    if length == 0.0:
        return 0.0
    n = 8
    prev = None
    while True:
        t = (np.arange(n) + 0.5) / n
        pts = p + t * (q - p)
        cur = float(np.sum(1.0 / (1.0 + _abs2(pts)))) * length / n
        if prev is not None and abs(cur - prev) <= 1e-9 * abs(cur):
            return cur
        if n >= 1 << 22:
            return cur
        prev = cur
        n *= 2


def spherical_length(polyline) -> float:
    """Spherical length of the polygonal path through the given finite points."""
    pts = [complex(p) for p in polyline]
    if len(pts) < 2:
        raise ValueError("spherical_length needs at least 2 points")
    if any(not (math.isfinite(p.real) and math.isfinite(p.imag)) for p in pts):
        raise ValueError("spherical_length requires finite points")
    return sum(_segment_spherical(a, b) for a, b in zip(pts, pts[1:]))


@dataclass(frozen=True)
class DiskAutomorphism:
    """sigma(z) = e^{i theta} (a - z) / (1 - conj(a) z), a Moebius self-map of the disk."""

    a: complex
    theta: float

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) >= 1.0:
            raise ValueError("automorphism parameter must satisfy |a| < 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "theta", float(self.theta))

    @classmethod
    def point_to_zero(cls, a, theta: float = 0.0) -> "DiskAutomorphism":
        """Automorphism sending ``a`` to the origin (an involution for theta=0)."""
        return cls(a, theta)

    @classmethod
    def koebe(cls, xi) -> "DiskAutomorphism":
        """The map z -> (z + xi) / (1 + conj(xi) z) used by the Koebe transform."""
        return cls(-complex(xi), math.pi)

    @property
    def phase(self) -> complex:
        return complex(np.exp(1j * self.theta))

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = self.phase * (self.a - z) / (1.0 - np.conj(self.a) * z)
        return complex(out) if out.ndim == 0 else out

    def deriv(self, z):
        z = np.asarray(z, dtype=np.complex128)
        out = self.phase * (_abs2(self.a) - 1.0) / (1.0 - np.conj(self.a) * z) ** 2
        return complex(out) if out.ndim == 0 else out

    def inverse(self) -> "DiskAutomorphism":
        return DiskAutomorphism(self.a * self.phase, -self.theta)

    def as_expr(self) -> Expr:
        """The same map as an expression tree in the variable z."""
        num = Sub(Const(self.a), Z)
        den = Sub(Const(1.0), Mul(Const(self.a.conjugate()), Z))
        return Mul(Const(self.phase), Div(num, den))


def random_automorphism(rng: np.random.Generator, max_modulus: float = 0.9) -> DiskAutomorphism:
    """Draw a disk automorphism, |a| area-uniform up to ``max_modulus``."""
    r = max_modulus * math.sqrt(rng.random())
    phi = 2.0 * math.pi * rng.random()
    theta = 2.0 * math.pi * rng.random()
    return DiskAutomorphism(r * complex(math.cos(phi), math.sin(phi)), theta)


def image_circle(s: DiskAutomorphism, r: float) -> tuple[complex, float]:
    """Euclidean center and radius of sigma({|z| = r}).

    Moebius maps send circles to circles; for the stored convention the image
    of |z| = r has center e^{i theta} a (1 - r^2)/(1 - r^2 |a|^2) and radius
    r (1 - |a|^2)/(1 - r^2 |a|^2).
    """
    if not 0.0 < r < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    aa = _abs2(s.a)
    den = 1.0 - r * r * aa
    center = s.phase * s.a * (1.0 - r * r) / den
    radius = r * (1.0 - aa) / den
    return complex(center), float(radius)


def geodesic_point(z, w, t: float):
    """Point gamma(t) of the hyperbolic geodesic with rho(z, gamma(t)) = t rho(z, w)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("geodesic parameter must lie in [0, 1]")
    z = complex(z)
    w = complex(w)
    if abs(z) >= 1.0 or abs(w) >= 1.0:
        raise ValueError("geodesic endpoints must lie inside the disk")
    move = DiskAutomorphism.point_to_zero(z)   # involution: move(move(x)) = x
    wp = move(w)
    d = abs(wp)
    if d == 0.0:
        return z
    s = math.tanh(t * math.atanh(d))
    return complex(move(s * wp / d))
