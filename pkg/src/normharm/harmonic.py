"""Planar harmonic mappings f = h + conj(g) with h, g analytic on the disk.

The pair (h, g) is stored symbolically together with the exact derivatives
h', g'.  Pointwise quantities:

* ``density``    n_f(z) = (1 - |z|^2)(|h'(z)| + |g'(z)|) / (1 + |f(z)|^2),
  whose supremum over the disk is the normality norm of f;
* ``dilatation`` omega_f = g'/h';
* ``jacobian``   J_f = |h'|^2 - |g'|^2 (positive iff sense-preserving).

Transforms (affine target change, Koebe renormalization, precomposition with
an analytic self-map) are materialized symbolically so invariance identities
hold to rounding, plus a catalog of named example maps.
"""

from __future__ import annotations

import json
import math
import re

import numpy as np

from .expr import (
    Const,
    Div,
    EvalError,
    Expr,
    PoleError,
    Z,
    differentiate,
    evaluate,
    evaluate_masked,
    parse_expr,
    substitute,
    to_source,
)
from .geometry import DiskAutomorphism

ORIGIN_TOL = 1e-12


def _abs2(v):
    return np.real(v) ** 2 + np.imag(v) ** 2


class HarmonicMap:
    """Immutable harmonic map; derivatives are built here, never user-supplied."""

    __slots__ = ("name", "h", "g", "hp", "gp", "g_origin")

    def __init__(self, name: str, h: Expr, g: Expr):
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "hp", differentiate(h))
        object.__setattr__(self, "gp", differentiate(g))
        try:
            g0 = evaluate(g, 0j)
        except EvalError:
            g0 = None
        object.__setattr__(self, "g_origin", g0)

    def __setattr__(self, *_):
        raise AttributeError("HarmonicMap is immutable")

    @property
    def nonstandard_origin(self) -> bool:
        """True when g(0) != 0; accepted with this flag, never renormalized."""
        return self.g_origin is None or abs(self.g_origin) > ORIGIN_TOL

    def __repr__(self):
        return f"HarmonicMap({self.name!r}, h={to_source(self.h)}, g={to_source(self.g)})"


def eval_map(f: HarmonicMap, z):
    """f(z) = h(z) + conj(g(z)) at a scalar or array of points."""
    hv = evaluate(f.h, z)
    gv = evaluate(f.g, z)
    out = hv + np.conj(gv)
    return complex(out) if np.asarray(out).ndim == 0 else out


def map_grid(f: HarmonicMap, z):
    """Array version of eval_map with poles masked instead of raised."""
    hv, ok_h = evaluate_masked(f.h, z)
    gv, ok_g = evaluate_masked(f.g, z)
    vals = hv + np.conj(gv)
    return vals, ok_h & ok_g


def density_grid(f: HarmonicMap, z, one_minus_r2=None):
    """Pointwise normality density on an array, (values, ok) with poles masked.

    ``one_minus_r2`` supplies 1 - |z|^2 exactly when the caller knows the
    radius (grid scans near the boundary lose digits to cancellation in
    1 - |z|^2 otherwise).
    """
    z = np.asarray(z, dtype=np.complex128)
    hv, ok1 = evaluate_masked(f.h, z)
    gv, ok2 = evaluate_masked(f.g, z)
    pv, ok3 = evaluate_masked(f.hp, z)
    qv, ok4 = evaluate_masked(f.gp, z)
    if one_minus_r2 is None:
        one_minus_r2 = 1.0 - _abs2(z)
    fv = hv + np.conj(gv)
    lam = np.abs(pv) + np.abs(qv)
    with np.errstate(all="ignore"):
        dens = one_minus_r2 * lam / (1.0 + _abs2(fv))
    ok = ok1 & ok2 & ok3 & ok4 & np.isfinite(dens)
    dens = np.where(ok, dens, np.nan)
    return dens, ok


def density(f: HarmonicMap, z) -> float:
    """Normality density at one point strictly inside the disk."""
    zc = complex(z)
    if abs(zc) >= 1.0:
        raise ValueError("density requires |z| < 1")
    d, ok = density_grid(f, np.array([zc]))
    if not ok[0]:
        # re-run on the raising path to surface the specific failure
        for e in (f.h, f.g, f.hp, f.gp):
            evaluate(e, zc)
        raise PoleError("non-finite density value")
    return float(d[0])


def dilatation(f: HarmonicMap, z):
    """Second complex dilatation omega_f(z) = g'(z)/h'(z)."""
    pv = evaluate(f.hp, z)
    qv = evaluate(f.gp, z)
    bad = np.abs(pv) < 1e-300
    if np.any(bad):
        raise PoleError("h' vanishes at the evaluation point")
    out = qv / pv
    return complex(out) if np.asarray(out).ndim == 0 else out


def jacobian(f: HarmonicMap, z):
    """J_f(z) = |h'(z)|^2 - |g'(z)|^2."""
    pv = evaluate(f.hp, z)
    qv = evaluate(f.gp, z)
    out = _abs2(pv) - _abs2(qv)
    return float(out) if np.asarray(out).ndim == 0 else out


def reciprocal_density(f: HarmonicMap, z) -> float:
    """Density of 1/f at z, via the Wirtinger derivatives of the reciprocal.

    d_z(1/f) = -f_z / f^2 and d_zbar(1/f) = -f_zbar / f^2 with f_z = h' and
    f_zbar = conj(g'); pointwise this equals density(f, z) wherever f(z) != 0.
    """
    zc = complex(z)
    if abs(zc) >= 1.0:
        raise ValueError("density requires |z| < 1")
    fv = eval_map(f, zc)
    if abs(fv) < 1e-300:
        raise PoleError("f vanishes at the evaluation point")
    pv = evaluate(f.hp, zc)
    qv = evaluate(f.gp, zc)
    f2 = fv * fv
    dz = -pv / f2
    dzb = -np.conj(qv) / f2
    recip = 1.0 / fv
    return float((1.0 - _abs2(zc)) * (np.abs(dz) + np.abs(dzb)) / (1.0 + _abs2(recip)))


class AffineCoefficients:
    """Target-plane affine map w -> a w + b conj(w); requires |a| != |b|."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a, b = complex(a), complex(b)
        if abs(abs(a) - abs(b)) <= 1e-12:
            raise ValueError("affine coefficients need ||a| - |b|| > 1e-12")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, *_):
        raise AttributeError("AffineCoefficients is immutable")

    def __repr__(self):
        return f"AffineCoefficients(a={self.a}, b={self.b})"


def affine_transform(f: HarmonicMap, coeffs: AffineCoefficients) -> HarmonicMap:
    """A o f for A(w) = a w + b conj(w): analytic parts a h + b g and
    conj(a) g + conj(b) h, so eval equals a f + b conj(f) pointwise."""
    a, b = coeffs.a, coeffs.b
    H = Const(a) * f.h + Const(b) * f.g
    G = Const(a.conjugate()) * f.g + Const(b.conjugate()) * f.h
    return HarmonicMap(f"affine({f.name})", H, G)


def koebe_transform(f: HarmonicMap, xi) -> HarmonicMap:
    """Renormalized precomposition K_f with sigma(z) = (z + xi)/(1 + conj(xi) z).

    K_f = (f o sigma - f(xi)) / c with c = (1 - |xi|^2) h'(xi); the result
    fixes 0 and has analytic-part derivative 1 there.
    """
    xi = complex(xi)
    if abs(xi) >= 1.0:
        raise ValueError("koebe_transform requires |xi| < 1")
    hp_xi = evaluate(f.hp, xi)
    c = (1.0 - abs(xi) ** 2) * hp_xi
    if abs(c) < 1e-300:
        raise PoleError("h' vanishes at the Koebe base point")
    sigma = Div(_koebe_num(xi), _koebe_den(xi))
    h_xi = evaluate(f.h, xi)
    g_xi = evaluate(f.g, xi)
    H = (substitute(f.h, sigma) - Const(h_xi)) / Const(c)
    G = (substitute(f.g, sigma) - Const(g_xi)) / Const(c.conjugate())
    return HarmonicMap(f"koebe({f.name},{format_complex(xi)})", H, G)


def _koebe_num(xi):
    return Z + Const(xi)


def _koebe_den(xi):
    return Const(1.0) + Const(xi.conjugate()) * Z


def precompose(f: HarmonicMap, phi) -> HarmonicMap:
    """f o phi for an analytic self-map phi (an expression or automorphism),
    materialized symbolically so invariance checks carry no quadrature error."""
    if isinstance(phi, DiskAutomorphism):
        phi = phi.as_expr()
    if not isinstance(phi, Expr):
        raise TypeError("phi must be an expression or DiskAutomorphism")
    return HarmonicMap(
        f"compose({f.name})", substitute(f.h, phi), substitute(f.g, phi)
    )


# --- catalog ------------------------------------------------------------------

_PI = math.pi


def _catalog_L():
    h = parse_expr("0.5*z*(2-z)/(1-z)^2")
    g = parse_expr("-0.5*z^2/(1-z)^2")
    return h, g


def _catalog_E():
    h = parse_expr("z/(1-z)")
    g = parse_expr("-(z/(1-z) - log(1-z))")
    return h, g


def catalog(name: str, **params) -> HarmonicMap:
    """Named example maps.

    identity            h = z, g = 0
    scaled(c)           h = c z, g = 0
    L                   h = z(2-z)/(2(1-z)^2), g = -z^2/(2(1-z)^2)   (normal)
    E                   h = z/(1-z), g = -(z/(1-z) - log(1-z))       (not normal)
    E_n(n, log_sign)    h of E, g = -(1-1/n) * (z/(1-z) + log_sign*log(1-z));
                        log_sign=-1 (default) converges locally uniformly to E,
                        log_sign=+1 is the other sign variant
    arg_extremal(k)     h = g = -i(k/pi) log((1+z)/(1-z)); the map equals
                        (2k/pi) Arg((1+z)/(1-z)), the sharpness witness of the
                        4k/pi bound (|h'| = |g'|, so not sense-preserving)
    shear_koebe(w0)     h = z/(1-z)^2, g = w0 h (constant dilatation, |w0| < 1)
    """
    if name == "identity":
        return HarmonicMap("identity", Z, Const(0.0))
    if name == "scaled":
        c = complex(params.get("c", 1.0))
        return HarmonicMap(f"scaled({format_complex(c)})", Const(c) * Z, Const(0.0))
    if name == "L":
        return HarmonicMap("L", *_catalog_L())
    if name == "E":
        return HarmonicMap("E", *_catalog_E())
    if name == "E_n":
        n = params.get("n")
        if n is None or int(n) < 1:
            raise ValueError("E_n requires an integer parameter n >= 1")
        n = int(n)
        log_sign = int(params.get("log_sign", -1))
        if log_sign not in (-1, 1):
            raise ValueError("log_sign must be -1 or +1")
        base = parse_expr("z/(1-z) - log(1-z)" if log_sign < 0 else "z/(1-z) + log(1-z)")
        g = Const(-(1.0 - 1.0 / n)) * base
        tag = "" if log_sign < 0 else ",+"
        return HarmonicMap(f"E_n({n}{tag})", parse_expr("z/(1-z)"), g)
    if name == "arg_extremal":
        k = float(params.get("k", 1.0))
        if k <= 0:
            raise ValueError("arg_extremal requires k > 0")
        F = parse_expr("log((1+z)/(1-z))")
        half = Const(complex(0.0, -k / _PI)) * F
        return HarmonicMap(f"arg_extremal({_num_str(k)})", half, half)
    if name == "shear_koebe":
        w0 = complex(params.get("w0", 0.0))
        if abs(w0) >= 1.0:
            raise ValueError("shear_koebe requires |w0| < 1")
        h = parse_expr("z/(1-z)^2")
        # g' = w0 h' integrates in closed form to g = w0 h (both vanish at 0)
        return HarmonicMap(f"shear_koebe({format_complex(w0)})", h, Const(w0) * h)
    raise ValueError(f"unknown catalog map '{name}'")


CATALOG_NAMES = ("identity", "scaled", "L", "E", "E_n", "arg_extremal", "shear_koebe")


# --- map files and literals -----------------------------------------------------

def map_from_dict(data: dict) -> HarmonicMap:
    """Build a map from {"name": str, "h": expr, "g": expr}."""
    for key in ("name", "h", "g"):
        if key not in data:
            raise ValueError(f"map definition is missing the '{key}' field")
    return HarmonicMap(str(data["name"]), parse_expr(data["h"]), parse_expr(data["g"]))


def load_map_file(path: str) -> HarmonicMap:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("map file must contain a JSON object")
    return map_from_dict(data)


_BUILTIN_RE = re.compile(r"^([A-Za-z_]+)(?:\((.*)\))?$")


def resolve_map(spec: str) -> HarmonicMap:
    """Resolve "builtin:NAME", "builtin:NAME(arg[,arg])", or a file path."""
    if not spec.startswith("builtin:"):
        return load_map_file(spec)
    m = _BUILTIN_RE.match(spec[len("builtin:"):])
    if m is None:
        raise ValueError(f"malformed builtin map spec '{spec}'")
    name, argtext = m.group(1), m.group(2)
    args = [] if not argtext else [t.strip() for t in argtext.split(",")]
    if name in ("identity", "L", "E"):
        if args:
            raise ValueError(f"catalog map '{name}' takes no parameters")
        return catalog(name)
    if name == "scaled":
        return catalog("scaled", c=parse_complex_literal(args[0]) if args else 1.0)
    if name == "E_n":
        if not args:
            raise ValueError("E_n requires a parameter, e.g. builtin:E_n(4)")
        kwargs = {"n": int(args[0])}
        if len(args) > 1:
            kwargs["log_sign"] = 1 if args[1] in ("+", "+1", "1") else -1
        return catalog("E_n", **kwargs)
    if name == "arg_extremal":
        return catalog("arg_extremal", k=float(args[0]) if args else 1.0)
    if name == "shear_koebe":
        if not args:
            raise ValueError("shear_koebe requires a parameter, e.g. builtin:shear_koebe(0.5)")
        return catalog("shear_koebe", w0=parse_complex_literal(args[0]))
    raise ValueError(f"unknown catalog map '{name}'")


_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^\s*(?:(?P<re>{_NUM})(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)?"
    rf"(?P<i>i)?\s*$"
)


def parse_complex_literal(text: str) -> complex:
    """Parse "a+bi" literals: "0.3+0.4i", "-2", "0.5i", "i", "1-2i"."""
    m = _COMPLEX_RE.match(text)
    if m is None or (m.group("re") is None and m.group("i") is None):
        raise ValueError(f"malformed complex literal '{text}'")
    re_part, mid, tail_i = m.group("re"), m.group("im"), m.group("i")
    if tail_i is None:
        if mid is not None:
            raise ValueError(f"malformed complex literal '{text}'")
        return complex(float(re_part), 0.0)
    if re_part is None:        # bare "i"
        return complex(0.0, 1.0)
    if mid is None:            # "0.4i"
        return complex(0.0, float(re_part))
    return complex(float(re_part), float(mid))


def _num_str(x: float) -> str:
    return str(int(x)) if x == int(x) and abs(x) < 1e15 else repr(float(x))


def format_complex(v: complex) -> str:
    """Render in the "a+bi" literal form, e.g. 0.3+0.4i or -2+0i."""
    v = complex(v)
    sign = "+" if (v.imag >= 0 or math.isnan(v.imag)) else "-"
    return f"{_num_str(v.real)}{sign}{_num_str(abs(v.imag))}i"
