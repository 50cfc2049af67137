"""Expression trees for closed-form analytic functions of one complex variable.

A small language (complex constants, the variable ``z``, ``+ - * /``, integer
powers, ``log``, ``exp``) with a recursive-descent parser, principal-branch
evaluation on scalars or numpy arrays, exact symbolic differentiation, and
substitution.  Trees are immutable; evaluation is pure and reentrant.

Evaluation always runs through numpy (scalars become 1-element arrays), so a
scalar evaluation is bitwise identical to the matching array entry.
"""

from __future__ import annotations

import re

import numpy as np

POLE_EPS = 1e-300   # |denominator| below this is flagged as a pole
MAX_EXPONENT = 64   # cap on |n| in u^n

_ONE = np.complex128(1.0)


class ExprError(Exception):
    """Base class for expression failures."""


class ParseError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class EvalError(ExprError):
    """Evaluation failed at some input point."""


class PoleError(EvalError):
    pass


class BranchCutError(EvalError):
    pass


class _Mask:
    """Collects per-point failures during masked evaluation."""

    __slots__ = ("bad",)

    def __init__(self, shape):
        self.bad = np.zeros(shape, dtype=bool)

    def flag(self, where):
        self.bad = self.bad | where


def _coerce(value) -> "Expr":
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float, complex)):
        return Const(complex(value))
    raise TypeError(f"cannot use {type(value).__name__} as an expression")


class Expr:
    """Immutable expression node. Arithmetic operators build new trees."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, _coerce(other))

    def __radd__(self, other):
        return Add(_coerce(other), self)

    def __sub__(self, other):
        return Sub(self, _coerce(other))

    def __rsub__(self, other):
        return Sub(_coerce(other), self)

    def __mul__(self, other):
        return Mul(self, _coerce(other))

    def __rmul__(self, other):
        return Mul(_coerce(other), self)

    def __truediv__(self, other):
        return Div(self, _coerce(other))

    def __rtruediv__(self, other):
        return Div(_coerce(other), self)

    def __pow__(self, n):
        return Pow(self, n)

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return self._fmt()[0]

    def __repr__(self):
        return f"<{type(self).__name__}: {self}>"


def _fmt_num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


class Const(Expr):
    __slots__ = ("value", "_np")

    def __init__(self, value):
        value = complex(value)
        if not (np.isfinite(value.real) and np.isfinite(value.imag)):
            raise ExprError("constants must be finite")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "_np", np.complex128(value))

    def __setattr__(self, *_):
        raise AttributeError("expressions are immutable")

    def _ev(self, z, mask):
        return self._np

    def _d(self):
        return Const(0.0)

    def _subst(self, repl):
        return self

    def _fmt(self):
        re_, im = self.value.real, self.value.imag
        if im == 0.0:
            s = _fmt_num(re_)
            return s, (3 if s.startswith("-") else 5)
        if re_ == 0.0:
            if im == 1.0:
                return "i", 5
            if im == -1.0:
                return "-i", 3
            return f"{_fmt_num(im)}*i", 2
        sign = "+" if im > 0 else "-"
        return f"({_fmt_num(re_)}{sign}{_fmt_num(abs(im))}*i)", 5


class Var(Expr):
    __slots__ = ()

    def _ev(self, z, mask):
        return z

    def _d(self):
        return Const(1.0)

    def _subst(self, repl):
        return repl

    def _fmt(self):
        return "z", 5


Z = Var()


class Neg(Expr):
    __slots__ = ("u",)

    def __init__(self, u):
        object.__setattr__(self, "u", _coerce(u))

    def __setattr__(self, *_):
        raise AttributeError("expressions are immutable")

    def _ev(self, z, mask):
        return -self.u._ev(z, mask)

    def _d(self):
        return Neg(self.u._d())

    def _subst(self, repl):
        return Neg(self.u._subst(repl))

    def _fmt(self):
        s, p = self.u._fmt()
        if p < 3:
            s = f"({s})"
        return f"-{s}", 3


class _Binary(Expr):
    __slots__ = ("u", "v")
    _prec = 0
    _sym = "?"
    _strict_right = False

    def __init__(self, u, v):
        object.__setattr__(self, "u", _coerce(u))
        object.__setattr__(self, "v", _coerce(v))

    def __setattr__(self, *_):
        raise AttributeError("expressions are immutable")

    def _subst(self, repl):
        return type(self)(self.u._subst(repl), self.v._subst(repl))

    def _fmt(self):
        ls, lp = self.u._fmt()
        rs, rp = self.v._fmt()
        if lp < self._prec:
            ls = f"({ls})"
        if rp < self._prec or (rp == self._prec and self._strict_right):
            rs = f"({rs})"
        return f"{ls}{self._sym}{rs}", self._prec


class Add(_Binary):
    __slots__ = ()
    _prec, _sym = 1, "+"

    def _ev(self, z, mask):
        return self.u._ev(z, mask) + self.v._ev(z, mask)

    def _d(self):
        return Add(self.u._d(), self.v._d())


class Sub(_Binary):
    __slots__ = ()
    _prec, _sym, _strict_right = 1, "-", True

    def _ev(self, z, mask):
        return self.u._ev(z, mask) - self.v._ev(z, mask)

    def _d(self):
        return Sub(self.u._d(), self.v._d())


class Mul(_Binary):
    __slots__ = ()
    _prec, _sym = 2, "*"

    def _ev(self, z, mask):
        return self.u._ev(z, mask) * self.v._ev(z, mask)

    def _d(self):
        return Add(Mul(self.u._d(), self.v), Mul(self.u, self.v._d()))


class Div(_Binary):
    __slots__ = ()
    _prec, _sym, _strict_right = 2, "/", True

    def _ev(self, z, mask):
        num = self.u._ev(z, mask)
        den = self.v._ev(z, mask)
        bad = np.abs(den) < POLE_EPS
        if np.any(bad):
            if mask is None:
                raise PoleError(f"denominator underflow in {self}")
            mask.flag(np.broadcast_to(bad, z.shape))
            den = np.where(bad, _ONE, den)
        return num / den

    def _d(self):
        num = Sub(Mul(self.u._d(), self.v), Mul(self.u, self.v._d()))
        return Div(num, Pow(self.v, 2))


def _ipow(b, n):
    # binary exponentiation, n >= 1; keeps real inputs exactly real
    result = None
    while n:
        if n & 1:
            result = b if result is None else result * b
        n >>= 1
        if n:
            b = b * b
    return result


class Pow(Expr):
    __slots__ = ("u", "n")

    def __init__(self, u, n):
        if not isinstance(n, int) or isinstance(n, bool):
            raise ExprError("power exponent must be an integer")
        if abs(n) > MAX_EXPONENT:
            raise ExprError(f"exponent overflow: |{n}| > {MAX_EXPONENT}")
        object.__setattr__(self, "u", _coerce(u))
        object.__setattr__(self, "n", n)

    def __setattr__(self, *_):
        raise AttributeError("expressions are immutable")

    def _ev(self, z, mask):
        if self.n == 0:
            return _ONE
        base = self.u._ev(z, mask)
        p = _ipow(base, abs(self.n))
        if self.n > 0:
            return p
        bad = np.abs(p) < POLE_EPS
        if np.any(bad):
            if mask is None:
                raise PoleError(f"denominator underflow in {self}")
            mask.flag(np.broadcast_to(bad, z.shape))
            p = np.where(bad, _ONE, p)
        return _ONE / p

    def _d(self):
        if self.n == 0:
            return Const(0.0)
        if self.n >= 1:
            factor = Mul(Const(self.n), Pow(self.u, self.n - 1))
        else:
            # u^(n-1) written as u^n / u so the exponent cap is never exceeded
            factor = Mul(Const(self.n), Div(self, self.u))
        return Mul(factor, self.u._d())

    def _subst(self, repl):
        return Pow(self.u._subst(repl), self.n)

    def _fmt(self):
        s, p = self.u._fmt()
        if p < 5:
            s = f"({s})"
        return f"{s}^{self.n}", 4


class Log(Expr):
    __slots__ = ("u",)

    def __init__(self, u):
        object.__setattr__(self, "u", _coerce(u))

    def __setattr__(self, *_):
        raise AttributeError("expressions are immutable")

    def _ev(self, z, mask):
        arg = self.u._ev(z, mask)
        oncut = (np.real(arg) <= 0.0) & (np.imag(arg) == 0.0)
        if np.any(oncut):
            if mask is None:
                raise BranchCutError(
                    f"log argument on the closed negative real axis in {self}"
                )
            mask.flag(np.broadcast_to(oncut, z.shape))
            arg = np.where(oncut, _ONE, arg)
        return np.log(arg)

    def _d(self):
        return Div(self.u._d(), self.u)

    def _subst(self, repl):
        return Log(self.u._subst(repl))

    def _fmt(self):
        return f"log({self.u._fmt()[0]})", 5


class Exp(Expr):
    __slots__ = ("u",)

    def __init__(self, u):
        object.__setattr__(self, "u", _coerce(u))

    def __setattr__(self, *_):
        raise AttributeError("expressions are immutable")

    def _ev(self, z, mask):
        return np.exp(self.u._ev(z, mask))

    def _d(self):
        return Mul(self, self.u._d())

    def _subst(self, repl):
        return Exp(self.u._subst(repl))

    def _fmt(self):
        return f"exp({self.u._fmt()[0]})", 5


def differentiate(e: Expr) -> Expr:
    """Exact symbolic derivative d/dz of the tree (no simplification)."""
    return e._d()


def substitute(e: Expr, replacement: Expr) -> Expr:
    """New tree with every occurrence of the variable replaced."""
    return e._subst(_coerce(replacement))


def to_source(e: Expr) -> str:
    """Render the tree in the input grammar; parse(to_source(e)) round-trips."""
    return e._fmt()[0]


def evaluate(e: Expr, z):
    """Evaluate at a complex scalar or numpy array of points.

    Log is the principal branch; an argument on the closed negative real axis
    raises ``BranchCutError``.  A division whose denominator has modulus below
    1e-300 raises ``PoleError``.
    """
    zz = np.asarray(z, dtype=np.complex128)
    if zz.ndim == 0:
        pts = zz.reshape(1)
        with np.errstate(all="ignore"):
            out = e._ev(pts, None)
        return complex(np.broadcast_to(np.asarray(out, np.complex128), (1,))[0])
    with np.errstate(all="ignore"):
        out = e._ev(zz, None)
    return np.array(np.broadcast_to(np.asarray(out, np.complex128), zz.shape))


def evaluate_masked(e: Expr, z):
    """Array evaluation where poles and branch-cut hits are masked, not raised.

    Returns ``(values, ok)``; entries with ``ok`` False carry junk values and
    must be ignored by the caller.
    """
    pts = np.asarray(z, dtype=np.complex128)
    squeeze = pts.ndim == 0
    if squeeze:
        pts = pts.reshape(1)
    mask = _Mask(pts.shape)
    with np.errstate(all="ignore"):
        out = e._ev(pts, mask)
    vals = np.array(np.broadcast_to(np.asarray(out, np.complex128), pts.shape))
    ok = ~mask.bad
    if squeeze:
        return complex(vals[0]), bool(ok[0])
    return vals, ok


# --- parser -----------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]+)|(?P<op>\S)"
)
_KNOWN_NAMES = {"z", "i", "log", "exp"}


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - \S matches any non-space
            raise ParseError("unrecognized input", pos)
        if m.lastgroup == "name" and m.group() not in _KNOWN_NAMES:
            raise ParseError(f"unknown identifier '{m.group()}'", pos)
        tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, off = self.take()
        if kind != "op" or text != op:
            raise ParseError(f"expected '{op}'", off)

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.take()
                rhs = self.term()
                node = Add(node, rhs) if text == "+" else Sub(node, rhs)
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.take()
                rhs = self.factor()
                node = Mul(node, rhs) if text == "*" else Div(node, rhs)
            else:
                return node

    def factor(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.take()
            sign = 1
            kind, text, off = self.peek()
            if kind == "op" and text in "+-":
                self.take()
                sign = -1 if text == "-" else 1
            kind, text, off = self.take()
            if kind != "num" or not text.isdigit():
                raise ParseError("integer exponent expected after '^'", off)
            n = sign * int(text)
            if abs(n) > MAX_EXPONENT:
                raise ParseError(f"exponent overflow: |{n}| > {MAX_EXPONENT}", off)
            return Pow(base, n)
        return base

    def atom(self) -> Expr:
        kind, text, off = self.take()
        if kind == "num":
            return Const(float(text))
        if kind == "name":
            if text == "z":
                return Z
            if text == "i":
                return Const(1j)
            self.expect_op("(")
            inner = self.expr()
            self.expect_op(")")
            return Log(inner) if text == "log" else Exp(inner)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected {'end of input' if kind == 'end' else text!r}", off)


def parse_expr(text: str) -> Expr:
    """Parse the grammar: sums of products of signed powers of atoms."""
    parser = _Parser(text)
    node = parser.expr()
    kind, text_, off = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {text_!r}", off)
    return node
