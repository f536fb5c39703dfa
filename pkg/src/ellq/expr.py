"""Expression trees for the meromorphic functions the algebras are built from.

Nodes are immutable and interned: structurally equal trees are the same
object, so substitution results share subtrees and evaluation memoizes by
identity.  ``tau`` and ``eta`` are symbolic leaves bound from
:class:`~ellq.elliptic.EllipticParams` at evaluation time.

Text grammar (precedence low to high)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := primary ('^' ['-'] INT)?
    primary := NUMBER | IMAG | IDENT | 'theta' '(' expr ')' | 'e2pi' '(' expr ')'
             | '(' NUMBER ('+'|'-') IMAG ')' | '(' expr ')'

Arguments of ``theta`` and ``e2pi`` must be affine in the variables.
"""

from __future__ import annotations

import re
import threading
import weakref
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

from .elliptic import EllipticParams, theta_value
from .errors import (ContextError, ExprSyntaxError, NearPoleError,
                     UnknownIdentifierError)

RESERVED = ("tau", "eta")
NEAR_POLE = 1e-14
TWO_PI_I = 2j * np.pi

_NAME_SPLIT = re.compile(r"(\d+)")


def name_key(name: str):
    """Sort key: ordinary variables in natural order, then tau, then eta."""
    if name in RESERVED:
        return (1, RESERVED.index(name), ())
    parts = tuple(int(p) if p.isdigit() else p for p in _NAME_SPLIT.split(name) if p)
    return (0, 0, tuple((0, p) if isinstance(p, int) else (1, p) for p in parts))


def _clean(c: complex) -> complex:
    c = complex(c)
    re_, im_ = c.real, c.imag
    if abs(re_) < 1e-300:
        re_ = 0.0
    if abs(im_) < 1e-300:
        im_ = 0.0
    return complex(re_, im_)


class AffineForm:
    """``sum_v coeff_v * v + const`` with ``tau``/``eta`` allowed as variables."""

    __slots__ = ("terms", "const", "_hash")

    def __init__(self, coefficients: Mapping[str, complex] | Iterable = (), const: complex = 0):
        items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
        acc: dict[str, complex] = {}
        for name, c in items:
            acc[name] = acc.get(name, 0) + complex(c)
        terms = tuple(sorted(((n, _clean(c)) for n, c in acc.items() if c != 0),
                             key=lambda t: name_key(t[0])))
        self.terms = terms
        self.const = _clean(const)
        self._hash = hash((terms, self.const))

    @classmethod
    def var(cls, name: str, coeff: complex = 1) -> "AffineForm":
        return cls({name: coeff})

    @classmethod
    def constant(cls, value: complex) -> "AffineForm":
        return cls((), value)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, AffineForm) and self._hash == other._hash
                and self.terms == other.terms and self.const == other.const)

    def __repr__(self):
        return f"AffineForm({format_affine(self)!r})"

    @property
    def coefficients(self) -> dict[str, complex]:
        return dict(self.terms)

    def coefficient(self, name: str) -> complex:
        for n, c in self.terms:
            if n == name:
                return c
        return 0j

    def variables(self) -> set[str]:
        return {n for n, _ in self.terms if n not in RESERVED}

    def symbols(self) -> set[str]:
        return {n for n, _ in self.terms}

    def is_constant(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if isinstance(other, AffineForm):
            return AffineForm(self.terms + other.terms, self.const + other.const)
        return AffineForm(self.terms, self.const + complex(other))

    __radd__ = __add__

    def __neg__(self):
        return AffineForm(((n, -c) for n, c in self.terms), -self.const)

    def __sub__(self, other):
        return self + (-other if isinstance(other, AffineForm) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        k = complex(k)
        return AffineForm(((n, c * k) for n, c in self.terms), self.const * k)

    __rmul__ = __mul__

    def substitute(self, mapping: Mapping[str, "AffineForm"]) -> "AffineForm":
        out = AffineForm((), self.const)
        kept = []
        for n, c in self.terms:
            if n in mapping:
                out = out + mapping[n] * c
            else:
                kept.append((n, c))
        return out + AffineForm(kept)

    def evaluate(self, assignment: Mapping, params: EllipticParams | None = None):
        total = self.const
        for n, c in self.terms:
            if n == "tau":
                val = assignment["tau"] if "tau" in assignment else _param(params, n)
            elif n == "eta":
                val = assignment["eta"] if "eta" in assignment else _param(params, n)
            else:
                try:
                    val = assignment[n]
                except KeyError:
                    raise ContextError(f"no value for variable {n!r}") from None
            total = total + c * val
        return total


def _param(params, name):
    if params is None:
        raise ContextError(f"symbol {name!r} needs EllipticParams")
    return getattr(params, name)


def as_affine(x) -> AffineForm:
    if isinstance(x, AffineForm):
        return x
    if isinstance(x, str):
        return AffineForm.var(x)
    if isinstance(x, Number):
        return AffineForm.constant(x)
    raise TypeError(f"cannot convert {x!r} to AffineForm")


# ---------------------------------------------------------------------------
# nodes

_INTERN: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()
_LOCK = threading.Lock()


class Expr:
    __slots__ = ("_hash", "__weakref__")
    kind = "expr"

    def _payload(self):  # pragma: no cover - abstract
        raise NotImplementedError

    @classmethod
    def _make(cls, payload):
        key = (cls, payload)
        with _LOCK:
            node = _INTERN.get(key)
            if node is None:
                node = object.__new__(cls)
                node._init(payload)
                node._hash = hash(key)
                _INTERN[key] = node
        return node

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<{type(self).__name__} {to_text(self)}>"

    def __str__(self):
        return to_text(self)

    def children(self) -> tuple:
        return ()

    # arithmetic sugar for builders
    def __add__(self, other):
        return Add(self, lift(other))

    def __radd__(self, other):
        return Add(lift(other), self)

    def __sub__(self, other):
        return Sub(self, lift(other))

    def __rsub__(self, other):
        return Sub(lift(other), self)

    def __mul__(self, other):
        return Mul(self, lift(other))

    def __rmul__(self, other):
        return Mul(lift(other), self)

    def __truediv__(self, other):
        return Div(self, lift(other))

    def __rtruediv__(self, other):
        return Div(lift(other), self)

    def __pow__(self, k: int):
        return IntPow(self, k)


class Const(Expr):
    __slots__ = ("value",)
    kind = "const"

    def __new__(cls, value):
        return cls._make(_clean(value))

    def _init(self, payload):
        self.value = payload


class Var(Expr):
    __slots__ = ("name",)
    kind = "var"

    def __new__(cls, name: str):
        return cls._make(str(name))

    def _init(self, payload):
        self.name = payload


class Theta(Expr):
    __slots__ = ("arg",)
    kind = "theta"

    def __new__(cls, arg):
        return cls._make(as_affine(arg))

    def _init(self, payload):
        self.arg = payload


class ExpTwoPiI(Expr):
    """``exp(2 pi i * arg)`` for an affine ``arg``."""

    __slots__ = ("arg",)
    kind = "e2pi"

    def __new__(cls, arg):
        return cls._make(as_affine(arg))

    def _init(self, payload):
        self.arg = payload


class Add(Expr):
    __slots__ = ("terms",)
    kind = "add"

    def __new__(cls, *terms):
        if len(terms) < 2:
            raise ValueError("Add needs at least two terms")
        return cls._make(tuple(terms))

    def _init(self, payload):
        self.terms = payload

    def children(self):
        return self.terms


class Sub(Expr):
    __slots__ = ("left", "right")
    kind = "sub"

    def __new__(cls, left, right):
        return cls._make((left, right))

    def _init(self, payload):
        self.left, self.right = payload

    def children(self):
        return (self.left, self.right)


class Mul(Expr):
    __slots__ = ("factors",)
    kind = "mul"

    def __new__(cls, *factors):
        if len(factors) < 2:
            raise ValueError("Mul needs at least two factors")
        return cls._make(tuple(factors))

    def _init(self, payload):
        self.factors = payload

    def children(self):
        return self.factors


class Div(Expr):
    __slots__ = ("num", "den")
    kind = "div"

    def __new__(cls, num, den):
        return cls._make((num, den))

    def _init(self, payload):
        self.num, self.den = payload

    def children(self):
        return (self.num, self.den)


class IntPow(Expr):
    __slots__ = ("base", "exponent")
    kind = "pow"

    def __new__(cls, base, exponent: int):
        if int(exponent) != exponent:
            raise ValueError("IntPow needs an integer exponent")
        return cls._make((base, int(exponent)))

    def _init(self, payload):
        self.base, self.exponent = payload

    def children(self):
        return (self.base,)


ONE = Const(1)
ZERO = Const(0)


def lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Number):
        return Const(x)
    if isinstance(x, str):
        return Var(x)
    raise TypeError(f"cannot lift {x!r} to Expr")


def add(*terms) -> Expr:
    """Sum without folding; empty sum is ``0`` and a single term is returned as is."""
    terms = [lift(t) for t in terms]
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(*terms)


def mul(*factors) -> Expr:
    factors = [lift(f) for f in factors if f is not ONE]
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    return Mul(*factors)


def ratio(num: Iterable, den: Iterable) -> Expr:
    """``prod(num) / prod(den)`` keeping the denominator syntactic."""
    num, den = list(num), list(den)
    top = mul(*num)
    if not den:
        return top
    return Div(top, mul(*den))


def affine_expr(form: AffineForm) -> Expr:
    parts = []
    for n, c in form.terms:
        parts.append(Var(n) if c == 1 else Mul(Const(c), Var(n)))
    if form.const != 0 or not parts:
        parts.append(Const(form.const))
    return add(*parts)


# ---------------------------------------------------------------------------
# traversal helpers


def walk(e: Expr):
    seen = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(node.children())


def free_symbols(e: Expr) -> set[str]:
    out: set[str] = set()
    for node in walk(e):
        if isinstance(node, Var):
            out.add(node.name)
        elif isinstance(node, (Theta, ExpTwoPiI)):
            out |= node.arg.symbols()
    return out


def variables(e: Expr) -> set[str]:
    return free_symbols(e) - set(RESERVED)


def node_count(e: Expr) -> int:
    return sum(1 for _ in walk(e))


def _canonical_divisor(form: AffineForm) -> AffineForm:
    # theta(A) and theta(-A) vanish on the same set
    lead = form.terms[0][1] if form.terms else form.const
    if (lead.real, lead.imag) < (0, 0):
        return -form
    return form


def _denominator_factors(e: Expr, sign: int, out: set):
    if isinstance(e, Theta):
        if sign < 0:
            out.add(_canonical_divisor(e.arg))
    elif isinstance(e, Mul):
        for f in e.factors:
            _denominator_factors(f, sign, out)
    elif isinstance(e, Div):
        _denominator_factors(e.num, sign, out)
        _denominator_factors(e.den, -sign, out)
    elif isinstance(e, IntPow):
        _denominator_factors(e.base, sign if e.exponent > 0 else -sign, out)


def pole_divisors(e: Expr) -> set[AffineForm]:
    """Affine forms ``A`` whose theta factors sit in a syntactic denominator.

    The pole set of ``e`` is contained in the union of ``{A in lattice}``.
    """
    out: set[AffineForm] = set()
    for node in walk(e):
        if isinstance(node, Div):
            _denominator_factors(node.den, -1, out)
        elif isinstance(node, IntPow) and node.exponent < 0:
            _denominator_factors(node.base, -1, out)
    return out


# ---------------------------------------------------------------------------
# substitution and evaluation


def substitute(e: Expr, mapping: Mapping[str, AffineForm | str | Number]) -> Expr:
    """Simultaneous affine substitution of variables (and of ``tau``/``eta``)."""
    mapping = {k: as_affine(v) for k, v in mapping.items()}
    if not mapping:
        return e
    keys = set(mapping)
    memo: dict[int, Expr] = {}

    def go(node: Expr) -> Expr:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if isinstance(node, Const):
            out = node
        elif isinstance(node, Var):
            out = affine_expr(mapping[node.name]) if node.name in keys else node
        elif isinstance(node, Theta):
            out = Theta(node.arg.substitute(mapping)) if node.arg.symbols() & keys else node
        elif isinstance(node, ExpTwoPiI):
            out = ExpTwoPiI(node.arg.substitute(mapping)) if node.arg.symbols() & keys else node
        elif isinstance(node, Add):
            out = Add(*[go(t) for t in node.terms])
        elif isinstance(node, Mul):
            out = Mul(*[go(t) for t in node.factors])
        elif isinstance(node, Sub):
            out = Sub(go(node.left), go(node.right))
        elif isinstance(node, Div):
            out = Div(go(node.num), go(node.den))
        elif isinstance(node, IntPow):
            out = IntPow(go(node.base), node.exponent)
        else:  # pragma: no cover
            raise TypeError(node)
        memo[id(node)] = out
        return out

    return go(e)


def evaluate(e: Expr, assignment: Mapping, params: EllipticParams, memo: dict | None = None):
    """Evaluate ``e``; assignment values may be scalars or equal-shape arrays."""
    memo = {} if memo is None else memo
    eta = params.eta
    eps = params.series_eps

    def affine(form: AffineForm):
        return form.evaluate(assignment, params)

    def go(node: Expr):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Const):
            val = node.value
        elif isinstance(node, Var):
            n = node.name
            if n in assignment:
                val = assignment[n]
            elif n in RESERVED:
                val = getattr(params, n)
            else:
                raise ContextError(f"no value for variable {n!r}")
        elif isinstance(node, Theta):
            val = theta_value(affine(node.arg), eta, eps)
        elif isinstance(node, ExpTwoPiI):
            val = np.exp(TWO_PI_I * affine(node.arg))
        elif isinstance(node, Add):
            val = go(node.terms[0])
            for t in node.terms[1:]:
                val = val + go(t)
        elif isinstance(node, Mul):
            val = go(node.factors[0])
            for f in node.factors[1:]:
                val = val * go(f)
        elif isinstance(node, Sub):
            val = go(node.left) - go(node.right)
        elif isinstance(node, Div):
            den = go(node.den)
            bad = np.abs(den) < NEAR_POLE
            if np.any(bad):
                raise NearPoleError("division by a near-zero value",
                                    indices=np.flatnonzero(np.atleast_1d(bad)))
            val = go(node.num) / den
        elif isinstance(node, IntPow):
            base = go(node.base)
            if node.exponent < 0:
                bad = np.abs(base) < NEAR_POLE
                if np.any(bad):
                    raise NearPoleError("negative power of a near-zero value",
                                        indices=np.flatnonzero(np.atleast_1d(bad)))
            val = base ** node.exponent
        else:  # pragma: no cover
            raise TypeError(node)
        memo[key] = val
        return val

    return go(e)


# ---------------------------------------------------------------------------
# printing


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def format_complex(c: complex) -> str:
    """Literal text for ``c``; complex values with both parts are parenthesized."""
    c = complex(c)
    if c.imag == 0:
        return _fmt_real(c.real)
    if c.real == 0:
        return _fmt_real(c.imag) + "i"
    sign = "+" if c.imag >= 0 or np.isnan(c.imag) else "-"
    return f"({_fmt_real(c.real)}{sign}{_fmt_real(abs(c.imag))}i)"


def format_affine(form: AffineForm) -> str:
    out = []
    for n, c in form.terms:
        if c == 1:
            piece, neg = n, False
        elif c == -1:
            piece, neg = n, True
        elif c.imag == 0:
            piece, neg = f"{_fmt_real(abs(c.real))}*{n}", c.real < 0
        else:
            piece, neg = f"{format_complex(c)}*{n}", False
        out.append((neg, piece))
    c = form.const
    if c != 0 or not out:
        if c.imag == 0:
            out.append((c.real < 0, _fmt_real(abs(c.real))))
        elif c.real == 0:
            out.append((c.imag < 0, _fmt_real(abs(c.imag)) + "i"))
        else:
            out.append((False, format_complex(c)))
    text = ("-" if out[0][0] else "") + out[0][1]
    for neg, piece in out[1:]:
        text += (" - " if neg else " + ") + piece
    return text


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 2, "pow": 4}


def _is_negative_literal(node) -> bool:
    return isinstance(node, Const) and (
        (node.value.imag == 0 and node.value.real < 0)
        or (node.value.real == 0 and node.value.imag < 0))


def to_text(e: Expr) -> str:
    def prec(node) -> int:
        if isinstance(node, Mul) and node.factors[0] is Const(-1):
            return _PREC["neg"]
        if _is_negative_literal(node):
            return _PREC["neg"]
        return _PREC.get(node.kind, 5)

    def wrap(node, minimum: int) -> str:
        s = go(node)
        return f"({s})" if prec(node) < minimum else s

    def go(node) -> str:
        if isinstance(node, Const):
            return format_complex(node.value)
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Theta):
            return f"theta({format_affine(node.arg)})"
        if isinstance(node, ExpTwoPiI):
            return f"e2pi({format_affine(node.arg)})"
        if isinstance(node, Add):
            return " + ".join([wrap(node.terms[0], 1)] + [wrap(t, 2) for t in node.terms[1:]])
        if isinstance(node, Sub):
            return f"{wrap(node.left, 1)} - {wrap(node.right, 2)}"
        if isinstance(node, Mul):
            fs = node.factors
            if fs[0] is Const(-1):
                return "-" + " * ".join(wrap(f, 3) for f in fs[1:])
            return " * ".join([wrap(fs[0], 2)] + [wrap(f, 3) for f in fs[1:]])
        if isinstance(node, Div):
            return f"{wrap(node.num, 2)} / {wrap(node.den, 3)}"
        if isinstance(node, IntPow):
            k = node.exponent
            return f"{wrap(node.base, 5)}^{k}"
        raise TypeError(node)  # pragma: no cover

    return go(e)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<imag>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?[ij](?![A-Za-z0-9_]))
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise _syntax(text, pos, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def _syntax(text: str, pos: int, msg: str) -> ExprSyntaxError:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return ExprSyntaxError(msg, line, col)


def to_affine(e: Expr) -> AffineForm | None:
    """Affine form equal to ``e`` if ``e`` is syntactically affine, else None."""
    if isinstance(e, Const):
        return AffineForm.constant(e.value)
    if isinstance(e, Var):
        return AffineForm.var(e.name)
    if isinstance(e, Add):
        out = AffineForm()
        for t in e.terms:
            a = to_affine(t)
            if a is None:
                return None
            out = out + a
        return out
    if isinstance(e, Sub):
        a, b = to_affine(e.left), to_affine(e.right)
        return None if a is None or b is None else a - b
    if isinstance(e, Mul):
        out = None
        scale = 1 + 0j
        for f in e.factors:
            a = to_affine(f)
            if a is None:
                return None
            if a.is_constant():
                scale *= a.const
            elif out is None:
                out = a
            else:
                return None
        return AffineForm.constant(scale) if out is None else out * scale
    if isinstance(e, Div):
        a, b = to_affine(e.num), to_affine(e.den)
        if a is None or b is None or not b.is_constant() or b.const == 0:
            return None
        return a * (1 / b.const)
    return None


class _Parser:
    def __init__(self, text: str, context):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.context = None if context is None else set(context)

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return _syntax(self.text, tok.pos, msg)

    def take(self, text=None, kind=None):
        tok = self.tok
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = text or kind
            got = "end of input" if tok.kind == "end" else repr(tok.text)
            raise self.error(f"expected {want!r}, got {got}")
        self.i += 1
        return tok

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self):
        left = self.term()
        while self.tok.text in ("+", "-"):
            op = self.take().text
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self):
        left = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.take().text
            right = self.unary()
            if op == "*":
                left = Mul(left, right)
            else:
                left = Div(left, right)
        return left

    def unary(self):
        if self.tok.text == "-":
            self.take()
            if self.tok.kind in ("num", "imag"):
                lit = self.literal()
                if self.tok.text == "^":
                    # -2^2 means -(2^2)
                    return Mul(Const(-1), self.power_tail(Const(lit)))
                return Const(-lit)
            operand = self.unary()
            return Mul(Const(-1), operand)
        return self.power()

    def literal(self) -> complex:
        tok = self.take()
        if tok.kind == "num":
            return complex(float(tok.text))
        return complex(0, float(tok.text[:-1]))

    def power(self):
        return self.power_tail(self.primary())

    def power_tail(self, base):
        if self.tok.text == "^":
            self.take()
            sign = 1
            if self.tok.text == "-":
                self.take()
                sign = -1
            tok = self.tok
            if tok.kind != "num" or not re.fullmatch(r"\d+", tok.text):
                raise self.error("exponent must be an integer")
            self.take()
            return IntPow(base, sign * int(tok.text))
        return base

    def _complex_literal_ahead(self) -> bool:
        t = self.toks[self.i:self.i + 6]
        kinds = [x.kind for x in t]
        texts = [x.text for x in t]
        if kinds[:5] == ["op", "num", "op", "imag", "op"] and texts[0] == "(" and texts[2] in "+-" \
                and texts[4] == ")":
            return True
        if len(t) == 6 and texts[0] == "(" and texts[1] == "-" and kinds[2] == "num" \
                and texts[3] in ("+", "-") and kinds[4] == "imag" and texts[5] == ")":
            return True
        return False

    def primary(self):
        tok = self.tok
        if tok.kind in ("num", "imag"):
            return Const(self.literal())
        if tok.kind == "ident":
            self.take()
            if tok.text in ("theta", "e2pi"):
                self.take("(")
                inner_start = self.tok
                inner = self.expr()
                self.take(")")
                form = to_affine(inner)
                if form is None:
                    raise self.error(f"argument of {tok.text} must be affine", inner_start)
                return Theta(form) if tok.text == "theta" else ExpTwoPiI(form)
            if self.tok.text == "(":
                raise self.error(f"unknown function {tok.text!r}", tok)
            if tok.text not in RESERVED and self.context is not None and tok.text not in self.context:
                raise UnknownIdentifierError(tok.text, self.context)
            return Var(tok.text)
        if tok.text == "(":
            if self._complex_literal_ahead():
                self.take("(")
                neg = False
                if self.tok.text == "-":
                    self.take()
                    neg = True
                re_ = self.literal().real
                sign = self.take().text
                im_ = self.literal().imag
                self.take(")")
                return Const(complex(-re_ if neg else re_, im_ if sign == "+" else -im_))
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if tok.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse(text: str, context: Iterable[str] | None = None) -> Expr:
    """Parse expression text; ``context`` restricts the admissible identifiers."""
    return _Parser(text, context).parse()
