"""Difference-operator algebra generated by ``e_{a,i}^{+-1}`` over functions of
``y_{a,i}`` and ``u_j``, with normal ordering and the homomorphism ``x``.

Relations::

    e_a e_b = R_ab e_b e_a,
    R_ab = -e(y_b - y_a) theta(y_a - y_b - (d_i,d_j) tau) / theta(y_b - y_a - (d_i,d_j) tau)
    e_a phi(y, u) = phi(y_a + (d_i,d_i) tau, u_j - 2 (d_i,d_j) tau) e_a

where ``a = (alpha, i)``, ``b = (beta, j)`` and ``e(z) = exp(2 pi i z)``.
Normal form orders generators by colour ``i`` then by ``alpha``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

from .elliptic import EllipticParams, residual
from .errors import DeskScaleError, RankMismatchError
from .expr import (AffineForm, Const, Expr, ExpTwoPiI, ONE, Theta, ZERO, add, evaluate, mul,
                   pole_divisors, ratio, substitute, to_text, variables)
from .report import CheckResult
from .roots import Grade, RootData, u_name, x_name, y_name
from .sampling import admissible_points, divisors_of
from .star import GradedElement, star

TAU = AffineForm.var("tau")
MAX_EXPONENT = 16


class OperatorAlgebra:
    """Generator bookkeeping for fixed ``(roots, p)``."""

    def __init__(self, roots: RootData, p: Sequence[int]):
        p = tuple(int(v) for v in p)
        if len(p) != roots.rank:
            raise RankMismatchError(f"p={p} does not match rank {roots.rank}")
        self.roots = roots
        self.p = p
        self.gens = [(a, i) for i in range(roots.rank) for a in range(1, p[i] + 1)]
        self.index = {g: k for k, g in enumerate(self.gens)}
        self._shift_cache: dict = {}
        self._swap_cache: dict = {}

    def __eq__(self, other):
        return isinstance(other, OperatorAlgebra) and (self.roots, self.p) == (other.roots, other.p)

    def __hash__(self):
        return hash((self.roots, self.p))

    @property
    def size(self) -> int:
        return len(self.gens)

    def variables(self) -> list[str]:
        return [y_name(a, i + 1) for a, i in self.gens] + [u_name(i + 1) for i in range(self.roots.rank)]

    def degree(self, exps: Sequence[int]) -> tuple:
        deg = [0] * self.roots.rank
        for (a, i), k in zip(self.gens, exps):
            deg[i] += k
        return tuple(deg)

    def zero_exps(self) -> tuple:
        return (0,) * self.size

    def unit(self, a: int, i: int, k: int = 1) -> tuple:
        e = [0] * self.size
        e[self.index[(a, i)]] = k
        return tuple(e)

    # coefficient shifts -------------------------------------------------------

    def shift_map(self, exps: Sequence[int]) -> dict:
        """Substitution realising ``e^exps phi = phi^[exps] e^exps``."""
        exps = tuple(exps)
        hit = self._shift_cache.get(exps)
        if hit is not None:
            return hit
        g = self.roots.gram
        h = self.roots.rank
        mapping = {}
        ushift = [0.0] * h
        for (a, i), k in zip(self.gens, exps):
            if not k:
                continue
            mapping[y_name(a, i + 1)] = AffineForm.var(y_name(a, i + 1)) + TAU * (k * g[i][i])
            for j in range(h):
                ushift[j] -= 2 * k * g[i][j]
        for j in range(h):
            if ushift[j]:
                mapping[u_name(j + 1)] = AffineForm.var(u_name(j + 1)) + TAU * ushift[j]
        self._shift_cache[exps] = mapping
        return mapping

    def shift(self, coeff: Expr, exps: Sequence[int]) -> Expr:
        m = self.shift_map(exps)
        return substitute(coeff, m) if m else coeff

    # exchange factors ---------------------------------------------------------

    def exchange(self, a: int, b: int) -> Expr:
        """``R_ab`` for generator indices ``a, b``."""
        (al, i), (be, j) = self.gens[a], self.gens[b]
        ya, yb = AffineForm.var(y_name(al, i + 1)), AffineForm.var(y_name(be, j + 1))
        c = self.roots.gram[i][j]
        return mul(Const(-1), ExpTwoPiI(yb - ya), ratio([Theta(ya - yb - TAU * c)],
                                                         [Theta(yb - ya - TAU * c)]))

    def swap_factor(self, a: int, s: int, b: int, t: int) -> Expr:
        """Coefficient ``F`` with ``e_a^s e_b^t = F e_b^t e_a^s`` for signs ``s, t``."""
        key = (a, s, b, t)
        hit = self._swap_cache.get(key)
        if hit is not None:
            return hit
        ea, eb = [0] * self.size, [0] * self.size
        ea[a], eb[b] = -1, -1
        if s > 0 and t > 0:
            out = self.exchange(a, b)
        elif s < 0 and t > 0:
            out = ratio([ONE], [self.shift(self.exchange(a, b), ea)])
        elif s > 0 and t < 0:
            out = self.shift(self.exchange(b, a), eb)
        else:
            both = [x + y for x, y in zip(ea, eb)]
            out = self.shift(ratio([ONE], [self.exchange(b, a)]), both)
        self._swap_cache[key] = out
        return out

    def reorder(self, left: Sequence[int], right: Sequence[int]) -> Expr:
        """``F`` with ``e^left e^right = F e^(left + right)`` (normal-ordered monomials)."""
        word = []
        for g, k in enumerate(left):
            word += [(g, 1 if k > 0 else -1)] * abs(k)
        factors = []
        for g, k in enumerate(right):
            for _ in range(abs(k)):
                letter = (g, 1 if k > 0 else -1)
                pos = len(word)
                word.append(letter)
                while pos > 0:
                    prev = word[pos - 1]
                    if prev[0] < letter[0]:
                        break
                    if prev[0] == letter[0]:
                        if prev[1] != letter[1]:
                            del word[pos - 1:pos + 1]
                        break
                    prefix = [0] * self.size
                    for gg, ss in word[:pos - 1]:
                        prefix[gg] += ss
                    f = self.swap_factor(prev[0], prev[1], letter[0], letter[1])
                    factors.append(self.shift(f, prefix))
                    word[pos - 1], word[pos] = letter, prev
                    pos -= 1
        return mul(*factors)


@dataclass(frozen=True)
class OperatorElement:
    """Finite sum ``sum coeff(y, u) * e^exps`` in normal form."""

    algebra: OperatorAlgebra
    terms: tuple  # sorted tuple of (exps, coeff)

    @classmethod
    def from_dict(cls, algebra: OperatorAlgebra, terms: dict) -> "OperatorElement":
        for exps in terms:
            if any(abs(k) > MAX_EXPONENT for k in exps):
                raise DeskScaleError(f"exponent beyond {MAX_EXPONENT} in {exps}")
        return cls(algebra, tuple(sorted(terms.items(), key=lambda t: t[0])))

    @classmethod
    def scalar(cls, algebra: OperatorAlgebra, coeff: Expr) -> "OperatorElement":
        return cls.from_dict(algebra, {algebra.zero_exps(): coeff})

    @classmethod
    def generator(cls, algebra: OperatorAlgebra, a: int, i: int, k: int = 1) -> "OperatorElement":
        """``e_{a,i}^k`` with 1-based ``a`` and 0-based colour ``i``."""
        return cls.from_dict(algebra, {algebra.unit(a, i, k): ONE})

    @property
    def support(self) -> list[tuple]:
        return [e for e, _ in self.terms]

    def as_dict(self) -> dict:
        return dict(self.terms)

    def degrees(self) -> set:
        return {self.algebra.degree(e) for e, _ in self.terms}

    def map_coefficients(self, fn) -> "OperatorElement":
        return OperatorElement(self.algebra, tuple((e, fn(c)) for e, c in self.terms))

    def __mul__(self, other: "OperatorElement") -> "OperatorElement":
        return op_multiply(self, other)

    def __add__(self, other: "OperatorElement") -> "OperatorElement":
        acc: dict = {}
        for e, c in self.terms + other.terms:
            acc.setdefault(e, []).append(c)
        return OperatorElement.from_dict(self.algebra, {e: add(*cs) for e, cs in acc.items()})

    def text(self) -> str:
        return format_operator(self)

    def __str__(self):
        return self.text()


def format_operator(A: OperatorElement) -> str:
    """Text form: ``(coeff) * e_a_i^k * ...`` terms joined by `` + ``."""
    parts = []
    for exps, c in A.terms:
        mono = [f"e_{a}_{i + 1}^{k}" for (a, i), k in zip(A.algebra.gens, exps) if k]
        parts.append(" * ".join([f"({to_text(c)})"] + mono))
    return " + ".join(parts) if parts else "0"


def op_multiply(A: OperatorElement, B: OperatorElement) -> OperatorElement:
    if A.algebra != B.algebra:
        raise RankMismatchError("operator elements over different algebras")
    alg = A.algebra
    acc: dict = {}
    for ea, ca in A.terms:
        for eb, cb in B.terms:
            exps = tuple(x + y for x, y in zip(ea, eb))
            coeff = mul(ca, alg.shift(cb, ea), alg.reorder(ea, eb))
            acc.setdefault(exps, []).append(coeff)
    return OperatorElement.from_dict(alg, {e: add(*cs) for e, cs in acc.items()})


def compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def x_map(f: GradedElement, algebra: OperatorAlgebra) -> OperatorElement:
    """Image of ``f`` in the operator algebra.

    The coefficient of ``prod e_{a,i}^{phi_{a,i}}`` is ``f`` evaluated at the
    progressions ``y_{a,i} + mu (d_i,d_i) tau`` times the product of
    ``theta(A) / theta(A - (d_i,d_j) tau)``, ``A = y_{a,i} + mu d_ii tau -
    y_{b,j} - nu d_jj tau``, over ordered index pairs.
    """
    roots = algebra.roots
    f.grade.check(roots)
    g = roots.gram
    h = roots.rank
    per_colour = [list(compositions(f.grade[i], algebra.p[i])) for i in range(h)]
    if any(not c for c in per_colour):
        return OperatorElement.from_dict(algebra, {})
    terms = {}
    for choice in iproduct(*per_colour):
        phi = {(a, i): choice[i][a - 1] for (a, i) in algebra.gens}
        mapping = {}
        slots = []  # (colour, alpha, mu) in order
        for i in range(h):
            k = 1
            for a in range(1, algebra.p[i] + 1):
                for mu in range(phi[(a, i)]):
                    form = AffineForm.var(y_name(a, i + 1)) + TAU * (mu * g[i][i])
                    mapping[x_name(k, i + 1)] = form
                    slots.append((i, a, mu, form))
                    k += 1
        num, den = [], []
        for s1 in range(len(slots)):
            for s2 in range(s1 + 1, len(slots)):
                i, a, mu, fa = slots[s1]
                j, b, nu, fb = slots[s2]
                if g[i][j] == 0:
                    continue
                arg = fa - fb
                num.append(Theta(arg))
                den.append(Theta(arg - TAU * g[i][j]))
        body = substitute(f.body, mapping)
        coeff = mul(body, ratio(num, den)) if num else body
        exps = tuple(phi[gen] for gen in algebra.gens)
        terms[exps] = coeff
    return OperatorElement.from_dict(algebra, terms)


# ---------------------------------------------------------------------------
# comparison


def compare_operators(A: OperatorElement, B: OperatorElement, params: EllipticParams,
                      rng: np.random.Generator, count: int | None = None,
                      name: str = "operators", anchor: str = "") -> CheckResult:
    """Supports compared exactly, coefficients by sampling.

    A term present on one side only counts as a mismatch unless its
    coefficient vanishes numerically.
    """
    t0 = time.perf_counter()
    da, db = A.as_dict(), B.as_dict()
    keys = sorted(set(da) | set(db))
    exprs = [c for c in list(da.values()) + list(db.values())]
    names = A.algebra.variables()
    pts = admissible_points(names, params, rng, count, exprs=exprs)
    npts = len(pts[names[0]])
    worst = 0.0
    missing = []
    for k in keys:
        va = np.broadcast_to(evaluate(da.get(k, ZERO), pts, params), (npts,))
        vb = np.broadcast_to(evaluate(db.get(k, ZERO), pts, params), (npts,))
        r = float(np.max(residual(va, vb)))
        if (k in da) != (k in db):
            missing.append(list(k))
        worst = max(worst, r)
    return CheckResult(name, worst, params.tol, npts, anchor=anchor,
                       detail={"terms": len(keys), "one_sided_terms": missing},
                       wall_time=time.perf_counter() - t0)


def homomorphism_check(f: GradedElement, g: GradedElement, algebra: OperatorAlgebra,
                       params: EllipticParams, rng=None, count=None) -> CheckResult:
    """``x(f * g)`` against ``x(f) x(g)``."""
    rng = np.random.default_rng(0) if rng is None else rng
    left = x_map(star(f, g, algebra.roots), algebra)
    right = op_multiply(x_map(f, algebra), x_map(g, algebra))
    res = compare_operators(left, right, params, rng, count, name="homomorphism",
                            anchor="x is an algebra homomorphism")
    if set(left.support) != set(right.support):
        res.detail["support_mismatch"] = True
    return res


def injectivity_probe(basis: Sequence[GradedElement], roots: RootData, p_values,
                      params: EllipticParams, rng=None, fixed: dict | None = None) -> dict:
    """Rank of the images ``x(b)`` for each ``p`` in ``p_values``.

    The images are flattened into one evaluation vector per basis element
    (all coefficients at common sample points); ``fixed`` pins ``u``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    ranks = {}
    for p in p_values:
        alg = OperatorAlgebra(roots, p)
        images = [x_map(b, alg) for b in basis]
        keys = sorted({k for im in images for k in im.as_dict()})
        exprs = [c for im in images for c in im.as_dict().values()]
        names = alg.variables()
        npts = 2 * len(basis) + 4
        pts = admissible_points(names, params, rng, npts, exprs=exprs, fixed=fixed)
        cols = []
        for im in images:
            d = im.as_dict()
            cols.append(np.concatenate([np.broadcast_to(evaluate(d.get(k, ZERO), pts, params),
                                                        (npts,)) for k in keys]))
        from .elliptic import numerical_rank
        mat = np.column_stack(cols) if cols else np.zeros((0, 0))
        s = np.max(np.abs(mat), axis=0) if mat.size else np.ones(0)
        s[s == 0] = 1
        ranks[tuple(p)] = numerical_rank(mat / s) if mat.size else 0
    full = [p for p, r in ranks.items() if r == len(basis)]
    return {"ranks": ranks, "full_rank_p": min(full, key=sum) if full else None,
            "size": len(basis)}


def double_swap_check(algebra: OperatorAlgebra, a: int, b: int, params: EllipticParams,
                      rng=None, count: int = 20) -> CheckResult:
    """``R_ab R_ba = 1``: swapping two generators twice is the identity."""
    rng = np.random.default_rng(0) if rng is None else rng
    t0 = time.perf_counter()
    e = mul(algebra.exchange(a, b), algebra.exchange(b, a))
    pts = admissible_points(algebra.variables(), params, rng, count, exprs=[e])
    v = np.broadcast_to(evaluate(e, pts, params), (count,))
    return CheckResult("double_swap", float(np.max(residual(v, np.ones(count)))), params.tol,
                       count, anchor="exchange relation is involutive",
                       wall_time=time.perf_counter() - t0)


def inadmissible_divisors(A: OperatorElement) -> list[AffineForm]:
    """Pole divisors of the coefficients not of the form ``y_a - y_b + k tau``
    with integer ``k``."""
    bad = []
    for _, c in A.terms:
        for d in pole_divisors(c):
            ys = {v: d.coefficient(v) for v in d.variables()}
            coeffs = sorted(ys.values(), key=lambda z: z.real)
            ok = (all(v.startswith("y_") for v in ys) and len(ys) == 2
                  and np.allclose(coeffs, [-1, 1]) and abs(d.const) < 1e-12
                  and set(d.symbols()) <= set(ys) | {"tau"})
            k = d.coefficient("tau")
            ok = ok and abs(k - round(k.real)) < 1e-12
            if not ok:
                bad.append(d)
    return bad
