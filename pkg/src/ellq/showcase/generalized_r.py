"""Elements ``e_{i1,i2}`` of ``A_h`` with ``n = d_nu``, their exchange relations
and the braid (Yang-Baxter) property of the resulting exchange map."""

from __future__ import annotations

import time
from itertools import product as iproduct

import numpy as np

from ..dims import numeric_dim
from ..elliptic import EllipticParams, residual
from ..errors import InvalidParameterError
from ..expr import (AffineForm, Const, Expr, ExpTwoPiI, ONE, Theta, add, affine_expr, evaluate,
                    mul, ratio, substitute)
from ..report import CheckResult, exact_check
from ..roots import Grade, RootData, WeightForm, u_name, x_name
from ..sampling import admissible_points
from ..star import GradedElement, equal_numeric, q_membership, star

TAU = AffineForm.var("tau")


def _check(h: int, nu: int) -> None:
    if not 1 < nu < h:
        raise InvalidParameterError(f"need 1 < nu < h (got h={h}, nu={nu})")


def r_weight(h: int, nu: int) -> WeightForm:
    return WeightForm([1 if i == nu else 0 for i in range(1, h + 1)])


def interval_grade(h: int, i1: int, i2: int) -> Grade:
    return Grade([1 if i1 <= i <= i2 else 0 for i in range(1, h + 1)])


def index_pairs(h: int, nu: int) -> list[tuple[int, int]]:
    return [(i1, i2) for i1 in range(1, nu + 1) for i2 in range(nu, h + 1)]


def _usum(lo: int, hi: int) -> AffineForm:
    return AffineForm({u_name(a): 1 for a in range(lo, hi + 1)})


def r_element(h: int, nu: int, i1: int, i2: int) -> GradedElement:
    """The element spanning ``Q_{d_i1 + ... + d_i2}``, one variable per colour."""
    _check(h, nu)
    if not 1 <= i1 <= nu <= i2 <= h:
        raise InvalidParameterError(f"need 1 <= i1 <= nu <= i2 <= h (got {i1}, {i2})")
    X = lambda k: AffineForm.var(x_name(1, k))  # noqa: E731
    num, den = [], []
    for phi in range(i1, nu):
        num.append(Theta(X(phi) - X(phi + 1) + _usum(i1, phi) - TAU))
    for psi in range(nu, i2):
        num.append(Theta(X(psi) - X(psi + 1) - _usum(psi + 1, i2) + TAU))
    for k in range(i1, i2):
        den.append(Theta(X(k) - X(k + 1)))
    # theta lies in Theta_{1,1/2}; the 1/2 puts this factor in Theta_{1, c}
    num.append(Theta(X(nu) + _usum(i1, i2) - TAU * 2 + 0.5))
    body = ratio(num, den) if den else mul(*num)
    return GradedElement(interval_grade(h, i1, i2), body, f"e{i1}{i2}")


def v_form(i: int, nu: int) -> AffineForm:
    """``v_i = u_i + ... + u_nu``."""
    return _usum(i, nu)


def w_form(i: int, nu: int) -> AffineForm:
    """``w_i = u_nu + ... + u_i``."""
    return _usum(nu, i)


def q_factor(j: int, jp: int) -> Expr:
    if j < jp:
        return ExpTwoPiI(TAU)
    if j > jp:
        return ExpTwoPiI(-TAU)
    return ONE


def exchange_coefficients(a: tuple, b: tuple, nu: int) -> tuple[Expr, Expr | None]:
    """``(C1, C2)`` with ``e_a e_b = C1 e_b e_a + C2 e_{(a1,b2)} e_{(b1,a2)}``.

    ``C2`` is ``None`` when ``a`` and ``b`` share an index (single-term exchange).
    """
    (i1, i2), (j1, j2) = a, b
    if a == b:
        return ONE, None
    if i1 == j1:
        return q_factor(j2, i2), None
    if i2 == j2:
        return q_factor(j1, i1), None
    dv = v_form(i1, nu) - v_form(j1, nu)
    dw = w_form(j2, nu) - w_form(i2, nu)
    c1 = mul(q_factor(j1, i1), q_factor(j2, i2),
             ratio([Theta(dv - TAU * 2), Theta(dw)], [Theta(dv), Theta(dw - TAU * 2)]))
    c2 = mul(q_factor(j2, i2),
             ratio([Theta(AffineForm.constant(0) - TAU * 2), Theta(dw - dv)],
                   [Theta(-dv), Theta(dw - TAU * 2)]))
    return c1, c2


def _scale(c: Expr, f: GradedElement) -> GradedElement:
    return GradedElement(f.grade, mul(c, f.body), f.label)


def _plus(f: GradedElement, g: GradedElement) -> GradedElement:
    return GradedElement(f.grade, add(f.body, g.body), f.label)


def _shift_targets(h: int, nu: int):
    for j in range(1, nu + 1):
        yield j, v_form(j, nu), "v"
    for j in range(nu, h + 1):
        yield j, w_form(j, nu), "w"


def shift_multiple(a: tuple, j: int, kind: str, nu: int, printed: bool = False) -> int:
    """``k`` in ``e_a v_j = (v_j - 2 k tau) e_a`` (likewise for ``w_j``).

    ``k`` is the pairing of the grade of ``e_a`` with ``d_j + ... + d_nu`` (or
    ``d_nu + ... + d_j``), so an index at ``nu`` adds one.  ``printed=True``
    drops that extra term.
    """
    i1, i2 = a
    if kind == "v":
        return int(i1 == j) + (0 if printed else int(i2 == nu))
    return int(i2 == j) + (0 if printed else int(i1 == nu))


def relation_list(h: int, nu: int, printed: bool = False
                  ) -> list[tuple[str, GradedElement, GradedElement, str]]:
    """Every relation among ``e_{i1,i2}``, ``v_i1`` and ``w_i2`` as ``(name, left, right, anchor)``."""
    _check(h, nu)
    roots = RootData.type_A(h)
    pairs = index_pairs(h, nu)
    es = {p: r_element(h, nu, *p) for p in pairs}
    S = lambda f, g: star(f, g, roots)  # noqa: E731
    out = []
    for a, b in iproduct(pairs, pairs):
        if a == b:
            continue
        c1, c2 = exchange_coefficients(a, b, nu)
        right = _scale(c1, S(es[b], es[a]))
        if c2 is None:
            anchor = "single-term q-exchange"
        else:
            right = _plus(right, _scale(c2, S(es[(a[0], b[1])], es[(b[0], a[1])])))
            anchor = "two-term exchange of e_{i1,i2} and e_{i1',i2'}"
        out.append((f"relations.exchange.{a[0]}{a[1]}.{b[0]}{b[1]}", S(es[a], es[b]), right, anchor))
    zero = Grade.zero(h)
    for a in pairs:
        for j, form, kind in _shift_targets(h, nu):
            k = shift_multiple(a, j, kind, nu, printed)
            left = S(es[a], GradedElement(zero, affine_expr(form)))
            out.append((f"relations.shift_{kind}.{a[0]}{a[1]}.{kind}{j}", left,
                        _scale(affine_expr(form - TAU * (2 * k)), es[a]),
                        f"e_{{i1,i2}} {kind}_j = ({kind}_j - 2 k tau) e_{{i1,i2}}"))
    return out


def exchange_relations_check(h: int, nu: int, params: EllipticParams, rng=None,
                      count: int | None = None, printed: bool = False) -> list[CheckResult]:
    rng = np.random.default_rng(0) if rng is None else rng
    out = []
    for name, left, right, anchor in relation_list(h, nu, printed):
        res = equal_numeric(left, right, params, rng, count, name=name)
        res.anchor = anchor
        out.append(res)
    return out


def interval_dims_check(h: int, nu: int, params: EllipticParams, rng=None) -> list[CheckResult]:
    """``dim Q_{d_i1+...+d_i2}`` is 1 when ``i1 <= nu <= i2`` and 0 otherwise."""
    _check(h, nu)
    rng = np.random.default_rng(0) if rng is None else rng
    roots = RootData.type_A(h)
    n = r_weight(h, nu)
    out = []
    for i1 in range(1, h + 1):
        for i2 in range(i1, h + 1):
            d = numeric_dim(n, interval_grade(h, i1, i2), roots, params, rng)
            expected = 1 if i1 <= nu <= i2 else 0
            out.append(exact_check(f"relations.dim.{i1}{i2}", d == expected,
                                   anchor="one generator per interval through nu",
                                   measured=d, expected=expected))
    return out


# ---------------------------------------------------------------------------
# exchange map on words


def _grade_of(word, h: int) -> Grade:
    total = Grade.zero(h)
    for i1, i2 in word:
        total = total + interval_grade(h, i1, i2)
    return total


def _past_prefix(c: Expr, prefix: Grade, roots: RootData) -> Expr:
    """Move a coefficient left past a product of grade ``prefix``."""
    mapping = {}
    for i in range(roots.rank):
        k = roots.pairing(prefix, i)
        if k:
            mapping[u_name(i + 1)] = AffineForm.var(u_name(i + 1)) - TAU * (2 * k)
    return substitute(c, mapping) if mapping else c


def exchange_step(state: dict, k: int, h: int, nu: int) -> dict:
    """Apply the exchange rule at positions ``k, k+1`` of every word."""
    roots = RootData.type_A(h)
    out: dict = {}

    def put(word, c):
        out[word] = add(out[word], c) if word in out else c

    for word, coeff in state.items():
        a, b = word[k], word[k + 1]
        c1, c2 = exchange_coefficients(a, b, nu)
        pre = _grade_of(word[:k], h)
        head, tail = word[:k], word[k + 2:]
        put(head + (b, a) + tail, mul(coeff, _past_prefix(c1, pre, roots)))
        if c2 is not None:
            put(head + ((a[0], b[1]), (b[0], a[1])) + tail,
                mul(coeff, _past_prefix(c2, pre, roots)))
    return out


def ybe_probe(h: int, nu: int, params: EllipticParams, rng=None, triple=None,
              count: int | None = None) -> CheckResult:
    """Compare the exchange routes ``s1 s2 s1`` and ``s2 s1 s2`` on ``e_a e_b e_c``.

    The letters need three distinct second indices: when two coincide the
    single-term exchange is an identity in the algebra rather than an entry of
    the exchange map, and different routes end on different (but equal) words.
    """
    _check(h, nu)
    rng = np.random.default_rng(0) if rng is None else rng
    t0 = time.perf_counter()
    if triple is None:
        if h - 1 <= nu:
            raise InvalidParameterError("need h - 1 > nu for three distinct second indices")
        triple = ((1, h), (nu, h - 1), (1, nu))
    triple = tuple(tuple(p) for p in triple)
    if len({p[1] for p in triple}) < 3:
        raise InvalidParameterError("the triple needs three distinct second indices")
    start = {tuple(triple): ONE}
    routes = []
    for order in ((0, 1, 0), (1, 0, 1)):
        s = start
        for k in order:
            s = exchange_step(s, k, h, nu)
        routes.append(s)
    words = sorted(set(routes[0]) | set(routes[1]))
    names = [u_name(i) for i in range(1, h + 1)]
    exprs = [e for r in routes for e in r.values()]
    pts = admissible_points(names, params, rng, count, exprs=exprs)
    n = len(pts[names[0]])
    worst = 0.0
    for w in words:
        va = np.broadcast_to(evaluate(routes[0].get(w, Const(0)), pts, params), (n,))
        vb = np.broadcast_to(evaluate(routes[1].get(w, Const(0)), pts, params), (n,))
        worst = max(worst, float(np.max(residual(va, vb))))
    return CheckResult("ybe.braid", worst, params.tol, n,
                       anchor="the exchange map satisfies the Yang-Baxter equation",
                       detail={"triple": [list(p) for p in triple], "words": len(words)},
                       wall_time=time.perf_counter() - t0)


def generalized_r_check(h: int, nu: int, params: EllipticParams, rng=None,
                        count: int | None = None) -> list[CheckResult]:
    """Membership of every ``e_{i1,i2}``, all relations and the interval dimensions."""
    rng = np.random.default_rng(0) if rng is None else rng
    roots = RootData.type_A(h)
    out = []
    for a in index_pairs(h, nu):
        rep = q_membership(r_element(h, nu, *a), r_weight(h, nu), roots, params, rng, count)
        out.extend(rep.checks(f"relations.member.{a[0]}{a[1]}", params.tol))
    out.extend(exchange_relations_check(h, nu, params, rng, count))
    out.extend(interval_dims_check(h, nu, params, rng))
    return out


def printed_shift_residual(h: int, nu: int, params: EllipticParams, rng=None,
                           count: int | None = None) -> float:
    """Worst residual of the shift rules without the extra term at ``nu``."""
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for name, left, right, _ in relation_list(h, nu, printed=True):
        if ".shift_" in name:
            worst = max(worst, equal_numeric(left, right, params, rng, count).residual)
    return worst
