"""Exchange relations of the operators ``f_{a,i}`` built from ``A_h`` with
``n = (m, 0, ..., 0)``: an elliptic R-matrix presentation."""

from __future__ import annotations

from itertools import product as iproduct

import numpy as np

from ..elliptic import EllipticParams
from ..elements import random_offsets, theta_product
from ..expr import AffineForm, Const, Expr, ExpTwoPiI, ONE, Theta, affine_expr, mul, ratio
from ..oper import OperatorAlgebra, OperatorElement, compare_operators, op_multiply, x_map
from ..report import CheckResult
from ..roots import Grade, RootData, WeightForm, u_name, x_name, y_name
from ..star import GradedElement, q_membership

TAU = AffineForm.var("tau")


def v_form(i: int) -> AffineForm:
    """``v_i = u_1 + ... + u_i`` (1-based ``i``)."""
    return AffineForm({u_name(k): 1 for k in range(1, i + 1)})


def _chain_factor(ys: list[AffineForm], i: int) -> Expr:
    num, den = [], []
    for nu in range(1, i):
        d = ys[nu - 1] - ys[nu]
        num.append(Theta(d + v_form(nu) - v_form(i) + TAU))
        den.append(Theta(d + TAU))
    return ratio(num, den) if num else ONE


def f_generators(h: int, p) -> tuple[OperatorAlgebra, dict]:
    """``f_{a,i}`` for ``1 <= a <= p_1`` and ``1 <= i <= h`` as operator elements."""
    roots = RootData.type_A(h)
    alg = OperatorAlgebra(roots, p)
    out = {}
    for a in range(1, p[0] + 1):
        for i in range(1, h + 1):
            terms = {}
            for rest in iproduct(*[range(1, p[k] + 1) for k in range(1, i)]):
                alphas = (a,) + rest
                ys = [AffineForm.var(y_name(al, k + 1)) for k, al in enumerate(alphas)]
                exps = [0] * alg.size
                for k, al in enumerate(alphas):
                    exps[alg.index[(al, k)]] = 1
                terms[tuple(exps)] = _chain_factor(ys, i)
            out[(a, i)] = OperatorElement.from_dict(alg, terms)
    return alg, out


def belavin_phi(i: int, m: int, rng: np.random.Generator) -> tuple:
    """Random data for ``phi`` in ``Theta_{m, v_i - 2 tau}``.

    ``phi`` depends on ``x + v_i / m``, which keeps the element invariant under
    ``x -> x - nu, u_1 -> u_1 + m nu``; the ``-2 tau`` makes the quasi-periodicity
    in ``x_{1,1}`` match the membership condition.
    """
    return ("phi", i, m, tuple(random_offsets(rng, m - 1)))


def _phi_expr(phi, arg: AffineForm) -> Expr:
    _, i, m, offs = phi
    return theta_product(arg + v_form(i) * (1.0 / m), m, TAU * -2, list(offs))


def belavin_element(i: int, m: int, h: int, phi) -> GradedElement:
    """The element of ``Q_{d_1+...+d_i}`` with one variable per colour built from ``phi``."""
    xs = [AffineForm.var(x_name(1, k)) for k in range(1, i + 1)]
    num, den = [], []
    for a in range(1, i):
        d = xs[a - 1] - xs[a]
        tail = AffineForm({u_name(k): 1 for k in range(a + 1, i + 1)})
        num.append(Theta(d - tail + TAU))
        den.append(Theta(d))
    body = mul(ratio(num, den) if num else ONE, _phi_expr(phi, xs[0]))
    grade = Grade([1] * i + [0] * (h - i))
    return GradedElement(grade, body, f"belavin{i}")


def z_from_f(alg: OperatorAlgebra, fs: dict, i: int, phi) -> OperatorElement:
    """``sum_a phi(y_{a,1}) f_{a,i}``."""
    acc = None
    for a in range(1, alg.p[0] + 1):
        coeff = _phi_expr(phi, AffineForm.var(y_name(a, 1)))
        term = op_multiply(OperatorElement.scalar(alg, coeff), fs[(a, i)])
        acc = term if acc is None else acc + term
    return acc


def _scalar(alg, e) -> OperatorElement:
    if isinstance(e, AffineForm):
        e = affine_expr(e)
    return OperatorElement.scalar(alg, e)


def relations10_check(h: int, m: int, p, params: EllipticParams, rng=None,
                      count: int | None = None) -> list[CheckResult]:
    """Every exchange and shift relation among ``f_{a,i}``, ``y_{a,1}`` and ``v_i``."""
    rng = np.random.default_rng(0) if rng is None else rng
    alg, fs = f_generators(h, p)
    out: list[CheckResult] = []
    S = lambda e: _scalar(alg, e)  # noqa: E731

    def check(name, left, right, anchor):
        res = compare_operators(left, right, params, rng, count, name=name, anchor=anchor)
        out.append(res)

    ya = {a: AffineForm.var(y_name(a, 1)) for a in range(1, p[0] + 1)}
    idx = range(1, h + 1)
    alphas = range(1, p[0] + 1)
    for a, b in iproduct(alphas, alphas):
        if a == b:
            continue
        for i, j in iproduct(idx, idx):
            if i < j:
                vij = v_form(i) - v_form(j)
                dy = ya[a] - ya[b]
                c1 = mul(ExpTwoPiI(TAU), ratio([Theta(vij), Theta(dy - TAU * 2)],
                                               [Theta(vij + TAU * 2), Theta(dy)]))
                c2 = mul(ExpTwoPiI(vij - TAU), ratio([Theta(AffineForm.constant(0) + TAU * 2),
                                                      Theta(dy - vij)],
                                                     [Theta(vij + TAU * 2), Theta(dy)]))
                left = fs[(a, i)] * fs[(b, j)]
                right = S(c1) * (fs[(b, j)] * fs[(a, i)]) + S(c2) * (fs[(a, j)] * fs[(b, i)])
                check(f"relations.two_term.a{a}b{b}.i{i}j{j}", left, right,
                      "two-term exchange of f_{a,i} and f_{b,j}")
        for i in idx:
            dy = ya[a] - ya[b]
            c = mul(Const(-1), ExpTwoPiI(ya[b] - ya[a]),
                    ratio([Theta(dy - TAU * 2)], [Theta(-dy - TAU * 2)]))
            check(f"relations.same_colour.a{a}b{b}.i{i}", fs[(a, i)] * fs[(b, i)],
                  S(c) * (fs[(b, i)] * fs[(a, i)]), "exchange of f_{a,i} and f_{b,i}")
    for a in alphas:
        for i, j in iproduct(idx, idx):
            if i < j:
                check(f"relations.same_alpha.a{a}.i{i}j{j}", fs[(a, j)] * fs[(a, i)],
                      S(ExpTwoPiI(TAU)) * (fs[(a, i)] * fs[(a, j)]),
                      "f_{a,j} f_{a,i} = e(tau) f_{a,i} f_{a,j}")
    for a in alphas:
        for i in idx:
            f = fs[(a, i)]
            for b in alphas:
                shift = TAU * 2 if a == b else AffineForm()
                check(f"relations.shift_y.a{a}.b{b}.i{i}", f * S(ya[b]), S(ya[b] + shift) * f,
                      "f_{a,i} y_{b,1} = (y_{b,1} + 2 delta_ab tau) f_{a,i}")
            for j in idx:
                shift = TAU * (-4 if i == j else -2)
                check(f"relations.shift_v.a{a}.i{i}.j{j}", f * S(v_form(j)), S(v_form(j) + shift) * f,
                      "f_{a,i} v_j = (v_j - 2 tau (1 + delta_ij)) f_{a,i}")
    return out


def z_consistency_check(h: int, m: int, p, params: EllipticParams, rng=None,
                        count: int | None = None) -> list[CheckResult]:
    """``x`` of the explicit element against ``sum_a phi(y_{a,1}) f_{a,i}``."""
    rng = np.random.default_rng(0) if rng is None else rng
    alg, fs = f_generators(h, p)
    out = []
    for i in range(1, h + 1):
        phi = belavin_phi(i, m, rng)
        el = belavin_element(i, m, h, phi)
        left = x_map(el, alg)
        right = z_from_f(alg, fs, i, phi)
        res = compare_operators(left, right, params, rng, count, name=f"belavin.z_vs_f.i{i}",
                                anchor="x(element) = sum_a phi(y_{a,1}) f_{a,i}")
        res.detail["terms"] = len(left.terms)
        out.append(res)
    return out


def belavin_membership(h: int, m: int, params: EllipticParams, rng=None,
                       count: int | None = None) -> list[CheckResult]:
    """The explicit elements of ``Q_{d_1+...+d_i}`` pass conditions 1-4."""
    rng = np.random.default_rng(0) if rng is None else rng
    roots = RootData.type_A(h)
    n = WeightForm([m] + [0] * (h - 1))
    out = []
    for i in range(1, h + 1):
        el = belavin_element(i, m, h, belavin_phi(i, m, rng))
        rep = q_membership(el, n, roots, params, rng, count)
        out.extend(rep.checks(f"belavin.member.i{i}", params.tol))
    return out


def belavin_generators(h: int, m: int, p, rng=None) -> tuple:
    """``(algebra, f, z)``: ``f[(a, i)]`` as above and ``z[i] = sum_a phi_i(y_{a,1}) f_{a,i}``
    for random ``phi_i``; the ``phi_i`` are returned inside ``z`` as ``(phi, element)``."""
    rng = np.random.default_rng(0) if rng is None else rng
    alg, fs = f_generators(h, p)
    zs = {}
    for i in range(1, h + 1):
        phi = belavin_phi(i, m, rng)
        zs[i] = (phi, z_from_f(alg, fs, i, phi))
    return alg, fs, zs
