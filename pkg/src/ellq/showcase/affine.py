"""Commuting elements ``K_{a,g}`` of ``Q_{a(d_1+...+d_h)}`` for affine ``sl_h``
with ``n = 0`` and ``u_1 + ... + u_h = 0``."""

from __future__ import annotations

import time
from itertools import product as iproduct

import numpy as np

from ..elliptic import EllipticParams, residual
from ..errors import InvalidParameterError
from ..expr import AffineForm, Const, Expr, ExpTwoPiI, Theta, add, evaluate, mul, ratio
from ..report import CheckResult, exact_check
from ..roots import Grade, RootData, WeightForm, u_name, x_name
from ..sampling import admissible_points, u_sum_zero
from ..star import GradedElement, equal_numeric, q_membership, star

TAU = AffineForm.var("tau")
ETA = AffineForm.var("eta")
FOURIER_CUTOFF = 3


def _check(h: int) -> None:
    if h < 2:
        raise InvalidParameterError("affine sl_h needs h >= 2")


def _finite_cartan(k: int) -> np.ndarray:
    c = 2 * np.eye(k, dtype=int)
    for j in range(k - 1):
        c[j, j + 1] = c[j + 1, j] = -1
    return c


class GSpace:
    """The ``h``-dimensional space of ``g(z_1..z_h)`` with
    ``g(z + e_j) = g(z)`` and
    ``g(z + eta e_j) = e(-(2 z_j - z_{j-1} - z_{j+1} + eta + u_j)) g(z)``.

    Two descriptions are kept.  The Fourier one: ``g`` depends only on
    ``y_j = z_j - z_h`` and its coefficients obey
    ``c_{r + C m} = c_r e(eta (m.C.m/2 + r.m) + u.m)`` with ``C`` the finite
    Cartan matrix of rank ``h - 1``, one free coefficient per class ``r`` in
    ``Z^{h-1} / C Z^{h-1}`` (classes ``t e_1``, ``t = 0..h-1``).  It converges
    slowly once ``Im y`` is large, so elements are built from the product family
    ``g_s = prod_j theta(z_j - z_{j+1} + s + u_1 + ... + u_j)``, which has the
    same multipliers when ``u_1 + ... + u_h = 0``.
    """

    def __init__(self, h: int, cutoff: int = FOURIER_CUTOFF):
        _check(h)
        self.h = h
        self.cutoff = cutoff
        self.cartan = _finite_cartan(h - 1)
        self.reps = [np.eye(h - 1, dtype=int)[0] * t for t in range(h)]

    def fourier_basis(self, t: int, zs: list[AffineForm]) -> Expr:
        h, C = self.h, self.cartan
        r = self.reps[t]
        ys = [zs[j] - zs[h - 1] for j in range(h - 1)]
        us = [AffineForm.var(u_name(j + 1)) for j in range(h - 1)]
        terms = []
        rng = range(-self.cutoff, self.cutoff + 1)
        for m in iproduct(rng, repeat=h - 1):
            m = np.array(m, dtype=int)
            k = r + C @ m
            form = ETA * (0.5 * float(m @ C @ m) + float(r @ m))
            for j in range(h - 1):
                if k[j]:
                    form = form + ys[j] * int(k[j])
                if m[j]:
                    form = form + us[j] * int(m[j])
            terms.append(ExpTwoPiI(form))
        return add(*terms)

    def product_member(self, s: complex, zs: list[AffineForm]) -> Expr:
        h = self.h
        v = AffineForm.constant(s)
        factors = []
        for j in range(h):
            v = v + AffineForm.var(u_name(j + 1))
            factors.append(Theta(zs[j] - zs[(j + 1) % h] + v))
        return mul(*factors)

    def element(self, data, zs: list[AffineForm]) -> Expr:
        """``sum_t c_t g_{s_t}(z)`` for ``data = (coeffs, shifts)``."""
        coeffs, shifts = data
        return add(*[mul(Const(complex(c)), self.product_member(complex(s), zs))
                     for c, s in zip(coeffs, shifts)])

    def random_data(self, rng: np.random.Generator) -> tuple:
        h = self.h
        return (rng.normal(size=h) + 1j * rng.normal(size=h),
                rng.random(h) + 1j * rng.random(h))


def _z_forms(h: int) -> list[AffineForm]:
    return [AffineForm.var(f"z_{j}") for j in range(1, h + 1)]


def _low_points(names, h, params, rng, count):
    # small imaginary parts keep the truncated Fourier series accurate
    pts = {k: rng.random(count) + 0.25j * params.eta.imag * rng.random(count) for k in names}
    return u_sum_zero(h)(pts)


def _rank(rows) -> int:
    mat = np.array(rows)
    mat = mat / np.max(np.abs(mat), axis=1, keepdims=True)
    sv = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(sv > 1e-8 * sv[0]))


def gspace_check(h: int, params: EllipticParams, rng=None, count: int = 16,
                 cutoff: int = 6) -> list[CheckResult]:
    """Rank ``h`` of the Fourier solutions, the product family spanning the
    same space, quasi-periodicity in every ``z_j`` and translation invariance."""
    rng = np.random.default_rng(0) if rng is None else rng
    G = GSpace(h, cutoff)
    zs = _z_forms(h)
    names = [f"z_{j}" for j in range(1, h + 1)] + [u_name(j) for j in range(1, h + 1)]
    count = max(count, 3 * h)
    pts = _low_points(names, h, params, rng, count)
    # one fibre in u: the space is h-dimensional over functions of u
    for j in range(1, h + 1):
        pts[u_name(j)] = np.full(count, pts[u_name(j)][0])
    ev = lambda e: np.broadcast_to(evaluate(e, pts, params), (count,))  # noqa: E731
    fourier = [ev(G.fourier_basis(t, zs)) for t in range(h)]
    family = [ev(G.product_member(complex(s), zs))
              for s in rng.random(h + 2) + 1j * rng.random(h + 2)]
    r_f, r_p, r_all = _rank(fourier), _rank(family), _rank(fourier + family)
    out = [exact_check("affine.g.rank", r_f == h, anchor="the g-space is h-dimensional",
                       measured=r_f, expected=h),
           exact_check("affine.g.same_space", r_p == h and r_all == h,
                       anchor="the theta-product family spans the Fourier solutions",
                       family_rank=r_p, joint_rank=r_all)]
    pts = admissible_points(names, params, rng, count, constrain=u_sum_zero(h))
    g = G.element(G.random_data(rng), zs)
    base = evaluate(g, pts, params)
    worst = 0.0
    for j in range(1, h + 1):
        prev, nxt = (j - 2) % h + 1, j % h + 1
        p = dict(pts)
        p[f"z_{j}"] = pts[f"z_{j}"] + 1
        worst = max(worst, float(np.max(residual(evaluate(g, p, params), base))))
        p[f"z_{j}"] = pts[f"z_{j}"] + params.eta
        expo = (2 * pts[f"z_{j}"] - pts[f"z_{prev}"] - pts[f"z_{nxt}"] + params.eta
                + pts[u_name(j)])
        mult = np.exp(-2j * np.pi * expo)
        worst = max(worst, float(np.max(residual(evaluate(g, p, params), mult * base))))
    out.append(CheckResult("affine.g.periodicity", worst, params.tol, count,
                           anchor="quasi-periodicity of g in each z_j"))
    shift = complex(rng.random() + 1j * rng.random())
    p = {k: (v + shift if k.startswith("z_") else v) for k, v in pts.items()}
    out.append(CheckResult("affine.g.translation",
                           float(np.max(residual(evaluate(g, p, params), base))),
                           params.tol, count,
                           anchor="g(z_1 + p, ..., z_h + p) = g(z_1, ..., z_h)"))
    return out


def k_element(h: int, alpha: int, gdata) -> GradedElement:
    """``K_{a,g}``: the same-colour factors run over ``mu != nu``, the
    neighbour-colour denominators over all pairs ``(mu, nu)``."""
    _check(h)
    X = lambda a, i: AffineForm.var(x_name(a, (i % h) + 1))  # noqa: E731
    num, den = [], []
    for i in range(h):
        for mu in range(1, alpha + 1):
            for nu in range(1, alpha + 1):
                if mu != nu:
                    num.append(Theta(X(mu, i) - X(nu, i) - TAU * 2))
                den.append(Theta(X(mu, i) - X(nu, i + 1)))
    zs = []
    for i in range(h):
        z = AffineForm()
        for mu in range(1, alpha + 1):
            z = z + X(mu, i)
        zs.append(z)
    g = GSpace(h).element(gdata, zs)
    body = mul(ratio(num, den), g)
    return GradedElement(Grade([alpha] * h), body, f"K{alpha}")


def central_shift_check(h: int, alpha: int) -> CheckResult:
    """Star products by ``a(d_1+...+d_h)`` leave every ``u_i`` unshifted."""
    roots = RootData.affine_A(h)
    l = Grade([alpha] * h)
    shifts = [2 * roots.pairing(l, i) for i in range(h)]
    return exact_check(f"affine.central.a{alpha}", all(s == 0 for s in shifts) and sum(shifts) == 0,
                       anchor="u_1 + ... + u_h is central", shifts=shifts)


def affine_commuting_check(h: int, alpha_max: int, params: EllipticParams, rng=None,
                           count: int | None = None, pairs=None,
                           membership: bool | None = None) -> list[CheckResult]:
    """Membership (``h > 2``) and star-commutators of ``K_{a,g}`` with independent ``g``."""
    _check(h)
    rng = np.random.default_rng(0) if rng is None else rng
    roots = RootData.affine_A(h)
    constrain = u_sum_zero(h)
    membership = h > 2 if membership is None else membership
    G = GSpace(h)
    out: list[CheckResult] = []
    if pairs is None:
        pairs = [(a, b) for a in range(1, alpha_max + 1) for b in range(a, alpha_max + 1)]
    needed = sorted({a for p in pairs for a in p})
    for a in needed:
        out.append(central_shift_check(h, a))
    if membership:
        for a in needed:
            el = k_element(h, a, G.random_data(rng))
            rep = q_membership(el, WeightForm([0] * h), roots, params, rng, count,
                               constrain=constrain)
            out.extend(rep.checks(f"affine.member.a{a}", params.tol))
    for a, b in pairs:
        t0 = time.perf_counter()
        f = k_element(h, a, G.random_data(rng))
        g = k_element(h, b, G.random_data(rng))
        res = equal_numeric(star(f, g, roots), star(g, f, roots), params, rng, count,
                            name=f"affine.commute.a{a}b{b}", constrain=constrain)
        res.anchor = "K_{a,g} * K_{b,g'} = K_{b,g'} * K_{a,g}"
        res.wall_time = time.perf_counter() - t0
        out.append(res)
    return out
