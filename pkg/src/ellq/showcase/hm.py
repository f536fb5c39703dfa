"""The graded algebra ``H_m`` of symmetric functions with the kernel
``lambda(x, y) = theta(x-y-t1) theta(x-y-t2) theta(x-y-t3) / theta(x-y)^3``
(``t1 + t2 + t3 = 0``) and its commuting family ``K_a`` at ``m = 0, c = 0``."""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..elliptic import EllipticParams, residual
from ..errors import InvalidParameterError
from ..expr import AffineForm, Const, Expr, ONE, Theta, add, evaluate, mul, ratio, substitute
from ..report import CheckResult
from ..sampling import admissible_points
from ..star import laurent_coefficients, LAURENT_RADIUS

DEFAULT_T1 = 0.173 + 0.219j
DEFAULT_T2 = -0.061 + 0.137j


def hm_var(k: int) -> str:
    return f"x_{k}"


def hm_taus(t1: complex = DEFAULT_T1, t2: complex = DEFAULT_T2, t3: complex | None = None):
    """``(t1, t2, t3)`` with ``t3 = -t1 - t2`` unless given (then checked)."""
    t3 = -t1 - t2 if t3 is None else t3
    if abs(t1 + t2 + t3) > 1e-12:
        raise InvalidParameterError("need t1 + t2 + t3 = 0")
    return complex(t1), complex(t2), complex(t3)


@dataclass(frozen=True)
class HmElement:
    """A function of ``x_1..x_arity``, symmetric, with multiplier
    ``f(x_1 + eta) = e(-(m x_1 + c)) f``."""

    arity: int
    body: Expr
    m: int = 0
    c: complex = 0.0
    label: str = ""

    def names(self) -> list[str]:
        return [hm_var(k) for k in range(1, self.arity + 1)]


def _kernel(a: str, b: str, taus) -> Expr:
    d = AffineForm({a: 1, b: -1})
    return ratio([Theta(d - t) for t in taus], [Theta(d)] * 3)


def hm_product(f: HmElement, g: HmElement, taus) -> HmElement:
    """``f * g``: the sum over ``S_{a+b}`` divided by ``a! b!`` reduces to a sum
    over the ``a``-subsets carrying ``f``."""
    if (f.m, f.c) != (g.m, g.c):
        raise InvalidParameterError("factors must share (m, c)")
    a, b = f.arity, g.arity
    n = a + b
    terms = []
    for S in combinations(range(1, n + 1), a):
        rest = [k for k in range(1, n + 1) if k not in S]
        fmap = {hm_var(i + 1): AffineForm.var(hm_var(k)) for i, k in enumerate(S)}
        gmap = {hm_var(i + 1): AffineForm.var(hm_var(k)) for i, k in enumerate(rest)}
        parts = [substitute(f.body, fmap), substitute(g.body, gmap)]
        for mu in S:
            for nu in rest:
                parts.append(_kernel(hm_var(mu), hm_var(nu), taus))
        terms.append(mul(*[p for p in parts if p is not ONE]))
    label = f"({f.label}*{g.label})" if f.label and g.label else ""
    return HmElement(n, add(*terms), f.m, f.c, label)


def k_alpha(alpha: int, taus) -> HmElement:
    """``K_a = prod_{mu<nu} theta(d - t1) theta(d + t1) / theta(d)^2``, ``K_1 = 1``."""
    if alpha < 1:
        raise InvalidParameterError("K_a needs a >= 1")
    t1 = taus[0]
    num, den = [], []
    for mu in range(1, alpha + 1):
        for nu in range(mu + 1, alpha + 1):
            d = AffineForm({hm_var(mu): 1, hm_var(nu): -1})
            num += [Theta(d - t1), Theta(d + t1)]
            den += [Theta(d), Theta(d)]
    body = ratio(num, den) if num else Const(1.0)
    return HmElement(alpha, body, 0, 0.0, f"K{alpha}")


def _points(f: HmElement, params, rng, count):
    return admissible_points(f.names(), params, rng, count, exprs=[f.body])


def _ev(f: HmElement, pts, params):
    n = len(next(iter(pts.values())))
    return np.broadcast_to(evaluate(f.body, pts, params), (n,))


def hm_membership(f: HmElement, taus, params: EllipticParams, rng=None,
                  count: int | None = None) -> dict:
    """Residuals of symmetry, pole order <= 2, triple vanishing and periodicity."""
    rng = np.random.default_rng(0) if rng is None else rng
    count = params.sample_count if count is None else count
    names = f.names()
    out = {"symmetry": 0.0, "poles": 0.0, "triple": 0.0, "periodicity": 0.0}
    if f.arity == 0:
        return out
    pts = _points(f, params, rng, count)
    base = _ev(f, pts, params)
    for k in range(f.arity - 1):
        p = dict(pts)
        p[names[k]], p[names[k + 1]] = pts[names[k + 1]], pts[names[k]]
        out["symmetry"] = max(out["symmetry"], float(np.max(residual(_ev(f, p, params), base))))
    if f.arity >= 2:
        for _ in range(3):
            c0 = _points(f, params, rng, 1)
            center = {k: complex(v[0]) for k, v in c0.items()}
            center[names[0]] = center[names[1]]
            coeffs, scale = laurent_coefficients(
                lambda p: np.broadcast_to(evaluate(f.body, p, params), (len(p[names[0]]),)),
                center, names[0], 1.0, params)
            r = abs(coeffs[3]) / LAURENT_RADIUS ** 3 / (scale + 1.0)
            out["poles"] = max(out["poles"], r)
    if f.arity >= 3:
        t1, t2 = taus[0], taus[1]
        scale = float(np.median(np.abs(base))) + 1.0
        for a, b in ((t1, t2), (t2, t1)):
            p = dict(pts)
            x = pts[names[0]]
            p[names[1]] = x + a
            p[names[2]] = x + a + b
            jit = dict(p)
            jit[names[1]] = p[names[1]] + 0.05 * np.exp(2j * np.pi * rng.random(count))
            local = np.maximum(np.abs(_ev(f, jit, params)), scale)
            out["triple"] = max(out["triple"], float(np.max(np.abs(_ev(f, p, params)) / local)))
    p = dict(pts)
    p[names[0]] = pts[names[0]] + 1
    worst = float(np.max(residual(_ev(f, p, params), base)))
    p[names[0]] = pts[names[0]] + params.eta
    mult = np.exp(-2j * np.pi * (f.m * pts[names[0]] + f.c))
    out["periodicity"] = max(worst, float(np.max(residual(_ev(f, p, params), mult * base))))
    return out


def hm_commuting_check(alpha_max: int, taus, params: EllipticParams, rng=None,
                       count: int | None = None) -> list[CheckResult]:
    """Membership of ``K_a`` and ``K_a * K_b = K_b * K_a`` for ``a, b <= alpha_max``."""
    rng = np.random.default_rng(0) if rng is None else rng
    taus = hm_taus(*taus)
    out = []
    ks = {a: k_alpha(a, taus) for a in range(1, alpha_max + 1)}
    for a, k in ks.items():
        for cond, r in hm_membership(k, taus, params, rng, count).items():
            out.append(CheckResult(f"hm.member.K{a}.{cond}", r, params.tol,
                                   anchor="K_a is symmetric with poles of order <= 2, "
                                          "vanishes on triples and has m = 0, c = 0"))
    for a in range(1, alpha_max + 1):
        for b in range(a + 1, alpha_max + 1):
            t0 = time.perf_counter()
            left = hm_product(ks[a], ks[b], taus)
            right = hm_product(ks[b], ks[a], taus)
            pts = admissible_points(left.names(), params, rng, count,
                                    exprs=[left.body, right.body])
            r = float(np.max(residual(_ev(left, pts, params), _ev(right, pts, params))))
            out.append(CheckResult(f"hm.commute.K{a}K{b}", r, params.tol,
                                   len(pts[left.names()[0]]),
                                   anchor="K_a * K_b = K_b * K_a",
                                   wall_time=time.perf_counter() - t0))
    return out


def hm_product_membership(alpha: int, beta: int, taus, params: EllipticParams, rng=None,
                          count: int | None = None) -> dict:
    """Membership residuals of ``K_a * K_b``."""
    taus = hm_taus(*taus)
    return hm_membership(hm_product(k_alpha(alpha, taus), k_alpha(beta, taus), taus),
                         taus, params, rng, count)
