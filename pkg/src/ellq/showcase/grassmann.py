"""Elements of grade ``d_1 + 2 d_2 + ... + h d_h`` for ``A_h`` with
``n = (-1, 0, ..., 0, m)``: an elliptic deformation of the Grassmannian
coordinate ring ``Gr(h, m - h + 1)``."""

from __future__ import annotations

from itertools import permutations
from math import comb

import numpy as np

from ..dims import numeric_dim
from ..elements import random_offsets, theta_product
from ..elliptic import EllipticParams
from ..errors import InvalidParameterError, UnsupportedError
from ..expr import AffineForm, Const, Expr, ExpTwoPiI, Theta, add, mul, ratio
from ..report import CheckResult, exact_check
from ..roots import Grade, RootData, WeightForm, u_name, x_name
from ..star import GradedElement, q_membership

TAU = AffineForm.var("tau")


def grassmann_weight(h: int, m: int) -> WeightForm:
    if h == 1:
        return WeightForm([m])
    return WeightForm([-1] + [0] * (h - 2) + [m])


def grassmann_grade(h: int) -> Grade:
    return Grade(list(range(1, h + 1)))


def _check(h: int, m: int) -> None:
    if h < 1 or m <= 0 or m - h + 1 <= 0:
        raise InvalidParameterError(f"need h >= 1, m > 0 and m - h + 1 > 0 (got h={h}, m={m})")
    if h > 2:
        # the translated phi would carry the multiplier shifted by (h - 2) nu
        raise UnsupportedError("the explicit element is translation invariant only for h <= 2")


def grassmann_phi(h: int, m: int, xs: list[AffineForm], rng: np.random.Generator) -> Expr:
    """A symmetric ``phi(x_1..x_h)`` with the multiplier
    ``(m-2h+2) x_1 + x_2 + ... + x_h + u_1 + ... + u_h - (h+1) tau - (h-1) eta``
    in ``x_1``, which is what the other factors of the element leave over.

    It is ``det[a_k(z_j)] / prod_{j<k} theta(z_j - z_k) e(z_k)`` with
    ``z_j = x_j + U/(m-1)``, ``U = u_1 + ... + u_h`` and ``a_k`` random theta
    products of order ``m - h + 1``.  For ``h = 2`` this spans the whole
    (three-dimensional for ``m = 4``) space.
    """
    U = AffineForm({u_name(i): 1 for i in range(1, h + 1)})
    order = m - h + 1
    if h == 1:
        z = xs[0] + U * (1.0 / m)
        return theta_product(z, m, TAU * -2, random_offsets(rng, m - 1))
    if m == 1:
        raise InvalidParameterError("m = 1 leaves no room for the u-dependence")
    zs = [x + U * (1.0 / (m - 1)) for x in xs]
    # same-colour factors contribute (h-1) eta, the grade pairs to (h+1) tau
    # and the linking factor's 1/2 one more sign
    shift = AffineForm.constant(-(h - 2) / 2) - TAU * (h + 1) - AffineForm.var("eta") * (h - 1)
    funcs = [random_offsets(rng, order - 1) for _ in range(h)]
    terms = []
    for perm in permutations(range(h)):
        sign = _perm_sign(perm)
        factors = [theta_product(zs[j], order, shift, funcs[perm[j]]) for j in range(h)]
        terms.append(mul(Const(sign), *factors))
    det = add(*terms)
    den = []
    for j in range(h):
        for k in range(j + 1, h):
            den.append(Theta(zs[j] - zs[k]))
    # theta(z_j - z_k) e(z_k) is antisymmetric, so phi is symmetric
    den.extend(ExpTwoPiI(zs[k]) for j in range(h) for k in range(j + 1, h))
    return ratio([det], den)


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def grassmann_element(h: int, m: int, rng: np.random.Generator,
                      same_colour_shift: int = 2) -> GradedElement:
    """The explicit element of grade ``d_1 + 2 d_2 + ... + h d_h``.

    ``same_colour_shift`` is the multiple of ``tau`` in the numerator factors
    ``theta(x_{a,i} - x_{b,i} - k tau)``; the chain-vanishing condition needs
    ``k = 2``.  ``k = 1`` is kept for comparison.
    """
    _check(h, m)
    if h == 1:
        x = AffineForm.var(x_name(1, 1))
        return GradedElement(Grade([1]), grassmann_phi(1, m, [x], rng), "grassmann")
    X = lambda a, i: AffineForm.var(x_name(a, i))  # noqa: E731
    num, den = [], []
    for i in range(1, h):
        # the 1/2 fixes the sign from one theta over i+1 thetas
        s = AffineForm.constant(0.5)
        for a in range(1, i + 1):
            s = s + X(a, i) + AffineForm.var(u_name(a))
        for a in range(1, i + 2):
            s = s - X(a, i + 1)
        num.append(Theta(s))
        for a in range(1, i + 1):
            for b in range(1, i + 2):
                den.append(Theta(X(a, i) - X(b, i + 1)))
    for i in range(1, h + 1):
        for a in range(1, i + 1):
            for b in range(1, i + 1):
                if a != b:
                    num.append(Theta(X(a, i) - X(b, i) - TAU * same_colour_shift))
    phi = grassmann_phi(h, m, [X(a, h) for a in range(1, h + 1)], rng)
    return GradedElement(grassmann_grade(h), mul(ratio(num, den), phi), "grassmann")


def grassmann_check(h: int, m: int, params: EllipticParams, rng=None,
                    taus=None, count: int | None = None) -> list[CheckResult]:
    """Membership of the explicit element and ``dim = binomial(m-h+1, h)`` at two ``tau``."""
    _check(h, m)
    rng = np.random.default_rng(0) if rng is None else rng
    roots = RootData.type_A(h)
    n = grassmann_weight(h, m)
    out = []
    el = grassmann_element(h, m, rng)
    out.extend(q_membership(el, n, roots, params, rng, count).checks("grassmann.member", params.tol))
    taus = [params.tau, 0.5 * params.tau + 0.05] if taus is None else taus
    expected = comb(m - h + 1, h)
    dims = []
    for t in taus:
        d = numeric_dim(n, grassmann_grade(h), roots, params.with_tau(t), rng)
        dims.append(d)
        out.append(exact_check(f"grassmann.dim.tau{len(dims)}", d == expected,
                               anchor="dimension equals binomial(m-h+1, h)",
                               measured=d, expected=expected, tau=complex(t)))
    out.append(exact_check("grassmann.dim_flat", len(set(dims)) == 1,
                           anchor="dimension does not depend on tau", dims=dims))
    return out


def printed_shift_residuals(h: int, m: int, params: EllipticParams, rng=None,
                            count: int | None = None) -> dict:
    """Membership residuals with the numerator shift ``tau`` instead of ``2 tau``."""
    rng = np.random.default_rng(0) if rng is None else rng
    el = grassmann_element(h, m, rng, same_colour_shift=1)
    return q_membership(el, grassmann_weight(h, m), RootData.type_A(h), params, rng,
                        count).residuals
