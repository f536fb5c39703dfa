"""Builders for concrete elements: theta products, random symmetric
functions and simple members of Q."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .expr import AffineForm, Const, Expr, Theta, add, as_affine, mul, ratio
from .roots import Grade, RootData, WeightForm, u_name, x_name
from .star import GradedElement

TAU = AffineForm.var("tau")


def theta_product(z, order: int, shift, offsets: Sequence[complex]) -> Expr:
    """An element of ``Theta_{order, shift}`` in the affine variable ``z``.

    It is ``prod_k theta(z - a_k)`` with ``a_k = offsets[k]`` for
    ``k < order - 1`` and the last zero placed so the zeros sum to
    ``order/2 - shift``, which fixes the multiplier.
    """
    z = as_affine(z)
    shift = as_affine(shift)
    if order <= 0:
        raise ValueError("theta_product needs a positive order")
    offs = [complex(o) for o in offsets[:order - 1]]
    if len(offs) < order - 1:
        raise ValueError(f"need {order - 1} offsets")
    last = AffineForm.constant(order / 2 - sum(offs)) - shift
    zeros = [AffineForm.constant(o) for o in offs] + [last]
    return mul(*[Theta(z - a) for a in zeros])


def random_offsets(rng: np.random.Generator, k: int, spread: float = 1.0) -> list[complex]:
    return list(spread * (rng.random(k) + 1j * rng.random(k)))


def q_delta_element(i: int, n: WeightForm, roots: RootData, rng: np.random.Generator,
                    label: str = "") -> GradedElement:
    """A random element of ``Q_{d_i}``: a theta function of order ``n_i`` in
    ``x_{1,i}`` with multiplier constant ``u_i - (d_i,d_i) tau``.

    The zeros move with ``-u_i / n_i`` so the element is invariant under
    ``x -> x - nu, u_i -> u_i + n_i nu``.
    """
    m = n[i]
    if m <= 0:
        raise ValueError(f"Q_delta_{i + 1} is zero for n_i = {m}")
    x = AffineForm.var(x_name(1, i + 1)) + AffineForm.var(u_name(i + 1)) * (1.0 / m)
    shift = TAU * (-roots.gram[i][i])
    body = theta_product(x, m, shift, random_offsets(rng, m - 1))
    return GradedElement(Grade.unit(roots.rank, i), body, label or f"q{i + 1}")


def q0_invariants(n: WeightForm, roots: RootData) -> list[AffineForm]:
    """Integer linear forms in ``u`` invariant under the component translations."""
    out = []
    for comp in roots.components():
        comp = list(comp)
        nz = [j for j in comp if n[j] != 0]
        for j in comp:
            if n[j] == 0:
                out.append(AffineForm.var(u_name(j + 1)))
        for a, b in zip(nz, nz[1:]):
            out.append(AffineForm({u_name(a + 1): n[b], u_name(b + 1): -n[a]}))
    return out


def q0_element(n: WeightForm, roots: RootData, rng: np.random.Generator) -> GradedElement:
    """A random element of ``Q_0``: a theta quotient in the invariant forms
    (a nonzero constant when there are none)."""
    inv = q0_invariants(n, roots)
    c = complex(rng.normal(), rng.normal())
    if not inv:
        return GradedElement(Grade.zero(roots.rank), Const(c), "c")
    num, den = [], []
    for form in inv:
        a, b = rng.random(2) + 1j * rng.random(2)
        num.append(Theta(form + a))
        den.append(Theta(form + b))
    return GradedElement(Grade.zero(roots.rank), mul(Const(c), ratio(num, den)), "q0")


def random_symmetric(grade: Grade, roots: RootData, rng: np.random.Generator,
                     terms: int = 2, label: str = "") -> GradedElement:
    """A random element of F_l: a sum of colour-symmetric theta products with a
    symmetric pole factor in each colour."""
    h = roots.rank
    pieces = []
    for _ in range(terms):
        factors: list[Expr] = [Const(complex(rng.normal(), rng.normal()))]
        num, den = [], []
        for i in range(h):
            a = complex(rng.normal() * 0.5)
            b = complex(*rng.random(2))
            for al in range(1, grade[i] + 1):
                factors.append(Theta(AffineForm({x_name(al, i + 1): 1, u_name(i + 1): a}) + b))
            s = complex(*rng.random(2))
            for al in range(1, grade[i] + 1):
                for be in range(al + 1, grade[i] + 1):
                    d = AffineForm({x_name(al, i + 1): 1, x_name(be, i + 1): -1})
                    num.append(Theta(d + s))
                    num.append(Theta(-d + s))
                    den.append(Theta(d))
                    den.append(Theta(-d))
        if grade.total == 0:
            u = AffineForm({u_name(i + 1): complex(rng.normal()) for i in range(h)})
            factors.append(Theta(u + complex(*rng.random(2))))
        if num:
            factors.append(ratio(num, den))
        pieces.append(mul(*factors))
    return GradedElement(grade, add(*pieces), label)
