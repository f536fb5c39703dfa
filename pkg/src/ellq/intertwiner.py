"""Intertwining elements: the dual weight, the twist ``omega``, translations
``T_mu`` and the homomorphism ``kappa`` from the algebra at ``-tau``.

The primed algebra at ``-tau`` shares generator and variable names with the
unprimed one.  Primed coefficients are built with the symbol ``tau`` meaning
``-tau`` (so the usual constructors apply verbatim) and converted by the
substitution ``tau -> -tau`` before ``kappa`` is applied.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .elliptic import EllipticParams
from .errors import RankMismatchError
from .expr import AffineForm, Expr, ExpTwoPiI, ONE, Theta, add, mul, ratio, substitute
from .oper import OperatorAlgebra, OperatorElement, compare_operators, op_multiply, x_map
from .report import CheckResult
from .roots import RootData, WeightForm, u_name, y_name
from .star import GradedElement

TAU = AffineForm.var("tau")
FLIP_TAU = {"tau": -TAU}


@dataclass(frozen=True)
class TwistData:
    """``n'``, ``mu`` and ``omega`` for given ``(roots, n, p)``.

    ``mu`` is stored as pairs ``(tau coefficient, constant)`` in the original
    ``tau``.  The default variant uses
    ``mu_i = (-n'_i (d_i,d_i) + (d_i,p)) tau + 1/2 sum_j a_ji p_j`` together with
    the factor ``exp(-2 pi i y_{b,i})`` for every ``b`` (``b = a`` included) in
    ``kappa(e'_{a,i})``; the identity ``y(g) x(f) = (T x(f)) y(g)`` holds only
    with both.  ``variant="printed"`` keeps ``-(n'_i + 3)`` and ``b != a``.
    """

    roots: RootData
    n: tuple
    p: tuple
    nprime: tuple
    mu: tuple
    variant: str = "corrected"

    @classmethod
    def build(cls, roots: RootData, n: Sequence[int], p: Sequence[int],
              variant: str = "corrected") -> "TwistData":
        if variant not in ("corrected", "printed"):
            raise ValueError(f"unknown variant {variant!r}")
        h = roots.rank
        if len(n) != h or len(p) != h:
            raise RankMismatchError("n and p must match the rank")
        a = roots.cartan_matrix.astype(int)
        g = roots.gram
        nprime = tuple(int(sum(a[j][i] * p[j] for j in range(h)) - n[i]) for i in range(h))
        mu = []
        for i in range(h):
            pair_p = sum(g[i][j] * p[j] for j in range(h))
            extra = 3 if variant == "printed" else 0
            coeff = -(nprime[i] + extra) * g[i][i] + pair_p
            const = Fraction(int(sum(a[j][i] * p[j] for j in range(h))), 2)
            mu.append((int(coeff), const))
        return cls(roots, tuple(n), tuple(p), nprime, tuple(mu), variant)

    def mu_value(self, tau: complex) -> np.ndarray:
        return np.array([c * tau + float(d) for c, d in self.mu], dtype=complex)

    def omega(self, l: Sequence[int]) -> list[AffineForm]:
        """``omega(l)`` as affine forms in ``tau``: ``omega(d_i)_j = -2 (d_i,d_j) tau``."""
        g = self.roots.gram
        h = self.roots.rank
        return [TAU * (-2 * sum(l[i] * g[i][j] for i in range(h))) for j in range(h)]


def translate(A: OperatorElement, shift: Sequence[AffineForm]) -> OperatorElement:
    """``T_shift``: ``u_i -> u_i + shift_i`` in every coefficient."""
    mapping = {u_name(i + 1): AffineForm.var(u_name(i + 1)) + s
               for i, s in enumerate(shift) if not s.is_constant() or s.const != 0}
    if not mapping:
        return A
    return A.map_coefficients(lambda c: substitute(c, mapping))


def t_mu_apply(A: OperatorElement, mu: Sequence) -> OperatorElement:
    """``T_mu`` for complex or affine ``mu``."""
    return translate(A, [s if isinstance(s, AffineForm) else AffineForm.constant(s) for s in mu])


def twisted_multiply(A: OperatorElement, B: OperatorElement, twist: TwistData) -> OperatorElement:
    """``A o B = (T_{omega(deg B)} A) B`` for homogeneous ``B``."""
    degs = B.degrees()
    if len(degs) > 1:
        raise ValueError("twisted product needs a homogeneous right factor")
    if not degs:
        return OperatorElement.from_dict(A.algebra, {})
    return op_multiply(translate(A, twist.omega(next(iter(degs)))), B)


class Kappa:
    """``kappa`` from the primed algebra at ``-tau`` into the twisted algebra."""

    def __init__(self, algebra: OperatorAlgebra, twist: TwistData):
        self.algebra = algebra
        self.twist = twist
        roots = algebra.roots
        a = roots.cartan_matrix.astype(int)
        self._u_map = {}
        for i in range(roots.rank):
            form = -AffineForm.var(u_name(i + 1))
            for (b, j) in algebra.gens:
                if a[j][i]:
                    form = form - AffineForm.var(y_name(b, j + 1)) * a[j][i]
            self._u_map[u_name(i + 1)] = form
        self._letters: dict = {}

    def function(self, coeff: Expr) -> Expr:
        """``kappa`` on coefficients, which are already in the original ``tau``."""
        return substitute(coeff, self._u_map)

    def letter(self, a: int, i: int) -> OperatorElement:
        """``kappa(e'_{a,i})``."""
        key = (a, i)
        if key in self._letters:
            return self._letters[key]
        alg = self.algebra
        roots = alg.roots
        g, cm = roots.gram, roots.cartan_matrix.astype(int)
        ya = AffineForm.var(y_name(a, i + 1))
        num, den = [], []
        for (b, j) in alg.gens:
            yb = AffineForm.var(y_name(b, j + 1))
            if j != i:
                for d in range(-cm[j][i]):
                    num.append(Theta(ya - yb - TAU * (g[i][j] + g[i][i] + d * g[j][j])))
                    num.append(ExpTwoPiI(yb * 0.5))
            elif b != a:
                num.append(ExpTwoPiI(-yb))
                den.append(Theta(ya - yb - TAU * g[i][i]))
                den.append(Theta(ya - yb))
            elif self.twist.variant == "corrected":
                num.append(ExpTwoPiI(-yb))
        coeff = ratio(num, den) if den else mul(*num) if num else ONE
        out = OperatorElement.from_dict(alg, {alg.unit(a, i, -1): coeff})
        self._letters[key] = out
        return out

    def apply(self, A: OperatorElement) -> OperatorElement:
        """``kappa`` on an element with nonnegative exponents, in normal order."""
        alg = self.algebra
        total = OperatorElement.from_dict(alg, {})
        for exps, coeff in A.terms:
            if any(k < 0 for k in exps):
                raise ValueError("kappa is implemented on nonnegative monomials")
            acc = OperatorElement.scalar(alg, self.function(coeff))
            for (a, i), k in zip(alg.gens, exps):
                for _ in range(k):
                    acc = twisted_multiply(acc, self.letter(a, i), self.twist)
            total = total + acc
        return total


def primed_params(params: EllipticParams) -> EllipticParams:
    return params.with_tau(-params.tau)


def y_map(g: GradedElement, algebra: OperatorAlgebra, twist: TwistData) -> OperatorElement:
    """``y(g) = kappa T'_mu x'(g)`` for ``g`` written at ``-tau``."""
    xp = x_map(g, algebra)
    # mu in the primed world, where the symbol tau stands for -tau
    mu = [TAU * (-c) + float(d) for c, d in twist.mu]
    xp = translate(xp, mu)
    xp = xp.map_coefficients(lambda c: substitute(c, FLIP_TAU))
    return Kappa(algebra, twist).apply(xp)


def intertwine_check(f: GradedElement, g: GradedElement, twist: TwistData,
                     params: EllipticParams, rng=None, count=None) -> CheckResult:
    """``y(g) x(f)`` against ``(T_{-omega(l)} x(f)) y(g)`` with ``l`` the grade of ``g``."""
    rng = np.random.default_rng(0) if rng is None else rng
    t0 = time.perf_counter()
    alg = OperatorAlgebra(twist.roots, twist.p)
    Y = y_map(g, alg, twist)
    X = x_map(f, alg)
    left = op_multiply(Y, X)
    right = op_multiply(translate(X, [-s for s in twist.omega(g.grade)]), Y)
    res = compare_operators(left, right, params, rng, count, name="intertwine",
                            anchor="y(g) commutes with x(f) up to translation")
    res.detail["y_degrees"] = sorted(Y.degrees())
    res.wall_time = time.perf_counter() - t0
    return res


def kappa_map(A: OperatorElement, algebra: OperatorAlgebra, twist: TwistData) -> OperatorElement:
    """``kappa`` applied to a primed element whose coefficients are already in ``tau``."""
    return Kappa(algebra, twist).apply(A)
