from math import comb

import numpy as np
import pytest

from ellq.elements import q0_element, q_delta_element, random_symmetric, theta_product
from ellq.errors import RankMismatchError
from ellq.expr import AffineForm, Const
from ellq.roots import Grade, RootData, WeightForm
from ellq.star import (GradedElement, colour_shuffles, equal_numeric, grade_zero, q_membership,
                       star, subsystem_embedding_check, symmetry_residual, tau0_product)
from ellq.elliptic import EllipticParams

A1, A2 = RootData.type_A(1), RootData.type_A(2)


def test_shuffle_count():
    assert len(list(colour_shuffles((2, 1), (1, 2)))) == comb(3, 2) * comb(3, 1)
    assert len(list(colour_shuffles((0,), (3,)))) == 1


def test_constant_acts_by_scalar(params, rng):
    f = random_symmetric(Grade((2,)), A1, rng)
    two = grade_zero(Const(2.0), 1)
    lhs = star(two, f, A1)
    rhs = GradedElement(f.grade, Const(2.0) * f.body)
    assert equal_numeric(lhs, rhs, params, rng).passed


@pytest.mark.parametrize("roots,grades", [
    (A1, [(1,), (1,), (2,)]),
    (A2, [(1, 0), (0, 1), (1, 1)]),
    (A2, [(0, 1), (1, 0), (0, 1)]),
])
def test_associativity(params, rng, roots, grades):
    f, g, h = (random_symmetric(Grade(l), roots, rng) for l in grades)
    left = star(star(f, g, roots), h, roots)
    right = star(f, star(g, h, roots), roots)
    assert equal_numeric(left, right, params, rng).residual < 1e-9


def test_tau_zero_limit_is_commutative(rng):
    params = EllipticParams(tau=0.0)
    f = random_symmetric(Grade((1, 0)), A2, rng)
    g = random_symmetric(Grade((0, 1)), A2, rng)
    fg, gf = star(f, g, A2), star(g, f, A2)
    assert equal_numeric(fg, tau0_product(f, g, A2), params, rng).passed
    assert equal_numeric(fg, gf, params, rng).passed


def test_product_is_not_commutative(params, rng):
    f = random_symmetric(Grade((1, 0)), A2, rng)
    g = random_symmetric(Grade((0, 1)), A2, rng)
    assert not equal_numeric(star(f, g, A2), star(g, f, A2), params, rng).passed


def test_products_stay_symmetric(params, rng):
    f = random_symmetric(Grade((1,)), A1, rng)
    g = random_symmetric(Grade((2,)), A1, rng)
    assert symmetry_residual(star(f, g, A1), params, rng) < 1e-10


@pytest.mark.parametrize("roots,n", [(A1, (2,)), (A2, (1, 1)), (A2, (2, 1))])
def test_generators_and_products_in_q(params, rng, roots, n):
    n = WeightForm(n)
    gens = [q_delta_element(i, n, roots, rng) for i in range(roots.rank)]
    elems = gens + [star(a, b, roots) for a in gens for b in gens]
    elems.append(star(q0_element(n, roots, rng), gens[0], roots))
    for f in elems:
        rep = q_membership(f, n, roots, params, rng)
        assert rep.worst < 1e-8, (f.grade, rep.residuals)


def test_chain_condition_is_exercised(params, rng):
    # x_{1,1}, x_{2,1}, x_{1,2} in A2 populates a chain; the condition must not be vacuous
    n = WeightForm((1, 1))
    q1, q2 = (q_delta_element(i, n, A2, rng) for i in range(2))
    f = star(star(q1, q1, A2), q2, A2)
    rep = q_membership(f, n, A2, params, rng)
    assert not rep.vacuous_chains
    assert rep.chains < 1e-8


def test_non_member_fails(params, rng):
    f = random_symmetric(Grade((1,)), A1, rng)
    rep = q_membership(f, WeightForm((2,)), A1, params, rng)
    assert rep.periodicity > 1e-3


def test_wrong_shift_fails_periodicity(params, rng):
    x = AffineForm.var("x_1_1")
    body = theta_product(x, 2, AffineForm.var("u_1"), [0.3])
    rep = q_membership(GradedElement(Grade((1,)), body), WeightForm((2,)), A1, params, rng)
    assert rep.periodicity > 1e-3


def test_subsystem_embedding(params, rng):
    pairs = [(random_symmetric(Grade((1,)), A1, rng), random_symmetric(Grade((1,)), A1, rng))]
    assert subsystem_embedding_check(A2, [0], pairs, params, rng).passed


def test_grade_mismatch_raises(params, rng):
    f = random_symmetric(Grade((1,)), A1, rng)
    g = random_symmetric(Grade((2,)), A1, rng)
    with pytest.raises(RankMismatchError):
        equal_numeric(f, g, params, rng)
