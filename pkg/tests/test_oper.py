import numpy as np
import pytest

from ellq.dims import ansatz_space
from ellq.elements import q0_element, q_delta_element
from ellq.oper import (OperatorAlgebra, OperatorElement, compare_operators, double_swap_check,
                       format_operator, homomorphism_check, injectivity_probe, op_multiply, x_map)
from ellq.roots import Grade, RootData, WeightForm

A1, A2 = RootData.type_A(1), RootData.type_A(2)


@pytest.mark.parametrize("roots,n,p", [(A1, (2,), (2,)), (A2, (1, 1), (2, 2)), (A2, (1, 1), (1, 2))])
def test_homomorphism(params, rng, roots, n, p):
    alg = OperatorAlgebra(roots, p)
    n = WeightForm(n)
    gens = [q_delta_element(i, n, roots, rng) for i in range(roots.rank)]
    for f in gens:
        for g in gens:
            res = homomorphism_check(f, g, alg, params, rng)
            assert res.residual < 1e-9, res.detail


def test_homomorphism_with_grade_zero(params, rng):
    alg = OperatorAlgebra(A1, (2,))
    n = WeightForm((2,))
    c = q0_element(n, A1, rng)
    f = q_delta_element(0, n, A1, rng)
    assert homomorphism_check(c, f, alg, params, rng).passed


def test_exchange_is_involutive(params, rng):
    alg = OperatorAlgebra(A2, (2, 1))
    for a in range(alg.size):
        for b in range(alg.size):
            if a != b:
                assert double_swap_check(alg, a, b, params, rng).passed


def test_operator_product_associative(params, rng):
    alg = OperatorAlgebra(A2, (1, 1))
    e = [OperatorElement.generator(alg, a, i) for (a, i) in alg.gens]
    left = op_multiply(op_multiply(e[0], e[1]), e[0])
    right = op_multiply(e[0], op_multiply(e[1], e[0]))
    assert compare_operators(left, right, params, rng).passed


def test_support_mismatch_reported(params, rng):
    alg = OperatorAlgebra(A1, (2,))
    e1 = OperatorElement.generator(alg, 1, 0)
    e2 = OperatorElement.generator(alg, 2, 0)
    res = compare_operators(e1, e2, params, rng)
    assert not res.passed


def test_x_map_degrees_and_text(rng):
    alg = OperatorAlgebra(A1, (2,))
    f = q_delta_element(0, WeightForm((2,)), A1, rng)
    X = x_map(f, alg)
    assert len(X.support) == 2
    assert "e_1_1" in format_operator(X) and "e_2_1" in format_operator(X)


def test_injectivity_probe(params, rng):
    space = ansatz_space(WeightForm((2,)), Grade((2,)), A1, params, rng)
    out = injectivity_probe(space.elements, A1, [(1,), (2,), (3,)], params, rng,
                            fixed=space.u_point)
    assert out["size"] == 3
    # frozen: already injective at p = (1,)
    assert out["ranks"] == {(1,): 3, (2,): 3, (3,): 3}
    assert out["full_rank_p"] == (1,)
