import numpy as np
import pytest

from ellq.dims import ansatz_space, dim_vs_hilbert, hilbert_coeffs, hilbert_coefficient, numeric_dim
from ellq.roots import Grade, RootData, WeightForm
from ellq.star import q_membership

A1, A2 = RootData.type_A(1), RootData.type_A(2)
A1A1 = RootData.product(A1, A1)

# dimensions frozen from the Hilbert series / known small cases
TABLE = [
    (A1, (2,), (1,), 2),
    (A1, (2,), (2,), 3),
    (A1, (2,), (3,), 4),
    (A2, (1, 1), (1, 1), 3),
    (A1A1, (2, 3), (1, 1), 6),
    (A2, (1, 1), (1, 0), 1),
    (A1, (1,), (2,), 1),
]


@pytest.mark.parametrize("roots,n,l,expected", TABLE)
def test_numeric_dimension(params, roots, n, l, expected):
    for seed in range(2):
        for tau in (params.tau, 0.05 + 0.31j):
            rng = np.random.default_rng(seed)
            assert numeric_dim(WeightForm(n), Grade(l), roots, params.with_tau(tau), rng) == expected


@pytest.mark.parametrize("roots,n,l,expected", TABLE)
def test_hilbert_coefficient(roots, n, l, expected):
    assert hilbert_coefficient(roots, WeightForm(n), l) == expected


def test_hilbert_series_a1():
    # (1 - w)^-2 for n = (2,)
    coeffs = hilbert_coeffs(A1, WeightForm((2,)), (4,))
    assert {tuple(g): v for g, v in coeffs.items()} == {(k,): k + 1 for k in range(5)}


def test_product_roots_are_orthogonal():
    assert sorted(r for r, _ in A1A1.positive_roots()) == [(0, 1), (1, 0)]
    assert len(RootData.type_A(4).positive_roots()) == 10


def test_ansatz_elements_are_members(params, rng):
    space = ansatz_space(WeightForm((2,)), Grade((2,)), A1, params, rng)
    assert space.dimension == 3
    for el in space.elements:
        rep = q_membership(el, WeightForm((2,)), A1, params, rng)
        assert rep.periodicity < 1e-8


def test_dim_vs_hilbert_report(params, rng):
    checks = dim_vs_hilbert(A2, WeightForm((1, 1)), [(1, 0), (0, 1), (1, 1)], params, rng)
    assert all(c.passed for c in checks)
    assert [c.detail["measured"] for c in checks] == [1, 1, 3]
