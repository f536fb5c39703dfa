import pytest

from ellq.elements import q0_element, q_delta_element
from ellq.intertwiner import TwistData, intertwine_check, kappa_map
from ellq.oper import OperatorAlgebra, OperatorElement
from ellq.roots import RootData, WeightForm

A1, A2 = RootData.type_A(1), RootData.type_A(2)


def _pair(roots, n, twist, rng, i=0, j=0):
    f = q_delta_element(i, WeightForm(n), roots, rng)
    npr = WeightForm(twist.nprime)
    g = q_delta_element(j, npr, roots, rng) if npr[j] > 0 else q0_element(npr, roots, rng)
    return f, g


def test_twist_data():
    t = TwistData.build(A1, (1,), (2,))
    assert t.nprime == (3,)
    t2 = TwistData.build(A2, (1, 1), (1, 1))
    assert t2.nprime == (0, 0)


@pytest.mark.parametrize("roots,n,p,i,j", [
    (A1, (1,), (2,), 0, 0),
    (A1, (1,), (3,), 0, 0),
    (A2, (1, 1), (2, 2), 0, 1),
    (A2, (1, 1), (2, 2), 1, 0),
    (A2, (1, 1), (1, 1), 0, 0),
])
def test_intertwining(params, rng, roots, n, p, i, j):
    twist = TwistData.build(roots, n, p)
    f, g = _pair(roots, n, twist, rng, i, j)
    res = intertwine_check(f, g, twist, params, rng)
    assert res.residual < 1e-9


def test_printed_twist_fails(params, rng):
    twist = TwistData.build(A1, (1,), (2,), variant="printed")
    f, g = _pair(A1, (1,), twist, rng)
    assert intertwine_check(f, g, twist, params, rng).residual > 1e-3


def test_kappa_map_inverts_degrees():
    twist = TwistData.build(A1, (1,), (2,))
    alg = OperatorAlgebra(A1, (2,))
    e = OperatorElement.generator(alg, 1, 0)
    out = kappa_map(e, alg, twist)
    assert out.support == [(-1, 0)]


def test_unknown_variant():
    with pytest.raises(ValueError):
        TwistData.build(A1, (1,), (2,), variant="other")
