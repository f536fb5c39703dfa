import numpy as np
import pytest

from ellq.errors import InvalidParameterError, UnsupportedError
from ellq.showcase.affine import affine_commuting_check, central_shift_check, gspace_check
from ellq.showcase.belavin import (belavin_generators, belavin_membership, relations10_check,
                                   z_consistency_check)
from ellq.showcase.generalized_r import (generalized_r_check, printed_shift_residual,
                                         exchange_relations_check, ybe_probe)
from ellq.showcase.grassmann import grassmann_check, grassmann_element, printed_shift_residuals
from ellq.showcase.hm import hm_commuting_check, hm_membership, hm_product, hm_taus, k_alpha
from ellq.showcase.sklyanin import sklyanin_hilbert_check


def _all_pass(checks):
    bad = [(c.name, c.residual) for c in checks if not c.passed]
    assert not bad, bad


# -- Belavin-type generators -------------------------------------------------

def test_belavin_relations(params, rng):
    _all_pass(relations10_check(2, 1, (2, 2), params, rng))
    _all_pass(z_consistency_check(2, 1, (2, 2), params, rng))
    _all_pass(belavin_membership(2, 1, params, rng))


def test_belavin_generators_shape(rng):
    alg, fs, zs = belavin_generators(2, 1, (2, 2), rng)
    assert set(fs) == {(1, 1), (2, 1), (1, 2), (2, 2)}
    assert set(zs) == {1, 2}


# -- Grassmannian ----------------------------------------------------------

def test_grassmann_h2(params, rng):
    checks = grassmann_check(2, 4, params, rng, taus=[params.tau, 0.05 + 0.31j])
    _all_pass(checks)
    flat = next(c for c in checks if c.name.endswith("dim_flat"))
    assert flat.detail["dims"] == [3, 3]


@pytest.mark.parametrize("h,m,expected", [(2, 3, 1), (1, 2, 2)])
def test_grassmann_small_dims(params, rng, h, m, expected):
    checks = grassmann_check(h, m, params, rng)
    _all_pass(checks)
    flat = next(c for c in checks if c.name.endswith("dim_flat"))
    assert flat.detail["dims"] == [expected, expected]


def test_grassmann_printed_shift_fails(params, rng):
    res = printed_shift_residuals(2, 4, params, rng)
    assert res["chains"] > 1e-3


def test_grassmann_rank_limits(rng):
    with pytest.raises(UnsupportedError):
        grassmann_element(3, 5, rng)
    with pytest.raises(InvalidParameterError):
        grassmann_element(2, 1, rng)


# -- Sklyanin-type Hilbert series --------------------------------------------

@pytest.mark.parametrize("h,m", [(1, 1), (2, 1)])
def test_sklyanin_hilbert(params, rng, h, m):
    checks = sklyanin_hilbert_check(h, m, params, rng)
    _all_pass(checks)


# -- generalized R-matrix algebra ------------------------------------------

def test_generalized_r(params, rng):
    _all_pass(generalized_r_check(3, 2, params, rng))


def test_generalized_r_printed_shift_rules_fail(params, rng):
    assert printed_shift_residual(3, 2, params, rng) > 0.1
    checks = exchange_relations_check(3, 2, params, rng, printed=True)
    assert any(not c.passed for c in checks)


@pytest.mark.parametrize("h,nu", [(4, 2), (5, 2), (5, 3)])
def test_ybe(params, rng, h, nu):
    assert ybe_probe(h, nu, params, rng).residual < 1e-9


def test_ybe_needs_distinct_second_indices(params, rng):
    with pytest.raises(InvalidParameterError):
        ybe_probe(3, 2, params, rng)
    with pytest.raises(InvalidParameterError):
        ybe_probe(4, 2, params, rng, triple=((1, 2), (2, 2), (1, 3)))


# -- affine commuting family -------------------------------------------------

@pytest.mark.parametrize("h", [2, 3])
def test_affine_gspace(params, rng, h):
    _all_pass(gspace_check(h, params, rng))


def test_affine_commuting(params, rng):
    _all_pass(affine_commuting_check(3, 2, params, rng, pairs=[(1, 1), (1, 2)]))
    _all_pass(affine_commuting_check(2, 2, params, rng, pairs=[(1, 2)]))


def test_affine_central_shift():
    assert central_shift_check(3, 2).passed


# -- H_m commuting family -----------------------------------------------------

def test_hm_commuting(params, rng):
    _all_pass(hm_commuting_check(3, hm_taus(), params, rng))


def test_hm_product_membership(params, rng):
    taus = hm_taus()
    rep = hm_membership(hm_product(k_alpha(1, taus), k_alpha(2, taus), taus), taus, params, rng)
    assert max(rep.values()) < 1e-8


def test_hm_taus_must_sum_to_zero():
    with pytest.raises(InvalidParameterError):
        hm_taus(0.1 + 0.2j, 0.3j, 0.5)


def test_hm_unit():
    taus = hm_taus()
    assert k_alpha(1, taus).arity == 1
    assert np.isclose(complex(k_alpha(1, taus).body.value), 1.0)
