import numpy as np
import pytest

from ellq.elliptic import (EllipticParams, ThetaLine, basis_rank, sample_domain, theta,
                           theta_basis, verify_multiplier, zero_sum_check)
from ellq.errors import EmptySpaceError, InvalidParameterError


def direct_theta(z, eta, cutoff=40):
    a = np.arange(-cutoff, cutoff + 1)
    return np.sum((-1.0) ** a * np.exp(2j * np.pi * (a * z + a * (a - 1) * eta / 2)))


# frozen from the series at the default eta = 0.31 + 1.07i
FROZEN = [
    (0.3 + 0.2j, (1.083813244431514 - 0.27099733917598146j)),
    (-0.41 + 0.55j, (1.0337900614015163 + 0.05434672881339609j)),
]


@pytest.mark.parametrize("z,value", FROZEN)
def test_theta_frozen_values(params, z, value):
    got = complex(theta(z, params))
    assert abs(got - value) < 1e-12
    assert abs(got - direct_theta(z, params.eta)) < 1e-12


def test_theta_quasi_periodicity(params, rng):
    z = sample_domain(rng, 100, params.eta)
    t = theta(z, params)
    assert np.allclose(theta(z + 1, params), t, rtol=1e-10, atol=1e-12)
    assert np.allclose(theta(z + params.eta, params), -np.exp(-2j * np.pi * z) * t,
                       rtol=1e-10, atol=1e-12)


def test_theta_reflection_and_zero(params, rng):
    z = sample_domain(rng, 50, params.eta)
    assert np.allclose(theta(-z, params), -np.exp(-2j * np.pi * z) * theta(z, params),
                       rtol=1e-10, atol=1e-12)
    assert abs(theta(0.0, params)) < 1e-12
    assert abs(theta(params.eta, params)) < 1e-12


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_basis_rank_and_multiplier(params, rng, m):
    line = ThetaLine(m, 0.2 - 0.1j)
    basis = theta_basis(line, params)
    assert basis_rank(basis, params, rng) == m
    for f in basis:
        assert verify_multiplier(f, line, params, rng).residual < 1e-10


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_zero_count_and_sum(params, rng, m):
    line = ThetaLine(m, 0.37 + 0.05j)
    basis = theta_basis(line, params)
    coeffs = rng.normal(size=m) + 1j * rng.normal(size=m)
    rep = zero_sum_check(lambda z: sum(c * b(z) for c, b in zip(coeffs, basis)), line, params, rng)
    assert rep.count_residual < 1e-5
    assert rep.sum_residual < 1e-5


def test_product_of_thetas_has_expected_zero_sum(params, rng):
    # theta(z - a) theta(z - b) lies in Theta_{2, 1 - a - b}
    a, b = 0.21 + 0.3j, -0.15 + 0.6j
    line = ThetaLine(2, 1 - a - b)
    f = lambda z: theta(z - a, params) * theta(z - b, params)  # noqa: E731
    assert verify_multiplier(f, line, params, rng).residual < 1e-10
    assert zero_sum_check(f, line, params, rng).residual < 1e-6


def test_wrong_line_is_detected(params, rng):
    f = lambda z: theta(z, params)  # noqa: E731
    assert verify_multiplier(f, ThetaLine(1, 0.0), params, rng).residual > 0.1


def test_invalid_parameters():
    with pytest.raises(InvalidParameterError):
        EllipticParams(eta=0.3 - 1j)
    with pytest.raises(InvalidParameterError):
        EllipticParams(series_eps=0)
    with pytest.raises(EmptySpaceError):
        theta_basis(ThetaLine(0, 0.0), EllipticParams())
