"""Tests for the weights alpha_j and omega_j."""

import math

import numpy as np
import pytest
from scipy import integrate

from core.errors import DomainError
from numerics.specfun import alpha_hat
from numerics.weights import WeightIndex, alpha, alpha_sup, fiber_angle, omega


def test_fiber_angle_matches_arccos():
    v = np.array([0.1, 0.5, 1.0, 3.0, 10.0])
    np.testing.assert_allclose(fiber_angle(v), np.arccos(np.exp(-v)), rtol=1e-13)


def test_fiber_angle_small_v_keeps_precision():
    v = 1e-12
    assert fiber_angle(v) == pytest.approx(math.sqrt(2.0 * v), rel=1e-6)
    assert fiber_angle(0.0) == 0.0


def test_alpha_central_index():
    v = np.linspace(0.05, 5.0, 20)
    np.testing.assert_allclose(alpha(-1, v), 2.0 * math.pi * np.arccos(np.exp(-v)), rtol=1e-13)


@pytest.mark.parametrize("j", [0, 1, 4])
def test_alpha_reflection(j):
    v = np.linspace(0.05, 5.0, 20)
    np.testing.assert_array_equal(alpha(j, v), alpha(-2 - j, v))


@pytest.mark.parametrize("j", [-1, 0, 2])
def test_alpha_tends_to_sup(j):
    assert alpha(j, 60.0) == pytest.approx(alpha_sup(j), rel=1e-12)
    assert alpha(j, 1.0) < alpha_sup(j)


@pytest.mark.parametrize("j,xi", [(-1, 0.5), (0, 1.0), (2, 2.0)])
def test_alpha_hat_is_laplace_transform_of_alpha(j, xi):
    value, _ = integrate.quad(lambda v: alpha(j, v) * math.exp(-2.0 * xi * v), 0.0, np.inf,
                              epsabs=0, epsrel=1e-12, limit=200)
    assert alpha_hat(j, xi).value == pytest.approx(value, rel=1e-8)


def test_omega_factorises():
    w1 = 0.7 + 1.3j
    assert omega(2, w1) == pytest.approx(math.exp(3 * 0.7) * alpha(2, 1.3), rel=1e-14)
    assert omega(-1, w1) == pytest.approx(alpha(-1, 1.3), rel=1e-14)


def test_domain_errors():
    with pytest.raises(DomainError):
        alpha(0, 0.0)
    with pytest.raises(DomainError):
        omega(0, 1.0 - 0.1j)


def test_weight_index():
    idx = WeightIndex(3)
    assert idx.k == 4
    assert idx.mirror == WeightIndex(-5)
    assert WeightIndex(-1).is_central
