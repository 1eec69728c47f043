"""Tests for the adaptive quadrature layer."""

import math

import numpy as np
import pytest

from core.errors import (
    DecayDetectionError,
    DomainError,
    NonFiniteIntegrandError,
    QuadratureNonconvergenceError,
)
from numerics.quadrature import (
    QuadratureResult,
    Region,
    find_cutoff,
    integrate_2d,
    integrate_adaptive,
    integrate_halfline,
    snap_tolerance,
)


def test_adaptive_sine():
    res = integrate_adaptive(np.sin, 0.0, math.pi, 1e-12)
    assert res.value == pytest.approx(2.0, rel=1e-12)
    assert res.err_est <= 1e-11
    assert res.nodes_used > 0


def test_adaptive_vector_valued():
    def f(x):
        return np.stack([np.exp(x), np.exp(1j * x)], axis=1)

    res = integrate_adaptive(f, 0.0, 1.0, 1e-12)
    assert res.value.shape == (2,)
    assert res.value[0] == pytest.approx(math.e - 1.0, rel=1e-12)
    assert abs(res.value[1] - (np.exp(1j) - 1.0) / 1j) < 1e-12


def test_adaptive_breakpoints_help_kinks():
    res = integrate_adaptive(lambda x: np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, 1e-10, points=[0.3])
    exact = (2.0 / 3.0) * (0.3 ** 1.5 + 0.7 ** 1.5)
    assert res.value == pytest.approx(exact, rel=1e-10)


def test_adaptive_is_deterministic():
    f = lambda x: np.cos(40.0 * x) * np.exp(-x)
    a = integrate_adaptive(f, 0.0, 5.0, 1e-11)
    b = integrate_adaptive(f, 0.0, 5.0, 1e-11)
    assert a.value == b.value
    assert a.nodes_used == b.nodes_used


def test_adaptive_budget_exhaustion_carries_partial():
    with pytest.raises(QuadratureNonconvergenceError) as info:
        integrate_adaptive(lambda x: np.sin(1.0 / x), 1e-6, 1.0, 1e-14, budget=200)
    assert isinstance(info.value.partial, QuadratureResult)


def test_adaptive_rejects_non_finite_integrand():
    with pytest.raises(NonFiniteIntegrandError) as info:
        integrate_adaptive(lambda x: np.where(x > 0.5, np.inf, 1.0), 0.0, 1.0)
    assert isinstance(info.value, QuadratureNonconvergenceError)
    lo, hi = info.value.interval
    assert 0.0 <= lo < hi <= 1.0


def test_adaptive_rejects_bad_interval():
    with pytest.raises(DomainError):
        integrate_adaptive(np.sin, 1.0, 0.0)
    with pytest.raises(DomainError):
        integrate_adaptive(np.sin, 0.0, 1.0, tol=0.0)


@pytest.mark.parametrize("transform", ["exp-sinh", "rational"])
def test_halfline_exponential(transform):
    res = integrate_halfline(lambda x: np.exp(-x), 1e-11, transform=transform)
    assert res.value == pytest.approx(1.0, rel=1e-10)
    assert res.metadata["transform"] == transform


def test_halfline_endpoint_singularity():
    res = integrate_halfline(lambda x: np.exp(-x) / np.sqrt(x), 1e-11)
    assert res.value == pytest.approx(math.sqrt(math.pi), rel=1e-9)


def test_halfline_with_log_magnitude():
    res = integrate_halfline(lambda x: np.exp(-3.0 * x) * np.cos(x), 1e-11,
                             log_magnitude=lambda x: -3.0 * x)
    assert res.value == pytest.approx(3.0 / 10.0, rel=1e-10)


HALFLINE_CASES = [
    (lambda x: np.exp(-x) * np.cos(5.0 * x), lambda x: -x, 1.0 / 26.0),
    (lambda x: np.exp(-0.5 * x) * np.sin(3.0 * x), lambda x: -0.5 * x, 3.0 / 9.25),
    (lambda x: x ** 2 * np.exp(-0.5 * x), None, 16.0),
]


@pytest.mark.parametrize("f, log_magnitude, exact", HALFLINE_CASES)
def test_halfline_transforms_agree(f, log_magnitude, exact):
    a = integrate_halfline(f, 1e-11, transform="exp-sinh", log_magnitude=log_magnitude).value
    b = integrate_halfline(f, 1e-11, transform="rational", log_magnitude=log_magnitude).value
    assert abs(a - b) < 1e-9 * abs(exact)
    assert a == pytest.approx(exact, rel=1e-9)


def test_halfline_detects_missing_decay():
    with pytest.raises(DecayDetectionError):
        integrate_halfline(lambda x: 1.0 / (1.0 + x))


def test_halfline_zero_integrand():
    assert find_cutoff(lambda x: np.zeros_like(x)) == 0.0
    assert integrate_halfline(lambda x: np.zeros_like(x)).value == 0.0


def test_unknown_transform():
    with pytest.raises(DomainError):
        integrate_halfline(lambda x: np.exp(-x), transform="tanh-sinh")


def test_tensor_disk_area():
    res = integrate_2d(lambda x, y: np.ones_like(x), Region.disk(0.5 + 0.5j, 1.0), tol=1e-10)
    assert res.value == pytest.approx(math.pi, rel=1e-8)


def test_tensor_box_with_breakpoints():
    region = Region.box(-1.0, 1.0, 0.0, 2.0, x_points=[0.0], y_points=[1.0])
    res = integrate_2d(lambda x, y: np.abs(x) * np.abs(y - 1.0), region, tol=1e-10)
    assert res.value == pytest.approx(1.0, rel=1e-10)


def test_monte_carlo_is_seeded():
    region = Region.disk(0j, 1.0)
    f = lambda x, y: x * x + y * y
    a = integrate_2d(f, region, mode="monte-carlo", budget=200_000, seed=7)
    b = integrate_2d(f, region, mode="monte-carlo", budget=200_000, seed=7)
    assert a.value == b.value
    assert abs(a.value - math.pi / 2.0) < 5.0 * a.err_est


def test_box_validation_and_mode():
    with pytest.raises(DomainError):
        Region.box(1.0, 0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        integrate_2d(lambda x, y: x, Region.box(0.0, 1.0, 0.0, 1.0), mode="sparse-grid")


def test_snap_tolerance():
    assert snap_tolerance(1e-4) == 1e-4
    assert snap_tolerance(3e-7) == 1e-8
    assert snap_tolerance(1e-20) == 1e-12


def test_tensor_and_monte_carlo_agree():
    region = Region.disk(0.5 + 0.5j, 1.0)
    f = lambda x, y: np.exp(-(x * x + y * y)) * (1.0 + x)
    tensor = integrate_2d(f, region, tol=1e-10)
    mc = integrate_2d(f, region, mode="monte-carlo", budget=400_000, seed=3)
    assert abs(mc.value - tensor.value) <= 3.0 * mc.err_est
    assert mc.metadata["mode"] == "monte-carlo"


def test_monte_carlo_samples_only_inside_the_region():
    def f(x, y):
        r2 = x * x + y * y
        assert np.all(r2 < 1.0)
        return 1.0 / (1.0 - r2) ** 0.25

    res = integrate_2d(f, Region.disk(0j, 1.0), mode="monte-carlo", budget=200_000, seed=5)
    # int over the unit disk of (1 - r^2)^(-1/4) = 4 pi / 3
    assert np.isfinite(res.value)
    assert abs(res.value - 4.0 * math.pi / 3.0) < 5.0 * res.err_est
