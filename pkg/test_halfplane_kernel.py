"""Tests for the half-plane kernels K_j."""

import math

import numpy as np
import pytest
from scipy import integrate

from core.errors import DiagonalError, DomainError, SeparationError, SeparationTooSmallError
from kernels.base import LAMBDA_MIN, HalfPlanePoint, KernelResult, Representation, Separation
from kernels.cache import ExpansionCache, psi_cache
from kernels.halfplane import (
    b_lambda,
    f_j,
    fourier_batch,
    i_moment,
    kernel_from_lambda,
    kernel_j,
    kernel_j_asymptotic,
    kernel_j_fourier,
    kernel_j_integral,
    phi_lambda,
    psi_n,
)


PI3 = math.pi ** 3


# =====================================================================
# Separations
# =====================================================================

def test_separation_from_points():
    sep = Separation.from_points(0.5 + 1.0j, -0.5 + 2.0j)
    assert sep.lam == pytest.approx(-1j * ((0.5 + 1.0j) - (-0.5 - 2.0j)))
    assert sep.re == pytest.approx(3.0)
    assert sep.z_minus_wbar == pytest.approx(1.0 + 3.0j)


def test_separation_validation():
    with pytest.raises(DiagonalError):
        Separation(1e-8)
    with pytest.raises(SeparationError):
        Separation(-0.1 + 1.0j)
    with pytest.raises(DomainError):
        HalfPlanePoint(1.0 - 0.5j)


def test_b_lambda():
    assert b_lambda(1.0) == pytest.approx(math.acos(math.exp(-0.5)), rel=1e-13)
    assert b_lambda(1.0 + 10.0j) == pytest.approx(math.pi / 2.0)
    assert b_lambda(0.01 + 1.0j) == pytest.approx(0.5)


# =====================================================================
# Representations
# =====================================================================

@pytest.mark.parametrize("lam", [0.2, 0.5 + 1.0j, 1.0, 2.0 - 5.0j, 5.0 + 1.0j])
@pytest.mark.parametrize("j", [-4, -1, 0, 3])
def test_integral_and_fourier_agree(lam, j):
    a = kernel_from_lambda(j, lam, 1e-10, Representation.INTEGRAL)
    b = kernel_from_lambda(j, lam, 1e-10, Representation.FOURIER)
    assert abs(a.value - b.value) < 1e-7 * abs(b.value)
    assert a.representation == Representation.INTEGRAL
    assert b.representation == Representation.FOURIER


def test_fourier_matches_scipy_quadrature():
    lam = 0.5
    for j in (-1, 0, 2):
        k = j + 1
        value, _ = integrate.quad(lambda s: 2.0 * math.cos(k * s) * phi_lambda(lam, s).real, 0.0, 40.0,
                                  epsabs=0, epsrel=1e-12, limit=400)
        assert kernel_from_lambda(j, lam, 1e-11, Representation.FOURIER).value.real == pytest.approx(value, rel=1e-9)


def test_point_wrappers_agree():
    z, w = 0.3 + 0.4j, -0.2 + 0.6j
    ref = kernel_j(0, z, w, 1e-10).value
    assert abs(kernel_j_integral(0, z, w).value - ref) < 1e-8 * abs(ref)
    assert abs(kernel_j_fourier(0, z, w).value - ref) < 1e-8 * abs(ref)


def test_dispatch_rule():
    assert kernel_from_lambda(0, 0.2).representation == Representation.INTEGRAL
    assert kernel_from_lambda(0, 0.19 + 1.0j).representation == Representation.FOURIER
    assert kernel_from_lambda(0, 1e-4).representation == Representation.FOURIER


def test_integral_refuses_small_damping():
    with pytest.raises(SeparationTooSmallError):
        kernel_from_lambda(0, 1e-4 + 1.0j, representation=Representation.INTEGRAL)


def test_series_is_not_a_kj_representation():
    with pytest.raises(DomainError):
        kernel_from_lambda(0, 1.0, representation=Representation.SERIES)


def test_fourier_batch_matches_single_calls():
    lams = [0.1, 0.5 + 2.0j, 3.0]
    values, errs, nodes = fourier_batch(1, lams, 1e-10)
    assert values.shape == (3,)
    assert nodes > 0
    # the batch criterion is relative to its largest member
    scale = np.max(np.abs(values))
    for lam, v in zip(lams, values):
        single = kernel_from_lambda(1, lam, 1e-10, Representation.FOURIER).value
        assert abs(v - single) < 1e-8 * scale
    assert np.all(errs >= 0)


def test_fourier_batch_rejects_bad_lambdas():
    with pytest.raises(DomainError):
        fourier_batch(0, [1.0, -0.5])
    with pytest.raises(DiagonalError):
        fourier_batch(0, [1.0, 0.5 * LAMBDA_MIN])


# =====================================================================
# Structure of K_j
# =====================================================================

@pytest.mark.parametrize("lam", [0.05, 0.7, 4.0])
def test_positive_on_the_diagonal(lam):
    for j in (-2, -1, 0, 5):
        res = kernel_from_lambda(j, lam)
        assert res.value.real > 0
        assert abs(res.value.imag) < 1e-12 * res.value.real


def test_index_reflection():
    for lam in (0.05 + 0.3j, 1.0 + 1.0j):
        assert kernel_from_lambda(2, lam).value == kernel_from_lambda(-4, lam).value


def test_hermitian_in_lambda():
    lam = 0.8 + 1.7j
    a = kernel_from_lambda(1, lam).value
    b = kernel_from_lambda(1, lam.conjugate()).value
    assert abs(a - b.conjugate()) < 1e-12 * abs(a)


def test_real_translation_invariance():
    z, w = 0.3 + 0.4j, -0.2 + 0.6j
    a = kernel_j(1, z, w).value
    b = kernel_j(1, z + 2.5, w + 2.5).value
    assert abs(a - b) < 1e-9 * abs(a)


@pytest.mark.parametrize("lam", [2.0, 3.0 + 1.0j])
def test_root_criterion(lam):
    bound = math.exp(-0.9 * b_lambda(lam))
    for k in (20, 40, 60):
        value = abs(kernel_from_lambda(k - 1, lam, 1e-8).value)
        assert value ** (1.0 / k) <= bound


def test_phi_lambda_is_even():
    s = np.linspace(0.0, 3.0, 7)
    np.testing.assert_allclose(phi_lambda(0.5 + 0.2j, s), phi_lambda(0.5 + 0.2j, -s), rtol=1e-14)


def test_k_minus_one_at_lambda_100():
    value = kernel_from_lambda(-1, 100.0, 1e-12).value
    assert value.real > 0
    assert value.real == pytest.approx(1.0 / (PI3 * 1e4), rel=0.05)


# =====================================================================
# Limits and the expansion
# =====================================================================

def test_i_moment_at_zero():
    assert i_moment(0, 0.0) == pytest.approx(2.0, rel=1e-12)
    assert i_moment(1, 0.0) == pytest.approx(4.0 - 4.0 * math.log(2.0), rel=1e-10)


@pytest.mark.parametrize("xi", [0.0, 0.5, 1.0, 2.0, 4.0])
def test_psi2_closed_form(xi):
    assert psi_n(2, xi) == pytest.approx(-i_moment(0, xi) / (2.0 * PI3), rel=1e-8)


def test_psi2_at_zero():
    assert psi_n(2, 0.0) == -1.0 / PI3


def test_psi_n_rejects_small_order():
    with pytest.raises(DomainError):
        psi_n(1, 0.0)


def test_large_lambda_limit():
    assert f_j(-1, 1e4, 1e-12).real == pytest.approx(-1.0 / PI3, rel=1e-3)
    x = math.pi / 2.0
    assert f_j(0, 1e4, 1e-12).real == pytest.approx(-(x / math.sinh(x)) / PI3, rel=1e-3)


def test_expansion_at_lambda_100():
    for j in (-1, 0):
        exact = f_j(j, 100.0, 1e-12)
        approx = -(100.0 ** 2) * kernel_from_lambda(j, 100.0, representation=Representation.ASYMPTOTIC,
                                                    order=5).value
        assert abs(exact - approx) < 1e-4 * abs(exact)


@pytest.mark.parametrize("j", [-1, 0])
@pytest.mark.parametrize("order", [3, 4])
def test_asymptotic_error_slope(j, order):
    radii = np.array([10.0, 20.0, 50.0, 100.0])
    errs = []
    for r in radii:
        exact = kernel_from_lambda(j, r, 1e-13, Representation.INTEGRAL).value
        errs.append(abs(kernel_from_lambda(j, r, representation=Representation.ASYMPTOTIC, order=order).value - exact))
    slope = np.polyfit(np.log(radii), np.log(errs), 1)[0]
    assert abs(slope + order) <= 0.3


def test_asymptotic_order_range():
    with pytest.raises(DomainError):
        kernel_j_asymptotic(0, 1j, 1j, N=2)
    with pytest.raises(DomainError):
        kernel_j_asymptotic(0, 1j, 1j, N=9)


def test_small_lambda_boundedness():
    values = [math.sqrt(lam) * f_j(-1, lam, 1e-10).real for lam in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)]
    assert all(v < 0 for v in values)
    mags = [abs(v) for v in values]
    assert max(mags) / min(mags) < 10.0


# =====================================================================
# Results and the memo
# =====================================================================

def test_kernel_result_to_dict():
    res = kernel_from_lambda(0, 1.0)
    data = res.to_dict()
    assert data["representation"] == "integral"
    assert "nodes" in data["diagnostics"]
    with pytest.raises(ValueError):
        KernelResult(value=1.0, err_est=-1.0, representation=Representation.FOURIER)


def test_expansion_cache_hits():
    cache = ExpansionCache()
    calls = []

    def compute():
        calls.append(1)
        return 42.0

    assert cache.get_or_compute("psi", 3, 0.5, 1e-12, compute) == 42.0
    assert cache.get_or_compute("psi", 3, 0.5, 1e-12, compute) == 42.0
    assert len(calls) == 1
    stats = cache.get_stats()
    assert stats["hits"] == 1 and stats["misses"] == 1
    cache.clear()
    assert cache.get_stats()["size"] == 0


def test_psi_cache_is_used():
    before = psi_cache.get_stats()["hits"]
    psi_n(4, 1.25)
    psi_n(4, 1.25)
    assert psi_cache.get_stats()["hits"] > before
