"""Tests for the worm domain, its frames and the map onto U."""

import cmath
import math

import numpy as np
import pytest

from core.errors import BranchCutError, DomainError, MembershipError
from geometry.worm import (
    Domain,
    UPoint,
    WormPoint,
    contains,
    ell_principal,
    frame,
    in_singular_set,
    log_frame,
    map_phi,
    map_phi_inv,
    sample_u_points,
    sample_worm_points,
)


HALF_WIDTH_AT_1 = math.acos(math.exp(-1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# =====================================================================
# Membership
# =====================================================================

def test_contains_worm():
    assert contains(Domain.W, (1.0, 1.0))
    assert not contains(Domain.W, (5.0, 1.0))
    assert not contains("W", (0.5, 0.0))


def test_contains_truncated_worm():
    z = (cmath.exp(1.5j), math.exp(0.75))
    assert contains(Domain.W, z)
    assert not contains(Domain.WMU, z, mu=1.0)
    assert contains(Domain.WMU, z, mu=2.0)
    with pytest.raises(DomainError):
        contains(Domain.WMU, z)


def test_contains_unwound():
    assert contains(Domain.U, (0.2 + 1.0j, 1.0))
    assert not contains(Domain.U, (0.2 - 0.1j, 1.0))
    assert not contains(Domain.U, (1.3 + 1.0j, 1.0))
    assert contains(Domain.U, (1.3 + 1.0j, 1.0), tol=0.2)


def test_points_must_be_finite():
    with pytest.raises(DomainError):
        WormPoint(complex("nan"), 1.0)
    with pytest.raises(DomainError):
        UPoint(1j, math.inf)


# =====================================================================
# Frames
# =====================================================================

def test_frame_exponential_recovers_z1(rng):
    for z in sample_worm_points(rng, 10, mu=3.0):
        f = frame(z)
        assert abs(f.E(1.0) - z.z1) < 1e-12 * abs(z.z1)
        assert f.ell == pytest.approx(-1j * (log_frame(z) - math.log(2.0)))


def test_ell_principal_agrees_on_small_winding(rng):
    for z in sample_worm_points(rng, 20, mu=1.5):
        assert abs(ell_principal(z) - frame(z).ell) < 1e-13


def test_branch_cut_is_refused():
    with pytest.raises(BranchCutError):
        log_frame((-1.0, 1.0))
    with pytest.raises(BranchCutError):
        ell_principal((-1.0, 1.0))


# =====================================================================
# Phi and its inverse
# =====================================================================

def test_map_phi_round_trip_from_worm(rng):
    for z in sample_worm_points(rng, 25, mu=4.0):
        w = map_phi(z)
        assert contains(Domain.U, w)
        back = map_phi_inv(w)
        assert abs(back.z1 - z.z1) < 1e-12
        assert back.z2 == z.z2


def test_map_phi_round_trip_from_unwound(rng):
    for w in sample_u_points(rng, 25, mu=4.0):
        z = map_phi_inv(w)
        assert contains(Domain.W, z)
        assert abs(map_phi(z).w1 - w.w1) < 1e-12


@pytest.mark.slow
def test_map_phi_round_trips_on_ten_thousand_points(rng):
    worst = 0.0
    for z in sample_worm_points(rng, 10_000, mu=4.0):
        w = map_phi(z)
        assert contains(Domain.U, w)
        back = map_phi_inv(w)
        worst = max(worst, abs(back.z1 - z.z1), abs(back.z2 - z.z2))
    for w in sample_u_points(rng, 10_000, mu=4.0):
        z = map_phi_inv(w)
        assert contains(Domain.W, z)
        worst = max(worst, abs(map_phi(z).w1 - w.w1))
    assert worst < 1e-12


def test_map_phi_membership_errors():
    with pytest.raises(MembershipError):
        map_phi((5.0, 1.0))
    with pytest.raises(MembershipError):
        map_phi_inv((0.2 - 0.1j, 1.0))


# =====================================================================
# Singular set
# =====================================================================

def test_singular_set_in_unwound_coordinates():
    a = HALF_WIDTH_AT_1
    z = (complex(a, 1.0), 1.0)
    assert in_singular_set(Domain.U, z, (complex(a, 1.0), cmath.exp(0.3j)))
    assert not in_singular_set(Domain.U, z, (complex(-a, 1.0), 1.0))
    assert not in_singular_set(Domain.U, z, (complex(a, 1.5), 1.0))


def test_singular_set_in_worm_coordinates():
    assert in_singular_set(Domain.W, (0.0, 1.0), (1.0, 1.0))
    assert not in_singular_set(Domain.W, (1.0, 1.0), (1.5, 1.0))


# =====================================================================
# Samplers
# =====================================================================

def test_sample_worm_points_lie_in_truncation(rng):
    points = sample_worm_points(rng, 50, mu=1.0)
    assert len(points) == 50
    assert all(contains(Domain.WMU, z, mu=1.0) for z in points)


def test_sample_u_points_respect_range(rng):
    points = sample_u_points(rng, 50, v_range=(0.5, 1.0))
    assert all(contains(Domain.U, w) for w in points)
    assert all(0.5 <= w.v <= 1.0 for w in points)


def test_samplers_are_seeded():
    a = sample_worm_points(np.random.default_rng(3), 5)
    b = sample_worm_points(np.random.default_rng(3), 5)
    assert a == b
