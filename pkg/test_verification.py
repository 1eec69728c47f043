"""Tests for the sample functions, the probes and the verification suite."""

import asyncio
import cmath
import math

import pytest
from pydantic import ValidationError
import numpy as np
from scipy import integrate

from core.errors import DomainError, InconclusiveError
from core.registry import CheckRegistry, registry
from geometry.worm import WormPoint, log_frame
from numerics.weights import alpha
from utils.template import render_report
from verification import probes
from verification import (
    BaseCheck,
    CheckOutcome,
    ProbeKind,
    RationalSample,
    SuiteRunner,
    WormSample,
    decay_estimate,
    divergence_probe,
    register_all_checks,
    reproducing_error,
    sample_norm,
)


# =====================================================================
# Sample functions
# =====================================================================

def test_rational_sample_paley_wiener_inverse():
    f = RationalSample(a=1.0, b=2)
    for zeta in (0.5 + 1.0j, -2.0 + 0.1j, 3.0j):
        assert abs(f.paley_wiener_inverse(zeta) - f(zeta)) < 1e-8 * abs(f(zeta))
    with pytest.raises(DomainError):
        f.paley_wiener_inverse(-1.5j)


def test_rational_sample_weighted_norm():
    f = RationalSample(a=1.0, b=2)
    # int_R |u + i c|^-4 du = pi / (2 c^3)
    direct, _ = integrate.quad(lambda v: math.pi / (2.0 * (v + 1.0) ** 3) * alpha(-1, v),
                               0.0, math.inf, epsabs=0, epsrel=1e-11, limit=200)
    assert f.weighted_norm(-1) == pytest.approx(direct, rel=1e-8)
    assert RationalSample(a=1.0, b=2, amplitude=0.0).weighted_norm(0) == 0.0


def test_rational_sample_validation():
    with pytest.raises(ValidationError):
        RationalSample(a=0.0, b=2)
    with pytest.raises(ValidationError):
        RationalSample(a=1.0, b=1)


def test_worm_sample_value():
    F = WormSample(eta_re=-0.5, c=1.0, j=1, m=2)
    z = WormPoint(1.0 + 0.3j, 1.2)
    L = log_frame(z)
    expected = cmath.exp(-0.5 * L) * 1.2 / (L - 1.0) ** 2
    assert abs(F(z) - expected) < 1e-13 * abs(expected)
    assert F.eta == -0.5


def test_worm_sample_needs_c_above_log2():
    with pytest.raises(ValidationError):
        WormSample(eta_re=-0.5, c=0.5, j=0, m=1)


# =====================================================================
# Divergence probes
# =====================================================================

W_PROBE = WormPoint(1.0, 1.0)


def test_lp_probe_grows():
    res = divergence_probe(ProbeKind.LP, W_PROBE, p=4.0)
    assert len(res.partials) == 7
    assert all(b > a for a, b in zip(res.partials[:-1], res.partials[1:]))
    assert res.growth > 10
    expected = res.parameter - 2.0
    assert all(expected / 3.0 <= e <= 3.0 * expected for e in res.growth_exponents[-2:])


def test_l2_control_settles():
    res = divergence_probe("l2", W_PROBE)
    assert res.parameter == 2.0
    assert res.partials[-1] / res.partials[-3] - 1.0 < 0.05


def test_sobolev_probe_grows():
    res = divergence_probe(ProbeKind.SOBOLEV, W_PROBE, s=0.25)
    assert res.deltas[-1] == pytest.approx(1e-60)
    assert res.growth > 10


def test_probe_argument_errors():
    with pytest.raises(DomainError):
        divergence_probe(ProbeKind.LP, W_PROBE, p=2.0)
    with pytest.raises(DomainError):
        divergence_probe(ProbeKind.SOBOLEV, W_PROBE, s=0.5)
    with pytest.raises(DomainError):
        divergence_probe(ProbeKind.LP, W_PROBE, [1e-2, 1e-1])
    with pytest.raises(DomainError):
        divergence_probe(ProbeKind.LP, W_PROBE, [0.8, 1e-2])


# =====================================================================
# Decay in j
# =====================================================================

def test_decay_rates_are_symmetric_and_fast():
    fit = decay_estimate(0.25j, 0.25j, j_max=40, k_min=20)
    assert fit.lam == pytest.approx(0.5)
    assert fit.rate_plus == fit.rate_minus
    assert fit.rate_plus <= -0.9 * fit.b_lambda
    assert fit.ks[0] == 20


def test_decay_rate_grows_with_separation():
    rates = [decay_estimate(0.5j * lam, 0.5j * lam, j_max=40, k_min=20).rate_plus for lam in (0.5, 1.0, 2.0, 4.0)]
    assert all(b < a for a, b in zip(rates[:-1], rates[1:]))


def test_decay_estimate_errors():
    with pytest.raises(DomainError):
        decay_estimate(1j, 1j, j_max=3)
    with pytest.raises(DomainError):
        decay_estimate(1.0, 1j)


# =====================================================================
# Reproducing property and norms
# =====================================================================

def test_reproducing_error_zero_sample():
    res = reproducing_error(0, RationalSample(a=1.0, b=2, amplitude=0.0), 1j)
    assert res.error == 0.0
    with pytest.raises(DomainError):
        reproducing_error(0, RationalSample(a=1.0, b=2), 1.0)


@pytest.mark.slow
def test_reproducing_property():
    res = reproducing_error(-1, RationalSample(a=1.0, b=2), 1j)
    assert res.error < 1e-3


def test_sample_norm_argument_errors():
    with pytest.raises(DomainError):
        sample_norm(-0.5, 0.5, 0, 0.0)
    with pytest.raises(DomainError):
        sample_norm(-0.5, 1.0, 0, 0.0, mu=0.0)


def _swap_integrand(monkeypatch, f):
    monkeypatch.setattr(probes, "_norm_integrand", lambda *args: f)


def test_overflow_after_growth_is_divergent(monkeypatch):
    # unit integrand until s = -8, then non-finite: increments 1, 2, 4 (times pi + 2)
    _swap_integrand(monkeypatch, lambda s, t: np.where(s < -8.0, np.inf, np.ones_like(t)))
    res = sample_norm(-0.5, 1.0, 0, 0.0, 1.0, 1e-8)
    assert res.classification == "divergent"
    assert "overflow at level 4" in res.reason
    assert res.increments[1:] == pytest.approx([(math.pi + 2.0) * w for w in (1.0, 2.0, 4.0)], rel=1e-8)


def test_non_finite_without_growth_is_inconclusive(monkeypatch):
    _swap_integrand(monkeypatch, lambda s, t: np.where(s < -8.0, np.nan, np.exp(2.0 * s) + 0.0 * t))
    with pytest.raises(InconclusiveError) as info:
        sample_norm(-0.5, 1.0, 0, 0.0, 1.0, 1e-8)
    assert len(info.value.partial) == 4


def test_non_finite_on_the_first_level_is_inconclusive(monkeypatch):
    _swap_integrand(monkeypatch, lambda s, t: np.where(s > 0.0, np.nan, np.ones_like(t)))
    with pytest.raises(InconclusiveError):
        sample_norm(-0.5, 1.0, 0, 0.0, 1.0, 1e-8)


@pytest.mark.slow
def test_sample_norm_finite_and_divergent():
    finite = sample_norm(-0.5, 1.0, 0, 0.0, 1.0, 1e-6)
    assert finite.finite
    assert finite.value > 0
    divergent = sample_norm(-1.2, 1.0, 0, 0.0, 1.0, 1e-6)
    assert divergent.classification == "divergent"
    assert divergent.value is None


# =====================================================================
# Registry and suite
# =====================================================================

def test_all_checks_are_registered():
    register_all_checks()
    register_all_checks()
    ids = [entry.check_id for entry in registry.entries()]
    assert ids == [f"C{n:02d}" for n in range(1, 15)]
    assert registry.entry("C07").title == "exponential decay in j"
    with pytest.raises(ValueError):
        registry.create_instance("C99")


def test_registry_selects_by_speed():
    local = CheckRegistry()
    fast = local.register(_AsyncCheck, "always passes")
    slow = local.register(_RaisingCheck, "always raises", slow=True)
    assert (fast.check_id, slow.check_id) == ("C98", "C99")
    assert local.select() == ["C98", "C99"]
    assert local.select("fast") == ["C98"]
    assert local.select("slow", ids=["C99", "C98"]) == ["C99"]
    with pytest.raises(ValueError):
        local.register(_AsyncCheck, "again")
    with pytest.raises(ValueError):
        local.select(ids=["C01"])
    assert isinstance(local.create_instance("C99"), _RaisingCheck)


def test_suite_selection():
    fast = SuiteRunner.select("fast")
    slow = SuiteRunner.select("slow")
    assert set(fast).isdisjoint(slow)
    assert sorted(fast + slow) == SuiteRunner.select()
    assert SuiteRunner.select(ids=["C02", "C01"]) == ["C01", "C02"]
    with pytest.raises(ValueError):
        SuiteRunner.select("medium")
    with pytest.raises(ValueError):
        SuiteRunner.select(ids=["C99"])


class _RaisingCheck(BaseCheck):
    title = "raises"
    criterion = 99

    def run(self, context):
        raise DomainError("point outside W")


class _AsyncCheck(BaseCheck):
    title = "async"
    criterion = 98

    async def run(self, context):
        return CheckOutcome(passed=True, detail=f"seed {context['seed']}", data={"seed": context["seed"]})


def test_check_errors_become_failed_results():
    result = asyncio.run(_RaisingCheck("X1", {}).execute({"seed": 1}))
    assert not result.success
    assert result.error == "point outside W"
    assert result.detail.startswith("DomainError")
    assert result.metadata["criterion"] == 99


def test_async_checks_are_awaited():
    result = asyncio.run(_AsyncCheck("X2", None).execute({"seed": 7}))
    assert result.success
    assert result.output == {"seed": 7}
    assert "execution_time" not in result.to_dict()


def test_suite_runner_and_report():
    suite = SuiteRunner(max_workers=2, seed=5).run(["C01", "C02", "C11"])
    assert suite.success
    assert [r.check_id for r in suite.results] == ["C01", "C02", "C11"]
    data = suite.to_dict()
    assert data["seed"] == 5 and data["passed"] == 3 and data["total"] == 3

    report = render_report(data)
    lines = report.splitlines()
    assert lines[0] == "# worm-bergman verification (seed 5)"
    assert lines[1].startswith("[PASS] C01")
    assert lines[-1] == "# 3/3 checks passed"


@pytest.mark.slow
def test_full_suite_passes():
    suite = SuiteRunner().run(SuiteRunner.select())
    failed = [f"{r.check_id}: {r.detail}" for r in suite.results if not r.success]
    assert not failed
