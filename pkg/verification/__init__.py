"""
Verification package.

Exports:
- sample functions (RationalSample, WormSample)
- numerical probes (reproducing_error, sample_norm, divergence_probe, decay_estimate)
- the acceptance-check machinery (BaseCheck, CheckResult, SuiteRunner, SuiteResult)
"""

from .samples import RationalSample, WormSample
from .probes import (
    DEFAULT_LP_LADDER,
    DEFAULT_SOBOLEV_LADDER,
    DecayFit,
    NormResult,
    ProbeKind,
    ProbeResult,
    ReproducingResult,
    decay_estimate,
    divergence_probe,
    reproducing_error,
    sample_norm,
)
from .base import BaseCheck, CheckOutcome, CheckResult
from .registry_setup import register_all_checks
from .runner import SuiteResult, SuiteRunner

__all__ = [
    "RationalSample",
    "WormSample",
    "DEFAULT_LP_LADDER",
    "DEFAULT_SOBOLEV_LADDER",
    "DecayFit",
    "NormResult",
    "ProbeKind",
    "ProbeResult",
    "ReproducingResult",
    "decay_estimate",
    "divergence_probe",
    "reproducing_error",
    "sample_norm",
    "BaseCheck",
    "CheckOutcome",
    "CheckResult",
    "register_all_checks",
    "SuiteResult",
    "SuiteRunner",
]
