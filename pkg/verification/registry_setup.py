"""
Check Registry Setup
Registers all acceptance checks.
"""

from core.registry import check_id_for, registry

from .checks import (
    SpectralSymbolCheck,
    Psi2ClosedFormCheck,
    RepresentationAgreementCheck,
    AsymptoticOrderCheck,
    LargeLambdaCheck,
    SmallLambdaCheck,
    DecayRateCheck,
    SeriesTruncationCheck,
    TransformationLawCheck,
    ReproducingPropertyCheck,
    BoundaryProfileCheck,
    NormClassificationCheck,
    IrregularityProbeCheck,
    GramPositivityCheck,
)


# (class, description, slow)
_CHECKS = (
    (SpectralSymbolCheck,
     "alpha_hat matches its quadrature oracle to 1e-9 on the j x xi grid", False),
    (Psi2ClosedFormCheck,
     "-(1/2pi^3) I_0(xi) matches the closed form of psi_2 to 1e-8", False),
    (RepresentationAgreementCheck,
     "Laplace-integral and Fourier K_j agree to 1e-6", False),
    (AsymptoticOrderCheck,
     "asymptotic error decays like |lambda|^-N", False),
    (LargeLambdaCheck,
     "f_j tends to psi_2(j+1) as lambda grows", False),
    (SmallLambdaCheck,
     "sqrt(lambda) f_-1 stays negative and bounded as lambda -> 0", False),
    (DecayRateCheck,
     "log|K_j| decays at least at rate 0.9 b_lambda", False),
    (SeriesTruncationCheck,
     "K_U is stable under window doubling and has its symmetries", True),
    (TransformationLawCheck,
     "K_W and K_U are related by the biholomorphism", True),
    (ReproducingPropertyCheck,
     "K_j reproduces rational test functions", True),
    (BoundaryProfileCheck,
     "series and pole-split routes of g agree; g(zeta) = g(1/zeta)", False),
    (NormClassificationCheck,
     "finite / divergent norms of F_{eta,c,j,m} match the truth table", True),
    (IrregularityProbeCheck,
     "Lp and Sobolev probes diverge, the L2 control converges", False),
    (GramPositivityCheck,
     "Gram matrices of K_W are positive semidefinite", True),
)


def register_all_checks():
    """Register the acceptance checks with the global registry (idempotent)."""
    for check_class, description, slow in _CHECKS:
        if check_id_for(check_class.criterion) not in registry:
            registry.register(check_class, description, slow)
