"""
Eigenstructure, spectral gaps and convergence-rate verifiers
"""

from src.spectral.gaps import (
    GapMethod,
    contraction_coefficient,
    gap_l2,
    gap_l2_all,
    gap_lv,
    require_ergodic,
    spectrum_report,
)
from src.spectral.gelfand import GelfandEstimate, gelfand_limit
from src.spectral.rates import (
    L2DecayProfile,
    TvBoundReport,
    UniformRateReport,
    l2_decay_profile,
    verify_tv_bound,
    verify_uniform_rate,
)
from src.spectral.spectrum import (
    Eigenvalue,
    PoleVerdict,
    SpectrumReport,
    check_pole_structure,
    eigen_spectrum,
)

__all__ = [
    "Eigenvalue",
    "GapMethod",
    "GelfandEstimate",
    "L2DecayProfile",
    "PoleVerdict",
    "SpectrumReport",
    "TvBoundReport",
    "UniformRateReport",
    "check_pole_structure",
    "contraction_coefficient",
    "eigen_spectrum",
    "gap_l2",
    "gap_l2_all",
    "gap_lv",
    "gelfand_limit",
    "l2_decay_profile",
    "require_ergodic",
    "spectrum_report",
    "verify_tv_bound",
    "verify_uniform_rate",
]
