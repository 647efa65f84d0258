"""
Drift conditions, small sets and geometric ergodicity certificates
"""

from src.ergodicity.certificates import (
    GeometricCertificate,
    TvProfile,
    geometric_certificate,
    tv_profile,
)
from src.ergodicity.drift import (
    DriftCertificate,
    check_drift,
    drift_residuals,
    state_set,
    sublevel_sets,
    verify_drift,
)
from src.ergodicity.equivalence import EquivalenceReport, equivalence_report, select_drift_set
from src.ergodicity.small_set import SmallSetCertificate, find_small_set, verify_minorization

__all__ = [
    "DriftCertificate",
    "EquivalenceReport",
    "GeometricCertificate",
    "SmallSetCertificate",
    "TvProfile",
    "check_drift",
    "drift_residuals",
    "equivalence_report",
    "find_small_set",
    "geometric_certificate",
    "select_drift_set",
    "state_set",
    "sublevel_sets",
    "tv_profile",
    "verify_drift",
    "verify_minorization",
]
