"""
Numerical witnesses for drift <=> weighted gap and, for reversible chains,
geometric ergodicity <=> L2 gap
"""

from typing import Dict, List, Optional

from pydantic import BaseModel

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure, analyze_structure
from src.config.settings import get_settings
from src.ergodicity.certificates import GeometricCertificate, geometric_certificate
from src.ergodicity.drift import DriftCertificate, check_drift, sublevel_sets
from src.ergodicity.small_set import SmallSetCertificate, find_small_set
from src.measures_norms.functions import VectorLike, as_weight, check_dimensions
from src.spectral.gaps import GapMethod, gap_l2, gap_lv
from src.utils.exceptions import DriftFails, ErgographError, NotSmallWithinHorizon
from src.utils.logger import get_logger
from src.utils.verdicts import CheckStatus

logger = get_logger(__name__)


class EquivalenceReport(BaseModel):
    """Predicates, their witnesses and the implications checked between them"""

    applicable: bool
    predicates: Dict[str, Optional[bool]]
    checks: Dict[str, CheckStatus]
    consistent: Optional[bool]
    annotations: List[str] = []
    selected_C: Optional[List[int]] = None
    drift: Optional[DriftCertificate] = None
    small_set: Optional[SmallSetCertificate] = None
    delta_V: Optional[float] = None
    delta_2: Optional[float] = None
    geometric: Optional[GeometricCertificate] = None


def select_drift_set(
    chain: MarkovChain, V: VectorLike
) -> Optional[DriftCertificate]:
    """Smallest sublevel set of V on which the drift condition holds"""
    for candidate in sublevel_sets(V):
        try:
            certificate = check_drift(chain, V, candidate)
        except DriftFails:
            continue
        if certificate.valid:
            return certificate
    return None


def _not_applicable(structure: ChainStructure) -> EquivalenceReport:
    reason = (
        "chain is reducible"
        if not structure.irreducible
        else f"chain has period {structure.period}; aperiodicity fails"
    )
    names = ("drift", "weighted_gap", "l2_gap", "reversible")
    return EquivalenceReport(
        applicable=False,
        predicates={name: None for name in names},
        checks={
            "drift_iff_weighted_gap": CheckStatus.NOT_APPLICABLE,
            "reversible_ge_iff_l2_gap": CheckStatus.NOT_APPLICABLE,
        },
        consistent=None,
        annotations=[f"NotApplicable: {reason}"],
    )


def equivalence_report(
    chain: MarkovChain,
    V: VectorLike,
    structure: Optional[ChainStructure] = None,
) -> EquivalenceReport:
    """
    Evaluate (a) drift on an auto-selected C, (b) delta_V > 0, (c) delta_2 > 0 and
    (d) reversibility, then check (a) <=> (b) and, when (d) holds,
    geometric ergodicity <=> (c)

    C is the smallest sublevel set {V <= q} passing check_drift. When C is also
    small within small_set_m_max steps its minorization certificate is attached.
    """
    settings = get_settings()
    weight = as_weight(V)
    check_dimensions(chain.P, weight)
    structure = analyze_structure(chain) if structure is None else structure
    if not structure.ergodic:
        return _not_applicable(structure)

    annotations: List[str] = []
    drift = select_drift_set(chain, weight)
    small: Optional[SmallSetCertificate] = None
    if drift is None:
        annotations.append("no sublevel set of V satisfies the drift condition")
    elif drift.C:
        try:
            small = find_small_set(chain, drift.C)
        except NotSmallWithinHorizon as e:
            annotations.append(f"selected C is not small within m <= {e.context['m_max']}")

    estimate = gap_lv(chain, weight, structure=structure, strict=False)
    if not estimate.converged:
        annotations.append("delta_V estimate did not settle; using the last estimate")
    delta_V = estimate.gap
    delta_2 = gap_l2(chain, GapMethod.EIGEN, structure=structure)

    geometric: Optional[GeometricCertificate] = None
    try:
        geometric = geometric_certificate(chain, weight, structure=structure)
    except ErgographError as e:
        annotations.append(f"no geometric certificate: {e.message}")

    tol = settings.unit_eigen_tol
    predicates: Dict[str, Optional[bool]] = {
        "drift": drift is not None,
        "weighted_gap": delta_V > tol,
        "l2_gap": delta_2 > tol,
        "reversible": structure.reversible,
        "geometrically_ergodic": geometric is not None,
    }

    checks: Dict[str, CheckStatus] = {}
    checks["drift_iff_weighted_gap"] = (
        CheckStatus.PASS
        if predicates["drift"] == predicates["weighted_gap"]
        else CheckStatus.FAIL
    )
    if structure.reversible:
        checks["reversible_ge_iff_l2_gap"] = (
            CheckStatus.PASS
            if predicates["geometrically_ergodic"] == predicates["l2_gap"]
            else CheckStatus.FAIL
        )
    else:
        checks["reversible_ge_iff_l2_gap"] = CheckStatus.NOT_APPLICABLE
        annotations.append("chain is not reversible; the L2 equivalence is not asserted")

    consistent = all(status is not CheckStatus.FAIL for status in checks.values())
    if not consistent:
        logger.warning("Equivalence checks disagree", extra={"predicates": predicates})
    return EquivalenceReport(
        applicable=True,
        predicates=predicates,
        checks=checks,
        consistent=consistent,
        annotations=annotations,
        selected_C=drift.C if drift is not None else None,
        drift=drift,
        small_set=small,
        delta_V=delta_V,
        delta_2=delta_2,
        geometric=geometric,
    )
