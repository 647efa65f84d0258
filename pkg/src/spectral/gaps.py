"""
Spectral gaps in L2(pi) and in the weighted space L_inf^V
"""

from enum import Enum
from typing import Dict, Optional

import numpy as np

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure, analyze_structure
from src.measures_norms.functions import VectorLike, as_weight, check_dimensions
from src.measures_norms.kernels import deviation_kernel, op_norm_l2, op_norm_v
from src.spectral.gelfand import GelfandEstimate, gelfand_limit
from src.spectral.spectrum import SpectrumReport, eigen_spectrum
from src.utils.exceptions import ErgographError, NotApplicable
from src.utils.logger import get_logger

logger = get_logger(__name__)


class GapMethod(str, Enum):
    EIGEN = "eigen"
    CONTRACTION = "contraction"
    GELFAND = "gelfand"


def require_ergodic(
    chain: MarkovChain, structure: Optional[ChainStructure]
) -> ChainStructure:
    structure = analyze_structure(chain) if structure is None else structure
    if not structure.ergodic:
        reason = "reducible" if not structure.irreducible else f"period {structure.period}"
        raise NotApplicable(
            f"Spectral gap requires an irreducible aperiodic chain ({reason})",
            irreducible=structure.irreducible,
            period=structure.period,
        )
    return structure


def contraction_coefficient(chain: MarkovChain, pi: np.ndarray) -> float:
    """
    sup ||nu P||_2 / ||nu||_2 over measures with nu(X) = 0

    In density coordinates nu = D^1/2 u the map nu -> nu P becomes
    D^-1/2 P^T D^1/2; mean-zero measures are the complement of sqrt(pi).
    """
    root = np.sqrt(pi)
    adjoint = chain.P.T * root[np.newaxis, :] / root[:, np.newaxis]
    projection = np.eye(chain.n) - np.outer(root, root)
    return float(np.linalg.norm(adjoint @ projection, 2))


def gap_l2(
    chain: MarkovChain,
    method: GapMethod | str = GapMethod.EIGEN,
    structure: Optional[ChainStructure] = None,
    n_max: Optional[int] = None,
    tol: Optional[float] = None,
) -> float:
    """
    The L2(pi) spectral gap delta_2 by one of three characterizations

    eigen: 1 - |lambda_2|. contraction: 1 - one-step contraction on mean-zero
    measures. gelfand: 1 - lim |||(P - 1 (x) pi)^n|||_2^(1/n). All three agree
    for reversible chains; for other chains the contraction value is only a
    lower bound.

    Raises:
        NotApplicable: If the chain is reducible or periodic
        GelfandNotConverged: If the gelfand estimates have not settled by n_max
    """
    method = GapMethod(method)
    structure = require_ergodic(chain, structure)
    pi = structure.require_stationary()

    if method is GapMethod.EIGEN:
        return eigen_spectrum(chain).delta_eig
    if method is GapMethod.CONTRACTION:
        return min(max(1.0 - contraction_coefficient(chain, pi), 0.0), 1.0)

    Q = deviation_kernel(chain, pi).Q
    estimate = gelfand_limit(Q, lambda M: op_norm_l2(M, pi), n_max=n_max, tol=tol)
    return estimate.gap


def gap_l2_all(
    chain: MarkovChain, structure: Optional[ChainStructure] = None
) -> Dict[str, float]:
    """delta_2 by every method that succeeds; failures are logged and left out"""
    structure = require_ergodic(chain, structure)
    gaps: Dict[str, float] = {}
    for method in GapMethod:
        try:
            gaps[method.value] = gap_l2(chain, method, structure=structure)
        except ErgographError as e:
            logger.warning(f"delta_2 by {method.value} failed: {e.message}", extra=e.context)
    if not structure.reversible and GapMethod.CONTRACTION.value in gaps:
        logger.info(
            "Chain is not reversible; the contraction value is a diagnostic only",
            extra={"contraction": gaps[GapMethod.CONTRACTION.value]},
        )
    return gaps


def gap_lv(
    chain: MarkovChain,
    V: VectorLike,
    structure: Optional[ChainStructure] = None,
    n_max: Optional[int] = None,
    tol: Optional[float] = None,
    strict: bool = True,
) -> GelfandEstimate:
    """
    The L_inf^V spectral gap delta_V = 1 - lim |||(P - 1 (x) pi)^n|||_V^(1/n)

    Args:
        chain: Irreducible aperiodic chain
        V: Weight function, V >= 1
        structure: Precomputed structure of the chain
        n_max: Last power on the doubling schedule
        tol: Convergence tolerance for successive estimates
        strict: Raise when the estimates have not settled

    Returns:
        GelfandEstimate; delta_V is its gap

    Raises:
        NotApplicable: If the chain is reducible or periodic
        BadWeight: If V is not a weight
        GelfandNotConverged: If the estimates have not settled by n_max
    """
    weight = as_weight(V)
    check_dimensions(chain.P, weight)
    structure = require_ergodic(chain, structure)
    Q = deviation_kernel(chain, structure.require_stationary()).Q
    estimate = gelfand_limit(
        Q, lambda M: op_norm_v(M, weight), n_max=n_max, tol=tol, strict=strict
    )
    logger.debug(
        "Weighted gap estimated",
        extra={"delta_V": estimate.gap, "converged": estimate.converged},
    )
    return estimate


def spectrum_report(
    chain: MarkovChain,
    V: Optional[VectorLike] = None,
    structure: Optional[ChainStructure] = None,
) -> SpectrumReport:
    """
    Eigenvalues plus, for ergodic chains, delta_2 per method and delta_V

    V defaults to the constant weight 1.
    """
    report = eigen_spectrum(chain)
    structure = analyze_structure(chain) if structure is None else structure
    if not structure.ergodic:
        return report

    weight = np.ones(chain.n) if V is None else as_weight(V)
    update: Dict[str, object] = {"delta_2": gap_l2_all(chain, structure)}
    try:
        estimate = gap_lv(chain, weight, structure=structure)
        update["delta_V"] = estimate.gap
        update["gelfand_trace"] = estimate.trace
    except ErgographError as e:
        logger.warning(f"delta_V unavailable: {e.message}", extra=e.context)
    return report.model_copy(update=update)
