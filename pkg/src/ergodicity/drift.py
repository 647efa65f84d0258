"""
Foster-Lyapunov drift condition PV <= (1 - delta) V + b 1_C
"""

from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.chain_core.chain import MarkovChain
from src.config.settings import get_settings
from src.measures_norms.functions import VectorLike, as_weight, check_dimensions
from src.utils.exceptions import DriftFails, InputError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class DriftCertificate(BaseModel):
    """Constants (V, C, delta, b) and how well the drift inequality holds"""

    model_config = ConfigDict(frozen=True)

    V: List[float]
    C: List[int]
    delta: float
    b: float
    residual: float
    relative_residual: float
    valid: bool

    def indicator(self) -> np.ndarray:
        mask = np.zeros(len(self.V))
        mask[self.C] = 1.0
        return mask


def state_set(C: Sequence[int], n: int) -> List[int]:
    """Sorted, de-duplicated, range-checked state indices"""
    members = sorted({int(x) for x in C})
    bad = [x for x in members if x < 0 or x >= n]
    if bad:
        raise InputError(f"State index out of range: {bad[0]}", states=bad, n=n)
    return members


def drift_residuals(
    chain: MarkovChain, V: np.ndarray, C: Sequence[int], delta: float, b: float
) -> np.ndarray:
    """PV - (1 - delta) V - b 1_C per state"""
    indicator = np.zeros(chain.n)
    indicator[list(C)] = 1.0
    return chain.step(V) - (1.0 - delta) * V - b * indicator


def check_drift(
    chain: MarkovChain,
    V: VectorLike,
    C: Sequence[int],
    delta: Optional[float] = None,
    b: Optional[float] = None,
    tol: Optional[float] = None,
) -> DriftCertificate:
    """
    Verify the drift condition, computing the best (delta, b) when omitted

    The optimal delta is 1 - max_{x not in C} PV(x)/V(x) (1 when C covers every
    state) and b is the smallest constant that then absorbs the excess on C.
    Supplied constants are checked as given; a failing pair comes back with
    valid=False.

    Args:
        chain: Transition matrix
        V: Weight function, V >= 1
        C: Candidate set (may be empty)
        delta: Drift rate to check instead of the optimal one
        b: Constant to check instead of the optimal one
        tol: Relative tolerance on the inequality

    Returns:
        DriftCertificate

    Raises:
        BadWeight: If V is not a weight
        DriftFails: If no delta > 0 exists for this C
        InputError: If the supplied delta is outside (0, 1] or b is negative
    """
    tol = get_settings().drift_tol if tol is None else tol
    weight = as_weight(V)
    check_dimensions(chain.P, weight)
    members = state_set(C, chain.n)
    PV = chain.step(weight)

    outside = np.ones(chain.n, dtype=bool)
    outside[members] = False
    if delta is None:
        worst = float(np.max(PV[outside] / weight[outside])) if outside.any() else 0.0
        delta = min(1.0 - worst, 1.0)
        if delta <= tol:
            state = int(np.flatnonzero(outside)[np.argmax(PV[outside] / weight[outside])])
            raise DriftFails(
                f"No drift outside C: PV/V = {worst:.6g} at state {state}",
                state=state,
                ratio=worst,
                C=members,
            )
    elif not 0.0 < delta <= 1.0:
        raise InputError("delta must lie in (0, 1]", delta=delta)

    if b is None:
        excess = PV[members] - (1.0 - delta) * weight[members]
        b = float(max(np.max(excess, initial=0.0), 0.0))
    elif b < 0.0:
        raise InputError("b must be nonnegative", b=b)

    residuals = drift_residuals(chain, weight, members, delta, b)
    residual = float(np.max(residuals))
    relative = float(np.max(residuals / weight))
    valid = relative <= tol and delta > 0.0
    if not valid:
        logger.info(
            "Drift inequality fails",
            extra={"delta": delta, "b": b, "relative_residual": relative},
        )
    return DriftCertificate(
        V=weight.tolist(),
        C=members,
        delta=float(delta),
        b=b,
        residual=residual,
        relative_residual=relative,
        valid=valid,
    )


def verify_drift(chain: MarkovChain, certificate: DriftCertificate, tol: float = 1e-9) -> bool:
    """Recheck a certificate with a fresh matrix-vector product"""
    weight = np.asarray(certificate.V)
    PV = chain.P @ weight
    bound = (1.0 - certificate.delta) * weight + certificate.b * certificate.indicator()
    return bool(np.all(PV <= bound + tol * weight))


def sublevel_sets(V: VectorLike) -> List[List[int]]:
    """{x : V(x) <= q} for q sweeping the distinct values of V in increasing order"""
    weight = as_weight(V)
    return [np.flatnonzero(weight <= q).tolist() for q in np.unique(weight)]
