"""
Lyapunov function V_h(x) = E_x[sum_{n=0}^{sigma_C} (1 + |h(X(n))|) e^{theta n / 2}]
and the drift it satisfies
"""

import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure, analyze_structure
from src.config.settings import get_settings
from src.ergodicity.drift import DriftCertificate, drift_residuals
from src.lyapunov_synth.hitting import discounted_occupation, split_states, taboo_radius
from src.lyapunov_synth.ladder import RegularSetLadder, build_ladder, kendall_theta
from src.measures_norms.functions import VectorLike, as_vector, check_dimensions
from src.utils.exceptions import DriftVerificationFailed
from src.utils.logger import get_logger

logger = get_logger(__name__)


class CauchySchwarzBound(BaseModel):
    """T(x)^2 <= A(x) B(x) for the h-part T of V_h"""

    T: List[float]
    A: List[float]
    B: List[float]
    holds: bool


class SynthesisResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    V_h: List[float]
    C: List[int]
    theta: float
    drift: DriftCertificate
    b0: float
    drift_residual: float
    off_c_residual: float
    pi_integral: Optional[float] = Field(default=None, alias="pi_Vh")
    domination: float = Field(alias="h_norm")
    ladder: Optional[RegularSetLadder] = None
    cauchy_schwarz: Optional[CauchySchwarzBound] = None


def synthesize_vh(
    chain: MarkovChain,
    h: VectorLike,
    C: Sequence[int],
    theta: float,
    tol: Optional[float] = None,
    structure: Optional[ChainStructure] = None,
) -> SynthesisResult:
    """
    Solve for V_h and verify PV_h <= e^{-theta/2} V_h + b0 1_C

    Off C the identity e^{theta/2} PV_h = V_h - (1 + |h|) holds exactly; b0 is
    the least constant making the inequality hold on C.

    Args:
        chain: Transition matrix
        h: Observable
        C: Target set
        theta: Exponential rate; V_h grows with e^{theta/2}
        tol: Relative tolerance for the drift and off-C residuals
        structure: Precomputed structure, for pi(V_h)

    Returns:
        SynthesisResult

    Raises:
        ThetaTooLarge: If e^{theta/2} times the taboo radius of C is at least 1
        DriftVerificationFailed: If a residual exceeds tol
    """
    tol = get_settings().drift_tol if tol is None else tol
    values = np.abs(np.asarray(as_vector(h)))
    check_dimensions(chain.P, values)
    members, outside = split_states(chain, C)

    growth = math.exp(theta / 2.0)
    g = 1.0 + values
    V_h = discounted_occupation(chain, members, g, growth)

    PV = chain.step(V_h)
    decay = 1.0 / growth
    b0 = float(max(np.max(PV[members] - decay * V_h[members]), 0.0))

    residuals = drift_residuals(chain, V_h, members, 1.0 - decay, b0)
    drift_residual = float(np.max(residuals / V_h))
    off_c = growth * PV[outside] - (V_h[outside] - g[outside])
    off_c_residual = float(np.max(np.abs(off_c) / V_h[outside], initial=0.0))

    if drift_residual > tol or off_c_residual > tol:
        raise DriftVerificationFailed(
            "Synthesized V_h fails its own drift identity",
            drift_residual=drift_residual,
            off_c_residual=off_c_residual,
            tol=tol,
        )

    certificate = DriftCertificate(
        V=V_h.tolist(),
        C=members,
        delta=1.0 - decay,
        b=b0,
        residual=float(np.max(residuals)),
        relative_residual=drift_residual,
        valid=True,
    )

    structure = analyze_structure(chain) if structure is None else structure
    pi_integral = None
    if structure.stationary is not None:
        pi_integral = float(np.dot(structure.stationary, V_h))

    return SynthesisResult(
        V_h=V_h.tolist(),
        C=members,
        theta=theta,
        drift=certificate,
        b0=b0,
        drift_residual=drift_residual,
        off_c_residual=off_c_residual,
        pi_integral=pi_integral,
        domination=float(np.max(values / V_h)),
    )


def cauchy_schwarz_bound(
    chain: MarkovChain, h: VectorLike, C: Sequence[int], theta: float
) -> CauchySchwarzBound:
    """
    Exact terms of the finiteness bound for the h-part of V_h

    T(x) = E_x[sum_{n<=sigma_C} |h(X(n))| e^{theta n/2}],
    A(x) = E_x[sum_{n<=sigma_C} h^2(X(n))], B(x) = E_x[sum_{n<=sigma_C} e^{theta n}].
    Cauchy-Schwarz over the time index gives T^2 <= A B.

    Raises:
        ThetaTooLarge: If e^theta times the taboo radius of C is at least 1
    """
    values = np.abs(np.asarray(as_vector(h)))
    T = discounted_occupation(chain, C, values, math.exp(theta / 2.0))
    A = discounted_occupation(chain, C, values**2)
    B = discounted_occupation(chain, C, np.ones(chain.n), math.exp(theta))
    slack = 1e-9 * np.maximum(A * B, 1.0)
    return CauchySchwarzBound(
        T=T.tolist(), A=A.tolist(), B=B.tolist(), holds=bool(np.all(T**2 <= A * B + slack))
    )


def lyapunov_pipeline(
    chain: MarkovChain,
    h: VectorLike,
    m_schedule: Optional[Sequence[float]] = None,
    r_schedule: Optional[int] = None,
) -> SynthesisResult:
    """
    Ladder, then theta from the Kendall bound of the chosen C, then V_h

    theta = safety * (-log rho(Q_C)) keeps e^theta rho(Q_C) < 1, so both V_h at
    e^{theta/2} and the Cauchy-Schwarz factor at e^theta are finite.
    """
    structure = analyze_structure(chain)
    ladder = build_ladder(
        chain, h, r_schedule=r_schedule, m_schedule=m_schedule, structure=structure
    )
    theta = kendall_theta(taboo_radius(chain, ladder.C))
    result = synthesize_vh(chain, h, ladder.C, theta, structure=structure)
    bound = cauchy_schwarz_bound(chain, h, ladder.C, theta)
    if not bound.holds:
        logger.warning("Cauchy-Schwarz bound violated", extra={"C": ladder.C})
    logger.info(
        "Lyapunov function synthesized",
        extra={"theta": theta, "b0": result.b0, "C": ladder.C, "pi_Vh": result.pi_integral},
    )
    return result.model_copy(update={"ladder": ladder, "cauchy_schwarz": bound})
