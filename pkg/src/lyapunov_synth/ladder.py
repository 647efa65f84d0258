"""
Ladder of regular sets S_r = K_r and the sets C_{r,m} = {U_r + V_r <= m}
"""

import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure
from src.config.settings import get_settings
from src.lyapunov_synth.hitting import (
    exponential_moment,
    h2_regular_functional,
    mean_hitting_time,
    taboo_radius,
)
from src.measures_norms.functions import VectorLike, as_vector, check_dimensions
from src.spectral.gaps import require_ergodic
from src.utils.exceptions import LadderExhausted
from src.utils.logger import get_logger

logger = get_logger(__name__)


class LadderRung(BaseModel):
    r: int
    S: List[int]
    K: List[int]
    theta: float
    taboo_radius: float
    U: List[float]
    V: List[float]
    min_level: float


class RegularSetLadder(BaseModel):
    """Every rung built, and the first (r, m) whose C_{r,m} qualifies"""

    anchor: int
    rungs: List[LadderRung]
    r: int
    m: float
    C: List[int]
    pi_C: float


def kendall_theta(
    radius: float, safety: Optional[float] = None, cap: Optional[float] = None
) -> float:
    """
    safety * (-log radius), so e^theta radius = radius^(1 - safety) < 1

    A zero radius (every path from the complement enters C within a bounded
    number of steps) admits any theta; it gets cap.
    """
    settings = get_settings()
    safety = settings.theta_safety if safety is None else safety
    cap = settings.theta_cap if cap is None else cap
    if radius <= 0.0:
        return cap
    return safety * -math.log(radius)


def rung_sets(proxy: np.ndarray, rungs: int) -> List[List[int]]:
    """Nested sublevel sets of the proxy at evenly spaced distinct levels"""
    levels = np.unique(proxy)
    if rungs <= 1 or levels.size == 1:
        picks = [0]
    else:
        picks = sorted({round(k * (levels.size - 1) / (rungs - 1)) for k in range(rungs)})
    return [np.flatnonzero(proxy <= levels[i]).tolist() for i in picks]


def build_ladder(
    chain: MarkovChain,
    h: VectorLike,
    r_schedule: Optional[int] = None,
    m_schedule: Optional[Sequence[float]] = None,
    pi_min: Optional[float] = None,
    structure: Optional[ChainStructure] = None,
) -> RegularSetLadder:
    """
    Build S_r = K_r from the mean hitting time to the most likely state and pick
    the first (r, m) in schedule order with C_{r,m} nonempty and pi(C) >= pi_min

    Args:
        chain: Irreducible aperiodic chain
        h: Observable
        r_schedule: Number of rungs
        m_schedule: Non-decreasing thresholds m
        pi_min: Minimal stationary mass of C_{r,m}
        structure: Precomputed structure

    Returns:
        RegularSetLadder

    Raises:
        LadderExhausted: If no (r, m) qualifies
    """
    settings = get_settings()
    r_schedule = settings.ladder_rungs if r_schedule is None else r_schedule
    m_schedule = list(settings.m_schedule if m_schedule is None else m_schedule)
    pi_min = settings.pi_min if pi_min is None else pi_min
    values = np.asarray(as_vector(h))
    check_dimensions(chain.P, values)
    structure = require_ergodic(chain, structure)
    pi = structure.require_stationary()

    anchor = int(np.argmax(pi))
    proxy = mean_hitting_time(chain, [anchor])

    rungs: List[LadderRung] = []
    for r, S in enumerate(rung_sets(proxy, r_schedule)):
        radius = taboo_radius(chain, S)
        theta = kendall_theta(radius, safety=settings.ladder_theta_safety)
        U, _ = exponential_moment(chain, S, theta)
        V = h2_regular_functional(chain, S, values)
        total = U + V
        rungs.append(
            LadderRung(
                r=r,
                S=S,
                K=S,
                theta=theta,
                taboo_radius=radius,
                U=U.tolist(),
                V=V.tolist(),
                min_level=float(np.min(total)),
            )
        )
        for m in m_schedule:
            C = np.flatnonzero(total <= m)
            mass = float(pi[C].sum())
            if C.size and mass >= pi_min:
                logger.info(
                    f"Ladder settled at r={r}, m={m:g}", extra={"size": int(C.size), "pi_C": mass}
                )
                return RegularSetLadder(
                    anchor=anchor, rungs=rungs, r=r, m=m, C=C.tolist(), pi_C=mass
                )

    raise LadderExhausted(
        "No C_{r,m} qualifies within the schedules",
        min_levels=[rung.min_level for rung in rungs],
        m_max=max(m_schedule) if m_schedule else None,
        pi_min=pi_min,
    )
