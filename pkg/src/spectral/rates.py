"""
Convergence-rate verifiers: TV bound from the L2 gap, uniform V-rate, L2 decay
"""

import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure
from src.config.settings import get_settings
from src.measures_norms.functions import Distribution, VectorLike, as_vector, as_weight
from src.measures_norms.kernels import deviation_kernel, op_norm_l2
from src.measures_norms.norms import l2_norm_measure, tv_norm
from src.spectral.gaps import GapMethod, require_ergodic, gap_l2, gap_lv
from src.utils.exceptions import GapZero, NotReversible
from src.utils.linalg import ScaledPower
from src.utils.logger import get_logger

logger = get_logger(__name__)


class TvBoundPoint(BaseModel):
    n: int
    lhs: float
    rhs: float
    ok: bool


class TvBoundReport(BaseModel):
    """||mu P^n - pi||_TV against 1/2 ||mu - pi||_2 (1 - delta_2)^n"""

    delta_2: float
    initial_l2: float
    points: List[TvBoundPoint]

    @property
    def all_ok(self) -> bool:
        return all(p.ok for p in self.points)

    @property
    def violations(self) -> List[int]:
        return [p.n for p in self.points if not p.ok]


def verify_tv_bound(
    chain: MarkovChain,
    mu: VectorLike,
    n_max: int,
    structure: Optional[ChainStructure] = None,
    slack: Optional[float] = None,
) -> TvBoundReport:
    """
    Check the total-variation bound implied by an L2 spectral gap for n = 1..n_max

    Raises:
        NotApplicable: If the chain is reducible or periodic
        NotReversible: If detailed balance fails
    """
    slack = get_settings().tv_bound_slack if slack is None else slack
    structure = require_ergodic(chain, structure)
    if not structure.reversible:
        raise NotReversible("TV bound from delta_2 needs a reversible chain")

    pi = structure.require_stationary()
    start = Distribution.of(as_vector(mu)).weights
    delta_2 = gap_l2(chain, GapMethod.EIGEN, structure=structure)
    initial = l2_norm_measure(start - pi, pi)
    contraction = 1.0 - delta_2

    points: List[TvBoundPoint] = []
    current = np.array(start, dtype=float)
    for n in range(1, n_max + 1):
        current = chain.push(current)
        lhs = tv_norm(current - pi)
        rhs = 0.5 * initial * contraction**n
        points.append(TvBoundPoint(n=n, lhs=lhs, rhs=rhs, ok=lhs <= rhs + slack))

    report = TvBoundReport(delta_2=delta_2, initial_l2=initial, points=points)
    if not report.all_ok:
        logger.warning("TV bound violated", extra={"steps": report.violations})
    return report


class RatePoint(BaseModel):
    n: int
    rate: float


class UniformRateReport(BaseModel):
    """(1/n) log G(n) with G(n) = |||P^n - 1 (x) pi|||_V, and its limit check"""

    delta_V: float
    limit: float
    points: List[RatePoint]
    deviation: float
    exact_rank_one: bool = False
    pointwise_rates: List[float] = []
    pointwise_max_deviation: float = 0.0


def verify_uniform_rate(
    chain: MarkovChain,
    V: VectorLike,
    n_max: Optional[int] = None,
    structure: Optional[ChainStructure] = None,
) -> UniformRateReport:
    """
    Logarithmic convergence rate of P^n to 1 (x) pi, uniformly and per state

    Args:
        chain: Irreducible aperiodic chain
        V: Weight function
        n_max: Largest n; every n = 1..n_max is evaluated
        structure: Precomputed structure

    Returns:
        UniformRateReport; rates are -inf when the deviation vanishes exactly

    Raises:
        GapZero: If delta_V is within tolerance of zero
    """
    settings = get_settings()
    n_max = settings.uniform_rate_n_max if n_max is None else n_max
    weight = as_weight(V)
    structure = require_ergodic(chain, structure)
    Q = deviation_kernel(chain, structure.require_stationary()).Q

    delta_V = gap_lv(chain, weight, structure=structure).gap
    if delta_V <= settings.unit_eigen_tol:
        raise GapZero("delta_V is zero; the logarithmic rate is undefined", delta_V=delta_V)
    limit = math.log(1.0 - delta_V) if delta_V < 1.0 else -math.inf

    def row_log_norms(power: ScaledPower) -> np.ndarray:
        if power.is_zero:
            return np.full(chain.n, -math.inf)
        with np.errstate(divide="ignore"):
            return np.log((np.abs(power.matrix) @ weight) / weight) + power.log_scale

    points: List[RatePoint] = []
    step = ScaledPower.of(Q)
    power = step
    for n in range(1, n_max + 1):
        if n > 1:
            power = power @ step
        points.append(RatePoint(n=n, rate=float(np.max(row_log_norms(power))) / n))

    rank_one = all(p.rate == -math.inf for p in points)
    pointwise = (row_log_norms(power) / n_max).tolist()

    if rank_one or limit == -math.inf:
        deviation = 0.0 if points[-1].rate == limit else math.inf
        pointwise_dev = 0.0
    else:
        deviation = abs(points[-1].rate - limit)
        finite = [r for r in pointwise if math.isfinite(r)]
        pointwise_dev = max((abs(r - limit) for r in finite), default=0.0)

    logger.info(
        "Uniform rate verified",
        extra={"delta_V": delta_V, "deviation": deviation, "n_max": n_max},
    )
    return UniformRateReport(
        delta_V=delta_V,
        limit=limit,
        points=points,
        deviation=deviation,
        exact_rank_one=rank_one,
        pointwise_rates=pointwise,
        pointwise_max_deviation=pointwise_dev,
    )


class L2DecayProfile(BaseModel):
    """|||P^n - 1 (x) pi|||_2 per n and the constant b with norm <= b (1 - delta_2)^n"""

    delta_2: float
    norms: List[float]
    b: float


def l2_decay_profile(
    chain: MarkovChain, n_max: int, structure: Optional[ChainStructure] = None
) -> L2DecayProfile:
    structure = require_ergodic(chain, structure)
    pi = structure.require_stationary()
    Q = deviation_kernel(chain, pi).Q
    delta_2 = gap_l2(chain, GapMethod.EIGEN, structure=structure)
    log_rate = math.log(1.0 - delta_2) if delta_2 < 1.0 else -math.inf

    norms: List[float] = []
    log_b = 0.0
    power = ScaledPower.of(Q)
    step = ScaledPower.of(Q)
    for n in range(1, n_max + 1):
        if n > 1:
            power = power @ step
        log_norm = power.log_norm(lambda M: op_norm_l2(M, pi))
        norms.append(math.exp(log_norm) if log_norm > -math.inf else 0.0)
        if log_norm > -math.inf and log_rate > -math.inf:
            log_b = max(log_b, log_norm - n * log_rate)
    return L2DecayProfile(delta_2=delta_2, norms=norms, b=math.exp(log_b))
