"""
Exact stationary autocorrelations R(n) = pi(h P^n h) of a centered observable
"""

import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure
from src.config.settings import get_settings
from src.measures_norms.functions import VectorLike, as_vector, check_dimensions
from src.spectral.gaps import require_ergodic
from src.utils.logger import get_logger

logger = get_logger(__name__)


class AutocorrelationSeries(BaseModel):
    """R(n) and the bound |R(n)| <= sqrt(pi(h^2) pi((P^n h)^2)) for n = 0..n_max"""

    h: List[float]
    R: List[float]
    cs_bound: List[float]
    fitted_rate: float
    sum_abs_R: float

    @property
    def bound_slack(self) -> float:
        """Largest |R(n)| - cs_bound(n); never above rounding level"""
        return max(abs(r) - b for r, b in zip(self.R, self.cs_bound))


def center(h: VectorLike, pi: np.ndarray) -> np.ndarray:
    values = np.asarray(as_vector(h), dtype=float)
    check_dimensions(values, pi)
    return values - float(np.dot(pi, values))


def envelope_rate(R: np.ndarray) -> float:
    """
    Decay rate of |R| from block maxima over the last doubling

    The maxima of |R| over [a, 2a) and [2a, 4a) with a = n_max / 4 sit near
    the block starts for a geometric envelope, a steps apart.
    """
    n_max = R.size - 1
    if n_max < 4:
        return float(abs(R[1]) / abs(R[0])) if n_max >= 1 and R[0] != 0.0 else 0.0
    a = n_max // 4
    early = float(np.max(np.abs(R[a : 2 * a])))
    late = float(np.max(np.abs(R[2 * a : 4 * a + 1])))
    if early == 0.0 or late == 0.0:
        return 0.0
    return math.exp((math.log(late) - math.log(early)) / a)


def autocorrelation_exact(
    chain: MarkovChain,
    h: VectorLike,
    n_max: Optional[int] = None,
    structure: Optional[ChainStructure] = None,
) -> AutocorrelationSeries:
    """
    R(n) for n = 0..n_max by iterating P on the centered observable

    Each iterate is recentered so that rounding never reintroduces a constant
    component.

    Raises:
        NotApplicable: If the chain is reducible or periodic
    """
    n_max = get_settings().autocorr_n_max if n_max is None else n_max
    structure = require_ergodic(chain, structure)
    pi = structure.require_stationary()
    centered = center(h, pi)
    base = float(np.dot(pi, centered**2))

    R = np.zeros(n_max + 1)
    bound = np.zeros(n_max + 1)
    f = centered.copy()
    for n in range(n_max + 1):
        if n > 0:
            f = chain.step(f)
            f -= float(np.dot(pi, f))
        R[n] = float(np.dot(pi, centered * f))
        bound[n] = math.sqrt(base * float(np.dot(pi, f**2)))

    rate = envelope_rate(R)
    logger.debug("Autocorrelations computed", extra={"n_max": n_max, "fitted_rate": rate})
    return AutocorrelationSeries(
        h=centered.tolist(),
        R=R.tolist(),
        cs_bound=bound.tolist(),
        fitted_rate=rate,
        sum_abs_R=float(R[0] + 2.0 * np.sum(np.abs(R[1:]))),
    )
