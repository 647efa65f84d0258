"""
Geometric ergodicity certificates: ||P^n(x,.) - pi||_V <= B V(x) rho^n
"""

import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure
from src.config.settings import get_settings
from src.measures_norms.functions import VectorLike, as_weight, check_dimensions
from src.measures_norms.kernels import deviation_kernel, op_norm_v, outer_one_pi
from src.spectral.gaps import gap_lv, require_ergodic
from src.utils.exceptions import GapZero
from src.utils.logger import get_logger

logger = get_logger(__name__)

# TV distances below this are rounding noise and carry no rate information.
TV_NOISE_FLOOR = 1e-12


class GeometricCertificate(BaseModel):
    """per_n_lhs[n] = max_x ||P^n(x,.) - pi||_V / V(x) for n = 0..n_max"""

    model_config = ConfigDict(frozen=True)

    B: float
    rho: float
    V: List[float]
    per_n_lhs: List[float]
    converged: bool = True
    exact_convergence: bool = False
    fitted_slope_rho: Optional[float] = None

    def bound(self, n: int) -> float:
        return self.B * self.rho**n


def geometric_certificate(
    chain: MarkovChain,
    V: VectorLike,
    n_max: Optional[int] = None,
    structure: Optional[ChainStructure] = None,
) -> GeometricCertificate:
    """
    Fit (B, rho) so that L(n) <= B rho^n for every recorded n

    L(n) is the V-operator norm of (P - 1 (x) pi)^n, built by repeated
    multiplication with L(0) taken at I - 1 (x) pi. rho is the Gelfand estimate
    of the deviation kernel's spectral radius; B is the smallest constant that
    covers every recorded L(n).

    Raises:
        NotApplicable: If the chain is reducible or periodic
        GapZero: If rho is within tolerance of 1
    """
    settings = get_settings()
    n_max = settings.certificate_n_max if n_max is None else n_max
    weight = as_weight(V)
    check_dimensions(chain.P, weight)
    structure = require_ergodic(chain, structure)
    pi = structure.require_stationary()
    Q = deviation_kernel(chain, pi).Q

    power = np.eye(chain.n) - outer_one_pi(pi)
    lhs = [op_norm_v(power, weight)]
    for _ in range(n_max):
        power = power @ Q
        lhs.append(op_norm_v(power, weight))

    estimate = gap_lv(chain, weight, structure=structure, strict=False)
    rho = estimate.limit
    if rho >= 1.0 - settings.unit_eigen_tol:
        raise GapZero("Deviation kernel has spectral radius 1", rho=rho)

    slope_rho: Optional[float] = None
    half = n_max // 2
    if half >= 1 and lhs[half] > 0.0 and lhs[n_max] > 0.0:
        slope_rho = math.exp((math.log(lhs[n_max]) - math.log(lhs[half])) / (n_max - half))

    exact = estimate.exact_zero or all(value == 0.0 for value in lhs[1:])
    if exact:
        rho = 0.0
        B = lhs[0]
    else:
        log_rho = math.log(rho)
        B = math.exp(
            max(math.log(value) - n * log_rho for n, value in enumerate(lhs) if value > 0.0)
        )

    logger.info(
        "Geometric certificate fitted",
        extra={"B": B, "rho": rho, "exact": exact, "converged": estimate.converged},
    )
    return GeometricCertificate(
        B=B,
        rho=rho,
        V=weight.tolist(),
        per_n_lhs=lhs,
        converged=estimate.converged,
        exact_convergence=exact,
        fitted_slope_rho=slope_rho,
    )


class TvProfile(BaseModel):
    """
    Per-state total-variation decay ||P^n(x,.) - pi||_TV <= C(x) rho(x)^n

    The bound is claimed for n up to resolved_n[x], the last n at which the
    distance is above the rounding floor.
    """

    distances: List[List[float]]
    rho: List[float]
    C: List[float]
    resolved_n: List[int]


def tv_profile(
    chain: MarkovChain, n_max: int, structure: Optional[ChainStructure] = None
) -> TvProfile:
    structure = require_ergodic(chain, structure)
    pi = structure.require_stationary()

    rows = np.array(chain.P, dtype=float)
    history = []
    for _ in range(n_max):
        history.append(0.5 * np.abs(rows - pi[np.newaxis, :]).sum(axis=1))
        rows = rows @ chain.P
    table = np.array(history).T

    rhos: List[float] = []
    constants: List[float] = []
    resolved: List[int] = []
    for distances in table:
        above = np.flatnonzero(distances > TV_NOISE_FLOOR)
        last = int(above[-1]) + 1 if above.size else 0
        resolved.append(last)
        if last == 0:
            rhos.append(0.0)
            constants.append(1.0)
            continue
        window = range(max(1, (last + 1) // 2), last + 1)
        rho = max(distances[n - 1] ** (1.0 / n) for n in window)
        rho = min(rho, 1.0)
        ratio = max(distances[n - 1] / rho**n for n in range(1, last + 1))
        rhos.append(float(rho))
        constants.append(float(max(1.0, ratio)))

    return TvProfile(
        distances=table.tolist(), rho=rhos, C=constants, resolved_n=resolved
    )
