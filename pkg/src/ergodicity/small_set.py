"""
Minorization: P^m(x, .) >= eps nu(.) for every x in C
"""

from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.chain_core.chain import MarkovChain
from src.config.settings import get_settings
from src.ergodicity.drift import state_set
from src.utils.exceptions import InputError, NotSmallWithinHorizon
from src.utils.logger import get_logger

logger = get_logger(__name__)


class SmallSetCertificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    C: List[int]
    m: int
    eps: float
    nu: List[float]


def find_small_set(
    chain: MarkovChain,
    C: Sequence[int],
    m_max: Optional[int] = None,
    eps_min: Optional[float] = None,
) -> SmallSetCertificate:
    """
    First horizon m <= m_max at which C is small

    The minorizing measure at horizon m is the columnwise minimum of the rows of
    P^m indexed by C; its mass is eps.

    Raises:
        InputError: If C is empty
        NotSmallWithinHorizon: If eps <= eps_min for every m <= m_max
    """
    settings = get_settings()
    m_max = settings.small_set_m_max if m_max is None else m_max
    eps_min = settings.eps_min if eps_min is None else eps_min
    members = state_set(C, chain.n)
    if not members:
        raise InputError("Small-set search needs a nonempty C")

    rows = chain.P[members]
    best = 0.0
    for m in range(1, m_max + 1):
        floor = np.min(rows, axis=0)
        eps = float(floor.sum())
        best = max(best, eps)
        if eps > eps_min:
            eps = min(eps, 1.0)
            logger.debug(f"C is small at horizon m={m}", extra={"eps": eps})
            return SmallSetCertificate(
                C=members, m=m, eps=eps, nu=(floor / floor.sum()).tolist()
            )
        rows = rows @ chain.P

    raise NotSmallWithinHorizon(
        f"No minorization for C within m <= {m_max}",
        C=members,
        m_max=m_max,
        best_eps=best,
    )


def verify_minorization(
    chain: MarkovChain, certificate: SmallSetCertificate, tol: float = 1e-12
) -> bool:
    """P^m(x, y) >= eps nu(y) - tol for x in C and every y"""
    power = np.linalg.matrix_power(chain.P, certificate.m)[certificate.C]
    floor = certificate.eps * np.asarray(certificate.nu)
    return bool(np.all(power >= floor[np.newaxis, :] - tol))
