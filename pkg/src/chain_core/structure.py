"""
Structural analysis: irreducibility, period, stationary law, reversibility
"""

import math
from collections import deque
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from src.chain_core.chain import MarkovChain
from src.config.settings import get_settings
from src.utils.exceptions import Reducible
from src.utils.linalg import solve_dense
from src.utils.logger import get_logger

logger = get_logger(__name__)


class ChainStructure(BaseModel):
    """Structural metadata of a finite chain"""

    model_config = ConfigDict(frozen=True)

    irreducible: bool
    period: int
    aperiodic: bool
    reversible: bool
    stationary: Optional[List[float]] = None
    communicating_classes: List[List[int]] = []

    @property
    def ergodic(self) -> bool:
        """Irreducible and aperiodic"""
        return self.irreducible and self.aperiodic

    def require_stationary(self) -> np.ndarray:
        if self.stationary is None:
            raise Reducible("Chain is reducible; the stationary law is not unique")
        return np.asarray(self.stationary, dtype=float)


def _communicating_classes(chain: MarkovChain) -> List[List[int]]:
    graph = csr_matrix(chain.P > 0.0)
    n_classes, labels = connected_components(graph, directed=True, connection="strong")
    classes = [sorted(np.flatnonzero(labels == k).tolist()) for k in range(n_classes)]
    return sorted(classes, key=lambda members: members[0])


def _is_closed(chain: MarkovChain, members: List[int]) -> bool:
    outside = np.ones(chain.n, dtype=bool)
    outside[members] = False
    return not np.any(chain.P[np.ix_(members, np.flatnonzero(outside))] > 0.0)


def class_period(chain: MarkovChain, members: List[int]) -> int:
    """
    Period of a communicating class by BFS layering

    Levels are assigned from the first member; the period is the gcd of
    level(x) + 1 - level(y) over all edges x -> y inside the class.
    """
    member_set = set(members)
    root = members[0]
    level = {root: 0}
    queue = deque([root])
    divisor = 0
    while queue:
        x = queue.popleft()
        for y in np.flatnonzero(chain.P[x] > 0.0).tolist():
            if y not in member_set:
                continue
            if y not in level:
                level[y] = level[x] + 1
                queue.append(y)
            else:
                divisor = math.gcd(divisor, abs(level[x] + 1 - level[y]))
    # A class without cycles (transient singleton) has no period; report 1.
    return divisor or 1


def stationary_distribution(chain: MarkovChain) -> np.ndarray:
    """
    Solve pi (P - I) = 0, sum(pi) = 1 by dense LU with the last balance equation
    replaced by the normalization

    Raises:
        Reducible: If the chain has more than one communicating class
    """
    if len(_communicating_classes(chain)) > 1:
        raise Reducible("Chain is reducible; the stationary law is not unique")
    n = chain.n
    A = chain.P.T - np.eye(n)
    A[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    pi = solve_dense(A, rhs, refine_tol=get_settings().solve_refine_tol)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def stationary_power_iteration(
    chain: MarkovChain, max_iter: int = 100_000, tol: float = 1e-13
) -> np.ndarray:
    """Stationary law by power iteration on the lazy chain (I + P) / 2"""
    lazy = 0.5 * (np.eye(chain.n) + chain.P)
    pi = np.full(chain.n, 1.0 / chain.n)
    for _ in range(max_iter):
        updated = pi @ lazy
        if np.max(np.abs(updated - pi)) < tol:
            return updated / updated.sum()
        pi = updated
    logger.warning("Power iteration reached the iteration cap", extra={"max_iter": max_iter})
    return pi / pi.sum()


def stationary_from_eigenvector(chain: MarkovChain) -> np.ndarray:
    """Stationary law as |mu| / |mu(X)| for the left eigenvector mu of the eigenvalue 1"""
    eigenvalues, vectors = np.linalg.eig(chain.P.T)
    k = int(np.argmin(np.abs(eigenvalues - 1.0)))
    mu = np.abs(vectors[:, k])
    return mu / mu.sum()


def is_reversible(chain: MarkovChain, pi: np.ndarray, tol: float) -> bool:
    """Detailed balance pi(x) P(x, y) = pi(y) P(y, x) for all pairs"""
    flux = pi[:, np.newaxis] * chain.P
    return bool(np.allclose(flux, flux.T, rtol=0.0, atol=tol))


def analyze_structure(chain: MarkovChain, balance_tol: Optional[float] = None) -> ChainStructure:
    """
    Irreducibility, period, stationary law and reversibility of a chain

    For a reducible chain the period is that of the lowest-indexed closed class,
    the stationary law is absent and the chain is reported non-reversible.

    Args:
        chain: Validated chain
        balance_tol: Detailed-balance tolerance (settings default)

    Returns:
        ChainStructure
    """
    tol = get_settings().balance_tol if balance_tol is None else balance_tol
    classes = _communicating_classes(chain)
    irreducible = len(classes) == 1

    if irreducible:
        period = class_period(chain, classes[0])
    else:
        closed = [members for members in classes if _is_closed(chain, members)]
        period = class_period(chain, closed[0])

    stationary: Optional[np.ndarray] = None
    reversible = False
    if irreducible:
        stationary = stationary_distribution(chain)
        reversible = chain.n == 1 or is_reversible(chain, stationary, tol)

    logger.debug(
        "Analyzed chain structure",
        extra={"n_states": chain.n, "classes": len(classes), "period": period},
    )
    return ChainStructure(
        irreducible=irreducible,
        period=period,
        aperiodic=period == 1,
        reversible=reversible,
        stationary=None if stationary is None else stationary.tolist(),
        communicating_classes=classes,
    )
