"""
Truncation of countable chain families to N-state chains
"""

from enum import Enum
from typing import Optional

import numpy as np

from src.chain_core.chain import MarkovChain, validate_chain
from src.chain_core.families import CountableChainSpec
from src.config.settings import get_settings
from src.utils.exceptions import EmptyRow, InputError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class BoundaryPolicy(str, Enum):
    """How out-of-range mass is handled"""

    REFLECT_TO_LAST = "reflect_to_last"
    RENORMALIZE_ROW = "renormalize_row"


def truncate(
    spec: CountableChainSpec,
    N: int,
    boundary: Optional[BoundaryPolicy | str] = None,
    tol: Optional[float] = None,
) -> MarkovChain:
    """
    Build the N-state truncation of a countable chain family

    Rows fully supported inside {0..N-1} are copied; out-of-range mass is either
    added to state N-1 (reflect_to_last) or removed with the in-range part rescaled
    (renormalize_row). Finite families are truncated at their own support size.

    Args:
        spec: Family and parameters
        N: Number of states kept (>= 2)
        boundary: Boundary policy (settings default)
        tol: Validation tolerance (settings default)

    Returns:
        Validated MarkovChain

    Raises:
        EmptyRow: renormalize_row on a row with no in-range mass
    """
    settings = get_settings()
    if N < 2:
        raise InputError(f"Truncation size must be at least 2, got {N}", N=N)
    policy = BoundaryPolicy(boundary or settings.truncation_boundary)
    tol = settings.stochastic_tol if tol is None else tol

    support = spec.definition.n_states
    size = N if support is None else min(N, support)

    P = np.zeros((size, size))
    for x in range(size):
        for y, p in spec.row(x, tol).items():
            if 0 <= y < size:
                P[x, y] += p
        outside = 1.0 - P[x].sum()
        if outside <= tol:
            continue
        if policy is BoundaryPolicy.REFLECT_TO_LAST:
            P[x, size - 1] += outside
        else:
            inside = P[x].sum()
            if inside <= tol:
                raise EmptyRow(f"Row {x} has no mass inside the truncation", row=x, N=size)
            P[x] /= inside

    logger.debug(
        "Truncated chain family",
        extra={"family": spec.family_name, "N": size, "boundary": policy.value},
    )
    return validate_chain(P, tol=tol)
