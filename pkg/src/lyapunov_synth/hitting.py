"""
Hitting-time functionals of a target set C, by exact linear solves

sigma_C = min{n >= 0 : X(n) in C} and tau_C = min{n >= 1 : X(n) in C}. Every
functional below restricts P to the complement of C (the taboo kernel Q) and
solves one system with I - a Q.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.chain_core.chain import MarkovChain
from src.config.settings import get_settings
from src.ergodicity.drift import state_set
from src.measures_norms.functions import VectorLike, as_vector, check_dimensions
from src.utils.exceptions import AbsorbingComplement, InputError, ThetaTooLarge
from src.utils.linalg import solve_dense, spectral_radius
from src.utils.logger import get_logger

logger = get_logger(__name__)


def split_states(chain: MarkovChain, C: Sequence[int]) -> Tuple[List[int], np.ndarray]:
    """(members of C, indices of the complement)"""
    members = state_set(C, chain.n)
    if not members:
        raise InputError("Target set C must be nonempty")
    outside = np.ones(chain.n, dtype=bool)
    outside[members] = False
    return members, np.flatnonzero(outside)


def taboo_radius(chain: MarkovChain, C: Sequence[int], tol: Optional[float] = None) -> float:
    """
    Spectral radius of P restricted to the complement of C

    Raises:
        AbsorbingComplement: If the radius is within tol of 1 (C is not reached
            from some state)
    """
    tol = get_settings().stochastic_tol if tol is None else tol
    _, outside = split_states(chain, C)
    radius = spectral_radius(chain.P[np.ix_(outside, outside)])
    if radius >= 1.0 - tol:
        raise AbsorbingComplement(
            "C is not reached from every state", radius=radius, complement_size=len(outside)
        )
    return radius


def _check_growth(radius: float, growth: float, what: str) -> None:
    if growth * radius >= 1.0:
        raise ThetaTooLarge(
            f"{what}: growth factor times taboo radius is not below 1",
            growth=growth,
            radius=radius,
            product=growth * radius,
        )


def discounted_occupation(
    chain: MarkovChain, C: Sequence[int], g: VectorLike, growth: float = 1.0
) -> np.ndarray:
    """
    W(x) = E_x[sum_{n=0}^{sigma_C} g(X(n)) growth^n]

    W = g on C; off C, (I - growth Q) W = g + growth P[Cc, C] g_C.

    Raises:
        AbsorbingComplement: If C is not reached from every state
        ThetaTooLarge: If growth times the taboo radius is at least 1
        SingularSystem: If the solve fails
    """
    values = np.asarray(as_vector(g), dtype=float)
    check_dimensions(chain.P, values)
    members, outside = split_states(chain, C)
    radius = taboo_radius(chain, members)
    _check_growth(radius, growth, "discounted occupation")

    W = values.copy()
    if outside.size:
        Q = chain.P[np.ix_(outside, outside)]
        inflow = chain.P[np.ix_(outside, members)] @ values[members]
        system = np.eye(outside.size) - growth * Q
        W[outside] = solve_dense(
            system, values[outside] + growth * inflow, get_settings().solve_refine_tol
        )
    return W


def mean_hitting_time(chain: MarkovChain, C: Sequence[int]) -> np.ndarray:
    """E_x[sigma_C], zero on C"""
    return discounted_occupation(chain, C, np.ones(chain.n)) - 1.0


def exponential_moment(
    chain: MarkovChain, C: Sequence[int], theta: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Return-time exponential moment U(x) = E_x[exp(theta tau_C)]

    M(y) = E_y[exp(theta sigma_C)] solves (I - e^theta Q) M = e^theta P[Cc, C] 1
    off C with M = 1 on C, and U = e^theta (P[:, C] 1 + P[:, Cc] M).

    Returns:
        (U, M)

    Raises:
        ThetaTooLarge: If e^theta times the taboo radius is at least 1
    """
    members, outside = split_states(chain, C)
    if theta == 0.0:
        return np.ones(chain.n), np.ones(chain.n)

    growth = math.exp(theta)
    radius = taboo_radius(chain, members)
    _check_growth(radius, growth, f"exponential moment at theta={theta:.6g}")

    M = np.ones(chain.n)
    if outside.size:
        Q = chain.P[np.ix_(outside, outside)]
        into_c = chain.P[np.ix_(outside, members)].sum(axis=1)
        M[outside] = solve_dense(
            np.eye(outside.size) - growth * Q,
            growth * into_c,
            get_settings().solve_refine_tol,
        )
    U = growth * (chain.P[:, members].sum(axis=1) + chain.P[:, outside] @ M[outside])
    return U, M


def h2_regular_functional(chain: MarkovChain, S: Sequence[int], h: VectorLike) -> np.ndarray:
    """
    V_r(x) = E_x[sum_{n=0}^{tau_S} h^2(X(n))], the return-time form
    """
    squares = np.abs(np.asarray(as_vector(h))) ** 2
    M = discounted_occupation(chain, S, squares)
    return squares + chain.step(M)


class HittingFunctionals(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    target: List[int]
    theta: float
    sigma_mean: List[float]
    taboo_spectral_radius: float = Field(alias="tabooSpectralRadius")
    U_theta: List[float]
    U_max_on_target: float


def hitting_functionals(chain: MarkovChain, C: Sequence[int], theta: float) -> HittingFunctionals:
    """Mean hitting times, taboo radius and return-time exponential moment of C"""
    members, _ = split_states(chain, C)
    radius = taboo_radius(chain, members)
    U, _ = exponential_moment(chain, members, theta)
    return HittingFunctionals(
        target=members,
        theta=theta,
        sigma_mean=mean_hitting_time(chain, members).tolist(),
        taboo_spectral_radius=radius,
        U_theta=U.tolist(),
        U_max_on_target=float(np.max(U[members])),
    )
