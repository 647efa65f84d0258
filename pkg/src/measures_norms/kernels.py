"""
Kernel algebra: deviation kernel P - 1 (x) pi and induced operator norms
"""

from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator

from src.chain_core.chain import MarkovChain
from src.measures_norms.functions import VectorLike, as_vector, as_weight, check_dimensions
from src.utils.exceptions import DegenerateStationary, DimensionMismatch, NotStationary


class Kernel(BaseModel):
    """A (not necessarily stochastic) n x n kernel"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    Q: np.ndarray

    @field_validator("Q")
    @classmethod
    def _read_only_square(cls, value: np.ndarray) -> np.ndarray:
        array = np.array(value, dtype=float)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError("kernel must be square")
        array.setflags(write=False)
        return array

    @field_serializer("Q")
    def _serialize_matrix(self, value: np.ndarray) -> List[List[float]]:
        return value.tolist()

    @property
    def n(self) -> int:
        return int(self.Q.shape[0])

    def __matmul__(self, other: "Kernel") -> "Kernel":
        if self.n != other.n:
            raise DimensionMismatch("Kernel dimensions differ", sizes=[self.n, other.n])
        return Kernel(Q=self.Q @ other.Q)

    def power(self, n: int) -> "Kernel":
        """Q^n by repeated squaring (Q^0 = I)"""
        return Kernel(Q=np.linalg.matrix_power(self.Q, n))


KernelLike = Union[Kernel, np.ndarray]


def _matrix(Q: KernelLike) -> np.ndarray:
    return Q.Q if isinstance(Q, Kernel) else np.asarray(Q, dtype=float)


def outer_one_pi(pi: VectorLike) -> np.ndarray:
    """The rank-one kernel (1 (x) pi)(x, y) = pi(y)"""
    stationary = np.asarray(as_vector(pi), dtype=float)
    return np.tile(stationary, (stationary.shape[0], 1))


def deviation_kernel(chain: MarkovChain, pi: VectorLike, tol: Optional[float] = None) -> Kernel:
    """
    The deviation kernel Q = P - 1 (x) pi

    Raises:
        NotStationary: If pi P differs from pi by more than tol
    """
    stationary = np.asarray(as_vector(pi), dtype=float)
    check_dimensions(chain.P, stationary)
    tol = chain.tol if tol is None else tol
    drift = float(np.max(np.abs(stationary @ chain.P - stationary)))
    if drift > max(tol, 1e-12):
        raise NotStationary("pi is not stationary for the chain", deviation=drift)
    return Kernel(Q=chain.P - outer_one_pi(stationary))


def op_norm_v(Q: KernelLike, V: VectorLike) -> float:
    """
    Induced operator norm on L_inf^V: max_x sum_y |Q(x,y)| V(y) / V(x)
    """
    matrix = _matrix(Q)
    weight = as_weight(V)
    check_dimensions(matrix, weight)
    return float(np.max((np.abs(matrix) @ weight) / weight))


def op_norm_l2(Q: KernelLike, pi: VectorLike) -> float:
    """
    Induced operator norm on L2(pi): largest singular value of D^1/2 Q D^-1/2

    Raises:
        DegenerateStationary: If some pi(x) is zero
    """
    matrix = _matrix(Q)
    stationary = np.asarray(as_vector(pi), dtype=float)
    check_dimensions(matrix, stationary)
    if np.any(stationary <= 0.0):
        raise DegenerateStationary(
            "L2(pi) needs a strictly positive pi", state=int(np.argmin(stationary))
        )
    root = np.sqrt(stationary)
    return float(np.linalg.norm(root[:, np.newaxis] * matrix / root[np.newaxis, :], 2))
