"""
Dense linear algebra helpers: LU solves with refinement and scaled matrix powers
"""

import math
from typing import Callable, Tuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from src.utils.exceptions import SingularSystem
from src.utils.logger import get_logger

logger = get_logger(__name__)


def solve_dense(A: np.ndarray, b: np.ndarray, refine_tol: float = 1e-10) -> np.ndarray:
    """
    Solve A x = b by LU with partial pivoting, with one refinement pass when the
    residual is large

    Args:
        A: Square system matrix
        b: Right-hand side (vector or matrix)
        refine_tol: Residual (max-norm) above which a refinement pass is applied

    Returns:
        Solution x

    Raises:
        SingularSystem: If the factorization is singular or the solution is not finite
    """
    if A.shape[0] == 0:
        return np.zeros_like(b, dtype=float)
    try:
        with np.errstate(all="ignore"):
            lu, piv = lu_factor(A, check_finite=True)
    except (np.linalg.LinAlgError, ValueError, LinAlgWarning) as e:
        raise SingularSystem(f"LU factorization failed: {e}", size=int(A.shape[0])) from e

    if np.any(np.abs(np.diag(lu)) == 0.0):
        raise SingularSystem("LU factorization is exactly singular", size=int(A.shape[0]))

    x = lu_solve((lu, piv), b)
    residual = b - A @ x
    if np.max(np.abs(residual), initial=0.0) > refine_tol:
        logger.debug(
            "Applying iterative refinement",
            extra={"residual": float(np.max(np.abs(residual)))},
        )
        x = x + lu_solve((lu, piv), residual)

    if not np.all(np.isfinite(x)):
        raise SingularSystem("Linear solve produced non-finite values", size=int(A.shape[0]))
    return x


def spectral_radius(M: np.ndarray) -> float:
    """Largest eigenvalue modulus of a square matrix (0 for an empty matrix)"""
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(M))))


class ScaledPower:
    """
    A matrix power kept as M * exp(log_scale) so that long power sequences
    neither underflow nor overflow

    Norms are positively homogeneous, so log ||Q^n|| = log ||M|| + log_scale.
    """

    def __init__(self, matrix: np.ndarray, log_scale: float = 0.0) -> None:
        self.matrix = matrix
        self.log_scale = log_scale

    @classmethod
    def of(cls, Q: np.ndarray) -> "ScaledPower":
        return cls(np.array(Q, dtype=float), 0.0)._normalized()

    def _normalized(self) -> "ScaledPower":
        peak = float(np.max(np.abs(self.matrix), initial=0.0))
        if peak == 0.0 or not math.isfinite(self.log_scale):
            return ScaledPower(np.zeros_like(self.matrix), -math.inf)
        return ScaledPower(self.matrix / peak, self.log_scale + math.log(peak))

    @property
    def is_zero(self) -> bool:
        return self.log_scale == -math.inf

    def __matmul__(self, other: "ScaledPower") -> "ScaledPower":
        if self.is_zero or other.is_zero:
            return ScaledPower(np.zeros_like(self.matrix), -math.inf)
        return ScaledPower(
            self.matrix @ other.matrix, self.log_scale + other.log_scale
        )._normalized()

    def squared(self) -> "ScaledPower":
        return self @ self

    def log_norm(self, norm: Callable[[np.ndarray], float]) -> float:
        """log of norm(Q^n); -inf for an exactly vanishing power"""
        if self.is_zero:
            return -math.inf
        value = norm(self.matrix)
        if value <= 0.0:
            return -math.inf
        return math.log(value) + self.log_scale

    def dense(self) -> np.ndarray:
        """The represented matrix (may underflow to zero)"""
        if self.is_zero:
            return np.zeros_like(self.matrix)
        return self.matrix * math.exp(self.log_scale)


def scaled_power(Q: np.ndarray, n: int) -> ScaledPower:
    """Q^n by binary exponentiation in scaled form (n >= 1)"""
    if n < 1:
        raise ValueError("scaled_power requires n >= 1")
    base = ScaledPower.of(Q)
    result: ScaledPower | None = None
    k = n
    while k > 0:
        if k & 1:
            result = base if result is None else result @ base
        k >>= 1
        if k:
            base = base.squared()
    assert result is not None
    return result


def doubling_schedule(n_max: int) -> Tuple[int, ...]:
    """1, 2, 4, ... up to n_max, with n_max appended when it is not a power of two"""
    schedule = []
    n = 1
    while n <= n_max:
        schedule.append(n)
        n *= 2
    if schedule[-1] != n_max:
        schedule.append(n_max)
    return tuple(schedule)
