"""
Eigenstructure of the transition matrix and unit-circle pole checks
"""

import cmath
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure
from src.config.settings import get_settings
from src.utils.exceptions import EigenNoConvergence
from src.utils.logger import get_logger
from src.utils.verdicts import CheckStatus

logger = get_logger(__name__)


class Eigenvalue(BaseModel):
    model_config = ConfigDict(frozen=True)

    re: float
    im: float

    @classmethod
    def of(cls, value: complex) -> "Eigenvalue":
        return cls(re=float(value.real), im=float(value.imag))

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def modulus(self) -> float:
        return abs(self.value)


class SpectrumReport(BaseModel):
    """Eigenvalues of P and the gaps derived from them"""

    eigenvalues: List[Eigenvalue]
    unit_eigenvalue_multiplicity: int
    second_modulus: float
    delta_eig: float
    delta_2: Optional[Dict[str, float]] = None
    delta_V: Optional[float] = None
    gelfand_trace: List[Tuple[int, float]] = []

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.eigenvalues])


class PoleVerdict(BaseModel):
    """Location and multiplicity of poles on the unit circle"""

    status: CheckStatus
    applicable: bool
    unit_eigenvalue_multiplicity: int
    offenders: List[Eigenvalue]
    boundary_clear: bool
    unit_pole_semisimple: Optional[bool] = None
    unit_pole_simple: Optional[bool] = None
    consistent_with_period: Optional[bool] = None
    message: str = ""


def _nearest_to_one(values: np.ndarray) -> int:
    return int(np.argmin(np.abs(values - 1.0)))


def eigen_spectrum(chain: MarkovChain, unit_tol: Optional[float] = None) -> SpectrumReport:
    """
    All eigenvalues of P, sorted by decreasing modulus

    LAPACK's general eigensolver (balancing, Hessenberg reduction, shifted QR).
    The second modulus is the largest modulus once the eigenvalue nearest to 1 is
    removed, so a repeated unit eigenvalue yields second_modulus = 1.

    Raises:
        EigenNoConvergence: If the QR iteration fails to converge
    """
    tol = get_settings().unit_eigen_tol if unit_tol is None else unit_tol
    try:
        values = np.linalg.eigvals(chain.P)
    except np.linalg.LinAlgError as e:
        raise EigenNoConvergence(f"Eigenvalue iteration did not converge: {e}") from e

    order = np.lexsort((-values.imag, -values.real, -np.round(np.abs(values), 12)))
    values = values[order]

    multiplicity = int(np.sum(np.abs(values - 1.0) <= tol))
    rest = np.delete(values, _nearest_to_one(values))
    second = float(np.max(np.abs(rest))) if rest.size else 0.0
    second = min(second, 1.0)
    return SpectrumReport(
        eigenvalues=[Eigenvalue.of(v) for v in values],
        unit_eigenvalue_multiplicity=multiplicity,
        second_modulus=second,
        delta_eig=min(max(1.0 - second, 0.0), 1.0),
    )


def _unit_pole_ranks(chain: MarkovChain) -> Tuple[bool, bool]:
    """(semisimple, simple) for the eigenvalue 1 from rank(I - P) and rank((I - P)^2)"""
    A = np.eye(chain.n) - chain.P
    rank = int(np.linalg.matrix_rank(A))
    semisimple = rank == int(np.linalg.matrix_rank(A @ A))
    return semisimple, semisimple and rank == chain.n - 1


def _matches_period(values: np.ndarray, period: int, tol: float) -> bool:
    for k in range(1, period):
        root = cmath.exp(2j * math.pi * k / period)
        if not np.any(np.abs(values - root) <= tol):
            return False
    return True


def check_pole_structure(
    report: SpectrumReport,
    structure: ChainStructure,
    chain: Optional[MarkovChain] = None,
    boundary_tol: Optional[float] = None,
) -> PoleVerdict:
    """
    Check that 1 is the only eigenvalue on the unit circle and that it is simple

    The verdict is PASS when the unit eigenvalue is simple and the boundary is
    otherwise clear. For an irreducible aperiodic chain (applicable=True) a FAIL
    is a genuine violation; for other chains it is the expected outcome and the
    offenders are checked against the period's roots of unity.

    Args:
        report: Output of eigen_spectrum
        structure: Output of analyze_structure for the same chain
        chain: When given, the rank test for a generalized eigenvector of 1 is run
        boundary_tol: Modulus slack for "on the unit circle"

    Returns:
        PoleVerdict
    """
    settings = get_settings()
    tol = settings.boundary_tol if boundary_tol is None else boundary_tol
    values = report.values
    unit = _nearest_to_one(values)
    offenders = [
        report.eigenvalues[i]
        for i in range(len(values))
        if i != unit and abs(values[i]) >= 1.0 - tol
    ]

    semisimple, simple = _unit_pole_ranks(chain) if chain is not None else (None, None)
    boundary_clear = not offenders
    applicable = structure.ergodic

    consistent: Optional[bool] = None
    if structure.irreducible and structure.period > 1:
        consistent = _matches_period(values, structure.period, max(tol, 1e-6))

    ok = report.unit_eigenvalue_multiplicity == 1 and boundary_clear and simple is not False
    status = CheckStatus.PASS if ok else CheckStatus.FAIL
    if ok:
        message = "only pole on the unit circle is 1, and it is simple"
    elif not structure.irreducible:
        message = "chain is reducible; unit eigenvalue has multiplicity " + str(
            report.unit_eigenvalue_multiplicity
        )
    elif structure.period > 1:
        message = f"chain has period {structure.period}; roots of unity lie on the circle"
    else:
        message = "extra poles on the unit circle for an aperiodic irreducible chain"

    if status is CheckStatus.FAIL:
        log = logger.warning if applicable else logger.info
        log(
            f"Pole structure check failed: {message}",
            extra={"offenders": [[o.re, o.im] for o in offenders]},
        )
    return PoleVerdict(
        status=status,
        applicable=applicable,
        unit_eigenvalue_multiplicity=report.unit_eigenvalue_multiplicity,
        offenders=offenders,
        boundary_clear=boundary_clear,
        unit_pole_semisimple=semisimple,
        unit_pole_simple=simple,
        consistent_with_period=consistent,
        message=message,
    )
