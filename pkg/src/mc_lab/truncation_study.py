"""
Truncation study: how gaps, drift constants and partial-sum variances of a
countable family behave as the truncation level N grows
"""

from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src.chain_core.families import CountableChainSpec
from src.chain_core.structure import analyze_structure
from src.chain_core.truncation import BoundaryPolicy, truncate
from src.config.settings import get_settings
from src.ergodicity.drift import check_drift
from src.mc_lab.autocorrelation import autocorrelation_exact
from src.mc_lab.partial_sums import exact_second_moment
from src.measures_norms.rules import named_observable, named_weight
from src.spectral.gaps import GapMethod, gap_l2
from src.utils.exceptions import DimensionMismatch, ErgographError
from src.utils.logger import get_logger

logger = get_logger(__name__)

Rule = Union[str, Sequence[float], np.ndarray, Callable[[int], np.ndarray]]

CSV_COLUMNS = ["N", "delta2", "drift_delta", "drift_b", "drift_valid", "sum_abs_R", "ESn2_max"]


class SeriesTrend(str, Enum):
    STABLE = "stable"
    DECREASING = "decreasing"
    INCREASING = "increasing"
    INCONCLUSIVE = "inconclusive"


class DriftSummary(BaseModel):
    C: List[int]
    delta: float
    b: float
    valid: bool
    relative_residual: float


class StudyRow(BaseModel):
    N: int
    delta2: Optional[float] = None
    drift: Optional[DriftSummary] = None
    sum_abs_R: Optional[float] = None
    ESn2: List[Tuple[int, float]] = []
    errors: List[str] = []


class TruncationStudy(BaseModel):
    family: str
    rows: List[StudyRow]
    trends: dict[str, SeriesTrend]
    gap_collapse_candidate: bool

    def curves(self) -> pd.DataFrame:
        """One line per N, ready for plotting"""
        records = []
        for row in self.rows:
            records.append(
                {
                    "N": row.N,
                    "delta2": row.delta2,
                    "drift_delta": row.drift.delta if row.drift else None,
                    "drift_b": row.drift.b if row.drift else None,
                    "drift_valid": row.drift.valid if row.drift else None,
                    "sum_abs_R": row.sum_abs_R,
                    "ESn2_max": row.ESn2[-1][1] if row.ESn2 else None,
                }
            )
        return pd.DataFrame.from_records(records, columns=CSV_COLUMNS)

    def to_csv(self, path: Path) -> None:
        self.curves().to_csv(path, index=False)


def _resolve(rule: Rule, n: int, named: Callable[[str, int], np.ndarray]) -> np.ndarray:
    """
    Vector for an n-state truncation: a named rule, a callable of n, or an
    explicit vector whose first n entries are used

    Raises:
        DimensionMismatch: If an explicit vector has fewer than n entries
    """
    if isinstance(rule, str):
        return named(rule, n)
    if callable(rule):
        return np.asarray(rule(n), dtype=float)
    values = np.asarray(rule, dtype=float)
    if values.ndim != 1 or values.size < n:
        raise DimensionMismatch(
            f"Vector of {values.size} entries cannot cover N={n}", size=int(values.size), N=n
        )
    return values[:n]


def classify_series(
    values: Sequence[Optional[float]], tol: float = 0.05, ratio: float = 1.25
) -> SeriesTrend:
    """Compare the second half of a series against its first point and its own spread"""
    data = np.array([v for v in values if v is not None], dtype=float)
    if data.size < 2:
        return SeriesTrend.INCONCLUSIVE
    tail = data[data.size // 2 :]
    scale = float(np.max(np.abs(tail)))
    if scale == 0.0 or (float(tail.max()) - float(tail.min())) / scale <= tol:
        return SeriesTrend.STABLE
    first, last = float(data[0]), float(data[-1])
    if first > 0.0 and last / first <= 1.0 / ratio:
        return SeriesTrend.DECREASING
    if first > 0.0 and last / first >= ratio:
        return SeriesTrend.INCREASING
    return SeriesTrend.INCONCLUSIVE


def study_row(
    spec: CountableChainSpec,
    N: int,
    V_rule: Rule,
    h_rule: Rule,
    C_rule: Sequence[int],
    n_multipliers: Sequence[int],
    boundary: Optional[BoundaryPolicy],
) -> StudyRow:
    """Every quantity for one truncation level; failures are recorded, not raised"""
    row = StudyRow(N=N)
    try:
        chain = truncate(spec, N, boundary=boundary)
    except ErgographError as e:
        row.errors.append(f"{e.code}: {e.message}")
        return row

    structure = analyze_structure(chain)
    try:
        row.delta2 = gap_l2(chain, GapMethod.EIGEN, structure=structure)
    except ErgographError as e:
        row.errors.append(f"{e.code}: {e.message}")

    try:
        certificate = check_drift(chain, _resolve(V_rule, chain.n, named_weight), C_rule)
        row.drift = DriftSummary(
            C=certificate.C,
            delta=certificate.delta,
            b=certificate.b,
            valid=certificate.valid,
            relative_residual=certificate.relative_residual,
        )
    except ErgographError as e:
        row.errors.append(f"{e.code}: {e.message}")

    try:
        h = _resolve(h_rule, chain.n, named_observable)
        horizons = [max(1, int(k) * chain.n) for k in n_multipliers]
        series = autocorrelation_exact(chain, h, n_max=max(horizons), structure=structure)
        row.sum_abs_R = series.sum_abs_R
        row.ESn2 = [(n, exact_second_moment(series.R, n)) for n in horizons]
    except ErgographError as e:
        row.errors.append(f"{e.code}: {e.message}")

    if row.errors:
        logger.warning(f"Truncation N={N} incomplete", extra={"errors": row.errors})
    return row


def truncation_study(
    spec: CountableChainSpec,
    N_grid: Sequence[int],
    V_rule: Rule = "pow2",
    h_rule: Rule = "indicator_last",
    C_rule: Sequence[int] = (0,),
    n_multipliers: Sequence[int] = (1, 2, 4),
    boundary: Optional[BoundaryPolicy] = None,
    max_workers: Optional[int] = None,
) -> TruncationStudy:
    """
    Truncate the family at every N in N_grid and collect delta_2, drift constants
    for V_rule with the fixed set C_rule, sum |R(k)| and E_pi[S_n^2] at n = k N

    The default V(x) = 2^x with C = {0} satisfies the drift condition for a
    birth-death family drifting to 0; V = 1 never does off C. Explicit vectors
    are cut to their first N entries.

    Rows may run in parallel; they are combined in N_grid order. A gap-collapse
    candidate is flagged when delta_2 decreases across N while the drift rate
    and constant stay bounded.
    """
    max_workers = get_settings().max_workers if max_workers is None else max_workers
    grid = sorted({int(N) for N in N_grid})

    def run(N: int) -> StudyRow:
        return study_row(spec, N, V_rule, h_rule, C_rule, n_multipliers, boundary)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(run, grid))
    else:
        rows = [run(N) for N in grid]

    trends = {
        "delta2": classify_series([r.delta2 for r in rows]),
        "drift_delta": classify_series([r.drift.delta if r.drift else None for r in rows]),
        "drift_b": classify_series([r.drift.b if r.drift else None for r in rows]),
        "variance": classify_series([r.ESn2[-1][1] if r.ESn2 else None for r in rows]),
    }
    collapse = (
        trends["delta2"] is SeriesTrend.DECREASING
        and trends["drift_delta"] is not SeriesTrend.DECREASING
        and trends["drift_b"] is not SeriesTrend.INCREASING
        and all(r.drift is not None and r.drift.valid for r in rows)
    )
    if collapse:
        logger.info("Gap-collapse candidate", extra={"family": spec.family_name})
    return TruncationStudy(
        family=spec.family_name, rows=rows, trends=trends, gap_collapse_candidate=collapse
    )
