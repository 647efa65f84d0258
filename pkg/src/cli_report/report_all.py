"""
One-shot run of every check on a chain, summarized as a PASS / FAIL / N-A table
"""

import math
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from src.chain_core.chain import MarkovChain
from src.chain_core.structure import ChainStructure
from src.config.settings import get_settings
from src.ergodicity import equivalence_report
from src.lyapunov_synth import lyapunov_pipeline
from src.mc_lab import VarianceTrend, autocorrelation_exact, partial_sum_diagnostics
from src.spectral import (
    check_pole_structure,
    gap_l2_all,
    spectrum_report,
    verify_tv_bound,
    verify_uniform_rate,
)
from src.utils.exceptions import ErgographError, NotApplicable, NotReversible
from src.utils.logger import get_logger
from src.utils.verdicts import CheckStatus

logger = get_logger(__name__)

DEFAULT_N_GRID = [16, 32, 64, 128]
TV_BOUND_N_MAX = 200
UNIFORM_RATE_TOL = 0.02
CONTRACTION_AGREEMENT = 1e-8
BOUND_SLACK = 1e-12

Outcome = Tuple[CheckStatus, Optional[str]]


class CheckRow(BaseModel):
    name: str
    status: CheckStatus
    statement: str
    detail: Optional[str] = None


class _Table:
    """Check rows plus the stage payloads they were computed from"""

    def __init__(self, warnings: List[str]) -> None:
        self.rows: List[CheckRow] = []
        self.results: Dict[str, Any] = {}
        self.warnings = warnings

    def skip(self, name: str, statement: str, detail: str) -> None:
        self.rows.append(
            CheckRow(
                name=name,
                status=CheckStatus.NOT_APPLICABLE,
                statement=statement,
                detail=detail,
            )
        )

    def check(self, name: str, statement: str, stage: Callable[[], Outcome]) -> None:
        """Run one stage; a raised toolkit error becomes a FAIL (or N-A) row"""
        try:
            status, detail = stage()
        except (NotApplicable, NotReversible) as e:
            status, detail = CheckStatus.NOT_APPLICABLE, f"{e.code}: {e.message}"
        except ErgographError as e:
            status, detail = CheckStatus.FAIL, f"{e.code}: {e.message}"
            self.warnings.append(f"{name}: {detail}")
            logger.warning(f"Stage {name} failed: {e.message}", extra={"error": e.code})
        self.rows.append(CheckRow(name=name, status=status, statement=statement, detail=detail))


def _status(ok: bool) -> CheckStatus:
    return CheckStatus.PASS if ok else CheckStatus.FAIL


STATEMENTS = {
    "chain_structure": "the chain is irreducible and aperiodic",
    "pole_structure": "1 is a simple eigenvalue and no other eigenvalue lies on the unit circle",
    "l2_gap_methods_agree": "delta_2 agrees across eigenvalues, contraction and Gelfand powers",
    "weighted_gap_matches_spectrum": "delta_V equals one minus the second eigenvalue modulus",
    "drift_iff_weighted_gap": "a drift condition holds exactly when delta_V > 0",
    "reversible_geometric_iff_l2_gap": (
        "for a reversible chain, geometric ergodicity holds exactly when delta_2 > 0"
    ),
    "tv_bound_l2": "||mu P^n - pi||_TV <= (1/2) ||mu/pi - 1||_2 (1 - delta_2)^n",
    "uniform_rate": "(1/n) log |||P^n - 1 pi|||_V tends to log(1 - delta_V)",
    "lyapunov_synthesis": "V_h dominates 1 + |h|, satisfies drift and has finite pi(V_h)",
    "autocorrelation_bound": "|R(n)| <= sqrt(pi(h^2) pi((P^n h)^2)) for every n",
    "partial_sum_variance": "E_pi[S_n^2] stays bounded by sum |R(k)|",
}


def report_all(
    chain: MarkovChain,
    structure: ChainStructure,
    V: np.ndarray,
    h: np.ndarray,
    seed: int,
    replicates: Optional[int] = None,
    n_max: Optional[int] = None,
    warnings: Optional[List[str]] = None,
) -> Tuple[Dict[str, Any], int]:
    """
    Structure, spectrum, gaps, equivalences, Lyapunov synthesis and partial-sum
    diagnostics in one pass

    Every check is recorded as a row; a failed precondition marks later rows N-A.

    Returns:
        The results object with its "checks" table, and exit code 2 if any row fails
    """
    settings = get_settings()
    table = _Table([] if warnings is None else warnings)
    results = table.results
    results["structure"] = structure

    table.check(
        "chain_structure",
        STATEMENTS["chain_structure"],
        lambda: (
            _status(structure.ergodic),
            None if structure.ergodic else "precondition failed; later checks not applicable",
        ),
    )

    spectrum = spectrum_report(chain, V, structure=structure)
    results["spectrum"] = spectrum

    def poles() -> Outcome:
        verdict = check_pole_structure(spectrum, structure, chain=chain)
        results["poles"] = verdict
        if not verdict.applicable:
            return CheckStatus.NOT_APPLICABLE, verdict.message
        return verdict.status, verdict.message or None

    table.check("pole_structure", STATEMENTS["pole_structure"], poles)

    downstream = [name for name in STATEMENTS if name not in ("chain_structure", "pole_structure")]
    if not structure.ergodic:
        for name in downstream:
            table.skip(name, STATEMENTS[name], "chain is not irreducible and aperiodic")
        return _finish(table)

    def l2_methods() -> Outcome:
        gaps = gap_l2_all(chain, structure)
        results["delta_2"] = gaps
        eigen = gaps["eigen"]
        if "gelfand" not in gaps:
            return CheckStatus.FAIL, "Gelfand estimate unavailable"
        spread = abs(gaps["gelfand"] - eigen)
        ok = spread <= settings.gelfand_tol
        if structure.reversible:
            ok = ok and abs(gaps.get("contraction", math.inf) - eigen) <= CONTRACTION_AGREEMENT
        return _status(ok), f"eigen={eigen:.10g} gelfand={gaps['gelfand']:.10g}"

    table.check("l2_gap_methods_agree", STATEMENTS["l2_gap_methods_agree"], l2_methods)

    def weighted_gap() -> Outcome:
        if spectrum.delta_V is None:
            return CheckStatus.FAIL, "delta_V unavailable"
        spread = abs(spectrum.delta_V - spectrum.delta_eig)
        return _status(spread <= settings.gelfand_tol), f"|delta_V - delta_eig| = {spread:.3g}"

    table.check(
        "weighted_gap_matches_spectrum", STATEMENTS["weighted_gap_matches_spectrum"], weighted_gap
    )

    equivalence = equivalence_report(chain, V, structure=structure)
    results["equivalence"] = equivalence
    table.check(
        "drift_iff_weighted_gap",
        STATEMENTS["drift_iff_weighted_gap"],
        lambda: (equivalence.checks["drift_iff_weighted_gap"], None),
    )
    table.check(
        "reversible_geometric_iff_l2_gap",
        STATEMENTS["reversible_geometric_iff_l2_gap"],
        lambda: (equivalence.checks["reversible_ge_iff_l2_gap"], None),
    )

    def tv_bound() -> Outcome:
        mu = np.eye(chain.n)[0]
        report = verify_tv_bound(chain, mu, n_max or TV_BOUND_N_MAX, structure=structure)
        results["tv_bound"] = report
        return _status(report.all_ok), f"{len(report.violations)} violations"

    if structure.reversible:
        table.check("tv_bound_l2", STATEMENTS["tv_bound_l2"], tv_bound)
    else:
        table.skip("tv_bound_l2", STATEMENTS["tv_bound_l2"], "chain is not reversible")

    def uniform_rate() -> Outcome:
        report = verify_uniform_rate(chain, V, structure=structure)
        results["uniform_rate"] = report
        ok = report.exact_rank_one or report.deviation <= UNIFORM_RATE_TOL
        return _status(ok), f"deviation {report.deviation:.3g}"

    table.check("uniform_rate", STATEMENTS["uniform_rate"], uniform_rate)

    def synthesis() -> Outcome:
        result = lyapunov_pipeline(chain, h)
        results["synthesis"] = result
        finite = result.pi_integral is not None and math.isfinite(result.pi_integral)
        bound = result.cauchy_schwarz is None or result.cauchy_schwarz.holds
        ok = result.drift.valid and result.domination <= 1.0 + 1e-12 and finite and bound
        return _status(ok), f"C={result.C} theta={result.theta:.6g} b0={result.b0:.6g}"

    table.check("lyapunov_synthesis", STATEMENTS["lyapunov_synthesis"], synthesis)

    def autocorrelation() -> Outcome:
        series = autocorrelation_exact(chain, h, n_max=n_max, structure=structure)
        results["autocorrelation"] = series
        slack = series.bound_slack
        return _status(slack <= BOUND_SLACK), f"largest slack {slack:.3g}"

    table.check("autocorrelation_bound", STATEMENTS["autocorrelation_bound"], autocorrelation)

    def partial_sums() -> Outcome:
        diagnostics = partial_sum_diagnostics(
            chain, h, DEFAULT_N_GRID, replicates=replicates, seed=seed, structure=structure
        )
        results["clt"] = diagnostics
        bounded = diagnostics.variance_trend is VarianceTrend.BOUNDED
        within = max(diagnostics.exact_second_moment) <= diagnostics.sum_abs_R + 1e-9
        return _status(bounded and within), f"trend {diagnostics.variance_trend.value}"

    table.check("partial_sum_variance", STATEMENTS["partial_sum_variance"], partial_sums)
    return _finish(table)


def _finish(table: _Table) -> Tuple[Dict[str, Any], int]:
    table.results["checks"] = table.rows
    failed = [row.name for row in table.rows if row.status is CheckStatus.FAIL]
    if failed:
        logger.warning("Some checks failed", extra={"failed": failed})
    return table.results, 2 if failed else 0
