"""
Dispatch of CLI commands to the analysis modules
"""

import time
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.chain_core.chain import MarkovChain
from src.chain_core.loader import (
    boundary_from_spec,
    chain_from_spec,
    family_from_spec,
    read_spec_document,
)
from src.chain_core.structure import (
    ChainStructure,
    analyze_structure,
    stationary_from_eigenvector,
    stationary_power_iteration,
)
from src.cli_report.io import (
    load_vector_file,
    parse_int_list,
    parse_vector,
    to_jsonable,
    write_csv,
)
from src.cli_report.models import AnalysisRequest, Command, Report
from src.cli_report.report_all import report_all
from src.config.settings import get_settings
from src.ergodicity import (
    check_drift,
    equivalence_report,
    find_small_set,
    geometric_certificate,
    tv_profile,
    verify_drift,
    verify_minorization,
)
from src.lyapunov_synth import (
    kendall_theta,
    lyapunov_pipeline,
    synthesize_vh,
    taboo_radius,
)
from src.mc_lab import (
    autocorrelation_exact,
    estimate_vh,
    hitting_time_samples,
    partial_sum_diagnostics,
    simulate,
    truncation_study,
)
from src.measures_norms.functions import Distribution
from src.measures_norms.rules import is_observable_rule, is_weight_rule, named_observable
from src.spectral import (
    GapMethod,
    check_pole_structure,
    gap_l2,
    gap_l2_all,
    gap_lv,
    spectrum_report,
    verify_tv_bound,
)
from src.utils.exceptions import InputError
from src.utils.logger import get_logger
from src.utils.verdicts import CheckStatus

logger = get_logger(__name__)

# Paths longer than this are summarized by occupation counts only.
MAX_STORED_PATH = 100_000

Results = Tuple[Dict[str, Any], int]


class RunContext:
    """Lazily parsed chain, structure and vectors for one request"""

    def __init__(self, request: AnalysisRequest) -> None:
        self.request = request
        self.document, self.digest = read_spec_document(request.input_path)
        self.warnings: List[str] = []

    @cached_property
    def chain(self) -> MarkovChain:
        return chain_from_spec(self.document)

    @cached_property
    def structure(self) -> ChainStructure:
        return analyze_structure(self.chain)

    @cached_property
    def vectors(self) -> Optional[Dict[str, Any]]:
        path = self.request.option("vectors")
        if path is None:
            return None
        return load_vector_file(Path(path))

    def vector(self, kind: str) -> Optional[np.ndarray]:
        return parse_vector(self.request.option(kind), kind, self.chain.n, self.vectors)

    def weight(self) -> np.ndarray:
        V = self.vector("V")
        return np.ones(self.chain.n) if V is None else V

    def observable(self) -> np.ndarray:
        """--h, or the indicator of the last state centered under pi when pi exists"""
        h = self.vector("h")
        if h is not None:
            return h
        h = named_observable("indicator_last", self.chain.n)
        if self.structure.stationary is not None:
            h = h - float(np.dot(self.structure.stationary, h))
        return h

    def family_rule(self, kind: str, default: str) -> Union[str, np.ndarray]:
        """--V or --h for a truncation study: a rule name is resolved per N, a vector is cut"""
        text = self.request.option(kind)
        if text is not None:
            name = text.strip()
            rule = is_weight_rule(name) if kind == "V" else is_observable_rule(name)
            if rule:
                return name
        values = parse_vector(text, kind, 0, self.vectors)
        return default if values is None else values

    def states(self, name: str = "C") -> Optional[List[int]]:
        return parse_int_list(self.request.option(name), name)

    def start_distribution(self) -> Optional[Distribution]:
        mu = self.vector("mu")
        return None if mu is None else Distribution.of(mu)

    def csv(self, frame: pd.DataFrame) -> None:
        if self.request.csv is not None:
            write_csv(frame, self.request.csv)


def run_validate(ctx: RunContext) -> Results:
    chain = ctx.chain
    deviation = float(np.max(np.abs(chain.P.sum(axis=1) - 1.0)))
    return {
        "valid": True,
        "n_states": chain.n,
        "labels": chain.labels,
        "row_sum_max_deviation": deviation,
    }, 0


def run_structure(ctx: RunContext) -> Results:
    structure = ctx.structure
    results: Dict[str, Any] = {"structure": structure, "ergodic": structure.ergodic}
    if structure.stationary is not None:
        pi = np.asarray(structure.stationary)
        power = stationary_power_iteration(ctx.chain)
        eigen = stationary_from_eigenvector(ctx.chain)
        results["stationary_cross_check"] = {
            "power_iteration": power,
            "eigenvector": eigen,
            "max_difference": float(max(np.max(np.abs(pi - power)), np.max(np.abs(pi - eigen)))),
        }
    else:
        ctx.warnings.append("chain is reducible; no unique stationary law")
    return results, 0


def run_spectrum(ctx: RunContext) -> Results:
    report = spectrum_report(ctx.chain, ctx.vector("V"), structure=ctx.structure)
    verdict = check_pole_structure(report, ctx.structure, chain=ctx.chain)
    if report.gelfand_trace:
        ctx.csv(pd.DataFrame(report.gelfand_trace, columns=["n", "op_norm_v"]))
    failed = verdict.applicable and verdict.status is CheckStatus.FAIL
    return {"spectrum": report, "poles": verdict}, 2 if failed else 0


def run_gap(ctx: RunContext) -> Results:
    request = ctx.request
    method = request.option("method", GapMethod.EIGEN.value)
    n_max, tol = request.option("n_max"), request.option("tol")
    results: Dict[str, Any] = {"method": method}
    if method == "all":
        results["delta_2"] = gap_l2_all(ctx.chain, structure=ctx.structure)
    else:
        try:
            method = GapMethod(method)
        except ValueError as e:
            known = [m.value for m in GapMethod] + ["all"]
            raise InputError(f"Unknown gap method {method!r}", known=known) from e
        results["delta_2"] = gap_l2(ctx.chain, method, ctx.structure, n_max=n_max, tol=tol)
    V = ctx.vector("V")
    if V is not None:
        estimate = gap_lv(ctx.chain, V, structure=ctx.structure, n_max=n_max, tol=tol)
        results["delta_V"] = estimate.gap
        results["gelfand"] = estimate
        ctx.csv(pd.DataFrame(estimate.trace, columns=["n", "op_norm_v"]))
    if not ctx.structure.reversible:
        ctx.warnings.append("chain is not reversible; delta_2 by contraction is a diagnostic")
    return results, 0


def run_drift(ctx: RunContext) -> Results:
    request = ctx.request
    certificate = check_drift(
        ctx.chain,
        ctx.weight(),
        ctx.states() or [],
        delta=request.option("delta"),
        b=request.option("b"),
        tol=request.option("tol"),
    )
    reverified = verify_drift(ctx.chain, certificate)
    return {"certificate": certificate, "reverified": reverified}, 0 if certificate.valid else 2


def run_smallset(ctx: RunContext) -> Results:
    certificate = find_small_set(ctx.chain, ctx.states() or [], m_max=ctx.request.option("m_max"))
    return {
        "certificate": certificate,
        "reverified": verify_minorization(ctx.chain, certificate),
    }, 0


def run_certify(ctx: RunContext) -> Results:
    request = ctx.request
    V = ctx.weight()
    n_max = request.option("n_max", get_settings().certificate_n_max)
    certificate = geometric_certificate(ctx.chain, V, n_max=n_max, structure=ctx.structure)
    equivalence = equivalence_report(ctx.chain, V, structure=ctx.structure)
    results: Dict[str, Any] = {
        "geometric": certificate,
        "equivalence": equivalence,
        "tv_profile": tv_profile(ctx.chain, n_max, structure=ctx.structure),
    }
    mu = ctx.vector("mu")
    if mu is not None:
        if ctx.structure.reversible:
            results["tv_bound"] = verify_tv_bound(ctx.chain, mu, n_max, structure=ctx.structure)
        else:
            ctx.warnings.append("chain is not reversible; the TV bound for --mu is not checked")
    n = np.arange(len(certificate.per_n_lhs))
    ctx.csv(
        pd.DataFrame(
            {"n": n, "lhs": certificate.per_n_lhs, "bound": certificate.B * certificate.rho**n}
        )
    )
    return results, 2 if equivalence.consistent is False else 0


def run_synthesize(ctx: RunContext) -> Results:
    request = ctx.request
    h = ctx.observable()
    C = ctx.states()
    if C is None:
        result = lyapunov_pipeline(ctx.chain, h)
    else:
        theta = request.option("theta")
        if theta is None:
            theta = kendall_theta(taboo_radius(ctx.chain, C))
        result = synthesize_vh(
            ctx.chain, h, C, theta, tol=request.option("tol"), structure=ctx.structure
        )
    results: Dict[str, Any] = {"synthesis": result}

    count = request.option("count")
    if count is not None:
        starts = range(min(ctx.chain.n, 5))
        estimates = [
            estimate_vh(ctx.chain, h, result.C, result.theta, x, count, request.seed)
            for x in starts
        ]
        results["monte_carlo"] = estimates
        results["monte_carlo_within_3se"] = all(
            e.within(result.V_h[e.state]) for e in estimates
        )
    return results, 0


def run_simulate(ctx: RunContext) -> Results:
    request = ctx.request
    length = int(request.option("length"))
    mu = ctx.start_distribution()
    start = mu if mu is not None else int(request.option("start", 0))
    sample = simulate(
        ctx.chain, start, length, request.seed, store_path=length <= MAX_STORED_PATH
    )
    results: Dict[str, Any] = {"trajectory": sample}
    if sample.path is not None:
        ctx.csv(pd.DataFrame({"n": np.arange(len(sample.path)), "state": sample.path}))

    C = ctx.states()
    if C is not None:
        results["hitting"] = hitting_time_samples(
            ctx.chain,
            C,
            sample.start,
            int(request.option("count", 1000)),
            request.seed,
            theta=request.option("theta"),
        )
    return results, 0


def run_autocorr(ctx: RunContext) -> Results:
    series = autocorrelation_exact(
        ctx.chain, ctx.observable(), n_max=ctx.request.option("n_max"), structure=ctx.structure
    )
    ctx.csv(
        pd.DataFrame(
            {"n": np.arange(len(series.R)), "R": series.R, "cs_bound": series.cs_bound}
        )
    )
    return {"autocorrelation": series, "bound_slack": series.bound_slack}, 0


def run_clt(ctx: RunContext) -> Results:
    request = ctx.request
    diagnostics = partial_sum_diagnostics(
        ctx.chain,
        ctx.observable(),
        parse_int_list(request.option("n_grid"), "n_grid") or [],
        replicates=request.option("replicates"),
        seed=request.seed,
        start=ctx.start_distribution(),
        structure=ctx.structure,
    )
    ctx.csv(
        pd.DataFrame(
            {
                "n": diagnostics.n_grid,
                "exact_second_moment": diagnostics.exact_second_moment,
                "mc_mean_square": diagnostics.mc_mean_square,
                "mc_standard_error": diagnostics.mc_standard_error,
                "ks_vs_normal": diagnostics.ks_vs_normal,
            }
        )
    )
    return {"clt": diagnostics}, 0


def run_truncation_study(ctx: RunContext) -> Results:
    request = ctx.request
    spec = family_from_spec(ctx.document)
    study = truncation_study(
        spec,
        parse_int_list(request.option("N_grid"), "N_grid") or [],
        V_rule=ctx.family_rule("V", "pow2"),
        h_rule=ctx.family_rule("h", "indicator_last"),
        C_rule=ctx.states() or [0],
        boundary=boundary_from_spec(ctx.document),
    )
    ctx.csv(study.curves())
    for row in study.rows:
        ctx.warnings.extend(f"N={row.N}: {error}" for error in row.errors)
    return {"study": study}, 0


def run_report_all(ctx: RunContext) -> Results:
    return report_all(
        ctx.chain,
        ctx.structure,
        V=ctx.weight(),
        h=ctx.observable(),
        seed=ctx.request.seed,
        replicates=ctx.request.option("replicates"),
        n_max=ctx.request.option("n_max"),
        warnings=ctx.warnings,
    )


HANDLERS: Dict[Command, Callable[[RunContext], Results]] = {
    Command.VALIDATE: run_validate,
    Command.STRUCTURE: run_structure,
    Command.SPECTRUM: run_spectrum,
    Command.GAP: run_gap,
    Command.DRIFT: run_drift,
    Command.SMALLSET: run_smallset,
    Command.CERTIFY: run_certify,
    Command.SYNTHESIZE: run_synthesize,
    Command.SIMULATE: run_simulate,
    Command.AUTOCORR: run_autocorr,
    Command.CLT: run_clt,
    Command.TRUNCATION_STUDY: run_truncation_study,
    Command.REPORT_ALL: run_report_all,
}


def run(request: AnalysisRequest) -> Tuple[Report, int]:
    """
    Execute one request

    Returns:
        The report and the exit code (0 success, 2 failed verdict)

    Raises:
        ErgographError: Input errors and verdict errors raised by the analysis
    """
    request.check_required()
    ctx = RunContext(request)
    started = time.perf_counter()
    results, exit_code = HANDLERS[request.command](ctx)
    elapsed = time.perf_counter() - started

    logger.info(
        f"Command {request.command.value} finished",
        extra={"exit_code": exit_code, "seconds": elapsed},
    )
    report = Report(
        input_digest=ctx.digest,
        command=request.command,
        seed=request.seed,
        results=to_jsonable(results),
        warnings=ctx.warnings,
        timing={"seconds": elapsed},
    )
    return report, exit_code
