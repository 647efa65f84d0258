"""
Unit tests for eigenvalues, spectral gaps and the rate verifiers
"""

import math

import numpy as np
import pytest

from src.chain_core.chain import validate_chain
from src.chain_core.structure import analyze_structure
from src.measures_norms import deviation_kernel, op_norm_l2, op_norm_v
from src.spectral import (
    GapMethod,
    check_pole_structure,
    eigen_spectrum,
    gap_l2,
    gap_l2_all,
    gap_lv,
    gelfand_limit,
    l2_decay_profile,
    spectrum_report,
    verify_tv_bound,
    verify_uniform_rate,
)
from src.utils.exceptions import GelfandNotConverged, NotApplicable, NotReversible
from src.utils.verdicts import CheckStatus

THREE_CYCLE_GAP = 1.0 - math.sqrt(0.73)


def test_eigen_spectrum_two_state(two_state):  # type: ignore
    """Test that TwoState(0.3, 0.2) has eigenvalues 1 and 0.5"""
    report = eigen_spectrum(two_state)

    np.testing.assert_allclose(report.values, [1.0, 0.5], atol=1e-12)
    assert report.unit_eigenvalue_multiplicity == 1
    assert report.delta_eig == pytest.approx(0.5)


def test_eigen_spectrum_three_cycle(three_cycle):  # type: ignore
    """Test the circulant eigenvalues 0.1 + 0.9 w"""
    report = eigen_spectrum(three_cycle)

    assert report.eigenvalues[0].modulus == pytest.approx(1.0)
    assert report.second_modulus == pytest.approx(math.sqrt(0.73), abs=1e-12)
    assert report.eigenvalues[1].im == pytest.approx(-report.eigenvalues[2].im)


def test_eigen_spectrum_flip(flip):  # type: ignore
    report = eigen_spectrum(flip)

    np.testing.assert_allclose(sorted(report.values.real), [-1.0, 1.0], atol=1e-12)
    assert report.delta_eig == 0.0


def test_pole_structure_pass(two_state):  # type: ignore
    """Test a clear boundary and a simple unit pole"""
    verdict = check_pole_structure(
        eigen_spectrum(two_state), analyze_structure(two_state), chain=two_state
    )

    assert verdict.status is CheckStatus.PASS
    assert verdict.applicable
    assert verdict.boundary_clear
    assert verdict.unit_pole_simple


def test_pole_structure_periodic(flip):  # type: ignore
    """Test that -1 is the offender and matches period 2"""
    verdict = check_pole_structure(eigen_spectrum(flip), analyze_structure(flip), chain=flip)

    assert verdict.status is CheckStatus.FAIL
    assert not verdict.applicable
    assert [o.re for o in verdict.offenders] == [pytest.approx(-1.0)]
    assert verdict.consistent_with_period


def test_pole_structure_single_state():
    chain = validate_chain([[1.0]])

    verdict = check_pole_structure(eigen_spectrum(chain), analyze_structure(chain), chain=chain)

    assert verdict.status is CheckStatus.PASS
    assert verdict.unit_eigenvalue_multiplicity == 1


def test_pole_structure_reducible(reducible):  # type: ignore
    """Test that a repeated unit eigenvalue fails but is not applicable"""
    verdict = check_pole_structure(
        eigen_spectrum(reducible), analyze_structure(reducible), chain=reducible
    )

    assert verdict.status is CheckStatus.FAIL
    assert not verdict.applicable
    assert verdict.unit_eigenvalue_multiplicity == 2
    assert verdict.unit_pole_semisimple
    assert not verdict.unit_pole_simple


@pytest.mark.parametrize("method", list(GapMethod))
def test_gap_l2_two_state(two_state, method):  # type: ignore
    """Test that every characterization gives 0.5 on a reversible chain"""
    assert gap_l2(two_state, method) == pytest.approx(0.5, abs=1e-9)


def test_gap_l2_rank_one():
    """Test that P = 1 (x) pi has the full gap"""
    chain = validate_chain([[0.5, 0.5], [0.5, 0.5]])

    assert gap_l2(chain, GapMethod.EIGEN) == pytest.approx(1.0)
    assert gap_l2(chain, GapMethod.GELFAND) == 1.0


def test_gap_l2_three_cycle(three_cycle):  # type: ignore
    """Test the eigen gap, with contraction only a lower bound off reversibility"""
    gaps = gap_l2_all(three_cycle)

    assert gaps["eigen"] == pytest.approx(THREE_CYCLE_GAP, abs=1e-9)
    assert abs(gaps["gelfand"] - THREE_CYCLE_GAP) <= 1e-3
    assert gaps["contraction"] <= gaps["eigen"] + 1e-12


def test_gap_l2_periodic(flip):  # type: ignore
    """Test that the gap is not defined for a periodic chain"""
    with pytest.raises(NotApplicable) as excinfo:
        gap_l2(flip)

    assert excinfo.value.context["period"] == 2


def test_gap_lv_two_state(two_state):  # type: ignore
    """Test g(1) = 0.6 and delta_V = 0.5 for V = 1"""
    estimate = gap_lv(two_state, [1.0, 1.0])

    assert estimate.trace[0] == (1, pytest.approx(0.6))
    assert estimate.gap == pytest.approx(0.5, abs=1e-9)
    assert estimate.converged


def test_gap_lv_norm_independence(three_cycle):  # type: ignore
    """Test that delta_V matches 1 - |lambda_2| for different weights"""
    for V in ([1.0, 1.0, 1.0], [1.0, 5.0, 2.0]):
        assert abs(gap_lv(three_cycle, V).gap - THREE_CYCLE_GAP) <= 1e-3


def test_gap_lv_rank_one():
    chain = validate_chain([[0.5, 0.5], [0.5, 0.5]])

    estimate = gap_lv(chain, [1.0, 3.0])

    assert estimate.gap == 1.0
    assert estimate.exact_zero


def _max_row_sum(M: np.ndarray) -> float:
    return float(np.abs(M).sum(axis=1).max())


def test_gelfand_not_converged():
    """Test that a Jordan block with too few powers is reported"""
    Q = np.array([[0.9, 1.0], [0.0, 0.9]])

    with pytest.raises(GelfandNotConverged):
        gelfand_limit(Q, _max_row_sum, n_max=8, tol=1e-6)

    estimate = gelfand_limit(Q, _max_row_sum, n_max=8, strict=False)
    assert not estimate.converged


def test_spectrum_report_fills_gaps(two_state):  # type: ignore
    report = spectrum_report(two_state)

    assert report.delta_2["eigen"] == pytest.approx(0.5)
    assert report.delta_V == pytest.approx(0.5, abs=1e-9)
    assert report.gelfand_trace


def test_spectrum_report_periodic_has_no_gaps(flip):  # type: ignore
    report = spectrum_report(flip)

    assert report.delta_2 is None
    assert report.delta_V is None


def test_tv_bound_two_state(two_state):  # type: ignore
    """Test lhs = 0.3 <= rhs = 0.306186 at n = 1 from delta_0"""
    report = verify_tv_bound(two_state, [1.0, 0.0], n_max=200)

    first = report.points[0]
    assert first.lhs == pytest.approx(0.3)
    assert first.rhs == pytest.approx(0.5 * math.sqrt(1.5) * 0.5, abs=1e-6)
    assert report.all_ok
    assert report.violations == []


@pytest.mark.parametrize("seed", range(20))
def test_tv_bound_random_reversible(random_chain, seed):  # type: ignore
    """Test zero violations for n = 1..200 from five random starts"""
    n = 3 + seed % 6
    chain = random_chain(n, seed, reversible=True)
    rng = np.random.default_rng(100 + seed)
    for _ in range(5):
        mu = rng.random(n)
        report = verify_tv_bound(chain, mu / mu.sum(), n_max=200)
        assert len(report.points) == 200
        assert report.all_ok


def test_tv_bound_not_reversible(three_cycle):  # type: ignore
    with pytest.raises(NotReversible):
        verify_tv_bound(three_cycle, [1.0, 0.0, 0.0], n_max=5)


def test_uniform_rate_two_state(two_state):  # type: ignore
    """Test (1/n) log G(n) against log 0.5"""
    report = verify_uniform_rate(two_state, [1.0, 1.0], n_max=256)

    assert report.limit == pytest.approx(math.log(0.5))
    assert report.deviation <= 0.01
    assert report.pointwise_max_deviation <= 0.01


def test_uniform_rate_three_cycle(three_cycle):  # type: ignore
    report = verify_uniform_rate(three_cycle, [1.0, 1.0, 1.0], n_max=2048)

    assert report.deviation <= 0.02


def test_uniform_rate_rank_one():
    """Test that G(n) = 0 is flagged as the exact rank-one case"""
    chain = validate_chain([[0.5, 0.5], [0.5, 0.5]])

    report = verify_uniform_rate(chain, [1.0, 1.0], n_max=16)

    assert report.exact_rank_one
    assert all(point.rate == -math.inf for point in report.points)
    assert report.deviation == 0.0


def test_uniform_rate_every_n(three_cycle):  # type: ignore
    """Test that each n = 1..12 is reported with rate log G(n) / n"""
    V = np.array([1.0, 2.0, 4.0])
    Q = deviation_kernel(three_cycle, analyze_structure(three_cycle).require_stationary()).Q

    report = verify_uniform_rate(three_cycle, V, n_max=12)

    assert [point.n for point in report.points] == list(range(1, 13))
    for point in report.points:
        G = op_norm_v(np.linalg.matrix_power(Q, point.n), V)
        assert point.rate == pytest.approx(math.log(G) / point.n, abs=1e-12)


def test_l2_decay_profile(two_state):  # type: ignore
    """Test that the L2 norms decay like b 0.5^n"""
    profile = l2_decay_profile(two_state, n_max=20)

    assert profile.delta_2 == pytest.approx(0.5)
    for n, norm in enumerate(profile.norms, start=1):
        assert norm <= profile.b * 0.5**n * (1 + 1e-9)
    assert profile.norms[0] == pytest.approx(0.5)


@pytest.mark.parametrize("seed", range(50))
def test_random_chain_spectrum(random_chain, seed):  # type: ignore
    """Test the gap, pole and norm-root invariants on random chains up to 50 states"""
    n = 2 + (7 * seed) % 49
    reversible = seed % 2 == 1
    chain = random_chain(n, seed, reversible=reversible)
    structure = analyze_structure(chain)
    pi = structure.require_stationary()
    report = eigen_spectrum(chain)
    second = report.second_modulus
    weight = 1.0 + 9.0 * np.random.default_rng(seed).random(n)

    assert report.unit_eigenvalue_multiplicity == 1
    assert all(eigenvalue.modulus <= 1.0 + 1e-9 for eigenvalue in report.eigenvalues)
    assert check_pole_structure(report, structure, chain=chain).status is CheckStatus.PASS
    for V in (np.ones(n), weight):
        assert abs(gap_lv(chain, V, structure=structure).gap - (1.0 - second)) <= 1e-3
    if reversible:
        eigen = gap_l2(chain, GapMethod.EIGEN, structure=structure)
        contraction = gap_l2(chain, GapMethod.CONTRACTION, structure=structure)
        assert eigen == pytest.approx(contraction, abs=1e-8)

    Q = deviation_kernel(chain, pi).Q
    for k in range(1, 7):
        power = np.linalg.matrix_power(Q, k)
        assert op_norm_v(power, weight) ** (1.0 / k) >= second - 1e-10
        assert op_norm_l2(power, pi) ** (1.0 / k) >= second - 1e-10
