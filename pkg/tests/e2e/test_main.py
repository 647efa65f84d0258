"""
End-to-end tests running main.py as a separate process
"""

import json
import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


def run_main(*argv: str, env_seed: str = "") -> subprocess.CompletedProcess:
    env = {"PATH": "", "PYTHONPATH": str(ROOT)}
    if env_seed:
        env["ERGOGRAPH_SEED"] = env_seed
    return subprocess.run(
        [sys.executable, str(ROOT / "main.py"), *argv],
        capture_output=True,
        text=True,
        cwd=ROOT,
        env=env,
        timeout=600,
    )


def test_validate_process(chains_dir):  # type: ignore
    """Test a clean exit and a parseable report on standard output"""
    result = run_main("validate", "--input", str(chains_dir / "three_cycle.json"))

    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["results"]["n_states"] == 3
    assert report["results"]["labels"] == ["a", "b", "c"]
    assert result.stderr == ""


def test_unknown_command_process(chains_dir):  # type: ignore
    result = run_main("nope", "--input", str(chains_dir / "two_state.json"))

    assert result.returncode == 1
    assert result.stdout == ""
    assert json.loads(result.stderr.strip())["error"] == "UnknownCommand"


@pytest.mark.slow
def test_report_all_reproducible_across_processes(chains_dir, tmp_path):  # type: ignore
    """Test that separate processes with one seed write identical results"""
    outputs = []
    for name in ("first.json", "second.json"):
        path = tmp_path / name
        result = run_main(
            "report-all",
            "--input",
            str(chains_dir / "two_state.json"),
            "--replicates",
            "200",
            "--output",
            str(path),
            "--quiet",
            env_seed="123",
        )
        assert result.returncode == 0
        outputs.append(json.loads(path.read_text()))

    assert outputs[0]["results"] == outputs[1]["results"]
    assert outputs[0]["seed"] == 123
