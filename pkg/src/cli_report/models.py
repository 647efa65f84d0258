"""
Request and report models for the command-line front door
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src import __version__
from src.utils.exceptions import MissingOption, UnknownCommand

SCHEMA_VERSION = "1"


class Command(str, Enum):
    VALIDATE = "validate"
    STRUCTURE = "structure"
    SPECTRUM = "spectrum"
    GAP = "gap"
    DRIFT = "drift"
    SMALLSET = "smallset"
    CERTIFY = "certify"
    SYNTHESIZE = "synthesize"
    SIMULATE = "simulate"
    AUTOCORR = "autocorr"
    CLT = "clt"
    TRUNCATION_STUDY = "truncation-study"
    REPORT_ALL = "report-all"

    @classmethod
    def parse(cls, name: str) -> "Command":
        try:
            return cls(name)
        except ValueError as e:
            raise UnknownCommand(
                f"Unknown command {name!r}", known=[command.value for command in cls]
            ) from e


# Options a command cannot run without; everything else has a default.
REQUIRED_OPTIONS: Dict[Command, Dict[str, str]] = {
    Command.DRIFT: {"C": "--C"},
    Command.SMALLSET: {"C": "--C"},
    Command.SIMULATE: {"length": "--length"},
    Command.CLT: {"n_grid": "--n-grid"},
    Command.TRUNCATION_STUDY: {"N_grid": "--N-grid"},
}


class OutputFormat(str, Enum):
    JSON = "json"
    TEXT = "text"


class AnalysisRequest(BaseModel):
    """One CLI invocation: a command, a chain spec file and the flag map"""

    model_config = ConfigDict(frozen=True)

    command: Command
    input_path: Path
    options: Dict[str, Any] = Field(default_factory=dict)
    seed: int
    output: Optional[Path] = None
    csv: Optional[Path] = None
    format: OutputFormat = OutputFormat.JSON
    quiet: bool = False

    def option(self, name: str, default: Any = None) -> Any:
        value = self.options.get(name)
        return default if value is None else value

    def check_required(self) -> None:
        """
        Raises:
            MissingOption: If a flag the command needs was not given
        """
        for name, flag in REQUIRED_OPTIONS.get(self.command, {}).items():
            if self.options.get(name) is None:
                raise MissingOption(
                    f"Command {self.command.value!r} requires {flag}",
                    command=self.command.value,
                    option=flag,
                )


class Report(BaseModel):
    """Self-describing output of one command"""

    tool_version: str = __version__
    schema_version: str = SCHEMA_VERSION
    input_digest: str
    command: Command
    seed: int
    results: Dict[str, Any]
    warnings: List[str] = []
    timing: Dict[str, float] = {}
