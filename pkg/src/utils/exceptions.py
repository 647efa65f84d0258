"""
Exception hierarchy shared by every analysis module

Input problems exit the CLI with code 1, failed verdicts with code 2.
"""

from typing import Any, Dict


class ErgographError(Exception):
    """Base class for all toolkit errors"""

    exit_code: int = 1

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used on the diagnostic stream"""
        return {"error": self.code, "message": self.message, **self.context}


class InputError(ErgographError):
    """Malformed input or misuse"""

    exit_code = 1


class VerdictError(ErgographError):
    """A requested property or certificate does not hold"""

    exit_code = 2


# Input errors


class ParseError(InputError):
    pass


class UnknownCommand(InputError):
    pass


class MissingOption(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class BadWeight(InputError):
    pass


class NotSquare(InputError):
    pass


class NonStochasticRow(InputError):
    pass


class NegativeEntry(InputError):
    pass


class DuplicateLabel(InputError):
    pass


class EmptyRow(InputError):
    pass


class UnknownFamily(InputError):
    pass


# Verdict errors


class Reducible(VerdictError):
    pass


class NotApplicable(VerdictError):
    pass


class NotReversible(VerdictError):
    pass


class NotStationary(VerdictError):
    pass


class DegenerateStationary(VerdictError):
    pass


class GapZero(VerdictError):
    pass


class GelfandNotConverged(VerdictError):
    pass


class EigenNoConvergence(VerdictError):
    pass


class DriftFails(VerdictError):
    pass


class NotSmallWithinHorizon(VerdictError):
    pass


class AbsorbingComplement(VerdictError):
    pass


class ThetaTooLarge(VerdictError):
    pass


class SingularSystem(VerdictError):
    pass


class LadderExhausted(VerdictError):
    pass


class DriftVerificationFailed(VerdictError):
    pass


class HorizonExceeded(VerdictError):
    pass
