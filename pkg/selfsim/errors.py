from typing import List, Optional


class SelfSimError(ValueError):
    """Base error; `code` is the stable identifier reported by the CLI."""

    code = "ERROR"

    def __init__(self, message: str, defects: Optional[List[str]] = None):
        super().__init__(message)
        self.defects = list(defects or [])


class InputError(SelfSimError):
    code = "INPUT"


class DomainMismatch(SelfSimError):
    code = "DOMAIN_MISMATCH"


class LengthMismatch(SelfSimError):
    code = "LENGTH_MISMATCH"


class InvalidPair(SelfSimError):
    code = "INVALID_PAIR"


class PreconditionFailed(SelfSimError):
    code = "PRECONDITION"


class ZeroRow(SelfSimError):
    code = "ZERO_ROW"


class SpecInvalid(SelfSimError):
    code = "SPEC_INVALID"


class NotGroupBundle(SelfSimError):
    code = "NOT_GROUP_BUNDLE"


class Degenerate(SelfSimError):
    code = "DEGENERATE"


# Exit status 2 (input validation) rather than 1.
VALIDATION_ERRORS = (InputError, InvalidPair, SpecInvalid)
