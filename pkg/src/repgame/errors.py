"""Exception types shared across the package."""


class RepGameError(Exception):
    """Base class for all repgame errors."""


class ConstraintViolation(RepGameError):
    """A game parameter violates one of the model inequalities."""


class DegeneratePool(RepGameError):
    """The redistribution pool is empty (no recipients for the collected fees)."""


class NoValidEquilibrium(RepGameError):
    """Every closed-form mixed-equilibrium candidate lies outside the simplex.

    The rejected candidates are kept on ``candidates`` so callers can still
    inspect where they landed.
    """

    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class ParseError(RepGameError):
    """Config file could not be parsed; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(RepGameError):
    """Config parsed fine but a value is inconsistent; carries the key name."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
