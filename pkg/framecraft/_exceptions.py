from typing import Optional, Tuple


class FramecraftError(Exception):
    """Mixin for every error raised by framecraft itself."""


class InvalidSystemError(FramecraftError, ValueError):
    pass


class NotTotalError(FramecraftError, ValueError):
    def __init__(self, message: str, lower_bound: float):
        super().__init__(message)
        self.lower_bound = lower_bound


class NumericalFailureError(FramecraftError, ArithmeticError):
    def __init__(self, message: str, iterations: int):
        super().__init__(message)
        self.iterations = iterations


class GroupValidationError(FramecraftError, ValueError):
    """Raised when a table, action or subset violates a group axiom.

    Parameters
    ----------
    message: str
        Human readable diagnostic.
    axiom: str
        Name of the violated axiom, e.g. ``"associativity"``.
    witness: tuple(int)
        Element indices exhibiting the violation.
    """

    def __init__(self, message: str, axiom: str, witness: Tuple[int, ...] = ()):
        super().__init__(message)
        self.axiom = axiom
        self.witness = tuple(int(w) for w in witness)


class CocycleError(FramecraftError, ValueError):
    pass


class DomainError(FramecraftError, ValueError):
    pass


class RepresentationError(FramecraftError, ValueError):
    pass


class SpecError(FramecraftError, ValueError):
    """Invalid external input. `pointer` is a JSON pointer into the offending document."""

    def __init__(self, message: str, pointer: Optional[str] = ""):
        location = pointer if pointer else "/"
        super().__init__(f"{message} (at {location})")
        self.pointer = pointer
