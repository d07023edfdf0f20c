"""Exception hierarchy for the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class UserInputError(EngineError):
    """Bad input data: malformed files, invalid algebras, incompatible requests.

    Carries an optional machine readable payload for CLI diagnostics.
    """

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail if detail is not None else {}


class ModulusMismatchError(EngineError):
    """Objects with different coefficient moduli were combined."""


class BudgetExceededError(UserInputError):
    """An exhaustive enumeration would exceed the configured budget."""


class InternalInvariantError(EngineError):
    """An internal consistency check failed; indicates a bug, not user error."""
