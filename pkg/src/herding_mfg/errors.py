"""Exception types shared across the solver."""


class NotASimplexPoint(ValueError):
    """Weights do not describe a probability vector."""


class GameSchemaError(ValueError):
    """A game document failed validation; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class HerdingMassTooSmall(ValueError):
    """The declared herding action carries less than ``1 - alpha`` mass."""


class SolverError(Exception):
    """Base class for failures of the exact solver (CLI exit code 3)."""


class DegenerateGame(SolverError):
    """A support system has a solution set the solver refuses to approximate."""


class IllPosed(SolverError):
    """The influence design problem has a non-unique lower-level equilibrium."""


class EmptyHerdingSet(SolverError):
    """No action can host the herding population at any equilibrium."""


class UndefinedRatio(SolverError):
    """PoA/PoS requested for a game whose social optimum is zero."""
