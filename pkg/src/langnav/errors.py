"""Exception taxonomy shared across the package."""


class LangNavError(Exception):
    """Base class for all langnav errors."""


class EmptyInputError(LangNavError):
    """Raised when text input is empty after trimming."""


class NoPhrasesError(LangNavError):
    """Raised when phrase splitting yields no phrases."""


class GroundingError(LangNavError):
    """Base class for grounding failures."""


class UnknownWordError(GroundingError):
    """Raised when a word has no lexicon entry."""


class NoNounError(GroundingError):
    """Raised when noun extraction finds no content noun."""


class NoMatchError(GroundingError):
    """Raised when the best grounding score does not clear the threshold."""


class EmptyMapError(GroundingError):
    """Raised when goal grounding runs against a map with no named locations."""


class MapFormatError(LangNavError):
    """Raised when a map file cannot be parsed."""


class MapValidationError(LangNavError):
    """Raised when a parsed map violates its invariants."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid map: " + "; ".join(self.problems))


class ModelFormatError(LangNavError):
    """Raised when a model checkpoint cannot be parsed."""


class PlanningError(LangNavError):
    """Base class for planning failures."""


class InvalidEndpointError(PlanningError):
    """Raised when a planning endpoint is not on a traversable cell."""


class PlanningFailureError(PlanningError):
    """Raised when the sampling planner exhausts its iteration budget."""


class NoPathError(PlanningError):
    """Raised when grid search cannot connect start and goal."""


class DivergenceError(LangNavError):
    """Raised when the training loss becomes non-finite."""


class UnknownAssetError(LangNavError):
    """Raised when a session references an asset that does not exist."""


class UnknownSessionError(LangNavError):
    """Raised when a request references a session id that does not exist."""


class InvalidConfigError(LangNavError):
    """Raised when configuration overrides fail validation."""
