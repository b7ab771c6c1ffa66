"""Exception hierarchy for lgrnav.

Every error derives from :class:`LgrError` and from the builtin that best
describes the condition, so callers may catch either.
"""


class LgrError(Exception):
    """Base class for all lgrnav errors."""


# world

class InvalidPoseError(LgrError, ValueError):
    """Pose lies outside the map or on an occupied cell."""


class InvalidDirectionError(LgrError, ValueError):
    """Direction index outside 0..7."""


class GridTooSmallError(LgrError, ValueError):
    """Grid cannot hold the requested number of rooms."""


class ScenarioFormatError(LgrError, ValueError):
    """Scenario document is malformed or violates a world invariant."""


# mapping

class SensorContradictionError(LgrError, RuntimeError):
    """An observation disagrees with an already known cell state."""


# ranking

class RankVectorError(LgrError, ValueError):
    """Ranks are not a permutation or do not match the weights."""


class NegativeDistanceError(LgrError, ValueError):
    """Distance weight requested for a negative distance."""


class EmptyFrontierListError(LgrError, RuntimeError):
    """Selection requested on an empty frontier list."""


# prompts

class ResponseParseError(LgrError, ValueError):
    """A model response does not follow the expected format.

    :param message: Human readable description.
    :param rule: Short name of the violated rule.
    """

    rule = "format"

    def __init__(self, message: str, rule: str | None = None) -> None:
        super().__init__(message)
        if rule is not None:
            self.rule = rule


class UnparseableResponseError(ResponseParseError):
    rule = "unparseable"


class UnknownCategoryError(ResponseParseError):
    rule = "unknown-category"


class NoRankingBlockError(ResponseParseError):
    rule = "no-ranking-block"


class DuplicateRankError(ResponseParseError):
    rule = "duplicate-rank"


class DuplicateStepError(ResponseParseError):
    rule = "duplicate-step"


class MissingStepError(ResponseParseError):
    rule = "missing-step"


class CountMismatchError(ResponseParseError):
    rule = "count-mismatch"


# rankers

class RankerError(LgrError, RuntimeError):
    """A ranking backend could not produce a ranking."""


class RankerTransportError(RankerError, ConnectionError):
    """The model endpoint could not be reached or answered with an error."""


class RankerParseFailure(RankerError):
    """The model kept answering in an unusable format after all retries.

    :param message: Human readable description.
    :param cause: The last parse error.
    """

    def __init__(self, message: str, cause: ResponseParseError | None = None) -> None:
        super().__init__(message)
        self.cause = cause


class TranscriptDivergenceError(RankerError):
    """A replayed request does not match the recorded exchange."""


class TranscriptExhaustedError(TranscriptDivergenceError):
    """The transcript has no more recorded exchanges."""


class EndpointConfigError(RankerError, ValueError):
    """The model endpoint is not configured."""


# planner

class PlanningError(LgrError, ValueError):
    """Invalid planning or execution request."""


# agent / eval

class EpisodeConfigError(LgrError, ValueError):
    """Episode configuration is inconsistent with the scenario."""


class BatchConfigError(LgrError, ValueError):
    """Batch configuration is malformed."""
