from .base import Ranker, RankerRequest, RankerResponse
from .llm import EndpointConfig, LlmRanker, RateLimiter, llm_rank
from .oracle import OracleRanker, oracle_classify, rank_rooms
from .prior import CoOccurrencePrior, default_prior
from .replay import RecordingRanker, ReplayRanker

__all__ = [
    "Ranker",
    "RankerRequest",
    "RankerResponse",
    "EndpointConfig",
    "LlmRanker",
    "RateLimiter",
    "llm_rank",
    "OracleRanker",
    "oracle_classify",
    "rank_rooms",
    "CoOccurrencePrior",
    "default_prior",
    "RecordingRanker",
    "ReplayRanker",
]
