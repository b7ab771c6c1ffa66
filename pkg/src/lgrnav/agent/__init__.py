from .config import Budget, EpisodeConfig
from .episode import DecisionRecord, EpisodeResult, EpisodeRunner, fallback_ranks, optimal_length, run_episode

__all__ = [
    "Budget",
    "EpisodeConfig",
    "DecisionRecord",
    "EpisodeResult",
    "EpisodeRunner",
    "fallback_ranks",
    "optimal_length",
    "run_episode",
]
