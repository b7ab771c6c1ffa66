from .scores import RankVector, ScoreVector, WeightConfig, distance_weight, fuse, reciprocal_rank_scores
from .assignment import accumulate, cumulative_scores, direction_scores, full_list_ranks, full_list_scores
from .selection import SelectionPolicy, select_frontier

__all__ = ["RankVector", "ScoreVector", "WeightConfig", "distance_weight", "fuse", "reciprocal_rank_scores",
           "accumulate", "cumulative_scores", "direction_scores", "full_list_ranks", "full_list_scores",
           "SelectionPolicy", "select_frontier"]
