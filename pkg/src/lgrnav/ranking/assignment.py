from typing import List, Tuple

from lgrnav.mapping.frontiers import FrontierList
from lgrnav.ranking.scores import (
    RankVector,
    ScoreVector,
    WeightConfig,
    distance_weight,
    fuse,
    reciprocal_rank_scores,
)
from lgrnav.world.grid import Cell
from lgrnav.world.sensor import wedge_index


def direction_scores(frontiers: FrontierList, direction_ranks: RankVector, cfg: WeightConfig) -> ScoreVector:
    """
    Per-frontier scores for one direction-level ranking.

    Every frontier seen in the current scan inherits the rank of the view it
    was seen in and is weighted by its distance; the rest get nothing.
    """
    rrf = reciprocal_rank_scores(direction_ranks, [1.0] * len(direction_ranks))
    return ScoreVector(
        (e.id, distance_weight(e.last_distance, cfg) * rrf[e.last_direction])
        for e in frontiers.seen_in_current_scan()
    )


def full_list_ranks(frontiers: FrontierList, direction_ranks: RankVector, viewpoint: Cell) -> Tuple[List[int], RankVector]:
    """
    Rank every listed frontier in a single query.

    Frontiers are ordered by the rank of the direction they bear from
    ``viewpoint``, then by distance, then by id.
    """
    keyed = []
    for e in frontiers:
        dx, dy = e.cell[0] - viewpoint[0], e.cell[1] - viewpoint[1]
        bearing = e.last_direction if dx == 0 and dy == 0 else wedge_index(dx, dy)
        keyed.append((direction_ranks[bearing], e.last_distance, e.id))
    keyed.sort()
    ids = [frontier_id for _, _, frontier_id in keyed]
    return ids, RankVector(tuple(range(1, len(ids) + 1)))


def full_list_scores(
        frontiers: FrontierList,
        direction_ranks: RankVector,
        viewpoint: Cell,
        cfg: WeightConfig,
) -> ScoreVector:
    """Reciprocal list ranks scaled by distance weight; far frontiers may score 0."""
    ids, ranks = full_list_ranks(frontiers, direction_ranks, viewpoint)
    rrf = reciprocal_rank_scores(ranks, [1.0] * len(ids), ids)
    return ScoreVector((i, distance_weight(frontiers.get(i).last_distance, cfg) * rrf[i]) for i in ids)


def cumulative_scores(frontiers: FrontierList) -> ScoreVector:
    return ScoreVector((e.id, e.cumulative_score) for e in frontiers)


def accumulate(frontiers: FrontierList, new_scores: ScoreVector) -> ScoreVector:
    """Fuse ``new_scores`` into the listed frontiers' cumulative scores."""
    fused = fuse(cumulative_scores(frontiers), ScoreVector((i, s) for i, s in new_scores.items() if i in frontiers))
    for frontier_id, score in fused.items():
        frontiers.get(frontier_id).cumulative_score = score
    return fused
