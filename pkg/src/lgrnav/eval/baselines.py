from typing import Optional

import numpy as np

from lgrnav.errors import EmptyFrontierListError
from lgrnav.mapping.frontiers import FrontierList, euclidean
from lgrnav.ranking.selection import SelectionPolicy
from lgrnav.world.grid import Pose


def random_frontier_baseline(frontiers: FrontierList, rng: np.random.Generator) -> int:
    """
    Uniformly random listed frontier.

    :raises EmptyFrontierListError: If no frontier is listed.
    """
    ids = [e.id for e in frontiers]
    if not ids:
        raise EmptyFrontierListError("no frontier left to explore")
    return ids[int(rng.integers(len(ids)))]


def nearest_frontier_baseline(frontiers: FrontierList, pose: Optional[Pose] = None) -> int:
    """
    Closest listed frontier in straight-line distance, smaller id on ties.

    Distances are measured from ``pose`` when given, else the ones recorded at the last scan.

    :raises EmptyFrontierListError: If no frontier is listed.
    """
    best_id, best = None, float("inf")
    for e in frontiers:
        d = euclidean(e.cell, pose.cell) if pose is not None else e.last_distance
        if d < best:
            best_id, best = e.id, d
    if best_id is None:
        raise EmptyFrontierListError("no frontier left to explore")
    return best_id


def select_baseline(
        frontiers: FrontierList,
        policy: SelectionPolicy,
        rng: np.random.Generator,
        pose: Optional[Pose] = None,
) -> int:
    policy = SelectionPolicy(policy)
    if policy is SelectionPolicy.RANDOM_FRONTIER:
        return random_frontier_baseline(frontiers, rng)
    if policy is SelectionPolicy.NEAREST_FRONTIER:
        return nearest_frontier_baseline(frontiers, pose)
    raise ValueError(f"{policy.value} is not a baseline policy")
