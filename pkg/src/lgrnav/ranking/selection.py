import logging
from enum import Enum

import numpy as np

from lgrnav.errors import EmptyFrontierListError
from lgrnav.mapping.frontiers import FrontierList
from lgrnav.ranking.assignment import cumulative_scores

logger = logging.getLogger(__name__)


class SelectionPolicy(str, Enum):
    """How the next subgoal is picked from the frontier list."""

    ARGMAX_FUSED = "argmax-fused"
    PROTO_RANDOM = "proto-random"
    RANDOM_FRONTIER = "random-frontier"
    NEAREST_FRONTIER = "nearest-frontier"

    @property
    def uses_ranker(self) -> bool:
        return self in (SelectionPolicy.ARGMAX_FUSED, SelectionPolicy.PROTO_RANDOM)


def select_frontier(frontiers: FrontierList, policy: SelectionPolicy, rng: np.random.Generator) -> int:
    """
    Pick the next subgoal under a ranking policy.

    ``argmax-fused`` takes the highest cumulative score (smallest id on ties).
    ``proto-random`` draws uniformly among frontiers seen in the current scan
    within the latest rank-1 direction, and falls back to ``argmax-fused``
    when that direction holds none.

    :raises EmptyFrontierListError: If no frontier is listed.
    :raises ValueError: For baseline policies, which do not use rankings.
    """
    if not len(frontiers):
        raise EmptyFrontierListError("no frontier left to explore")
    policy = SelectionPolicy(policy)
    if not policy.uses_ranker:
        raise ValueError(f"{policy.value} is a baseline policy, see lgrnav.eval.baselines")

    if policy is SelectionPolicy.PROTO_RANDOM and frontiers.top_direction is not None:
        candidates = [e.id for e in frontiers.seen_in_current_scan()
                      if e.last_direction == frontiers.top_direction]
        if candidates:
            return candidates[int(rng.integers(len(candidates)))]
        logger.debug("direction %d holds no frontier, falling back to argmax", frontiers.top_direction)

    return cumulative_scores(frontiers).argmax()
