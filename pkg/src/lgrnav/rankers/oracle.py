import logging
import math
from typing import Optional, Sequence

from lgrnav.categories import DEFAULT_CATEGORIES, RoomCategoryList, room_categories
from lgrnav.prompts.builder import render_ranking_response
from lgrnav.prompts.transcript import RANKING, ROOM, TranscriptRecord
from lgrnav.rankers.base import Ranker, RankerRequest, RankerResponse
from lgrnav.rankers.prior import CoOccurrencePrior, default_prior
from lgrnav.ranking.scores import RankVector

logger = logging.getLogger(__name__)

SMOOTHING = 1e-6


def oracle_classify(
        objects: Sequence[str],
        prior: CoOccurrencePrior,
        categories: RoomCategoryList = DEFAULT_CATEGORIES,
) -> str:
    """
    Most likely room for a set of detected objects.

    Scores each non-wall category by the sum of ``log(prior + 1e-6)`` over the
    objects and returns the best one; ties, including the empty object list,
    go to the category listed first.
    """
    best_room, best = None, -math.inf
    for room in room_categories(categories):
        score = sum(math.log(prior.probability(name, room) + SMOOTHING) for name in objects)
        if score > best:
            best_room, best = room, score
    if best_room is None:
        raise ValueError("category list holds no room category")
    return best_room


def rank_rooms(target: str, rooms: Sequence[str], prior: CoOccurrencePrior) -> RankVector:
    """Ranks by ``prior(target | room)`` descending, lower index first on ties."""
    order = sorted(range(len(rooms)), key=lambda k: (-prior.probability(target, rooms[k]), k))
    return RankVector.from_order(order)


class OracleRanker(Ranker):
    """
    Deterministic stand-in for the language model, driven by a co-occurrence table.

    Each response also carries a synthetic transcript in the format the model
    is asked to answer in, so oracle runs can be recorded and replayed.
    """

    name = "oracle"

    def __init__(self, prior: Optional[CoOccurrencePrior] = None) -> None:
        self.prior = prior if prior is not None else default_prior()

    def rank(self, request: RankerRequest) -> RankerResponse:
        rooms = tuple(oracle_classify(objects, self.prior, request.categories)
                      for objects in request.per_direction_objects)
        ranks = rank_rooms(request.target_object, rooms, self.prior)
        target_room = max(room_categories(request.categories),
                          key=lambda room: self.prior.probability(request.target_object, room))

        bundle = request.prompts()
        transcript = [
            TranscriptRecord(request.episode_id, request.query_index, ROOM, prompt, room)
            for prompt, room in zip(bundle.room_prompts, rooms)
        ]
        transcript.append(TranscriptRecord(
            request.episode_id, request.query_index, RANKING, bundle.ranking_prompt,
            render_ranking_response(rooms, ranks.ranks),
        ))
        logger.debug("oracle rooms %s ranks %s", rooms, ranks.ranks)
        return RankerResponse(rooms, ranks, tuple(transcript), target_room)
