from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional, Tuple

from lgrnav.categories import DEFAULT_CATEGORIES, RoomCategoryList
from lgrnav.prompts.builder import PromptBundle, build_bundle
from lgrnav.prompts.transcript import TranscriptRecord
from lgrnav.ranking.scores import RankVector
from lgrnav.world.grid import NUM_DIRECTIONS


@dataclass(frozen=True)
class RankerRequest:
    """
    One ranking query: what the target is and what each of the 8 views shows.

    :param episode_id: Tag written to transcripts; not part of the query.
    :param query_index: Position of the query within its episode.
    """

    target_object: str
    per_direction_objects: Tuple[Tuple[str, ...], ...]
    categories: RoomCategoryList = DEFAULT_CATEGORIES
    episode_id: str = ""
    query_index: int = 0

    def __post_init__(self) -> None:
        slots = tuple(tuple(objects) for objects in self.per_direction_objects)
        if len(slots) != NUM_DIRECTIONS:
            raise ValueError(f"expected {NUM_DIRECTIONS} direction slots, got {len(slots)}")
        if not self.target_object:
            raise ValueError("target_object must not be empty")
        object.__setattr__(self, "per_direction_objects", slots)
        object.__setattr__(self, "categories", tuple(self.categories))

    def prompts(self) -> PromptBundle:
        return build_bundle(self.target_object, self.per_direction_objects, self.categories)


@dataclass(frozen=True)
class RankerResponse:
    """Room answer per view and the ranks the views received."""

    per_direction_room: Tuple[str, ...]
    direction_ranks: RankVector
    transcript: Tuple[TranscriptRecord, ...] = field(default=(), compare=False)
    target_room: Optional[str] = None

    def __post_init__(self) -> None:
        if len(self.per_direction_room) != NUM_DIRECTIONS or len(self.direction_ranks) != NUM_DIRECTIONS:
            raise ValueError(f"a response covers exactly {NUM_DIRECTIONS} directions")
        object.__setattr__(self, "per_direction_room", tuple(self.per_direction_room))


class Ranker(ABC):
    """Ranks the 8 views of a panoramic scan by how likely they lead to the target."""

    name: str = "ranker"

    @abstractmethod
    def rank(self, request: RankerRequest) -> RankerResponse:
        """
        Rank the views of ``request``.

        :return: A response whose ``direction_ranks`` is a permutation of 1..8.
        :raises RankerError: If no ranking can be produced.
        """
        ...
