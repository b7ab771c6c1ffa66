import json
from dataclasses import dataclass
from typing import Sequence, Tuple

from lgrnav.categories import DEFAULT_CATEGORIES, RoomCategoryList
from lgrnav.prompts.templates import RANKING_PROMPT, ROOM_PROMPT


@dataclass(frozen=True)
class PromptBundle:
    """All prompts of one ranking query: one room prompt per view, then the ranking prompt."""

    room_prompts: Tuple[str, ...]
    ranking_prompt: str
    target_object: str
    response_count: int

    def __post_init__(self) -> None:
        if self.response_count != len(self.room_prompts):
            raise ValueError("response_count must equal the number of room prompts")


def build_room_prompt(detected_objects: Sequence[str], categories: RoomCategoryList = DEFAULT_CATEGORIES) -> str:
    """
    Ask for the room category of one view.

    :param detected_objects: Class names detected in the view; may be empty.
    :param categories: Candidate categories, rendered as a JSON list.
    :raises ValueError: If ``categories`` is empty.
    """
    if not categories:
        raise ValueError("category list must not be empty")
    return ROOM_PROMPT.format(od=", ".join(detected_objects), rlc=json.dumps(list(categories)))


def build_ranking_prompt(target: str, response_count: int) -> str:
    """
    Ask for a unique rank for each of the ``response_count`` room answers.

    :raises ValueError: If ``response_count`` is below 1.
    """
    if response_count < 1:
        raise ValueError(f"response_count must be at least 1, got {response_count}")
    return RANKING_PROMPT.format(og=target, count=response_count)


def build_bundle(
        target: str,
        per_direction_objects: Sequence[Sequence[str]],
        categories: RoomCategoryList = DEFAULT_CATEGORIES,
) -> PromptBundle:
    room_prompts = tuple(build_room_prompt(objects, categories) for objects in per_direction_objects)
    return PromptBundle(
        room_prompts=room_prompts,
        ranking_prompt=build_ranking_prompt(target, len(room_prompts)),
        target_object=target,
        response_count=len(room_prompts),
    )


def render_ranking_response(rooms: Sequence[str], ranks: Sequence[int]) -> str:
    """
    Ranked answer in the format the ranking prompt asks for.

    ``ranks[k]`` is the rank of step ``k + 1``; lines are written best first.
    """
    order = sorted(range(len(ranks)), key=lambda k: ranks[k])
    return "\n".join(f"{position}. {rooms[k]} from Step {k + 1}" for position, k in enumerate(order, start=1))
