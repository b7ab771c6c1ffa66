import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from lgrnav.categories import DEFAULT_CATEGORIES, WALL, RoomCategoryList, room_categories
from lgrnav.errors import GridTooSmallError
from lgrnav.rankers.prior import CoOccurrencePrior, default_prior
from lgrnav.world.grid import Cell, GroundTruthMap, ObjectInstance

logger = logging.getLogger(__name__)


class Scenario(NamedTuple):
    """A generated or loaded world with its objects and the prior used to place them."""

    world: GroundTruthMap
    objects: Tuple[ObjectInstance, ...]
    prior: CoOccurrencePrior


@dataclass(frozen=True)
class GenerationParams:
    """
    Parameters for apartment generation.

    :param width: Grid width in cells, outer walls included.
    :param height: Grid height in cells, outer walls included.
    :param min_rooms: Fewest rooms accepted.
    :param max_rooms: Most rooms attempted.
    :param min_room_size: Smallest room side in free cells.
    :param min_objects: Fewest objects per room.
    :param max_objects: Most objects per room.
    """

    width: int = 48
    height: int = 48
    min_rooms: int = 6
    max_rooms: int = 10
    min_room_size: int = 5
    min_objects: int = 2
    max_objects: int = 4
    categories: RoomCategoryList = DEFAULT_CATEGORIES

    def __post_init__(self) -> None:
        if self.width < 3 or self.height < 3:
            raise GridTooSmallError(f"grid {self.width}x{self.height} has no interior")
        if not 1 <= self.min_rooms <= self.max_rooms:
            raise ValueError("room count range must satisfy 1 <= min_rooms <= max_rooms")
        if self.min_room_size < 3:
            raise ValueError("min_room_size must be at least 3")
        if not 0 <= self.min_objects <= self.max_objects:
            raise ValueError("object count range must satisfy 0 <= min_objects <= max_objects")


@dataclass(frozen=True)
class _Rect:
    # Inclusive interior bounds.
    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def w(self) -> int:
        return self.x1 - self.x0 + 1

    @property
    def h(self) -> int:
        return self.y1 - self.y0 + 1

    def can_split(self, vertical: bool, size: int) -> bool:
        return (self.w if vertical else self.h) >= 2 * size + 1

    def cells(self) -> List[Cell]:
        return [(x, y) for y in range(self.y0, self.y1 + 1) for x in range(self.x0, self.x1 + 1)]


@dataclass(frozen=True)
class _Split:
    vertical: bool
    at: int
    span: _Rect


def _partition(rng: np.random.Generator, params: GenerationParams) -> Tuple[List[_Rect], List[_Split]]:
    size = params.min_room_size
    wanted = int(rng.integers(params.min_rooms, params.max_rooms + 1))
    leaves = [_Rect(1, 1, params.width - 2, params.height - 2)]
    splits: List[_Split] = []

    while len(leaves) < wanted:
        candidates = [r for r in leaves if r.can_split(True, size) or r.can_split(False, size)]
        if not candidates:
            break
        rect = max(candidates, key=lambda r: r.w * r.h)
        if rect.can_split(True, size) and rect.can_split(False, size):
            vertical = rect.w > rect.h or (rect.w == rect.h and bool(rng.integers(2)))
        else:
            vertical = rect.can_split(True, size)

        lo, hi = (rect.x0, rect.x1) if vertical else (rect.y0, rect.y1)
        at = int(rng.integers(lo + size, hi - size + 1))
        if vertical:
            first, second = _Rect(rect.x0, rect.y0, at - 1, rect.y1), _Rect(at + 1, rect.y0, rect.x1, rect.y1)
        else:
            first, second = _Rect(rect.x0, rect.y0, rect.x1, at - 1), _Rect(rect.x0, at + 1, rect.x1, rect.y1)
        index = leaves.index(rect)
        leaves[index:index + 1] = [first, second]
        splits.append(_Split(vertical, at, rect))

    if len(leaves) < params.min_rooms:
        raise GridTooSmallError(
            f"{params.width}x{params.height} grid fits only {len(leaves)} rooms "
            f"of side {size}, {params.min_rooms} requested"
        )
    return leaves, splits


def _place_door(rng: np.random.Generator, occupied: np.ndarray, split: _Split) -> Cell:
    # A door cell sits on the split wall with free cells on both sides.
    if split.vertical:
        x = split.at
        options = [(x, y) for y in range(split.span.y0, split.span.y1 + 1)
                   if not occupied[y, x - 1] and not occupied[y, x + 1]]
    else:
        y = split.at
        options = [(x, y) for x in range(split.span.x0, split.span.x1 + 1)
                   if not occupied[y - 1, x] and not occupied[y + 1, x]]
    if not options:
        raise GridTooSmallError(f"no room for a door on wall at {split.at}")
    return options[int(rng.integers(len(options)))]


def generate_scenario(
        seed: int,
        params: GenerationParams = GenerationParams(),
        prior: Optional[CoOccurrencePrior] = None,
) -> Scenario:
    """
    Generate a BSP apartment: rectangular rooms separated by one-cell walls
    and joined by door gaps, with objects sampled from the room prior.

    The result depends only on ``seed``, ``params`` and ``prior``.

    :param seed: Seed for the generator.
    :param params: Grid and content parameters.
    :param prior: Object/room table; the built-in table when omitted.
    :raises GridTooSmallError: If the grid cannot hold ``min_rooms`` rooms.
    """
    prior = prior or default_prior(params.categories)
    rng = np.random.default_rng(seed)
    leaves, splits = _partition(rng, params)

    categories = tuple(params.categories)
    wall_index = categories.index(WALL)
    occupied = np.ones((params.height, params.width), dtype=bool)
    room = np.full((params.height, params.width), wall_index, dtype=np.int16)

    choices = room_categories(categories)
    order = rng.permutation(len(choices))
    leaf_category: List[str] = []
    for i, rect in enumerate(leaves):
        category = choices[int(order[i % len(choices)])]
        leaf_category.append(category)
        occupied[rect.y0:rect.y1 + 1, rect.x0:rect.x1 + 1] = False
        room[rect.y0:rect.y1 + 1, rect.x0:rect.x1 + 1] = categories.index(category)

    for split in splits:
        x, y = _place_door(rng, occupied, split)
        nx, ny = (x - 1, y) if split.vertical else (x, y - 1)
        occupied[y, x] = False
        room[y, x] = room[ny, nx]

    world = GroundTruthMap(occupied, room, categories)

    objects: List[ObjectInstance] = []
    for rect, category in zip(leaves, leaf_category):
        support = prior.classes_for(category)
        if not support:
            continue
        names = [name for name, _ in support]
        weights = np.array([p for _, p in support], dtype=float)
        weights /= weights.sum()
        free = rect.cells()
        count = min(int(rng.integers(params.min_objects, params.max_objects + 1)), len(free))
        spots = rng.choice(len(free), size=count, replace=False)
        for spot in spots:
            name = names[int(rng.choice(len(names), p=weights))]
            objects.append(ObjectInstance(len(objects) + 1, name, free[int(spot)]))

    logger.debug("generated seed=%s rooms=%d objects=%d", seed, len(leaves), len(objects))
    return Scenario(world, tuple(objects), prior)
