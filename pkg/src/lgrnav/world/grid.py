from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import List, Tuple

import numpy as np

from lgrnav.categories import DEFAULT_CATEGORIES, WALL, RoomCategoryList
from lgrnav.errors import InvalidDirectionError, InvalidPoseError, ScenarioFormatError

Cell = Tuple[int, int]

NUM_DIRECTIONS = 8


class CellState(IntEnum):
    """Occupancy state of a grid cell. Ground truth only uses FREE and OCCUPIED."""

    UNKNOWN = 0
    FREE = 1
    OCCUPIED = 2


@dataclass(frozen=True)
class ObjectInstance:
    """An object placed on a free cell of the world."""

    id: int
    class_name: str
    cell: Cell

    def __post_init__(self) -> None:
        if not self.class_name:
            raise ScenarioFormatError(f"object {self.id} has an empty class name")


@dataclass(frozen=True)
class Pose:
    """Robot cell and heading; heading k points along k * 45 degrees."""

    cell: Cell
    heading: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.heading < NUM_DIRECTIONS:
            raise InvalidDirectionError(f"heading must be in 0..7, got {self.heading}")


@dataclass(frozen=True, eq=False)
class GroundTruthMap:
    """
    Hidden world: terrain and per-cell room labels.

    Arrays are indexed ``[y, x]``. ``room`` holds indices into ``categories``;
    every occupied cell carries the "wall" category and no free cell does.

    :param occupied: Boolean array, True where the cell is an obstacle.
    :param room: Integer array of category indices.
    :param categories: Category list the indices refer to.
    :param resolution: Meters per cell, metadata only.
    """

    occupied: np.ndarray
    room: np.ndarray
    categories: RoomCategoryList = DEFAULT_CATEGORIES
    resolution: float = 1.0

    def __post_init__(self) -> None:
        occupied = np.array(self.occupied, dtype=bool)
        room = np.array(self.room, dtype=np.int16)
        if occupied.ndim != 2 or occupied.shape != room.shape:
            raise ScenarioFormatError("terrain and room grids must be 2D and of equal shape")
        if WALL not in self.categories:
            raise ScenarioFormatError('category list must contain "wall"')
        if room.size and (room.min() < 0 or room.max() >= len(self.categories)):
            raise ScenarioFormatError("room index outside the category list")
        wall_index = self.categories.index(WALL)
        if not np.array_equal(occupied, room == wall_index):
            raise ScenarioFormatError('occupied cells and "wall" cells must coincide')
        occupied.flags.writeable = False
        room.flags.writeable = False
        object.__setattr__(self, "occupied", occupied)
        object.__setattr__(self, "room", room)
        object.__setattr__(self, "categories", tuple(self.categories))

    @property
    def width(self) -> int:
        return int(self.occupied.shape[1])

    @property
    def height(self) -> int:
        return int(self.occupied.shape[0])

    @cached_property
    def blocked_rows(self) -> List[List[bool]]:
        """Row-major python lists of the occupied mask, for tight loops."""
        return self.occupied.tolist()

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and not self.blocked_rows[cell[1]][cell[0]]

    def state(self, cell: Cell) -> CellState:
        return CellState.OCCUPIED if self.blocked_rows[cell[1]][cell[0]] else CellState.FREE

    def category_at(self, cell: Cell) -> str:
        return self.categories[int(self.room[cell[1], cell[0]])]

    def free_cells(self) -> List[Cell]:
        """All free cells in row-major order."""
        ys, xs = np.nonzero(~self.occupied)
        return [(int(x), int(y)) for y, x in zip(ys, xs)]

    def check_pose(self, pose: Pose) -> None:
        """
        Ensure a pose is usable on this map.

        :raises InvalidPoseError: If the cell is outside the map or occupied.
        """
        if not self.in_bounds(pose.cell):
            raise InvalidPoseError(f"pose {pose.cell} is outside the {self.width}x{self.height} map")
        if not self.is_free(pose.cell):
            raise InvalidPoseError(f"pose {pose.cell} is on an occupied cell")
