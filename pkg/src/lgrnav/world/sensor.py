import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from lgrnav.errors import InvalidDirectionError
from lgrnav.world.grid import (
    NUM_DIRECTIONS,
    Cell,
    CellState,
    GroundTruthMap,
    ObjectInstance,
    Pose,
)

Offset = Tuple[int, int]


@dataclass(frozen=True)
class SensorConfig:
    """
    Idealized eight-view camera.

    :param max_range: Euclidean range in cells.
    :param dropout: Probability that a visible object is missed.
    :param fov_degrees: Field of view per view; fixed at 45.
    :param num_directions: Views per panoramic scan; fixed at 8.
    """

    max_range: int = 12
    dropout: float = 0.0
    fov_degrees: float = 45.0
    num_directions: int = NUM_DIRECTIONS

    def __post_init__(self) -> None:
        if self.num_directions * self.fov_degrees != 360:
            raise ValueError("num_directions * fov_degrees must cover 360 degrees")
        if self.num_directions != NUM_DIRECTIONS:
            raise ValueError("only eight viewing directions are supported")
        if self.max_range < 1:
            raise ValueError(f"max_range must be positive, got {self.max_range}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError(f"dropout must be in [0, 1), got {self.dropout}")


@dataclass(frozen=True)
class ViewObservation:
    """Cells and objects seen in one 45-degree view."""

    direction_index: int
    visible_cells: Tuple[Tuple[Cell, CellState], ...]
    detected_objects: Tuple[ObjectInstance, ...]

    @property
    def class_names(self) -> List[str]:
        return [obj.class_name for obj in self.detected_objects]


def wedge_index(dx: int, dy: int) -> int:
    """
    Direction whose wedge contains the offset ``(dx, dy)``.

    Wedge k covers the half-open bearing interval [k*45 - 22.5, k*45 + 22.5)
    degrees, bearing measured as ``atan2(dy, dx)``.

    :raises ValueError: For the zero offset, which has no bearing.
    """
    if dx == 0 and dy == 0:
        raise ValueError("zero offset has no bearing")
    angle = math.degrees(math.atan2(dy, dx)) % 360.0
    return int(math.floor((angle + 22.5) / 45.0)) % NUM_DIRECTIONS


def line_offsets(dx: int, dy: int) -> List[Offset]:
    """
    Grid cells crossed by the segment from the origin cell center to ``(dx, dy)``.

    Axis steps follow whichever cell boundary the segment meets first; a
    segment passing exactly through a cell corner steps diagonally.
    Both endpoints are included.
    """
    nx, ny = abs(dx), abs(dy)
    sx = 1 if dx > 0 else -1
    sy = 1 if dy > 0 else -1
    x = y = ix = iy = 0
    cells = [(0, 0)]
    while ix < nx or iy < ny:
        decision = (1 + 2 * ix) * ny - (1 + 2 * iy) * nx
        if decision == 0:
            x += sx
            y += sy
            ix += 1
            iy += 1
        elif decision < 0:
            x += sx
            ix += 1
        else:
            y += sy
            iy += 1
        cells.append((x, y))
    return cells


@lru_cache(maxsize=16)
def _wedge_table(max_range: int) -> Tuple[Tuple[Tuple[int, int, Tuple[Offset, ...]], ...], ...]:
    # Per direction: (dx, dy, cells strictly between origin and target), nearest first.
    wedges: List[List[Tuple[int, int, Tuple[Offset, ...]]]] = [[] for _ in range(NUM_DIRECTIONS)]
    limit = max_range * max_range
    for dy in range(-max_range, max_range + 1):
        for dx in range(-max_range, max_range + 1):
            if (dx == 0 and dy == 0) or dx * dx + dy * dy > limit:
                continue
            between = tuple(line_offsets(dx, dy)[1:-1])
            wedges[wedge_index(dx, dy)].append((dx, dy, between))
    for entries in wedges:
        entries.sort(key=lambda e: (e[0] * e[0] + e[1] * e[1], e[1], e[0]))
    return tuple(tuple(entries) for entries in wedges)


def is_visible(world: GroundTruthMap, origin: Cell, target: Cell, max_range: int) -> bool:
    """True if ``target`` is within range of ``origin`` and no obstacle lies strictly between."""
    dx, dy = target[0] - origin[0], target[1] - origin[1]
    if dx * dx + dy * dy > max_range * max_range or not world.in_bounds(target):
        return False
    blocked = world.blocked_rows
    for ox, oy in line_offsets(dx, dy)[1:-1]:
        if blocked[origin[1] + oy][origin[0] + ox]:
            return False
    return True


def index_objects(objects: Sequence[ObjectInstance]) -> Dict[Cell, List[ObjectInstance]]:
    by_cell: Dict[Cell, List[ObjectInstance]] = {}
    for obj in objects:
        by_cell.setdefault(obj.cell, []).append(obj)
    return by_cell


def raycast_view(
        world: GroundTruthMap,
        pose: Pose,
        direction_index: int,
        sensor: SensorConfig,
        objects: Sequence[ObjectInstance] = (),
        rng: Optional[np.random.Generator] = None,
        _object_index: Optional[Dict[Cell, List[ObjectInstance]]] = None,
) -> ViewObservation:
    """
    Observe the 45-degree wedge around ``direction_index``.

    A cell is visible when it lies in the wedge and within range, and no
    occupied cell lies strictly between it and the pose. The first
    occupied cell of a ray is therefore visible itself.

    :param world: Ground truth map.
    :param pose: Observer pose; must be on a free cell.
    :param direction_index: View direction 0..7.
    :param sensor: Sensor configuration.
    :param objects: Objects placed in the world.
    :param rng: Generator used for detection dropout; required when dropout > 0.
    :raises InvalidDirectionError: If direction_index is outside 0..7.
    :raises InvalidPoseError: If the pose is off the map or on an occupied cell.
    """
    if not isinstance(direction_index, int) or not 0 <= direction_index < NUM_DIRECTIONS:
        raise InvalidDirectionError(f"direction index must be in 0..7, got {direction_index}")
    world.check_pose(pose)
    if sensor.dropout > 0 and rng is None:
        raise ValueError("a random generator is required when dropout > 0")

    by_cell = _object_index if _object_index is not None else index_objects(objects)
    blocked = world.blocked_rows
    px, py = pose.cell
    width, height = world.width, world.height

    visible: List[Tuple[Cell, CellState]] = []
    detected: List[ObjectInstance] = []
    for dx, dy, between in _wedge_table(sensor.max_range)[direction_index]:
        x, y = px + dx, py + dy
        if not (0 <= x < width and 0 <= y < height):
            continue
        if any(blocked[py + oy][px + ox] for ox, oy in between):
            continue
        if blocked[y][x]:
            visible.append(((x, y), CellState.OCCUPIED))
            continue
        visible.append(((x, y), CellState.FREE))
        for obj in by_cell.get((x, y), ()):
            if sensor.dropout > 0 and rng.random() < sensor.dropout:
                continue
            detected.append(obj)

    detected.sort(key=lambda o: o.id)
    return ViewObservation(direction_index, tuple(visible), tuple(detected))


def panoramic_scan(
        world: GroundTruthMap,
        pose: Pose,
        sensor: SensorConfig,
        objects: Sequence[ObjectInstance] = (),
        rng: Optional[np.random.Generator] = None,
) -> List[ViewObservation]:
    """Rotate through all eight views at the current cell."""
    by_cell = index_objects(objects)
    return [
        raycast_view(world, pose, k, sensor, objects, rng, _object_index=by_cell)
        for k in range(NUM_DIRECTIONS)
    ]
