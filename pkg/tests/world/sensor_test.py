from unittest.mock import MagicMock

import numpy as np
import pytest

from lgrnav.errors import InvalidDirectionError, InvalidPoseError
from lgrnav.world.grid import CellState, ObjectInstance, Pose
from lgrnav.world.sensor import (
    SensorConfig,
    is_visible,
    line_offsets,
    panoramic_scan,
    raycast_view,
    wedge_index,
)

CORRIDOR = [
    "#########",
    "#...#...#",
    "#########",
]

OPEN_ROOM = ["#" * 11] + ["#" + "." * 9 + "#" for _ in range(9)] + ["#" * 11]


@pytest.mark.parametrize("offset, expected", [
    ((1, 0), 0), ((1, 1), 1), ((0, 1), 2), ((-1, 1), 3),
    ((-1, 0), 4), ((-1, -1), 5), ((0, -1), 6), ((1, -1), 7),
    ((5, 2), 0), ((5, 3), 1), ((2, 5), 2),
])
def test_wedge_index(offset, expected):
    """
    Offsets map to the 45-degree wedge around their bearing.
    """
    assert wedge_index(*offset) == expected


def test_wedge_index_zero_offset():
    """
    The zero offset has no bearing.
    """
    with pytest.raises(ValueError):
        wedge_index(0, 0)


def test_line_offsets_straight_and_diagonal():
    """
    Straight and diagonal segments visit the obvious cells, endpoints included.
    """
    assert line_offsets(3, 0) == [(0, 0), (1, 0), (2, 0), (3, 0)]
    assert line_offsets(-2, -2) == [(0, 0), (-1, -1), (-2, -2)]
    cells = line_offsets(4, 1)
    assert cells[0] == (0, 0) and cells[-1] == (4, 1)
    for (ax, ay), (bx, by) in zip(cells, cells[1:]):
        assert max(abs(bx - ax), abs(by - ay)) == 1


def test_corridor_occlusion(world_from_rows):
    """
    The first wall on a ray is visible; cells behind it are not.
    """
    world = world_from_rows(CORRIDOR)
    view = raycast_view(world, Pose((1, 1)), 0, SensorConfig())
    seen = dict(view.visible_cells)
    assert seen[(2, 1)] == CellState.FREE
    assert seen[(3, 1)] == CellState.FREE
    assert seen[(4, 1)] == CellState.OCCUPIED
    assert (5, 1) not in seen
    assert not is_visible(world, (1, 1), (5, 1), 12)
    assert is_visible(world, (1, 1), (3, 1), 12)


def test_scan_covers_open_room_once(world_from_rows):
    """
    In an open room every cell but the pose is seen, each by exactly one view.
    """
    world = world_from_rows(OPEN_ROOM)
    views = panoramic_scan(world, Pose((5, 5)), SensorConfig())
    cells = [cell for view in views for cell, _ in view.visible_cells]
    assert len(cells) == len(set(cells))
    assert set(cells) == {(x, y) for y in range(11) for x in range(11)} - {(5, 5)}
    assert [view.direction_index for view in views] == list(range(8))


def test_range_limit(world_from_rows):
    """
    Cells beyond the Euclidean range are never visible.
    """
    world = world_from_rows(OPEN_ROOM)
    views = panoramic_scan(world, Pose((1, 1)), SensorConfig(max_range=3))
    for view in views:
        for (x, y), _ in view.visible_cells:
            assert (x - 1) ** 2 + (y - 1) ** 2 <= 9


def test_detections(world_from_rows):
    """
    Visible objects are detected in id order; occluded ones are not.
    """
    world = world_from_rows(CORRIDOR)
    objects = [ObjectInstance(2, "sofa", (3, 1)), ObjectInstance(1, "tv", (2, 1)),
               ObjectInstance(3, "bed", (5, 1))]
    view = raycast_view(world, Pose((1, 1)), 0, SensorConfig(), objects)
    assert [o.id for o in view.detected_objects] == [1, 2]
    assert view.class_names == ["tv", "sofa"]


def test_dropout_needs_generator(world_from_rows):
    """
    Detection dropout requires a random generator.
    """
    world = world_from_rows(CORRIDOR)
    with pytest.raises(ValueError):
        raycast_view(world, Pose((1, 1)), 0, SensorConfig(dropout=0.5))


def test_dropout_removes_detections(world_from_rows):
    """
    A draw below the dropout probability hides the object but not its cell.
    """
    world = world_from_rows(CORRIDOR)
    rng = MagicMock()
    rng.random.return_value = 0.0
    objects = [ObjectInstance(1, "tv", (2, 1))]
    view = raycast_view(world, Pose((1, 1)), 0, SensorConfig(dropout=0.5), objects, rng)
    assert view.detected_objects == ()
    assert ((2, 1), CellState.FREE) in view.visible_cells


def test_seeded_dropout_is_reproducible(world_from_rows):
    """
    The same seed drops the same detections.
    """
    world = world_from_rows(OPEN_ROOM)
    objects = [ObjectInstance(i, "tv", (x, 8)) for i, x in enumerate(range(1, 10), start=1)]
    sensor = SensorConfig(dropout=0.5)
    first = panoramic_scan(world, Pose((5, 2)), sensor, objects, np.random.default_rng(4))
    second = panoramic_scan(world, Pose((5, 2)), sensor, objects, np.random.default_rng(4))
    assert first == second


@pytest.mark.parametrize("direction", [-1, 8, 2.0])
def test_invalid_direction(world_from_rows, direction):
    """
    Direction indices must be integers in 0..7.
    """
    world = world_from_rows(CORRIDOR)
    with pytest.raises(InvalidDirectionError):
        raycast_view(world, Pose((1, 1)), direction, SensorConfig())


def test_pose_on_wall(world_from_rows):
    """
    Observing from an occupied cell is an invalid pose.
    """
    world = world_from_rows(CORRIDOR)
    with pytest.raises(InvalidPoseError):
        raycast_view(world, Pose((4, 1)), 0, SensorConfig())


@pytest.mark.parametrize("kwargs", [{"max_range": 0}, {"dropout": 1.0}, {"fov_degrees": 30.0}])
def test_sensor_config_validation(kwargs):
    """
    Invalid sensor settings are rejected.
    """
    with pytest.raises(ValueError):
        SensorConfig(**kwargs)


def test_boxed_pose_sees_only_its_walls(world_from_rows):
    """
    A pose surrounded by eight walls sees those walls and nothing behind them.
    """
    world = world_from_rows([".....", ".###.", ".#.#.", ".###.", "....."])
    views = panoramic_scan(world, Pose((2, 2)), SensorConfig(), [ObjectInstance(1, "tv", (0, 0))])
    seen = {cell: state for view in views for cell, state in view.visible_cells}
    neighbours = {(x, y) for x in range(1, 4) for y in range(1, 4)} - {(2, 2)}
    assert set(seen) == neighbours
    assert set(seen.values()) == {CellState.OCCUPIED}
    assert all(view.detected_objects == () for view in views)


def _random_rows(rng, size=15, density=0.3):
    rows = [["#" if rng.random() < density else "." for _ in range(size)] for _ in range(size)]
    rows[size // 2][size // 2] = "."
    return ["".join(row) for row in rows]


def _rotate(rows):
    # (x, y) -> (n - 1 - y, x)
    n = len(rows)
    return ["".join(rows[n - 1 - c][r] for c in range(n)) for r in range(n)]


def test_quarter_turn_shifts_directions(world_from_rows):
    """
    Rotating map and pose by 90 degrees moves every view two directions on.
    """
    rng = np.random.default_rng(11)
    sensor = SensorConfig(max_range=6)
    for _ in range(200):
        rows = _random_rows(rng)
        n = len(rows)
        pose = (n // 2, n // 2)
        views = panoramic_scan(world_from_rows(rows), Pose(pose), sensor)
        turned = panoramic_scan(world_from_rows(_rotate(rows)), Pose((n - 1 - pose[1], pose[0])), sensor)
        for k, view in enumerate(views):
            expected = {((n - 1 - y, x), state) for (x, y), state in view.visible_cells}
            assert set(turned[(k + 2) % 8].visible_cells) == expected


def test_new_wall_never_reveals_cells(world_from_rows):
    """
    Turning a free cell into a wall can only shrink what each view sees.
    """
    rng = np.random.default_rng(12)
    sensor = SensorConfig(max_range=6)
    for _ in range(200):
        rows = _random_rows(rng)
        n = len(rows)
        pose = Pose((n // 2, n // 2))
        free = [(x, y) for y in range(n) for x in range(n) if rows[y][x] == "." and (x, y) != pose.cell]
        x, y = free[int(rng.integers(len(free)))]
        walled = list(rows)
        walled[y] = rows[y][:x] + "#" + rows[y][x + 1:]
        before = panoramic_scan(world_from_rows(rows), pose, sensor)
        after = panoramic_scan(world_from_rows(walled), pose, sensor)
        for old, new in zip(before, after):
            assert {c for c, _ in new.visible_cells} <= {c for c, _ in old.visible_cells}
