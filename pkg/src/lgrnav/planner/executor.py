import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from lgrnav.errors import PlanningError
from lgrnav.planner.astar import Path, step_cost
from lgrnav.world.grid import Cell, GroundTruthMap, Pose
from lgrnav.world.sensor import wedge_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BumpEvent:
    """The bumper fired: ``blocked_cell`` is an obstacle the robot tried to move into or past."""

    blocked_cell: Cell
    pose_before: Pose


class Execution(NamedTuple):
    pose: Pose
    traveled: float
    bump: Optional[BumpEvent]
    visited: Tuple[Cell, ...]


def _blocking_cell(world: GroundTruthMap, cell: Cell, dx: int, dy: int) -> Optional[Cell]:
    target = (cell[0] + dx, cell[1] + dy)
    if not world.is_free(target):
        return target
    if dx and dy:
        for corner in ((cell[0] + dx, cell[1]), (cell[0], cell[1] + dy)):
            if not world.is_free(corner):
                return corner
    return None


def execute_path(world: GroundTruthMap, pose: Pose, path: Path, max_steps: Optional[int] = None) -> Execution:
    """
    Drive along ``path`` on the true map.

    The robot stops in front of the first obstacle it would enter, or squeeze
    past on a diagonal, and reports it as a bump. The heading follows the last
    move. At most ``max_steps`` moves are made when given.

    :raises PlanningError: If the path does not start at the pose or skips a cell.
    """
    if path.start != pose.cell:
        raise PlanningError(f"path starts at {path.start}, robot is at {pose.cell}")

    current, traveled, visited = pose, 0.0, []
    for nxt in path.cells[1:]:
        if max_steps is not None and len(visited) >= max_steps:
            break
        cost = step_cost(current.cell, nxt)
        dx, dy = nxt[0] - current.cell[0], nxt[1] - current.cell[1]
        blocked = _blocking_cell(world, current.cell, dx, dy)
        if blocked is not None:
            logger.debug("bump at %s moving from %s", blocked, current.cell)
            return Execution(current, traveled, BumpEvent(blocked, current), tuple(visited))
        current = Pose(nxt, wedge_index(dx, dy))
        traveled += cost
        visited.append(nxt)
    return Execution(current, traveled, None, tuple(visited))
