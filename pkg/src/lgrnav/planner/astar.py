import heapq
import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from lgrnav.errors import PlanningError
from lgrnav.mapping.belief import BeliefMap
from lgrnav.world.grid import Cell, CellState, GroundTruthMap

SQRT2 = math.sqrt(2.0)

# (dx, dy, cost); orthogonal moves first
MOVES: Tuple[Tuple[int, int, float], ...] = (
    (1, 0, 1.0), (0, 1, 1.0), (-1, 0, 1.0), (0, -1, 1.0),
    (1, 1, SQRT2), (-1, 1, SQRT2), (-1, -1, SQRT2), (1, -1, SQRT2),
)

Rows = Sequence[Sequence[bool]]


class PlanningMode(str, Enum):
    KNOWN_FREE_ONLY = "known-free-only"
    OPTIMISTIC_UNKNOWN = "optimistic-unknown"


def step_cost(a: Cell, b: Cell) -> float:
    """Cost of one move between 8-adjacent cells."""
    dx, dy = abs(b[0] - a[0]), abs(b[1] - a[1])
    if max(dx, dy) != 1:
        raise PlanningError(f"cells {a} and {b} are not 8-adjacent")
    return SQRT2 if dx and dy else 1.0


@dataclass(frozen=True)
class Path:
    """Cells from start to goal inclusive, with the summed move cost."""

    cells: Tuple[Cell, ...]
    length: float

    @classmethod
    def from_cells(cls, cells: Iterable[Cell]) -> "Path":
        """
        :raises PlanningError: If consecutive cells are not 8-adjacent or the path is empty.
        """
        cells = tuple((int(x), int(y)) for x, y in cells)
        if not cells:
            raise PlanningError("a path needs at least one cell")
        return cls(cells, sum(step_cost(a, b) for a, b in zip(cells, cells[1:])))

    @property
    def start(self) -> Cell:
        return self.cells[0]

    @property
    def goal(self) -> Cell:
        return self.cells[-1]

    def __len__(self) -> int:
        return len(self.cells)


def octile(a: Cell, b: Cell) -> float:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)


def neighbors(rows: Rows, cell: Cell) -> Iterator[Tuple[Cell, float]]:
    """Traversable 8-neighbours; a diagonal move needs both orthogonal cells traversable."""
    height, width = len(rows), len(rows[0])
    x, y = cell
    for dx, dy, cost in MOVES:
        nx, ny = x + dx, y + dy
        if not (0 <= nx < width and 0 <= ny < height) or not rows[ny][nx]:
            continue
        if dx and dy and not (rows[y][nx] and rows[ny][x]):
            continue
        yield (nx, ny), cost


def free_rows(world: GroundTruthMap) -> List[List[bool]]:
    """Traversability of the ground truth."""
    return [[not blocked for blocked in row] for row in world.blocked_rows]


def search(rows: Rows, start: Cell, goal: Cell) -> Optional[Path]:
    """A* on a traversability grid with the octile heuristic; None when unreachable."""
    if not rows[goal[1]][goal[0]]:
        return None
    counter = itertools.count()
    open_heap = [(octile(start, goal), next(counter), start)]
    g = {start: 0.0}
    came_from = {start: None}
    closed = set()
    while open_heap:
        _, _, current = heapq.heappop(open_heap)
        if current == goal:
            cells = []
            while current is not None:
                cells.append(current)
                current = came_from[current]
            return Path(tuple(reversed(cells)), g[goal])
        if current in closed:
            continue
        closed.add(current)
        for nxt, cost in neighbors(rows, current):
            candidate = g[current] + cost
            if candidate < g.get(nxt, math.inf) - 1e-12:
                g[nxt] = candidate
                came_from[nxt] = current
                heapq.heappush(open_heap, (candidate + octile(nxt, goal), next(counter), nxt))
    return None


def astar(
        belief: BeliefMap,
        start: Cell,
        goal: Cell,
        mode: PlanningMode = PlanningMode.OPTIMISTIC_UNKNOWN,
) -> Optional[Path]:
    """
    Shortest 8-connected path on the belief map.

    ``known-free-only`` walks FREE cells; ``optimistic-unknown`` also walks
    UNKNOWN ones. Diagonal moves never cut a corner.

    :return: The path, or None when the goal cannot be reached.
    :raises PlanningError: If ``start`` is not FREE in the belief.
    """
    if not belief.in_bounds(start) or belief.state(start) != CellState.FREE:
        raise PlanningError(f"start {start} is not a free cell of the belief")
    if not belief.in_bounds(goal):
        raise PlanningError(f"goal {goal} is outside the belief")
    rows = belief.traversable_rows(PlanningMode(mode) is PlanningMode.OPTIMISTIC_UNKNOWN)
    return search(rows, start, goal)


def distance_field(rows: Rows, sources: Iterable[Cell]) -> np.ndarray:
    """
    Path distance from the nearest source to every cell, ``inf`` where unreachable.

    Moves are symmetric, so this is also the distance from each cell to its nearest source.
    """
    height, width = len(rows), len(rows[0])
    dist = np.full((height, width), np.inf)
    heap = []
    for cell in sources:
        if rows[cell[1]][cell[0]] and dist[cell[1], cell[0]] > 0:
            dist[cell[1], cell[0]] = 0.0
            heap.append((0.0, cell))
    heapq.heapify(heap)
    while heap:
        d, current = heapq.heappop(heap)
        if d > dist[current[1], current[0]]:
            continue
        for (nx, ny), cost in neighbors(rows, current):
            candidate = d + cost
            if candidate < dist[ny, nx] - 1e-12:
                dist[ny, nx] = candidate
                heapq.heappush(heap, (candidate, (nx, ny)))
    return dist
