from typing import List, Optional, Set

import numpy as np

from lgrnav.errors import SensorContradictionError
from lgrnav.world.grid import Cell, CellState
from lgrnav.world.sensor import ViewObservation


class BeliefMap:
    """
    Robot occupancy grid with three states per cell.

    Known cells never revert to UNKNOWN and never change between FREE and
    OCCUPIED; either attempt raises :class:`SensorContradictionError`.
    """

    def __init__(self, width: int, height: int, cells: Optional[np.ndarray] = None) -> None:
        if cells is None:
            cells = np.full((height, width), CellState.UNKNOWN, dtype=np.int8)
        elif cells.shape != (height, width):
            raise ValueError(f"cells shape {cells.shape} does not match {width}x{height}")
        self.cells: np.ndarray = np.array(cells, dtype=np.int8)

    @property
    def width(self) -> int:
        return int(self.cells.shape[1])

    @property
    def height(self) -> int:
        return int(self.cells.shape[0])

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def state(self, cell: Cell) -> CellState:
        return CellState(int(self.cells[cell[1], cell[0]]))

    def mark(self, cell: Cell, state: CellState) -> None:
        """
        Record an observed state for a cell.

        :raises SensorContradictionError: If the cell is known with a different state.
        :raises ValueError: If asked to forget a cell or the cell is off the map.
        """
        if state == CellState.UNKNOWN:
            raise ValueError("cells cannot be marked unknown")
        if not self.in_bounds(cell):
            raise ValueError(f"cell {cell} is outside the {self.width}x{self.height} belief")
        current = self.state(cell)
        if current == state:
            return
        if current != CellState.UNKNOWN:
            raise SensorContradictionError(
                f"cell {cell} observed {state.name} but already known {current.name}"
            )
        self.cells[cell[1], cell[0]] = state

    def integrate(self, view: ViewObservation) -> "BeliefMap":
        for cell, state in view.visible_cells:
            self.mark(cell, state)
        return self

    @property
    def unknown_count(self) -> int:
        return int(np.count_nonzero(self.cells == CellState.UNKNOWN))

    def frontier_mask(self) -> np.ndarray:
        """Boolean mask of free cells with at least one 4-adjacent unknown cell."""
        unknown = np.pad(self.cells == CellState.UNKNOWN, 1, constant_values=False)
        near_unknown = unknown[:-2, 1:-1] | unknown[2:, 1:-1] | unknown[1:-1, :-2] | unknown[1:-1, 2:]
        return (self.cells == CellState.FREE) & near_unknown

    def is_frontier(self, cell: Cell) -> bool:
        x, y = cell
        if self.cells[y, x] != CellState.FREE:
            return False
        for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if self.in_bounds((nx, ny)) and self.cells[ny, nx] == CellState.UNKNOWN:
                return True
        return False

    def traversable_rows(self, optimistic: bool) -> List[List[bool]]:
        """Row-major traversability: FREE cells, plus UNKNOWN ones when optimistic."""
        mask = self.cells == CellState.FREE
        if optimistic:
            mask |= self.cells == CellState.UNKNOWN
        return mask.tolist()

    def copy(self) -> "BeliefMap":
        return BeliefMap(self.width, self.height, self.cells.copy())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BeliefMap) and np.array_equal(self.cells, other.cells)


def integrate_observation(belief: BeliefMap, view: ViewObservation) -> BeliefMap:
    """
    Write every visible cell of ``view`` into ``belief`` and return it.

    :raises SensorContradictionError: If the view contradicts a known cell.
    """
    return belief.integrate(view)


def detect_frontiers(belief: BeliefMap) -> Set[Cell]:
    """Free cells having at least one 4-adjacent unknown cell."""
    ys, xs = np.nonzero(belief.frontier_mask())
    return {(int(x), int(y)) for y, x in zip(ys, xs)}
