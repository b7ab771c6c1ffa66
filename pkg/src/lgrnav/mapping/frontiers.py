import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Set

from lgrnav.mapping.belief import BeliefMap
from lgrnav.world.grid import Cell

logger = logging.getLogger(__name__)


@dataclass
class FrontierEntry:
    """
    A listed frontier cell and its fused ranking score.

    ``last_direction`` and ``last_seen_scan`` track the most recent scan that
    saw the cell; only frontiers seen in the current scan are ranked.
    """

    id: int
    cell: Cell
    direction_at_discovery: int
    viewpoint_at_discovery: Cell
    cumulative_score: float = 0.0
    observation_count: int = 1
    last_distance: float = 0.0
    last_direction: int = -1
    last_seen_scan: int = 0

    def __post_init__(self) -> None:
        if self.last_direction < 0:
            self.last_direction = self.direction_at_discovery


def euclidean(a: Cell, b: Cell) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass
class FrontierList:
    """
    Frontier candidates of one episode, ordered by id.

    Ids are never reused and no two entries share a cell. Cells dropped
    permanently (unreachable) are never listed again.
    """

    next_id: int = 1
    scan_index: int = 0
    top_direction: Optional[int] = None
    _entries: Dict[int, FrontierEntry] = field(default_factory=dict)
    _by_cell: Dict[Cell, int] = field(default_factory=dict)
    _dropped: Set[Cell] = field(default_factory=set)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[FrontierEntry]:
        return iter(list(self._entries.values()))

    def __contains__(self, frontier_id: int) -> bool:
        return frontier_id in self._entries

    def get(self, frontier_id: int) -> FrontierEntry:
        return self._entries[frontier_id]

    def find(self, cell: Cell) -> Optional[FrontierEntry]:
        frontier_id = self._by_cell.get(cell)
        return None if frontier_id is None else self._entries[frontier_id]

    def add(self, cell: Cell, direction: int, viewpoint: Cell) -> FrontierEntry:
        """Append a new entry, or return the existing one for ``cell``."""
        existing = self.find(cell)
        if existing is not None:
            return existing
        entry = FrontierEntry(self.next_id, cell, direction, viewpoint,
                              last_distance=euclidean(cell, viewpoint),
                              last_seen_scan=self.scan_index)
        self._entries[entry.id] = entry
        self._by_cell[cell] = entry.id
        self.next_id += 1
        return entry

    def remove(self, frontier_id: int, permanent: bool = False) -> FrontierEntry:
        entry = self._entries.pop(frontier_id)
        del self._by_cell[entry.cell]
        if permanent:
            self._dropped.add(entry.cell)
        return entry

    def prune(self, belief: BeliefMap) -> List[int]:
        """Remove entries whose cell no longer satisfies the frontier predicate."""
        stale = [e.id for e in self if not belief.is_frontier(e.cell)]
        for frontier_id in stale:
            self.remove(frontier_id)
        return stale

    def seen_in_current_scan(self) -> List[FrontierEntry]:
        return [e for e in self if e.last_seen_scan == self.scan_index]

    def update(self, belief: BeliefMap, newly_visible: Mapping[Cell, int], viewpoint: Cell) -> "FrontierList":
        """
        Apply one scan's worth of changes.

        :param belief: Belief after integrating the scan.
        :param newly_visible: Frontier cells seen in this scan, tagged with the view direction.
        :param viewpoint: Cell the scan was taken from.
        :raises ValueError: If an offered cell is not a frontier of ``belief``.
        """
        self.scan_index += 1
        removed = self.prune(belief)

        added = 0
        for cell in sorted(newly_visible, key=lambda c: (c[1], c[0])):
            if not belief.is_frontier(cell):
                raise ValueError(f"cell {cell} is not a frontier of the current belief")
            if cell in self._dropped:
                continue
            direction = newly_visible[cell]
            entry = self.find(cell)
            if entry is None:
                entry = self.add(cell, direction, viewpoint)
                added += 1
            else:
                entry.observation_count += 1
            entry.last_direction = direction
            entry.last_seen_scan = self.scan_index

        for entry in self._entries.values():
            entry.last_distance = euclidean(entry.cell, viewpoint)

        logger.debug("frontiers: %d listed, %d added, %d removed", len(self), added, len(removed))
        return self


def update_frontier_list(
        frontiers: FrontierList,
        belief: BeliefMap,
        newly_visible_frontiers: Mapping[Cell, int],
        viewpoint: Cell,
) -> FrontierList:
    """Drop stale frontiers, append new ones and refresh distances from ``viewpoint``."""
    return frontiers.update(belief, newly_visible_frontiers, viewpoint)
