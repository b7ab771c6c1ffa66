from typing import List, TextIO, Union

import numpy as np

from lgrnav.codec.abc_codec import Codec
from lgrnav.errors import ScenarioFormatError
from lgrnav.mapping.belief import BeliefMap
from lgrnav.world.grid import CellState, GroundTruthMap

SYMBOLS = {CellState.UNKNOWN: "?", CellState.FREE: ".", CellState.OCCUPIED: "#"}
STATES = {symbol: state for state, symbol in SYMBOLS.items()}


def grid_rows(grid: Union[BeliefMap, GroundTruthMap]) -> List[str]:
    """One string per row: ``#`` occupied, ``.`` free, ``?`` unknown."""
    if isinstance(grid, GroundTruthMap):
        return ["".join("#" if blocked else "." for blocked in row) for row in grid.blocked_rows]
    lookup = [SYMBOLS[CellState(v)] for v in range(len(SYMBOLS))]
    return ["".join(lookup[v] for v in row) for row in grid.cells.tolist()]


class GridTextCodec(Codec[BeliefMap]):
    """Plain-text occupancy grids; a ground-truth map writes without ``?``."""

    def _load(self, fp: TextIO) -> BeliefMap:
        """
        :raises ScenarioFormatError: On ragged rows or unknown symbols.
        """
        rows = [line.rstrip("\n") for line in fp if line.strip()]
        if not rows:
            raise ScenarioFormatError("empty grid")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ScenarioFormatError("grid rows differ in length")
        try:
            cells = np.array([[STATES[ch] for ch in row] for row in rows], dtype=np.int8)
        except KeyError as e:
            raise ScenarioFormatError(f"unknown grid symbol {e.args[0]!r}") from e
        return BeliefMap(width, len(rows), cells)

    def _dump(self, obj: Union[BeliefMap, GroundTruthMap], fp: TextIO) -> None:
        fp.write("\n".join(grid_rows(obj)) + "\n")
