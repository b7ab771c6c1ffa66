import json
import string
from typing import Any, Dict, TextIO

import numpy as np

from lgrnav.codec.abc_codec import Codec
from lgrnav.errors import ScenarioFormatError
from lgrnav.rankers.prior import CoOccurrencePrior
from lgrnav.world.generator import Scenario
from lgrnav.world.grid import GroundTruthMap, ObjectInstance

# Room grids store one category index per character.
_ROOM_DIGITS = string.digits + string.ascii_lowercase


class ScenarioCodec(Codec[Scenario]):
    """
    JSON scenario files.

    Layout::

        {"width": W, "height": H, "resolution": 1.0,
         "categories": [...],
         "terrain": ["#####", "#...#", ...],
         "rooms": ["77777", "70007", ...],
         "objects": [{"id": 1, "class": "sofa", "x": 3, "y": 4}, ...],
         "prior": {"sofa": {"living room": 0.6, ...}, ...}}

    ``rooms`` holds base-36 indices into ``categories``.
    """

    def _load(self, fp: TextIO) -> Scenario:
        """
        :raises ScenarioFormatError: On malformed JSON or inconsistent grids.
        """
        try:
            data = json.load(fp)
        except json.JSONDecodeError as e:
            raise ScenarioFormatError(f"scenario is not valid JSON: {e}") from e
        return self.from_native(data)

    def _dump(self, obj: Scenario, fp: TextIO) -> None:
        json.dump(self.to_native(obj), fp, ensure_ascii=False, indent=2)
        fp.write("\n")

    @staticmethod
    def to_native(scenario: Scenario) -> Dict[str, Any]:
        world = scenario.world
        if len(world.categories) > len(_ROOM_DIGITS):
            raise ScenarioFormatError(f"at most {len(_ROOM_DIGITS)} categories can be written")
        return {
            "width": world.width,
            "height": world.height,
            "resolution": world.resolution,
            "categories": list(world.categories),
            "terrain": ["".join("#" if b else "." for b in row) for row in world.blocked_rows],
            "rooms": ["".join(_ROOM_DIGITS[v] for v in row) for row in world.room.tolist()],
            "objects": [
                {"id": o.id, "class": o.class_name, "x": o.cell[0], "y": o.cell[1]}
                for o in scenario.objects
            ],
            "prior": scenario.prior.to_native(),
        }

    @staticmethod
    def from_native(data: Dict[str, Any]) -> Scenario:
        try:
            width, height = int(data["width"]), int(data["height"])
            categories = tuple(data["categories"])
            terrain, rooms = data["terrain"], data["rooms"]
            if len(terrain) != height or len(rooms) != height:
                raise ScenarioFormatError("terrain and room grids must have `height` rows")
            if any(len(row) != width for row in terrain) or any(len(row) != width for row in rooms):
                raise ScenarioFormatError("terrain and room rows must have `width` cells")
            if set("".join(terrain)) - {"#", "."}:
                raise ScenarioFormatError("terrain rows may only contain '#' and '.'")
            occupied = np.array([[ch == "#" for ch in row] for row in terrain], dtype=bool)
            room = np.array([[_ROOM_DIGITS.index(ch) for ch in row] for row in rooms], dtype=np.int16)
            world = GroundTruthMap(occupied, room, categories, float(data.get("resolution", 1.0)))

            objects = tuple(
                ObjectInstance(int(o["id"]), str(o["class"]), (int(o["x"]), int(o["y"])))
                for o in data["objects"]
            )
            prior = CoOccurrencePrior(data["prior"], categories)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ScenarioFormatError):
                raise
            raise ScenarioFormatError(f"malformed scenario: {e!r}") from e

        if len({o.id for o in objects}) != len(objects):
            raise ScenarioFormatError("object ids must be unique")
        for o in objects:
            if not world.is_free(o.cell):
                raise ScenarioFormatError(f"object {o.id} at {o.cell} is not on a free cell")
        return Scenario(world, objects, prior)
