from typing import Optional, Sequence

import numpy as np
import pytest

from lgrnav.categories import DEFAULT_CATEGORIES, WALL
from lgrnav.rankers.prior import default_prior
from lgrnav.world.generator import GenerationParams, Scenario
from lgrnav.world.grid import GroundTruthMap, ObjectInstance


def build_world(rows: Sequence[str], room: Optional[str] = "living room") -> GroundTruthMap:
    """Ground truth from ``#``/``.`` rows; every free cell gets ``room``."""
    occupied = np.array([[ch == "#" for ch in row] for row in rows], dtype=bool)
    rooms = np.where(occupied, DEFAULT_CATEGORIES.index(WALL), DEFAULT_CATEGORIES.index(room))
    return GroundTruthMap(occupied, rooms)


def build_scenario(rows: Sequence[str], objects=(), room: str = "living room") -> Scenario:
    """Scenario from text rows and ``(class_name, (x, y))`` objects."""
    instances = tuple(ObjectInstance(i, name, cell) for i, (name, cell) in enumerate(objects, start=1))
    return Scenario(build_world(rows, room), instances, default_prior())


@pytest.fixture
def world_from_rows():
    """
    Return a factory building a ground-truth map from text rows.
    """
    return build_world


@pytest.fixture
def scenario_from_rows():
    """
    Return a factory building a scenario from text rows and objects.
    """
    return build_scenario


@pytest.fixture
def small_params():
    """
    Generation parameters for quick 16x16 apartments.
    """
    return GenerationParams(width=16, height=16, min_rooms=2, max_rooms=4, min_room_size=3,
                            min_objects=1, max_objects=3)
