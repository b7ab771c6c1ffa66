import json
import math
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Tuple, Union

from lgrnav.categories import DEFAULT_CATEGORIES, RoomCategoryList, room_categories
from lgrnav.errors import ScenarioFormatError

# Unnormalized object -> room weights; rows are normalized on load.
DEFAULT_WEIGHTS: Dict[str, Dict[str, float]] = {
    "toilet": {"bathroom": 0.95, "laundry room": 0.05},
    "bathtub": {"bathroom": 1.0},
    "toothbrush": {"bathroom": 1.0},
    "sink": {"bathroom": 0.5, "kitchen": 0.35, "laundry room": 0.15},
    "towel": {"bathroom": 0.6, "laundry room": 0.3, "bedroom": 0.1},
    "bed": {"bedroom": 1.0},
    "nightstand": {"bedroom": 1.0},
    "wardrobe": {"bedroom": 0.8, "reception room": 0.2},
    "pillow": {"bedroom": 0.7, "living room": 0.2, "reception room": 0.1},
    "sofa": {"living room": 0.6, "reception room": 0.4},
    "coffee table": {"living room": 0.5, "reception room": 0.5},
    "tv": {"living room": 0.7, "bedroom": 0.2, "reception room": 0.1},
    "armchair": {"reception room": 0.5, "living room": 0.4, "home office": 0.1},
    "red chair": {"reception room": 0.5, "living room": 0.3, "home office": 0.1, "kitchen": 0.1},
    "potted plant": {"reception room": 0.4, "living room": 0.3, "home office": 0.2, "bathroom": 0.1},
    "washing machine": {"laundry room": 0.9, "bathroom": 0.1},
    "dryer": {"laundry room": 1.0},
    "laundry basket": {"laundry room": 0.7, "bedroom": 0.2, "bathroom": 0.1},
    "ironing board": {"laundry room": 0.8, "bedroom": 0.2},
    "oven": {"kitchen": 1.0},
    "refrigerator": {"kitchen": 0.95, "laundry room": 0.05},
    "microwave": {"kitchen": 0.9, "home office": 0.1},
    "plate": {"kitchen": 0.85, "living room": 0.1, "reception room": 0.05},
    "desk": {"home office": 0.8, "bedroom": 0.2},
    "office chair": {"home office": 1.0},
    "laptop": {"home office": 0.7, "living room": 0.2, "bedroom": 0.1},
    "bookshelf": {"home office": 0.6, "living room": 0.3, "reception room": 0.1},
}


@dataclass(frozen=True, eq=False)
class CoOccurrencePrior:
    """
    Probability of each room category given an object class.

    Rows cover every non-wall category (missing entries read as 0) and sum to 1.

    :param table: Mapping class -> category -> probability.
    :param categories: Category list the table refers to.
    """

    table: Mapping[str, Mapping[str, float]]
    categories: RoomCategoryList = DEFAULT_CATEGORIES

    def __post_init__(self) -> None:
        rooms = room_categories(self.categories)
        frozen: Dict[str, Mapping[str, float]] = {}
        for class_name, row in self.table.items():
            unknown = set(row) - set(rooms)
            if unknown:
                raise ScenarioFormatError(f"prior row {class_name!r} names unknown rooms {sorted(unknown)}")
            values = {room: float(row.get(room, 0.0)) for room in rooms}
            if any(v < 0 or math.isnan(v) for v in values.values()):
                raise ScenarioFormatError(f"prior row {class_name!r} has a negative entry")
            if abs(sum(values.values()) - 1.0) > 1e-6:
                raise ScenarioFormatError(f"prior row {class_name!r} does not sum to 1")
            frozen[class_name] = MappingProxyType(values)
        object.__setattr__(self, "table", MappingProxyType(frozen))
        object.__setattr__(self, "categories", tuple(self.categories))

    @classmethod
    def from_weights(
            cls,
            weights: Mapping[str, Mapping[str, float]],
            categories: RoomCategoryList = DEFAULT_CATEGORIES,
    ) -> "CoOccurrencePrior":
        """Build a prior by normalizing each row of nonnegative weights."""
        table = {}
        for class_name, row in weights.items():
            total = float(sum(row.values()))
            if total <= 0:
                raise ScenarioFormatError(f"prior row {class_name!r} has no positive weight")
            table[class_name] = {room: float(w) / total for room, w in row.items()}
        return cls(table, categories)

    @classmethod
    def load(cls, path: Union[str, Path], categories: RoomCategoryList = DEFAULT_CATEGORIES) -> "CoOccurrencePrior":
        """Read a JSON table (class -> category -> weight) and normalize its rows."""
        with open(path, encoding="utf-8") as f:
            return cls.from_weights(json.load(f), categories)

    @property
    def classes(self) -> Tuple[str, ...]:
        return tuple(self.table)

    def probability(self, class_name: str, category: str) -> float:
        """P(category | class); 0 for unknown classes or categories."""
        row = self.table.get(class_name)
        return 0.0 if row is None else row.get(category, 0.0)

    def classes_for(self, category: str) -> List[Tuple[str, float]]:
        """Classes with nonzero probability for ``category``, in table order."""
        return [(name, row[category]) for name, row in self.table.items() if row.get(category, 0.0) > 0]

    def to_native(self) -> Dict[str, Any]:
        return {name: dict(row) for name, row in self.table.items()}


def default_prior(categories: RoomCategoryList = DEFAULT_CATEGORIES) -> CoOccurrencePrior:
    """The built-in household table."""
    return CoOccurrencePrior.from_weights(DEFAULT_WEIGHTS, categories)
