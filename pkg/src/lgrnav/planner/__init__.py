from .astar import Path, PlanningMode, astar, distance_field, free_rows, octile, search
from .executor import BumpEvent, Execution, execute_path

__all__ = [
    "Path",
    "PlanningMode",
    "astar",
    "distance_field",
    "free_rows",
    "octile",
    "search",
    "BumpEvent",
    "Execution",
    "execute_path",
]
