from .grid import Cell, CellState, GroundTruthMap, ObjectInstance, Pose, NUM_DIRECTIONS
from .sensor import SensorConfig, ViewObservation, panoramic_scan, raycast_view, wedge_index, is_visible
from .generator import GenerationParams, Scenario, generate_scenario

__all__ = ["Cell", "CellState", "GroundTruthMap", "ObjectInstance", "Pose", "NUM_DIRECTIONS",
           "SensorConfig", "ViewObservation", "panoramic_scan", "raycast_view", "wedge_index", "is_visible",
           "GenerationParams", "Scenario", "generate_scenario"]
