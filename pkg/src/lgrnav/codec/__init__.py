from .abc_codec import Codec
from .grid_text import GridTextCodec, grid_rows
from .scenario_codec import ScenarioCodec

__all__ = ["Codec", "GridTextCodec", "grid_rows", "ScenarioCodec"]
