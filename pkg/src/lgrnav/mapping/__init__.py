from .belief import BeliefMap, detect_frontiers, integrate_observation
from .frontiers import FrontierEntry, FrontierList, update_frontier_list

__all__ = ["BeliefMap", "detect_frontiers", "integrate_observation",
           "FrontierEntry", "FrontierList", "update_frontier_list"]
