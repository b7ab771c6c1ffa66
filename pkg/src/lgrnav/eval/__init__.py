from .baselines import nearest_frontier_baseline, random_frontier_baseline, select_baseline
from .metrics import compute_spl, spl_term, success_rate

# lgrnav.eval.batch and lgrnav.eval.report depend on the agent; import them directly.
__all__ = [
    "nearest_frontier_baseline",
    "random_frontier_baseline",
    "select_baseline",
    "compute_spl",
    "spl_term",
    "success_rate",
]
