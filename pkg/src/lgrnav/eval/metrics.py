from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from lgrnav.agent.episode import EpisodeResult


def spl_term(success: int, traveled: float, optimal: float) -> float:
    """One episode's contribution ``S * l* / max(l, l*)``."""
    if optimal <= 0:
        raise ValueError(f"optimal length must be positive, got {optimal}")
    if traveled < 0:
        raise ValueError(f"traveled length must be nonnegative, got {traveled}")
    return float(success) * optimal / max(traveled, optimal)


def compute_spl(results: Sequence["EpisodeResult"]) -> float:
    """
    Success weighted by path length over a set of episodes.

    :raises ValueError: If ``results`` is empty or an optimal length is not positive.
    """
    if not results:
        raise ValueError("SPL needs at least one episode")
    return sum(spl_term(r.success, r.traveled, r.optimal) for r in results) / len(results)


def success_rate(results: Sequence["EpisodeResult"]) -> float:
    if not results:
        raise ValueError("success rate needs at least one episode")
    return sum(r.success for r in results) / len(results)
