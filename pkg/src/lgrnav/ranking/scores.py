import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from lgrnav.errors import NegativeDistanceError, RankVectorError


@dataclass(frozen=True)
class RankVector:
    """Ranks 1..N, one per item; smaller is better."""

    ranks: Tuple[int, ...]

    def __post_init__(self) -> None:
        ranks = tuple(int(r) for r in self.ranks)
        if sorted(ranks) != list(range(1, len(ranks) + 1)):
            raise RankVectorError(f"ranks {list(ranks)} are not a permutation of 1..{len(ranks)}")
        object.__setattr__(self, "ranks", ranks)

    def __len__(self) -> int:
        return len(self.ranks)

    def __getitem__(self, index: int) -> int:
        return self.ranks[index]

    @property
    def top(self) -> int:
        """Index of the rank-1 item."""
        return self.ranks.index(1)

    def order(self) -> List[int]:
        """Item indices from best to worst."""
        return sorted(range(len(self.ranks)), key=lambda i: self.ranks[i])

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "RankVector":
        """Build ranks from item indices listed best first."""
        ranks = [0] * len(order)
        for position, index in enumerate(order, start=1):
            ranks[index] = position
        return cls(tuple(ranks))


class ScoreVector:
    """
    Nonnegative scores keyed by frontier id.

    Iteration and :meth:`items` follow ascending id.
    """

    __slots__ = ("_scores",)

    def __init__(self, entries: Union[Mapping[int, float], Iterable[Tuple[int, float]], None] = None) -> None:
        pairs = entries.items() if isinstance(entries, Mapping) else (entries or ())
        scores: Dict[int, float] = {}
        for frontier_id, score in pairs:
            if frontier_id in scores:
                raise ValueError(f"duplicate id {frontier_id} in score vector")
            score = float(score)
            if score < 0 or math.isnan(score):
                raise ValueError(f"score for id {frontier_id} must be nonnegative, got {score}")
            scores[frontier_id] = score
        self._scores = MappingProxyType(dict(sorted(scores.items())))

    def __len__(self) -> int:
        return len(self._scores)

    def __iter__(self):
        return iter(self._scores)

    def __contains__(self, frontier_id: int) -> bool:
        return frontier_id in self._scores

    def __getitem__(self, frontier_id: int) -> float:
        return self._scores[frontier_id]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScoreVector) and dict(self._scores) == dict(other._scores)

    def __repr__(self) -> str:
        return f"ScoreVector({dict(self._scores)!r})"

    def get(self, frontier_id: int, default: float = 0.0) -> float:
        return self._scores.get(frontier_id, default)

    def items(self) -> List[Tuple[int, float]]:
        return list(self._scores.items())

    def values(self) -> List[float]:
        return list(self._scores.values())

    def argmax(self) -> Optional[int]:
        """Id with the highest score, smallest id on ties; None when empty."""
        best_id, best = None, -1.0
        for frontier_id, score in self._scores.items():
            if score > best:
                best_id, best = frontier_id, score
        return best_id


@dataclass(frozen=True)
class WeightConfig:
    """
    Distance weighting ``w(d) = exp(-d / tau)``.

    :param tau: Decay length in cells; defaults to the sensor range.
    """

    tau: float = 12.0
    form: str = "exponential"

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.form != "exponential":
            raise ValueError(f"unsupported weight form {self.form!r}")


def reciprocal_rank_scores(
        ranks: RankVector,
        weights: Sequence[float],
        ids: Optional[Sequence[int]] = None,
) -> ScoreVector:
    """
    Weighted reciprocal ranks ``weights[i] / ranks[i]``.

    :param ranks: Permutation of 1..N.
    :param weights: N weights in (0, 1].
    :param ids: Ids to key the scores by; item positions 0..N-1 by default.
    :raises RankVectorError: On length mismatch or weights outside (0, 1].
    """
    if not isinstance(ranks, RankVector):
        ranks = RankVector(tuple(ranks))
    if len(weights) != len(ranks):
        raise RankVectorError(f"{len(weights)} weights for {len(ranks)} ranks")
    if any(not 0 < w <= 1 for w in weights):
        raise RankVectorError("weights must lie in (0, 1]")
    keys = list(range(len(ranks))) if ids is None else list(ids)
    if len(keys) != len(ranks):
        raise RankVectorError(f"{len(keys)} ids for {len(ranks)} ranks")
    return ScoreVector(zip(keys, (w / r for w, r in zip(weights, ranks.ranks))))


def distance_weight(d: float, cfg: WeightConfig = WeightConfig()) -> float:
    """
    Monotonically decreasing weight of a frontier at distance ``d``.

    :raises NegativeDistanceError: If ``d`` is negative.
    """
    if d < 0:
        raise NegativeDistanceError(f"distance must be nonnegative, got {d}")
    return math.exp(-d / cfg.tau)


def fuse(cumulative: ScoreVector, new_scores: ScoreVector) -> ScoreVector:
    """Per-id sum of two score vectors; ids missing from one side count as 0."""
    merged = dict(cumulative.items())
    for frontier_id, score in new_scores.items():
        merged[frontier_id] = merged.get(frontier_id, 0.0) + score
    return ScoreVector(merged)
