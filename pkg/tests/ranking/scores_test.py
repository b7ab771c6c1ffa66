import math

import numpy as np
import pytest

from lgrnav.errors import NegativeDistanceError, RankVectorError
from lgrnav.ranking.scores import (
    RankVector,
    ScoreVector,
    WeightConfig,
    distance_weight,
    fuse,
    reciprocal_rank_scores,
)


def test_rank_vector_order_round_trip():
    """
    from_order and order are inverse views of the same ranking.
    """
    ranks = RankVector.from_order([2, 0, 1])
    assert ranks.ranks == (2, 3, 1)
    assert ranks.order() == [2, 0, 1]
    assert ranks.top == 2


@pytest.mark.parametrize("ranks", [(1, 1, 2), (0, 1, 2), (1, 3), (2,)])
def test_rank_vector_must_be_permutation(ranks):
    """
    Ranks that are not a permutation of 1..N are rejected.
    """
    with pytest.raises(RankVectorError):
        RankVector(ranks)


def test_reciprocal_rank_scores():
    """
    Each item scores its weight over its rank.
    """
    scores = reciprocal_rank_scores(RankVector((2, 1, 4, 3)), [1.0, 0.5, 1.0, 0.3], ids=[10, 11, 12, 13])
    assert scores.items() == [(10, 0.5), (11, 0.5), (12, 0.25), (13, pytest.approx(0.1))]


def test_reciprocal_rank_scores_defaults_to_positions():
    """
    Without ids the scores are keyed by item position.
    """
    scores = reciprocal_rank_scores((1, 2), [1.0, 1.0])
    assert scores.items() == [(0, 1.0), (1, 0.5)]


@pytest.mark.parametrize("weights, ids", [
    ([1.0], None),
    ([1.0, 0.0], None),
    ([1.0, 1.5], None),
    ([1.0, 1.0], [7]),
])
def test_reciprocal_rank_scores_rejects_bad_input(weights, ids):
    """
    Length mismatches and weights outside (0, 1] are rejected.
    """
    with pytest.raises(RankVectorError):
        reciprocal_rank_scores(RankVector((1, 2)), weights, ids)


def test_distance_weight():
    """
    The weight is 1 at the viewpoint and decays exponentially with tau.
    """
    cfg = WeightConfig(tau=12.0)
    assert distance_weight(0.0, cfg) == 1.0
    assert distance_weight(12.0, cfg) == pytest.approx(math.exp(-1))
    assert distance_weight(3.0, cfg) > distance_weight(4.0, cfg) > 0


def test_negative_distance():
    """
    Negative distances are rejected.
    """
    with pytest.raises(NegativeDistanceError):
        distance_weight(-0.1)


@pytest.mark.parametrize("kwargs", [{"tau": 0.0}, {"tau": -1.0}, {"form": "linear"}])
def test_weight_config_validation(kwargs):
    """
    Only a positive exponential decay is accepted.
    """
    with pytest.raises(ValueError):
        WeightConfig(**kwargs)


def test_score_vector_rejects_bad_entries():
    """
    Duplicate ids and negative scores are rejected.
    """
    with pytest.raises(ValueError):
        ScoreVector([(1, 0.5), (1, 0.2)])
    with pytest.raises(ValueError):
        ScoreVector({1: -0.1})


def test_argmax_tie_break():
    """
    Ties go to the smallest id, and an empty vector has no argmax.
    """
    assert ScoreVector({5: 0.4, 3: 0.4, 9: 0.1}).argmax() == 3
    assert ScoreVector({2: 0.0, 1: 0.0}).argmax() == 1
    assert ScoreVector().argmax() is None


def test_fuse_example():
    """
    Fusion sums per id and keeps ids present on one side only.
    """
    fused = fuse(ScoreVector({1: 0.5, 2: 0.25}), ScoreVector({2: 0.25, 3: 1.0}))
    assert fused == ScoreVector({1: 0.5, 2: 0.5, 3: 1.0})


def _random_scores(rng):
    ids = rng.choice(20, size=int(rng.integers(0, 10)), replace=False)
    return ScoreVector({int(i): float(rng.random()) for i in ids})


def test_fuse_properties():
    """
    Fusion is commutative, associative and never lowers a score.
    """
    rng = np.random.default_rng(42)
    for _ in range(1000):
        a, b, c = _random_scores(rng), _random_scores(rng), _random_scores(rng)
        ab = fuse(a, b)
        assert ab == fuse(b, a)
        left = fuse(ab, c)
        right = fuse(a, fuse(b, c))
        assert list(left) == list(right)
        for frontier_id in left:
            assert left[frontier_id] == pytest.approx(right[frontier_id])
        for frontier_id, score in a.items():
            assert ab[frontier_id] >= score
        assert fuse(a, ScoreVector()) == a


def test_argmax_ignores_positive_rescaling():
    """
    Scaling every fused score by the same positive factor keeps the selected id.
    """
    rng = np.random.default_rng(7)
    for _ in range(1000):
        fused = fuse(_random_scores(rng), _random_scores(rng))
        factor = 2.0 ** int(rng.integers(-6, 7))
        scaled = ScoreVector({frontier_id: score * factor for frontier_id, score in fused.items()})
        assert scaled.argmax() == fused.argmax()
