from unittest.mock import MagicMock

import numpy as np
import pytest

from lgrnav.agent.config import Budget, EpisodeConfig
from lgrnav.agent.episode import (
    FRONTIERS_EXHAUSTED,
    LENGTH_BUDGET,
    RANKER_FAILURE,
    STEP_BUDGET,
    TARGET_DETECTED,
    EpisodeRunner,
    fallback_ranks,
    optimal_length,
    run_episode,
    sighting_cells,
)
from lgrnav.errors import EpisodeConfigError, RankerError
from lgrnav.mapping.belief import BeliefMap
from lgrnav.mapping.frontiers import FrontierList
from lgrnav.rankers.base import Ranker
from lgrnav.rankers.llm import EndpointConfig, LlmRanker, RateLimiter
from lgrnav.rankers.oracle import OracleRanker
from lgrnav.ranking.scores import WeightConfig
from lgrnav.ranking.selection import SelectionPolicy
from lgrnav.world.generator import generate_scenario
from lgrnav.world.grid import CellState, Pose
from lgrnav.world.sensor import SensorConfig

CORRIDOR = ["#" * 30, "#" + "." * 28 + "#", "#" * 30]
OPEN_ROOM = ["#######"] + ["#.....#"] * 5 + ["#######"]
SPLIT = ["#########", "#...#...#", "#...#...#", "#########"]
SHORT_SIGHT = SensorConfig(max_range=5)


class FailingRanker(Ranker):
    name = "failing"

    def rank(self, request):
        raise RankerError("model unavailable")


@pytest.fixture
def corridor(scenario_from_rows):
    """
    A long corridor with a tv at the far end.
    """
    return scenario_from_rows(CORRIDOR, [("tv", (28, 1))])


def corridor_config(**kwargs):
    return EpisodeConfig("tv", Pose((1, 1)), sensor=SHORT_SIGHT, episode_id="corridor", **kwargs)


def test_sighting_cells_and_optimal_length(corridor):
    """
    The optimal length runs to the nearest cell that sees the target.
    """
    tv = corridor.objects
    assert sighting_cells(corridor.world, tv, 5) == [(x, 1) for x in range(23, 28)]
    assert optimal_length(corridor, "tv", (1, 1), 5) == pytest.approx(22.0)
    assert optimal_length(corridor, "tv", (25, 1), 5) == 1.0


def test_unreachable_target(scenario_from_rows):
    """
    A target no reachable cell can see is a configuration error.
    """
    scenario = scenario_from_rows(SPLIT, [("tv", (6, 1))])
    with pytest.raises(EpisodeConfigError):
        optimal_length(scenario, "tv", (1, 1), 12)


def test_ranked_policy_needs_ranker(corridor):
    """
    Ranking policies cannot run without a ranker.
    """
    with pytest.raises(EpisodeConfigError):
        EpisodeRunner(corridor, corridor_config())


def test_immediate_detection(scenario_from_rows):
    """
    A target seen from the start ends the episode at once with a perfect score.
    """
    scenario = scenario_from_rows(OPEN_ROOM, [("tv", (4, 3))])
    result = run_episode(scenario, EpisodeConfig("tv", Pose((2, 3))), OracleRanker())
    assert result.success == 1
    assert result.reason == TARGET_DETECTED
    assert result.num_scans == 1
    assert result.traveled == result.optimal == 1.0
    assert result.spl_term == 1.0
    assert [r["kind"] for r in result.log_lines()] == ["scan", "success"]


def test_sealed_room_exhausts_frontiers(scenario_from_rows):
    """
    With nothing left to explore the episode fails after one scan.
    """
    scenario = scenario_from_rows(SPLIT, [("tv", (6, 1))])
    result = run_episode(scenario, EpisodeConfig("tv", Pose((2, 1))), OracleRanker(), optimal=5.0)
    assert result.success == 0
    assert result.reason == FRONTIERS_EXHAUSTED
    assert result.num_scans == 1
    assert result.traveled == 0.0
    assert result.spl_term == 0.0
    assert result.log_lines()[-1] == {"seq": 1, "kind": "failure", "scan": 1,
                                      "reason": FRONTIERS_EXHAUSTED, "traveled": 0.0}


@pytest.mark.parametrize("policy", list(SelectionPolicy))
def test_corridor_success(corridor, policy):
    """
    Every policy walks down the corridor and finds the target.
    """
    result = run_episode(corridor, corridor_config(policy=policy), OracleRanker())
    assert result.success == 1
    assert result.reason == TARGET_DETECTED
    assert result.num_scans > 1
    assert result.traveled >= result.optimal - 1e-9
    assert 0 < result.spl_term <= 1.0


def test_full_list_ranking_with_vanishing_weights(corridor):
    """
    Distance weights that underflow to zero leave a full-list episode running.
    """
    config = corridor_config(full_list_ranking=True, weights=WeightConfig(tau=0.001))
    result = run_episode(corridor, config, OracleRanker())
    assert result.success == 1
    assert result.reason == TARGET_DETECTED


def test_decision_log_is_deterministic(corridor):
    """
    Two runs with the same inputs write the same decision log.
    """
    config = corridor_config(policy=SelectionPolicy.PROTO_RANDOM, seed=3, log_belief=True)
    first = run_episode(corridor, config, OracleRanker())
    second = run_episode(corridor, config, OracleRanker())
    assert first.log_lines() == second.log_lines()
    assert first == second
    scans = [r for r in first.log_lines() if r["kind"] == "scan"]
    assert scans[0]["belief"][1][1] == "."


def test_moves_reference_selections(corridor):
    """
    Every move record points back at the selection it serves.
    """
    log = run_episode(corridor, corridor_config(), OracleRanker()).log_lines()
    kinds = {r["seq"]: r["kind"] for r in log}
    moves = [r for r in log if r["kind"] == "move"]
    assert moves
    for move in moves:
        assert kinds[move["selection"]] == "select"
        assert move["selection"] < move["seq"]
    assert [r["seq"] for r in log] == list(range(len(log)))


def test_ranker_failure_ends_episode(corridor):
    """
    Without fallback a ranker error ends the episode.
    """
    result = run_episode(corridor, corridor_config(fallback_on_ranker_error=False), FailingRanker())
    assert result.success == 0
    assert result.reason == RANKER_FAILURE
    last = result.log_lines()[-1]
    assert last["kind"] == "failure" and last["error"] == "model unavailable"


def test_ranker_failure_falls_back(corridor):
    """
    With fallback the episode continues on distance-ordered directions.
    """
    result = run_episode(corridor, corridor_config(), FailingRanker())
    assert result.success == 1
    kinds = [r["kind"] for r in result.log_lines()]
    assert "fallback" in kinds and "rank" not in kinds


def test_unparseable_model_falls_back(corridor):
    """
    A model that never answers in format still lets the episode finish.
    """
    response = MagicMock()
    response.json.return_value = {"choices": [{"message": {"content": "no idea, sorry!"}}]}
    session = MagicMock()
    session.post.return_value = response
    ranker = LlmRanker(EndpointConfig(url="http://model.test", retries=1), session=session,
                       rate_limiter=MagicMock(spec=RateLimiter))
    result = run_episode(corridor, corridor_config(), ranker)
    assert result.success == 1
    assert all(r["kind"] != "rank" for r in result.log_lines())


def test_step_budget(corridor):
    """
    The episode stops once the move budget is spent.
    """
    result = run_episode(corridor, corridor_config(budget=Budget(max_steps=3)), OracleRanker())
    assert result.reason == STEP_BUDGET
    assert result.num_moves == 3


def test_length_budget(corridor):
    """
    The episode stops once it drove too far relative to the optimal length.
    """
    result = run_episode(corridor, corridor_config(budget=Budget(length_multiplier=0.1)), OracleRanker())
    assert result.reason == LENGTH_BUDGET
    assert result.traveled > 0.1 * result.optimal


def test_fallback_ranks():
    """
    Directions with nearer frontiers rank higher and empty ones come last.
    """
    belief = BeliefMap(11, 11)
    for cell in ((8, 5), (5, 8), (6, 5)):
        belief.mark(cell, CellState.FREE)
    frontiers = FrontierList().update(belief, {(8, 5): 0, (6, 5): 0, (5, 8): 2}, (5, 5))
    ranks = fallback_ranks(frontiers)
    assert ranks.order()[:2] == [0, 2]
    assert ranks.order()[2:] == [1, 3, 4, 5, 6, 7]


def test_baseline_runs_without_ranker(corridor):
    """
    Baseline policies need no ranker and leave no rank records.
    """
    result = run_episode(corridor, corridor_config(policy=SelectionPolicy.NEAREST_FRONTIER))
    assert result.success == 1
    assert {r["kind"] for r in result.log_lines()} <= {"scan", "select", "move", "bump", "drop", "success"}


def _terminates(seeds, small_params):
    reasons = {TARGET_DETECTED, FRONTIERS_EXHAUSTED, STEP_BUDGET, LENGTH_BUDGET}
    for seed in seeds:
        scenario = generate_scenario(seed, small_params)
        if not scenario.objects:
            continue
        rng = np.random.default_rng(seed)
        free = scenario.world.free_cells()
        start = free[int(rng.integers(len(free)))]
        target = scenario.objects[int(rng.integers(len(scenario.objects)))].class_name
        for policy in SelectionPolicy:
            config = EpisodeConfig(target, Pose(start), policy=policy, seed=seed)
            result = run_episode(scenario, config, OracleRanker(scenario.prior))
            assert result.reason in reasons
            assert result.num_moves <= config.budget.max_steps
            if result.success:
                assert result.traveled >= result.optimal - 1e-9


def test_episodes_terminate(small_params):
    """
    Episodes on small generated apartments always end for a known reason.
    """
    _terminates(range(25), small_params)


@pytest.mark.slow
def test_episodes_terminate_many(small_params):
    """
    The same holds over a thousand apartments.
    """
    _terminates(range(1000), small_params)
