import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from lgrnav.agent.config import EpisodeConfig
from lgrnav.codec.grid_text import grid_rows
from lgrnav.errors import EpisodeConfigError, RankerError
from lgrnav.eval.baselines import select_baseline
from lgrnav.eval.metrics import spl_term
from lgrnav.mapping.belief import BeliefMap
from lgrnav.mapping.frontiers import FrontierList
from lgrnav.planner.astar import astar, distance_field, free_rows
from lgrnav.planner.executor import execute_path
from lgrnav.rankers.base import Ranker, RankerRequest
from lgrnav.ranking.assignment import accumulate, direction_scores, full_list_scores
from lgrnav.ranking.scores import RankVector
from lgrnav.ranking.selection import select_frontier
from lgrnav.world.generator import Scenario
from lgrnav.world.grid import NUM_DIRECTIONS, Cell, CellState, GroundTruthMap, ObjectInstance, Pose
from lgrnav.world.sensor import ViewObservation, is_visible, panoramic_scan

logger = logging.getLogger(__name__)

TARGET_DETECTED = "target-detected"
FRONTIERS_EXHAUSTED = "frontiers-exhausted"
STEP_BUDGET = "step-budget"
LENGTH_BUDGET = "length-budget"
RANKER_FAILURE = "ranker-failure"

# NoPath results after which a frontier cell is never listed again.
MAX_NO_PATH = 2


@dataclass(frozen=True)
class DecisionRecord:
    """One entry of the decision log. ``data`` holds JSON-native values only."""

    seq: int
    kind: str
    scan: int
    data: Mapping[str, Any] = field(default_factory=dict)

    def to_native(self) -> Dict[str, Any]:
        return {"seq": self.seq, "kind": self.kind, "scan": self.scan, **self.data}


@dataclass(frozen=True)
class EpisodeResult:
    """
    Outcome of one episode.

    :param success: 1 when the target was detected, else 0.
    :param traveled: Total length driven, across all replans.
    :param optimal: Shortest-path length from the start to a cell that sees the target (at least 1).
    :param reason: Why the episode ended.
    """

    success: int
    traveled: float
    optimal: float
    num_scans: int
    num_bumps: int
    num_moves: int
    reason: str
    target_object: str
    start: Cell
    decision_log: Tuple[DecisionRecord, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if self.success not in (0, 1):
            raise ValueError(f"success must be 0 or 1, got {self.success}")
        if self.traveled < 0 or not self.optimal > 0:
            raise ValueError("traveled must be nonnegative and optimal positive")

    @property
    def spl_term(self) -> float:
        return spl_term(self.success, self.traveled, self.optimal)

    def log_lines(self) -> List[Dict[str, Any]]:
        return [record.to_native() for record in self.decision_log]


def sighting_cells(world: GroundTruthMap, instances: Sequence[ObjectInstance], max_range: int) -> List[Cell]:
    """Free cells from which at least one of ``instances`` is visible; an object's own cell does not count."""
    cells = set()
    for obj in instances:
        ox, oy = obj.cell
        for y in range(max(0, oy - max_range), min(world.height, oy + max_range + 1)):
            for x in range(max(0, ox - max_range), min(world.width, ox + max_range + 1)):
                if (x, y) != obj.cell and world.is_free((x, y)) and is_visible(world, (x, y), obj.cell, max_range):
                    cells.add((x, y))
    return sorted(cells, key=lambda c: (c[1], c[0]))


def optimal_length(scenario: Scenario, target: str, start: Cell, max_range: int) -> float:
    """
    Ground-truth shortest path from ``start`` to the nearest cell that sees a ``target`` instance.

    :return: The distance, floored at 1 so immediate sightings keep a usable length.
    :raises EpisodeConfigError: If no such cell is reachable.
    """
    instances = [o for o in scenario.objects if o.class_name == target]
    dist = distance_field(free_rows(scenario.world), [start])
    best = min((float(dist[y, x]) for x, y in sighting_cells(scenario.world, instances, max_range)), default=math.inf)
    if math.isinf(best):
        raise EpisodeConfigError(f"no cell seeing a {target!r} is reachable from {start}")
    return max(best, 1.0)


def fallback_ranks(frontiers: FrontierList) -> RankVector:
    """Directions ordered by their nearest frontier seen in the current scan; empty directions last."""
    nearest = [math.inf] * NUM_DIRECTIONS
    for e in frontiers.seen_in_current_scan():
        nearest[e.last_direction] = min(nearest[e.last_direction], e.last_distance)
    return RankVector.from_order(sorted(range(NUM_DIRECTIONS), key=lambda k: (nearest[k], k)))


class _Finished(Exception):
    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


class EpisodeRunner:
    """
    Scan, rank, select, plan and move until the target is seen or the episode runs out.

    A runner holds the state of a single episode and is not shared between threads.
    """

    def __init__(
            self,
            scenario: Scenario,
            config: EpisodeConfig,
            ranker: Optional[Ranker] = None,
            optimal: Optional[float] = None,
    ) -> None:
        config.check(scenario)
        if config.policy.uses_ranker and ranker is None:
            raise EpisodeConfigError(f"policy {config.policy.value} needs a ranker")
        self.scenario = scenario
        self.config = config
        self.ranker = ranker
        self.optimal = optimal if optimal is not None else optimal_length(
            scenario, config.target_object, config.start.cell, config.sensor.max_range)
        if not self.optimal > 0:
            raise EpisodeConfigError(f"optimal length must be positive, got {self.optimal}")

        world = scenario.world
        self.rng = np.random.default_rng(config.seed)
        self.belief = BeliefMap(world.width, world.height)
        self.frontiers = FrontierList()
        self.pose = config.start
        self.traveled = 0.0
        self.moves = 0
        self.scans = 0
        self.bumps = 0
        self.queries = 0
        self.no_path: Dict[Cell, int] = {}
        self.log: List[DecisionRecord] = []

    def _record(self, kind: str, **data: Any) -> int:
        seq = len(self.log)
        self.log.append(DecisionRecord(seq, kind, self.scans, data))
        return seq

    def _check_budget(self) -> None:
        budget = self.config.budget
        if self.traveled > budget.length_multiplier * self.optimal:
            raise _Finished(LENGTH_BUDGET)
        if self.moves >= budget.max_steps:
            raise _Finished(STEP_BUDGET)

    def _mark_free(self, cells: Sequence[Cell]) -> None:
        for cell in cells:
            self.belief.mark(cell, CellState.FREE)

    def _scan(self) -> List[ViewObservation]:
        views = panoramic_scan(self.scenario.world, self.pose, self.config.sensor, self.scenario.objects, self.rng)
        self.scans += 1
        self._mark_free([self.pose.cell])
        for view in views:
            self.belief.integrate(view)

        data: Dict[str, Any] = {
            "pose": list(self.pose.cell),
            "detections": [view.class_names for view in views],
            "unknown": self.belief.unknown_count,
        }
        if self.config.log_belief:
            data["belief"] = grid_rows(self.belief)
        self._record("scan", **data)
        return views

    def _update_frontiers(self, views: Sequence[ViewObservation]) -> None:
        visible = {
            cell: view.direction_index
            for view in views
            for cell, state in view.visible_cells
            if state == CellState.FREE and self.belief.is_frontier(cell)
        }
        self.frontiers.update(self.belief, visible, self.pose.cell)

    def _rank(self, views: Sequence[ViewObservation]) -> None:
        request = RankerRequest(
            target_object=self.config.target_object,
            per_direction_objects=tuple(tuple(view.class_names) for view in views),
            categories=self.scenario.world.categories,
            episode_id=self.config.episode_id,
            query_index=self.queries,
        )
        self.queries += 1
        try:
            response = self.ranker.rank(request)
            ranks = response.direction_ranks
            self._record("rank", query=request.query_index, ranks=list(ranks.ranks),
                         rooms=list(response.per_direction_room), target_room=response.target_room)
        except RankerError as e:
            if not self.config.fallback_on_ranker_error:
                self._record("failure", reason=RANKER_FAILURE, error=str(e))
                raise _Finished(RANKER_FAILURE) from e
            logger.warning("ranker failed (%s), ordering directions by frontier distance", e)
            ranks = fallback_ranks(self.frontiers)
            self._record("fallback", query=request.query_index, ranks=list(ranks.ranks), error=str(e))

        self.frontiers.top_direction = ranks.top
        if self.config.full_list_ranking and len(self.frontiers) <= self.config.max_rankable_frontiers:
            scores = full_list_scores(self.frontiers, ranks, self.pose.cell, self.config.weights)
        else:
            scores = direction_scores(self.frontiers, ranks, self.config.weights)
        fused = accumulate(self.frontiers, scores)
        logger.debug("scan %d fused scores %s", self.scans, fused.items())

    def _select(self) -> int:
        if not len(self.frontiers):
            raise _Finished(FRONTIERS_EXHAUSTED)
        policy = self.config.policy
        if policy.uses_ranker:
            return select_frontier(self.frontiers, policy, self.rng)
        return select_baseline(self.frontiers, policy, self.rng, self.pose)

    def _navigate(self) -> None:
        """Drive to a selected frontier, replanning after bumps and reselecting after NoPath."""
        while True:
            frontier_id = self._select()
            entry = self.frontiers.get(frontier_id)
            selection = self._record("select", frontier=frontier_id, cell=list(entry.cell),
                                     score=entry.cumulative_score, policy=self.config.policy.value)
            goal = entry.cell
            while frontier_id in self.frontiers:
                path = astar(self.belief, self.pose.cell, goal, self.config.planning_mode)
                if path is None:
                    self.no_path[goal] = self.no_path.get(goal, 0) + 1
                    permanent = self.no_path[goal] >= MAX_NO_PATH
                    self.frontiers.remove(frontier_id, permanent=permanent)
                    self._record("drop", frontier=frontier_id, cell=list(goal), permanent=permanent)
                    if permanent:
                        logger.warning("frontier %s unreachable twice, dropped", goal)
                    break

                remaining = self.config.budget.max_steps - self.moves
                execution = execute_path(self.scenario.world, self.pose, path, max_steps=remaining)
                self.pose = execution.pose
                self.traveled += execution.traveled
                self.moves += len(execution.visited)
                self._mark_free(execution.visited)
                if execution.visited:
                    self._record("move", selection=selection, to=list(self.pose.cell),
                                 steps=len(execution.visited), length=execution.traveled)

                if execution.bump is not None:
                    self.bumps += 1
                    self.belief.mark(execution.bump.blocked_cell, CellState.OCCUPIED)
                    self._record("bump", cell=list(execution.bump.blocked_cell))
                self.frontiers.prune(self.belief)
                self._check_budget()
                if execution.bump is None:
                    return

    def run(self) -> EpisodeResult:
        target = self.config.target_object
        logger.info("episode %r: find %r from %s", self.config.episode_id, target, self.pose.cell)
        success, reason = 0, FRONTIERS_EXHAUSTED
        try:
            while True:
                views = self._scan()
                if any(obj.class_name == target for view in views for obj in view.detected_objects):
                    success, reason = 1, TARGET_DETECTED
                    if self.traveled == 0:
                        self.traveled = self.optimal
                    self._record("success", traveled=self.traveled)
                    break
                self._update_frontiers(views)
                if not len(self.frontiers):
                    raise _Finished(FRONTIERS_EXHAUSTED)
                if self.config.policy.uses_ranker:
                    self._rank(views)
                self._navigate()
        except _Finished as finished:
            reason = finished.reason
            if reason != RANKER_FAILURE:
                self._record("failure", reason=reason, traveled=self.traveled)

        logger.info("episode %r: %s after %d scans, traveled %.2f of optimal %.2f",
                    self.config.episode_id, reason, self.scans, self.traveled, self.optimal)
        return EpisodeResult(
            success=success,
            traveled=self.traveled,
            optimal=self.optimal,
            num_scans=self.scans,
            num_bumps=self.bumps,
            num_moves=self.moves,
            reason=reason,
            target_object=target,
            start=self.config.start.cell,
            decision_log=tuple(self.log),
        )


def run_episode(
        scenario: Scenario,
        config: EpisodeConfig,
        ranker: Optional[Ranker] = None,
        optimal: Optional[float] = None,
) -> EpisodeResult:
    """
    Run one object-goal navigation episode.

    :param scenario: World, objects and prior.
    :param config: Target, start and policy.
    :param ranker: Ranking backend; required for ranked policies.
    :param optimal: Precomputed optimal length, to skip recomputing it.
    :raises EpisodeConfigError: If the configuration does not fit the scenario.
    """
    return EpisodeRunner(scenario, config, ranker, optimal).run()
