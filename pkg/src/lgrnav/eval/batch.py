import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import yaml

from lgrnav.agent.config import Budget, EpisodeConfig
from lgrnav.agent.episode import EpisodeResult, optimal_length, run_episode
from lgrnav.codec.scenario_codec import ScenarioCodec
from lgrnav.errors import BatchConfigError
from lgrnav.eval.metrics import compute_spl, success_rate
from lgrnav.eval.report import CsvWriter, JsonLinesWriter, JsonWriter, TextTableWriter, YamlWriter
from lgrnav.planner.astar import distance_field, free_rows
from lgrnav.rankers.base import Ranker
from lgrnav.rankers.oracle import OracleRanker
from lgrnav.ranking.scores import WeightConfig
from lgrnav.ranking.selection import SelectionPolicy
from lgrnav.world.generator import GenerationParams, Scenario, generate_scenario
from lgrnav.world.grid import NUM_DIRECTIONS, Cell, Pose
from lgrnav.world.sensor import SensorConfig

logger = logging.getLogger(__name__)

LGR_ORACLE = "lgr-oracle"
LGR_LLM = "lgr-llm"
RANDOM_FRONTIER = "random-frontier"
NEAREST_FRONTIER = "nearest-frontier"

METHOD_POLICIES: Dict[str, SelectionPolicy] = {
    LGR_ORACLE: SelectionPolicy.ARGMAX_FUSED,
    LGR_LLM: SelectionPolicy.ARGMAX_FUSED,
    RANDOM_FRONTIER: SelectionPolicy.RANDOM_FRONTIER,
    NEAREST_FRONTIER: SelectionPolicy.NEAREST_FRONTIER,
}

REPORT_HEADER = (
    "Success: the target class is detected in any of the eight views.",
    "Optimal length: ground-truth shortest path to the nearest cell that sees the target, at least 1.",
    "Immediate sightings count as traveled = optimal.",
)

# Makes a fresh ranker for a method on a scenario; None for baseline methods.
RankerFactory = Callable[[str, Scenario], Optional[Ranker]]


@dataclass(frozen=True)
class BatchConfig:
    """
    Paired comparison of methods over scenarios.

    :param scenario_seeds: Seeds of generated scenarios.
    :param scenario_files: Scenario JSON files, run after the generated ones.
    :param episodes_per_scenario: (start, target) pairs per scenario.
    :param shared_pairs: Give every method the same pairs; otherwise pairs are drawn per method.
    :param min_separation: Least ground-truth path distance from the start to any target instance.
    :param workers: Episodes run concurrently.
    """

    scenario_seeds: Tuple[int, ...] = ()
    scenario_files: Tuple[str, ...] = ()
    episodes_per_scenario: int = 100
    methods: Tuple[str, ...] = (LGR_ORACLE, RANDOM_FRONTIER)
    shared_pairs: bool = True
    output_dir: str = "reports"
    master_seed: int = 0
    min_separation: float = 15.0
    workers: int = 4
    policy: SelectionPolicy = SelectionPolicy.ARGMAX_FUSED
    full_list_ranking: bool = False
    generation: GenerationParams = field(default_factory=GenerationParams)
    budget: Budget = field(default_factory=Budget)
    sensor: SensorConfig = field(default_factory=SensorConfig)
    weights: WeightConfig = field(default_factory=WeightConfig)

    def __post_init__(self) -> None:
        if not self.scenario_seeds and not self.scenario_files:
            raise BatchConfigError("a batch needs scenario_seeds or scenario_files")
        if self.episodes_per_scenario < 1:
            raise BatchConfigError("episodes_per_scenario must be positive")
        if not self.methods:
            raise BatchConfigError("a batch needs at least one method")
        unknown = [m for m in self.methods if m not in METHOD_POLICIES]
        if unknown:
            raise BatchConfigError(f"unknown methods {unknown}; choose from {list(METHOD_POLICIES)}")
        if len(set(self.methods)) != len(self.methods):
            raise BatchConfigError("methods must not repeat")
        if self.workers < 1:
            raise BatchConfigError("workers must be positive")
        if self.min_separation < 0:
            raise BatchConfigError("min_separation must be nonnegative")
        try:
            policy = SelectionPolicy(self.policy)
        except ValueError as e:
            raise BatchConfigError(str(e)) from e
        if not policy.uses_ranker:
            raise BatchConfigError("policy applies to the LGR methods and must be a ranked policy")
        object.__setattr__(self, "policy", policy)
        object.__setattr__(self, "scenario_seeds", tuple(int(s) for s in self.scenario_seeds))
        object.__setattr__(self, "scenario_files", tuple(str(f) for f in self.scenario_files))
        object.__setattr__(self, "methods", tuple(self.methods))

    @classmethod
    def from_native(cls, data: Mapping[str, Any]) -> "BatchConfig":
        """
        Build from a parsed YAML/JSON mapping; nested sections map to their dataclasses.

        :raises BatchConfigError: On unknown keys or invalid values.
        """
        if not isinstance(data, Mapping):
            raise BatchConfigError("batch configuration must be a mapping")
        nested = {"generation": GenerationParams, "budget": Budget, "sensor": SensorConfig, "weights": WeightConfig}
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise BatchConfigError(f"unknown batch configuration keys {unknown}")
        kwargs: Dict[str, Any] = {}
        try:
            for key, value in data.items():
                if key in nested:
                    section = nested[key]
                    allowed = {f.name for f in dataclasses.fields(section)}
                    extra = sorted(set(value or {}) - allowed)
                    if extra:
                        raise BatchConfigError(f"unknown keys {extra} in section {key!r}")
                    value = section(**(value or {}))
                elif key in ("scenario_seeds", "scenario_files", "methods"):
                    value = tuple(value or ())
                kwargs[key] = value
            return cls(**kwargs)
        except (TypeError, ValueError) as e:
            if isinstance(e, BatchConfigError):
                raise
            raise BatchConfigError(f"invalid batch configuration: {e}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "BatchConfig":
        """Read a YAML (or JSON) batch file."""
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise BatchConfigError(f"{path} is not valid YAML: {e}") from e
        return cls.from_native(data or {})

    def to_native(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["scenario_seeds"] = list(self.scenario_seeds)
        data["scenario_files"] = list(self.scenario_files)
        data["methods"] = list(self.methods)
        data["policy"] = self.policy.value
        data["generation"]["categories"] = list(self.generation.categories)
        return data


@dataclass(frozen=True)
class EpisodePair:
    """A (start, target) pair and the episode seed shared by every method that runs it."""

    scenario: str
    pair_id: int
    target: str
    start: Pose
    optimal: float
    seed: int


@dataclass(frozen=True)
class EpisodeRow:
    scenario: str
    pair_id: int
    method: str
    result: EpisodeResult

    def to_native(self) -> Dict[str, Any]:
        r = self.result
        return {
            "scenario": self.scenario,
            "pair_id": self.pair_id,
            "method": self.method,
            "target": r.target_object,
            "start_x": r.start[0],
            "start_y": r.start[1],
            "success": r.success,
            "traveled": round(r.traveled, 6),
            "optimal": round(r.optimal, 6),
            "spl_term": round(r.spl_term, 6),
            "num_scans": r.num_scans,
            "num_bumps": r.num_bumps,
            "reason": r.reason,
        }


def episode_seed(master_seed: int, scenario_index: int, pair_id: int) -> int:
    """Seed for one pair, independent of execution order."""
    return int(np.random.SeedSequence([master_seed, scenario_index, pair_id]).generate_state(1)[0])


def sample_pairs(
        scenario: Scenario,
        name: str,
        count: int,
        rng: np.random.Generator,
        seed_of: Callable[[int], int],
        min_separation: float = 15.0,
        max_range: int = 12,
) -> List[EpisodePair]:
    """
    Draw ``count`` pairs: a target instance, then a free start at least
    ``min_separation`` path length away from every instance of its class.

    :raises BatchConfigError: If the scenario admits no such pair.
    """
    world = scenario.world
    rows = free_rows(world)
    free = world.free_cells()
    far_cells: Dict[str, List[Cell]] = {}
    for class_name in sorted({o.class_name for o in scenario.objects}):
        dist = distance_field(rows, [o.cell for o in scenario.objects if o.class_name == class_name])
        far_cells[class_name] = [c for c in free if min_separation <= dist[c[1], c[0]] < math.inf]

    eligible = [o for o in scenario.objects if far_cells[o.class_name]]
    if not eligible:
        raise BatchConfigError(f"scenario {name} has no start {min_separation} cells away from any target")

    pairs = []
    for pair_id in range(count):
        target = eligible[int(rng.integers(len(eligible)))].class_name
        candidates = far_cells[target]
        start = Pose(candidates[int(rng.integers(len(candidates)))], int(rng.integers(NUM_DIRECTIONS)))
        optimal = optimal_length(scenario, target, start.cell, max_range)
        pairs.append(EpisodePair(name, pair_id, target, start, optimal, seed_of(pair_id)))
    return pairs


def default_ranker_factory(method: str, scenario: Scenario) -> Optional[Ranker]:
    if method == LGR_ORACLE:
        return OracleRanker(scenario.prior)
    if method == LGR_LLM:
        from lgrnav.rankers.llm import EndpointConfig, LlmRanker
        return LlmRanker(EndpointConfig.from_env())
    return None


@dataclass
class SplReport:
    """Per-episode rows and per-method aggregates of a batch."""

    config: BatchConfig
    rows: List[EpisodeRow]
    scenarios: List[str]

    def results(self, method: str, scenario: Optional[str] = None) -> List[EpisodeResult]:
        return [row.result for row in self.rows
                if row.method == method and (scenario is None or row.scenario == scenario)]

    def spl(self, method: str, scenario: Optional[str] = None) -> float:
        return compute_spl(self.results(method, scenario))

    def summary(self) -> Dict[str, Any]:
        methods = {}
        for method in self.config.methods:
            results = self.results(method)
            methods[method] = {
                "episodes": len(results),
                "spl": round(compute_spl(results), 6),
                "success_rate": round(success_rate(results), 6),
                "mean_traveled": round(sum(r.traveled for r in results) / len(results), 6),
                "per_scenario_spl": {s: round(self.spl(method, s), 6) for s in self.scenarios},
            }
        return {
            "methods": methods,
            "scenarios": list(self.scenarios),
            "seeds": {"master_seed": self.config.master_seed, "scenario_seeds": list(self.config.scenario_seeds)},
            "config": self.config.to_native(),
        }

    def table_rows(self) -> List[Dict[str, Any]]:
        """Methods as rows, scenarios as columns, LGR methods annotated with their change over random-frontier."""
        baseline = RANDOM_FRONTIER if RANDOM_FRONTIER in self.config.methods else None
        columns = list(self.scenarios) + ["overall"]
        rows = []
        for method in self.config.methods:
            row: Dict[str, Any] = {"method": method}
            for column in columns:
                scenario = None if column == "overall" else column
                value = self.spl(method, scenario)
                text = f"{value:.3f}"
                if baseline and method.startswith("lgr-"):
                    base = self.spl(baseline, scenario)
                    text += f" ({(value - base) / base * 100:+.1f}%)" if base > 0 else " (n/a)"
                row[column] = text
            rows.append(row)
        return rows

    def write(self, out_dir: Union[str, Path]) -> Dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "episodes": out / "episodes.csv",
            "summary": out / "summary.json",
            "table": out / "table.txt",
            "config": out / "config.yaml",
            "decisions": out / "decisions.jsonl",
        }
        CsvWriter().write([row.to_native() for row in self.rows], str(paths["episodes"]))
        JsonWriter().write(self.summary(), str(paths["summary"]))
        TextTableWriter(REPORT_HEADER).write(self.table_rows(), str(paths["table"]))
        YamlWriter().write(self.config.to_native(), str(paths["config"]))
        decisions = [
            {"scenario": row.scenario, "pair_id": row.pair_id, "method": row.method, **line}
            for row in self.rows for line in row.result.log_lines()
        ]
        JsonLinesWriter().write(decisions, str(paths["decisions"]))
        logger.info("report written to %s", out)
        return paths


def load_scenarios(config: BatchConfig) -> List[Tuple[str, Scenario]]:
    """
    Generated scenarios first, in seed order, then files.

    :raises ScenarioFormatError: If a file cannot be read as a scenario.
    """
    scenarios = [(f"seed-{seed}", generate_scenario(seed, config.generation)) for seed in config.scenario_seeds]
    codec = ScenarioCodec()
    for path in config.scenario_files:
        scenarios.append((Path(path).stem, codec.load(path)))
    return scenarios


def failed_methods(report: SplReport) -> List[str]:
    """Methods without a single successful episode."""
    return [m for m in report.config.methods if not any(r.success for r in report.results(m))]


def run_batch(config: BatchConfig, ranker_factory: RankerFactory = default_ranker_factory) -> SplReport:
    """
    Run every method on every scenario's pairs.

    Results do not depend on ``config.workers``: each episode draws from its
    own seed, and rows are ordered by scenario, pair and method.
    """
    scenarios = load_scenarios(config)
    jobs = []
    for index, (name, scenario) in enumerate(scenarios):
        def seed_of(pair_id: int, _index: int = index) -> int:
            return episode_seed(config.master_seed, _index, pair_id)

        shared = None
        for m, method in enumerate(config.methods):
            if shared is None or not config.shared_pairs:
                rng = np.random.default_rng(np.random.SeedSequence(
                    [config.master_seed, index] + ([] if config.shared_pairs else [m])))
                shared = sample_pairs(scenario, name, config.episodes_per_scenario, rng, seed_of,
                                      config.min_separation, config.sensor.max_range)
            ranker = ranker_factory(method, scenario)
            for pair in shared:
                jobs.append((index, m, method, scenario, pair, ranker))
    logger.info("batch: %d scenarios, %d methods, %d episodes", len(scenarios), len(config.methods), len(jobs))

    def run(job) -> Tuple[int, int, int, EpisodeRow]:
        index, m, method, scenario, pair, ranker = job
        episode = EpisodeConfig(
            target_object=pair.target,
            start=pair.start,
            policy=config.policy if METHOD_POLICIES[method].uses_ranker else METHOD_POLICIES[method],
            budget=config.budget,
            seed=pair.seed,
            weights=config.weights,
            sensor=config.sensor,
            full_list_ranking=config.full_list_ranking,
            episode_id=f"{pair.scenario}/{pair.pair_id}/{method}",
        )
        result = run_episode(scenario, episode, ranker, optimal=pair.optimal)
        return index, pair.pair_id, m, EpisodeRow(pair.scenario, pair.pair_id, method, result)

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        finished = list(pool.map(run, jobs))
    finished.sort(key=lambda item: item[:3])

    report = SplReport(config, [row for *_, row in finished], [name for name, _ in scenarios])
    for method in failed_methods(report):
        logger.warning("method %s failed every episode", method)
    return report
