from dataclasses import dataclass, field

from lgrnav.errors import EpisodeConfigError, InvalidPoseError
from lgrnav.planner.astar import PlanningMode
from lgrnav.ranking.scores import WeightConfig
from lgrnav.ranking.selection import SelectionPolicy
from lgrnav.world.generator import Scenario
from lgrnav.world.grid import Pose
from lgrnav.world.sensor import SensorConfig


@dataclass(frozen=True)
class Budget:
    """
    Episode limits.

    :param max_steps: Most cell-to-cell moves.
    :param length_multiplier: Traveled length may not exceed this multiple of the optimal length.
    """

    max_steps: int = 500
    length_multiplier: float = 10.0

    def __post_init__(self) -> None:
        if self.max_steps < 1:
            raise EpisodeConfigError(f"max_steps must be positive, got {self.max_steps}")
        if not self.length_multiplier > 0:
            raise EpisodeConfigError(f"length_multiplier must be positive, got {self.length_multiplier}")


@dataclass(frozen=True)
class EpisodeConfig:
    """
    One navigation episode.

    :param target_object: Class name to find.
    :param start: Start pose.
    :param policy: Frontier selection policy.
    :param seed: Seed of the episode generator (random selection, detector dropout).
    :param full_list_ranking: Rank every listed frontier when there are few enough of them.
    :param fallback_on_ranker_error: Order directions by frontier distance when the ranker fails,
        instead of ending the episode.
    :param log_belief: Attach a text snapshot of the belief to every scan record.
    :param episode_id: Tag carried into ranker requests and transcripts.
    """

    target_object: str
    start: Pose
    policy: SelectionPolicy = SelectionPolicy.ARGMAX_FUSED
    budget: Budget = field(default_factory=Budget)
    seed: int = 0
    weights: WeightConfig = field(default_factory=WeightConfig)
    sensor: SensorConfig = field(default_factory=SensorConfig)
    planning_mode: PlanningMode = PlanningMode.OPTIMISTIC_UNKNOWN
    full_list_ranking: bool = False
    max_rankable_frontiers: int = 8
    fallback_on_ranker_error: bool = True
    log_belief: bool = False
    episode_id: str = ""

    def __post_init__(self) -> None:
        if not self.target_object:
            raise EpisodeConfigError("target_object must not be empty")
        try:
            object.__setattr__(self, "policy", SelectionPolicy(self.policy))
            object.__setattr__(self, "planning_mode", PlanningMode(self.planning_mode))
        except ValueError as e:
            raise EpisodeConfigError(str(e)) from e
        if self.max_rankable_frontiers < 1:
            raise EpisodeConfigError("max_rankable_frontiers must be positive")

    def check(self, scenario: Scenario) -> None:
        """
        :raises EpisodeConfigError: If the target class is absent or the start is unusable.
        """
        if not any(obj.class_name == self.target_object for obj in scenario.objects):
            raise EpisodeConfigError(f"no {self.target_object!r} in the scenario")
        try:
            scenario.world.check_pose(self.start)
        except InvalidPoseError as e:
            raise EpisodeConfigError(f"bad start: {e}") from e
