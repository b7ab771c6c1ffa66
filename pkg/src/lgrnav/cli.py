import argparse
import json
import logging
from pathlib import Path
from typing import Optional, Sequence

from lgrnav.agent.config import Budget, EpisodeConfig
from lgrnav.agent.episode import RANKER_FAILURE, EpisodeResult, run_episode
from lgrnav.codec.grid_text import GridTextCodec
from lgrnav.codec.scenario_codec import ScenarioCodec
from lgrnav.errors import LgrError, RankerError
from lgrnav.eval.batch import LGR_LLM, BatchConfig, default_ranker_factory, run_batch
from lgrnav.eval.report import JsonLinesWriter
from lgrnav.prompts.transcript import TranscriptLog
from lgrnav.rankers.base import Ranker
from lgrnav.rankers.llm import EndpointConfig, LlmRanker
from lgrnav.rankers.oracle import OracleRanker
from lgrnav.rankers.replay import RecordingRanker, ReplayRanker
from lgrnav.ranking.selection import SelectionPolicy
from lgrnav.world.generator import GenerationParams, Scenario, generate_scenario
from lgrnav.world.grid import Cell, Pose

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_EPISODE_FAILED = 1
EXIT_CONFIG = 3
EXIT_RANKER = 4

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _cell(text: str) -> Cell:
    try:
        x, y = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    return x, y


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenario", help="scenario JSON file")
    source.add_argument("--scenario-seed", type=int, help="generate the scenario from this seed")


def _add_episode_args(parser: argparse.ArgumentParser) -> None:
    _add_scenario_args(parser)
    parser.add_argument("--target", required=True, help="object class to find")
    parser.add_argument("--start", required=True, type=_cell, help="start cell as X,Y")
    parser.add_argument("--heading", type=int, default=0, help="start heading 0..7")
    parser.add_argument("--policy", default=SelectionPolicy.ARGMAX_FUSED.value,
                        choices=[p.value for p in SelectionPolicy])
    parser.add_argument("--seed", type=int, default=0, help="episode seed (random selection, detector dropout)")
    parser.add_argument("--episode-id", default="episode")
    parser.add_argument("--max-steps", type=int, default=500)
    parser.add_argument("--full-list", action="store_true", help="rank every frontier when few are listed")
    parser.add_argument("--no-fallback", action="store_true", help="end the episode when the ranker fails")
    parser.add_argument("--log", help="write the decision log as JSON Lines")
    parser.add_argument("--log-belief", action="store_true", help="add belief snapshots to scan records")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lgr-nav", description="Frontier exploration ranked by a language model")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate a scenario file")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--width", type=int, default=48)
    gen.add_argument("--height", type=int, default=48)
    gen.add_argument("--min-rooms", type=int, default=6)
    gen.add_argument("--max-rooms", type=int, default=10)
    gen.add_argument("--out", required=True)
    gen.add_argument("--show", action="store_true", help="print the terrain")

    run = commands.add_parser("run", help="run one episode")
    _add_episode_args(run)
    run.add_argument("--ranker", choices=["oracle", "llm"], default="oracle")
    run.add_argument("--transcript", help="record ranker exchanges as JSON Lines")

    replay = commands.add_parser("replay", help="run one episode against a recorded transcript")
    _add_episode_args(replay)
    replay.add_argument("--transcript", required=True)

    batch = commands.add_parser("batch", help="run a paired comparison")
    batch.add_argument("--config", required=True)
    batch.add_argument("--out", help="output directory; overrides the configuration")
    batch.add_argument("--workers", type=int)
    batch.add_argument("--transcript", help="record lgr-llm exchanges as JSON Lines")
    return parser


def _load_scenario(args: argparse.Namespace) -> Scenario:
    if args.scenario:
        return ScenarioCodec().load(args.scenario)
    return generate_scenario(args.scenario_seed)


def _episode_config(args: argparse.Namespace) -> EpisodeConfig:
    return EpisodeConfig(
        target_object=args.target,
        start=Pose(args.start, args.heading),
        policy=SelectionPolicy(args.policy),
        budget=Budget(max_steps=args.max_steps),
        seed=args.seed,
        full_list_ranking=args.full_list,
        fallback_on_ranker_error=not args.no_fallback,
        log_belief=args.log_belief,
        episode_id=args.episode_id,
    )


def _finish_episode(result: EpisodeResult, args: argparse.Namespace) -> int:
    if args.log:
        JsonLinesWriter().write(result.log_lines(), args.log)
    print(json.dumps({
        "success": result.success,
        "reason": result.reason,
        "traveled": round(result.traveled, 6),
        "optimal": round(result.optimal, 6),
        "spl_term": round(result.spl_term, 6),
        "num_scans": result.num_scans,
        "num_bumps": result.num_bumps,
    }))
    if result.reason == RANKER_FAILURE:
        return EXIT_RANKER
    return EXIT_OK if result.success else EXIT_EPISODE_FAILED


def cmd_gen(args: argparse.Namespace) -> int:
    params = GenerationParams(width=args.width, height=args.height,
                              min_rooms=args.min_rooms, max_rooms=args.max_rooms)
    scenario = generate_scenario(args.seed, params)
    ScenarioCodec().save(scenario, args.out)
    if args.show:
        print(GridTextCodec().read(scenario.world), end="")
    print(f"scenario written to {args.out}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    config = _episode_config(args)
    ranker: Optional[Ranker] = None
    if config.policy.uses_ranker:
        ranker = OracleRanker(scenario.prior) if args.ranker == "oracle" else LlmRanker(EndpointConfig.from_env())
        if args.transcript:
            ranker = RecordingRanker(ranker, TranscriptLog(args.transcript))
    return _finish_episode(run_episode(scenario, config, ranker), args)


def cmd_replay(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    return _finish_episode(run_episode(scenario, _episode_config(args), ReplayRanker.from_file(args.transcript)), args)


def cmd_batch(args: argparse.Namespace) -> int:
    config = BatchConfig.load(args.config)
    out = args.out or config.output_dir
    if args.workers:
        config = BatchConfig.from_native({**config.to_native(), "workers": args.workers})

    factory = default_ranker_factory
    if LGR_LLM in config.methods:
        llm: Ranker = LlmRanker(EndpointConfig.from_env())
        if args.transcript:
            llm = RecordingRanker(llm, TranscriptLog(args.transcript))

        def factory(method, scenario):
            return llm if method == LGR_LLM else default_ranker_factory(method, scenario)

    report = run_batch(config, factory)
    paths = report.write(out)
    print(Path(paths["table"]).read_text(encoding="utf-8"), end="")
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "replay": cmd_replay, "batch": cmd_batch}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        return COMMANDS[args.command](args)
    except RankerError as e:
        logger.error("%s", e)
        return EXIT_RANKER
    except (LgrError, OSError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG
