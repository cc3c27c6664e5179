"""命令行入口: evolve / suite / replay / hardness。

取值优先级: 内置默认 < --config JSON 文件 < 命令行参数。配置文件的键就是长参数名(横线或下划线均可)。
退出码: 0 成功, 2 配置错误, 3 运行错误, 4 I/O 错误。
"""
import argparse
from dataclasses import asdict, dataclass, fields, replace
import json
from pathlib import Path
import sys
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple, Union, get_type_hints

from .errors import ConfigError, MingaError, ReportIOError
from .evolution import EvolutionConfig, evolve
from .experiment import (
    BUILTIN_SUITES,
    DEFAULT_SUITES,
    ConvergenceCriterion,
    builtin_suite,
    compare_hardness,
    run_suite,
    write_report,
)
from .game import ArenaLayout, GameConfig, build_arena, format_step, play_game, render_state
from .genome import load_genome, save_genome
from .logger import logger
from .objectives import ObjectiveSelector
from .utils.rng import make_rng


Command = Literal["evolve", "suite", "replay", "hardness"]

COMMANDS: Tuple[str, ...] = ("evolve", "suite", "replay", "hardness")

_OBJECTIVE_CHOICES = ("lifespan", "life", "challenge", "usability", "combined", "sum")
_MODE_CHOICES = ("ranked", "unranked", "RankedTopK", "UnrankedUniform")
_CRITERION_CHOICES = ("threshold", "stagnation")


@dataclass(frozen=True)
class CliConfig:
    """一次命令行调用的全部有效取值。"""

    command: Command
    config: Optional[str] = None
    seed: int = 0
    master_seed: int = 0
    master_seeds: Tuple[int, ...] = tuple(range(10))
    runs: int = 6
    generations: int = 100
    steps: int = 100
    long_game: bool = False
    games: int = 10
    population: int = 20
    elite: int = 10
    objective: str = "combined"
    mode: str = "ranked"
    output: str = "results"
    raw: bool = False
    render: bool = False
    score_max: int = 30
    mu: Optional[float] = None
    sigma: Optional[float] = None
    pc: float = 0.5
    pm: float = 0.5
    jobs: int = 1
    genome: Optional[str] = None
    criterion: str = "threshold"
    theta: float = 0.95
    window: int = 50
    epsilon: float = 1e-6
    early_stop: bool = False
    suites: Tuple[str, ...] = DEFAULT_SUITES
    verbose: bool = False

    def game_config(self) -> GameConfig:
        params = dict(
            games_per_eval=self.games,
            score_max=self.score_max,
            challenge_mu=self.mu,
            challenge_sigma=self.sigma,
        )
        if self.long_game:
            return GameConfig.long_game(**params)
        return GameConfig(steps_max=self.steps, **params)

    def convergence_criterion(self) -> ConvergenceCriterion:
        return ConvergenceCriterion(kind=self.criterion, theta=self.theta, window=self.window, epsilon=self.epsilon)

    def evolution_config(self) -> EvolutionConfig:
        return EvolutionConfig(
            population_size=self.population,
            elite_count=self.elite,
            generations=self.generations,
            selection_mode=self.mode,
            objective=ObjectiveSelector(self.objective, normalized=not self.raw),
            crossover_prob=self.pc,
            mutation_prob=self.pm,
            seed=self.seed,
            early_stop=self.early_stop,
            jobs=self.jobs,
        )

    def suite_overrides(self) -> Dict[str, Any]:
        return {
            "population_size": self.population,
            "elite_count": self.elite,
            "generations": self.generations,
            "crossover_prob": self.pc,
            "mutation_prob": self.pm,
            "game": self.game_config(),
            "criterion": self.convergence_criterion(),
            "early_stop": self.early_stop,
            "jobs": self.jobs,
            "raw": self.raw,
        }

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["master_seeds"] = list(self.master_seeds)
        data["suites"] = list(self.suites)
        return data


_OPTION_NAMES = tuple(f.name for f in fields(CliConfig) if f.name not in ("command", "config"))

_FIELD_HINTS = get_type_hints(CliConfig)
_OPTION_TYPES: Dict[str, Any] = {name: _FIELD_HINTS[name] for name in _OPTION_NAMES}

_TYPE_NAMES = {bool: "true or false", int: "an integer", float: "a number", str: "a string"}


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


# 参数名 -> (检查, 期望描述)
_CHECKS: Dict[str, Tuple[Callable[[Any], bool], str]] = {
    "runs": (lambda v: v >= 1, "must be >= 1"),
    "generations": (lambda v: v >= 1, "must be >= 1"),
    "steps": (lambda v: v >= 1, "must be >= 1"),
    "games": (lambda v: v >= 1, "must be >= 1"),
    "population": (lambda v: v >= 2, "must be >= 2"),
    "elite": (lambda v: v >= 1, "must be >= 1"),
    "score_max": (lambda v: v >= 1, "must be >= 1"),
    "sigma": (lambda v: v is None or v > 0, "must be > 0"),
    "pc": (lambda v: 0 <= v <= 1, "must be in [0, 1]"),
    "pm": (lambda v: 0 <= v <= 1, "must be in [0, 1]"),
    "jobs": (lambda v: v >= 1, "must be >= 1"),
    "theta": (lambda v: 0 < v <= 1, "must be in (0, 1]"),
    "window": (lambda v: v >= 1, "must be >= 1"),
    "epsilon": (lambda v: v >= 0, "must be >= 0"),
    "objective": (lambda v: v in _OBJECTIVE_CHOICES, f"must be one of {', '.join(_OBJECTIVE_CHOICES)}"),
    "mode": (lambda v: v in _MODE_CHOICES, f"must be one of {', '.join(_MODE_CHOICES)}"),
    "criterion": (lambda v: v in _CRITERION_CHOICES, f"must be one of {', '.join(_CRITERION_CHOICES)}"),
    "suites": (
        lambda v: len(v) > 0 and all(name in BUILTIN_SUITES for name in v),
        f"must name one or more of {', '.join(BUILTIN_SUITES)}",
    ),
    "master_seeds": (lambda v: len(v) > 0, "must list at least one seed"),
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON config file; keys are long flag names")
    common.add_argument("--output", help="output directory (default: results)")
    common.add_argument("--verbose", action="store_true", help="log progress to stderr")

    game = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    game.add_argument("--steps", type=int, help="max steps per game (default: 100)")
    game.add_argument("--long-game", action="store_true", help="use the 1000-step long game instead of --steps")
    game.add_argument("--games", type=int, help="games per genome evaluation N (default: 10)")
    game.add_argument("--score-max", type=int, help="winning score (default: 30)")
    game.add_argument("--mu", type=float, help="challenge target score (default: score-max / 2)")
    game.add_argument("--sigma", type=float, help="challenge width, > 0 (default: score-max / 4)")

    ga = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    ga.add_argument("--generations", type=int, help="generation cap (default: 100)")
    ga.add_argument("--population", type=int, help="population size (default: 20)")
    ga.add_argument("--elite", type=int, help="elite count k for ranked selection (default: 10)")
    ga.add_argument("--pc", type=float, help="crossover probability (default: 0.5)")
    ga.add_argument("--pm", type=float, help="mutation probability (default: 0.5)")
    ga.add_argument("--raw", action="store_true", help="use the raw L + C + U sum for the combined objective")
    ga.add_argument("--jobs", type=int, help="worker processes for evaluation (default: 1)")
    ga.add_argument("--criterion", choices=_CRITERION_CHOICES, help="convergence criterion (default: threshold)")
    ga.add_argument("--theta", type=float, help="threshold fraction of the attainable maximum (default: 0.95)")
    ga.add_argument("--window", type=int, help="stagnation window in generations (default: 50)")
    ga.add_argument("--epsilon", type=float, help="stagnation improvement tolerance (default: 1e-6)")
    ga.add_argument("--early-stop", action="store_true", help="stop a run once the criterion fires")

    parser = argparse.ArgumentParser(
        prog="minga",
        description="Evolve prey-predator game rules with a genetic algorithm and measure convergence.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("evolve", parents=[common, game, ga], argument_default=argparse.SUPPRESS,
                       help="run one evolution and write its trace CSV")
    p.add_argument("--seed", type=int, help="run seed (default: 0)")
    p.add_argument("--objective", choices=_OBJECTIVE_CHOICES, help="active objective (default: combined)")
    p.add_argument("--mode", choices=_MODE_CHOICES, help="selection mode (default: ranked)")

    p = sub.add_parser("suite", parents=[common, game, ga], argument_default=argparse.SUPPRESS,
                       help="run built-in suites and write per-run reports")
    p.add_argument("--master-seed", type=int, help="master seed for run seeds (default: 0)")
    p.add_argument("--runs", type=int, help="runs per suite (default: 6)")
    p.add_argument("--suites", nargs="+", choices=tuple(BUILTIN_SUITES),
                   help=f"suites to run (default: {' '.join(DEFAULT_SUITES)})")

    p = sub.add_parser("hardness", parents=[common, game, ga], argument_default=argparse.SUPPRESS,
                       help="compare non-convergence of the lifespan and combined suites over many seeds")
    p.add_argument("--master-seeds", type=int, nargs="+", help="master seeds (default: 0..9)")
    p.add_argument("--runs", type=int, help="runs per suite and seed (default: 6)")

    p = sub.add_parser("replay", parents=[common, game], argument_default=argparse.SUPPRESS,
                       help="play one game with a saved genome and print the step log")
    p.add_argument("--genome", help="genome file (.json or .csv)")
    p.add_argument("--seed", type=int, help="game seed (default: 0)")
    p.add_argument("--render", action="store_true", help="print the ASCII grid after every step")
    return parser


def _load_config_file(path: str) -> Dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"--config: cannot read {path} ({exc.strerror or exc})") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--config: {path} is not valid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"--config: {path} must hold a JSON object")
    values = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in _OPTION_NAMES:
            raise ConfigError(f"--config: unknown key {key!r} in {path}")
        values[name] = _coerce(key, name, value, path)
    return values


def _matches(value: Any, kind: type) -> bool:
    if kind is bool:
        return isinstance(value, bool)
    if isinstance(value, bool):
        return False
    if kind is float:
        return isinstance(value, (int, float))
    return isinstance(value, kind)


def _coerce(key: str, name: str, value: Any, path: str) -> Any:
    """按 CliConfig 字段类型校验配置文件里的值；JSON 没有元组，列表转成元组。"""
    kind = _OPTION_TYPES[name]
    optional = getattr(kind, "__origin__", None) is Union
    if optional:
        kind = next(arg for arg in kind.__args__ if arg is not type(None))
        if value is None:
            return None
    if getattr(kind, "__origin__", None) is tuple:
        item = kind.__args__[0]
        if isinstance(value, list) and all(_matches(v, item) for v in value):
            return tuple(value)
        expected = f"a list of {item.__name__} values"
    elif _matches(value, kind):
        return float(value) if kind is float else value
    else:
        expected = _TYPE_NAMES[kind]
    raise ConfigError(f"--config: key {key!r} in {path} must be {expected}, got {value!r}")


def _check(values: Dict[str, Any]) -> None:
    for name, value in values.items():
        if name not in _CHECKS:
            continue
        check, expected = _CHECKS[name]
        try:
            ok = check(value)
        except TypeError:
            ok = False
        if not ok:
            raise ConfigError(f"{_flag(name)} {expected}, got {value!r}")


def parse_args(argv: Optional[Sequence[str]] = None) -> CliConfig:
    args = vars(_build_parser().parse_args(argv))
    command = args.pop("command")
    values: Dict[str, Any] = {}
    if "config" in args:
        values.update(_load_config_file(args["config"]))
    values.update({key.replace("-", "_"): value for key, value in args.items()})

    for name in ("master_seeds", "suites"):
        if name in values and isinstance(values[name], (list, tuple)):
            values[name] = tuple(values[name])
    _check(values)

    cfg = replace(CliConfig(command=command), **values)
    if cfg.command in ("evolve", "suite", "hardness") and cfg.elite >= cfg.population:
        raise ConfigError(f"--elite must be < --population ({cfg.population}), got {cfg.elite}")
    if cfg.long_game and "steps" in values:
        raise ConfigError("--long-game and --steps cannot be combined")
    if cfg.command == "replay" and not cfg.genome:
        raise ConfigError("--genome is required for replay")
    return cfg


def _write_json(path: Path, data: Dict[str, Any]) -> Path:
    try:
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise ReportIOError(f"cannot write config snapshot ({exc.strerror or exc})", path) from exc
    return path


def _output_dir(cfg: CliConfig) -> Path:
    out = Path(cfg.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportIOError(f"cannot create output directory ({exc.strerror or exc})", out) from exc
    return out


def _run_evolve(cfg: CliConfig) -> None:
    layout = ArenaLayout()
    evolution_cfg = cfg.evolution_config()
    game_cfg = cfg.game_config()
    criterion = cfg.convergence_criterion()
    trace = evolve(evolution_cfg, game_cfg, build_arena(layout), criterion=criterion)

    out = _output_dir(cfg)
    stem = f"evolve_{cfg.seed}"
    paths = [
        trace.to_csv(out / f"{stem}.csv"),
        _write_json(out / f"{stem}_config.json", {
            "cli": cfg.to_dict(),
            "evolution": evolution_cfg.to_dict(),
            "game": game_cfg.to_dict(),
            "arena": layout.to_dict(),
            "criterion": criterion.to_dict(),
        }),
        save_genome(out / f"{stem}_best.json", trace.best_genome),
    ]
    print(f"{evolution_cfg.objective.name} seed={cfg.seed}: {criterion.detect(trace)}, "
          f"best fitness {trace[-1].best_fitness:.6f} after {len(trace)} generations")
    for path in paths:
        print(f"wrote {path}")


def _print_report(report) -> None:
    summary = report.summary
    print(f"{report.name} (master seed {report.master_seed}): "
          f"converged {summary.converged}/{summary.runs}, median generation {summary.median_generation}")
    for record in report.records:
        suffix = f"  error: {record.error}" if record.error else ""
        print(f"  run {record.run}  seed {record.seed}  {record.verdict}{suffix}")


def _run_suite(cfg: CliConfig) -> None:
    out = _output_dir(cfg)
    for name in cfg.suites:
        suite_cfg = builtin_suite(name, runs=cfg.runs, master_seed=cfg.master_seed, **cfg.suite_overrides())
        report = run_suite(suite_cfg)
        _print_report(report)
        for fmt in ("csv", "json"):
            print(f"wrote {write_report(report, fmt, out)}")


def _run_hardness(cfg: CliConfig) -> None:
    out = _output_dir(cfg)
    result = compare_hardness(cfg.master_seeds, cfg.runs, **cfg.suite_overrides())
    for report in result.reports:
        write_report(report, "json", out)
    table_path = result.write_csv(out / "hardness.csv")
    _write_json(out / "hardness_config.json", {"cli": cfg.to_dict()})
    print(result.table)
    relation = ">=" if result.multi_at_least_as_hard else "<"
    print(f"non-convergence {result.multi} {relation} {result.single}")
    print(f"wrote {table_path}")


def _run_replay(cfg: CliConfig) -> None:
    genome = load_genome(cfg.genome)
    arena = build_arena()

    def on_step(state) -> None:
        print(format_step(state))
        if cfg.render:
            print(render_state(state, arena))

    result = play_game(genome, arena, cfg.game_config(), make_rng(cfg.seed, "replay"), on_step=on_step)
    print(f"outcome={result.outcome} steps={result.n} score={result.x} cells={result.c}")


_HANDLERS: Dict[str, Callable[[CliConfig], None]] = {
    "evolve": _run_evolve,
    "suite": _run_suite,
    "hardness": _run_hardness,
    "replay": _run_replay,
}


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, ConfigError):
        return 2
    if isinstance(exc, (ReportIOError, OSError)):
        return 4
    return 3


def run(cfg: CliConfig) -> int:
    if cfg.verbose:
        logger.enable("minga")
    try:
        _HANDLERS[cfg.command](cfg)
    except (MingaError, OSError) as exc:
        print(f"minga: error: {exc}", file=sys.stderr)
        return exit_code(exc)
    finally:
        if cfg.verbose:
            logger.disable("minga")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = parse_args(argv)
    except ConfigError as exc:
        print(f"minga: error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
