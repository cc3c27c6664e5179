"""一组带种子的进化运行，对每条轨迹判定收敛，汇总成 Table 形状的报告。"""
from dataclasses import dataclass, field, replace
import time
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import ConfigError, MingaError, _require
from ..evolution.ga import EvolutionConfig, SelectionMode, evolve
from ..game.arena import ArenaLayout, build_arena
from ..game.struct import GameConfig
from ..logger import logger as default_logger
from ..objectives import ObjectiveSelector
from .convergence import NOT_CONVERGING, ConvergenceCriterion, Verdict


# name -> (objective, selection_mode)
BUILTIN_SUITES: Dict[str, Tuple[str, str]] = {
    "lifespan": ("lifespan", "ranked"),
    "challenge": ("challenge", "ranked"),
    "usability": ("usability", "ranked"),
    "combined": ("combined", "ranked"),
    "combined_unranked": ("combined", "unranked"),
}

DEFAULT_SUITES: Tuple[str, ...] = ("lifespan", "usability", "combined")


@dataclass(frozen=True)
class SuiteConfig:
    """
    进化相关参数逐次运行时才校验，非法时记录在该次运行的 RunRecord 中，套件继续执行。
    """

    name: str
    objective: ObjectiveSelector = field(default_factory=ObjectiveSelector)
    selection_mode: SelectionMode = "ranked"
    runs: int = 6
    master_seed: int = 0
    population_size: int = 20
    elite_count: int = 10
    generations: int = 100
    crossover_prob: float = 0.5
    mutation_prob: float = 0.5
    game: GameConfig = field(default_factory=GameConfig)
    arena: ArenaLayout = field(default_factory=ArenaLayout)
    criterion: ConvergenceCriterion = field(default_factory=ConvergenceCriterion)
    early_stop: bool = False
    jobs: int = 1

    def __post_init__(self):
        _require(bool(self.name), "suite name must not be empty")
        _require(self.runs >= 1, f"suite needs at least one run, got runs={self.runs}")

    def run_seeds(self) -> List[int]:
        """由 master_seed 派生 runs 个互不相同的种子。"""
        rng = np.random.default_rng(self.master_seed)
        return [int(seed) for seed in rng.choice(2**31 - 1, size=self.runs, replace=False)]

    def evolution_config(self, seed: int) -> EvolutionConfig:
        return EvolutionConfig(
            population_size=self.population_size,
            elite_count=self.elite_count,
            generations=self.generations,
            selection_mode=self.selection_mode,
            objective=self.objective,
            crossover_prob=self.crossover_prob,
            mutation_prob=self.mutation_prob,
            seed=seed,
            early_stop=self.early_stop,
            jobs=self.jobs,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "objective": self.objective.to_dict(),
            "selection_mode": self.selection_mode,
            "runs": self.runs,
            "master_seed": self.master_seed,
            "population_size": self.population_size,
            "elite_count": self.elite_count,
            "generations": self.generations,
            "crossover_prob": self.crossover_prob,
            "mutation_prob": self.mutation_prob,
            "game": self.game.to_dict(),
            "arena": self.arena.to_dict(),
            "criterion": self.criterion.to_dict(),
            "early_stop": self.early_stop,
            "jobs": self.jobs,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SuiteConfig":
        params = dict(data)
        params["objective"] = ObjectiveSelector.from_dict(params.get("objective", {}))
        params["game"] = GameConfig.from_dict(params.get("game", {}))
        params["arena"] = ArenaLayout.from_dict(params.get("arena", {}))
        params["criterion"] = ConvergenceCriterion.from_dict(params.get("criterion", {}))
        return cls(**params)


def builtin_suite(name: str, **overrides) -> SuiteConfig:
    """按名字构造内置套件；raw=True 时组合目标使用未归一化求和。"""
    if name not in BUILTIN_SUITES:
        raise ConfigError(f"unknown suite {name!r}, expected one of {sorted(BUILTIN_SUITES)}")
    objective, mode = BUILTIN_SUITES[name]
    raw = overrides.pop("raw", False)
    return SuiteConfig(
        name=name,
        objective=ObjectiveSelector(objective, normalized=not raw),
        selection_mode=mode,
        **overrides,
    )


@dataclass(frozen=True)
class RunRecord:
    run: int
    seed: int
    objective: str
    mode: str
    verdict: Verdict = NOT_CONVERGING
    best_fitness: Optional[float] = None
    error: Optional[str] = None

    @property
    def generation(self) -> Optional[int]:
        return self.verdict.generation

    def to_dict(self) -> Dict[str, Any]:
        return {
            "run": self.run,
            "seed": self.seed,
            "objective": self.objective,
            "mode": self.mode,
            "verdict": str(self.verdict),
            "generation": self.generation,
            "best_fitness": self.best_fitness,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        return cls(
            run=data["run"],
            seed=data["seed"],
            objective=data["objective"],
            mode=data["mode"],
            verdict=Verdict.parse(data["verdict"]),
            best_fitness=data.get("best_fitness"),
            error=data.get("error"),
        )


@dataclass(frozen=True)
class SuiteSummary:
    runs: int
    converged: int
    convergence_fraction: float
    median_generation: Optional[float]

    @property
    def non_convergence_fraction(self) -> float:
        return 1.0 - self.convergence_fraction

    @classmethod
    def from_records(cls, records: List[RunRecord]) -> "SuiteSummary":
        generations = [r.generation for r in records if r.generation is not None]
        return cls(
            runs=len(records),
            converged=len(generations),
            convergence_fraction=len(generations) / len(records) if records else 0.0,
            median_generation=float(np.median(generations)) if generations else None,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "runs": self.runs,
            "converged": self.converged,
            "convergence_fraction": self.convergence_fraction,
            "median_generation": self.median_generation,
        }


def _attainable_max(cfg: SuiteConfig) -> Optional[float]:
    try:
        return cfg.objective.attainable_max(cfg.game, build_arena(cfg.arena))
    except MingaError:
        return None


@dataclass(frozen=True)
class SuiteReport:
    name: str
    master_seed: int
    config: Dict[str, Any]
    records: Tuple[RunRecord, ...]
    summary: SuiteSummary
    max_attainable: Optional[float] = None

    @classmethod
    def build(cls, cfg: SuiteConfig, records: List[RunRecord]) -> "SuiteReport":
        return cls(
            name=cfg.name,
            master_seed=cfg.master_seed,
            config=cfg.to_dict(),
            records=tuple(records),
            summary=SuiteSummary.from_records(records),
            max_attainable=_attainable_max(cfg),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "master_seed": self.master_seed,
            "config": self.config,
            "records": [record.to_dict() for record in self.records],
            "summary": self.summary.to_dict(),
            "max_attainable": self.max_attainable,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SuiteReport":
        return cls(
            name=data["name"],
            master_seed=data["master_seed"],
            config=data["config"],
            records=tuple(RunRecord.from_dict(item) for item in data["records"]),
            summary=SuiteSummary(**data["summary"]),
            max_attainable=data.get("max_attainable"),
        )


def _run_one(cfg: SuiteConfig, run: int, seed: int, logger) -> RunRecord:
    base = RunRecord(run=run, seed=seed, objective=cfg.objective.name, mode=cfg.selection_mode)
    try:
        evolution_cfg = cfg.evolution_config(seed)
        arena = build_arena(cfg.arena)
        trace = evolve(evolution_cfg, cfg.game, arena, criterion=cfg.criterion, logger=logger)
    except MingaError as exc:
        logger.warning(f"suite {cfg.name} run {run} (seed={seed}) failed: {exc}")
        return replace(base, error=str(exc))
    return replace(
        base,
        verdict=cfg.criterion.detect(trace),
        best_fitness=trace[-1].best_fitness,
    )


def run_suite(cfg: SuiteConfig, *, logger=None) -> SuiteReport:
    logger = logger or default_logger
    logger.info(f"Start suite {cfg.name}: {cfg.runs} runs, master_seed={cfg.master_seed}")
    start_time = time.time()
    records = [
        _run_one(cfg, run, seed, logger)
        for run, seed in enumerate(cfg.run_seeds(), start=1)
    ]
    report = SuiteReport.build(cfg, records)
    total_time = time.time() - start_time
    logger.info(
        f"Suite {cfg.name} completed: converged {report.summary.converged}/{report.summary.runs}, "
        f"total time: {total_time:.2f}s"
    )
    return report
