"""代际遗传算法主循环。

每代: 评估全部染色体(每条 N 局) -> 按目标打分 -> 记录轨迹 -> 产生下一代。
染色体的评估随机流由 (seed, 基因内容摘要) 派生，未变化的精英重新评估时得到相同适应度，
因此 ranked 模式下每代最优适应度单调不减。
"""
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
import time
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np

from ..errors import UsageError, _require
from ..game.arena import Arena
from ..game.engine import evaluate
from ..game.struct import GameConfig
from ..genome import Genome, crossover, mutate, random_genome
from ..logger import logger as default_logger
from ..objectives import ObjectiveScores, ObjectiveSelector, score_results
from ..utils.rng import genome_digest, make_rng
from .pareto import pareto_front, rank
from .trace import EvolutionTrace, TraceRecord


SelectionMode = Literal["ranked", "unranked"]

_MODE_ALIASES = {
    "ranked": "ranked",
    "rankedtopk": "ranked",
    "unranked": "unranked",
    "unrankeduniform": "unranked",
}


@dataclass(frozen=True)
class EvolutionConfig:
    """
    Args:
        population_size: 种群大小, 默认 20
        elite_count: ranked 模式下保留并参与繁殖的前 k 名, 0 < k < population_size
        generations: 最多代数, >= 1
        selection_mode: ranked(前 k 名繁殖, 精英保留) 或 unranked(全种群均匀选亲本, 全部替换)
        crossover_prob / mutation_prob: 每个后代独立应用交叉/变异的概率
        early_stop: 为 True 且传入收敛判据时，判据满足即停止
        jobs: 并行评估的进程数，只影响速度不影响结果
    """

    population_size: int = 20
    elite_count: int = 10
    generations: int = 100
    selection_mode: SelectionMode = "ranked"
    objective: ObjectiveSelector = field(default_factory=ObjectiveSelector)
    crossover_prob: float = 0.5
    mutation_prob: float = 0.5
    seed: int = 0
    early_stop: bool = False
    jobs: int = 1

    def __post_init__(self):
        mode = _MODE_ALIASES.get(str(self.selection_mode).lower())
        _require(mode is not None, f"selection_mode must be ranked or unranked, got {self.selection_mode!r}")
        object.__setattr__(self, "selection_mode", mode)
        if isinstance(self.objective, str):
            object.__setattr__(self, "objective", ObjectiveSelector(self.objective))
        _require(self.population_size >= 2, f"population_size must be >= 2, got {self.population_size}")
        _require(
            0 < self.elite_count < self.population_size,
            f"elite_count must be in (0, population_size={self.population_size}), got {self.elite_count}",
        )
        _require(self.generations >= 1, f"generations must be >= 1, got {self.generations}")
        _require(0 <= self.crossover_prob <= 1, f"crossover_prob must be in [0, 1], got {self.crossover_prob}")
        _require(0 <= self.mutation_prob <= 1, f"mutation_prob must be in [0, 1], got {self.mutation_prob}")
        _require(self.jobs >= 1, f"jobs must be >= 1, got {self.jobs}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "population_size": self.population_size,
            "elite_count": self.elite_count,
            "generations": self.generations,
            "selection_mode": self.selection_mode,
            "objective": self.objective.to_dict(),
            "crossover_prob": self.crossover_prob,
            "mutation_prob": self.mutation_prob,
            "seed": self.seed,
            "early_stop": self.early_stop,
            "jobs": self.jobs,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EvolutionConfig":
        params = dict(data)
        if isinstance(params.get("objective"), dict):
            params["objective"] = ObjectiveSelector.from_dict(params["objective"])
        return cls(**params)


def _make_offspring(pool: Sequence[Genome], cfg: EvolutionConfig, rng: np.random.Generator) -> Genome:
    first, second = rng.choice(len(pool), size=2, replace=len(pool) < 2)
    child = pool[int(first)]
    if rng.random() < cfg.crossover_prob:
        child = crossover(pool[int(first)], pool[int(second)], rng)
    if rng.random() < cfg.mutation_prob:
        child = mutate(child, rng)
    return child


def next_generation(
    population: Sequence[Genome],
    fitness: Sequence[float],
    cfg: EvolutionConfig,
    rng: np.random.Generator,
) -> List[Genome]:
    """ranked: 前 elite_count 名原样保留，其余位置由精英繁殖；
    unranked: 亲本从全种群均匀抽取，所有位置都是后代，被支配的解同样能繁殖。"""
    _require(
        len(population) == cfg.population_size,
        f"population size mismatch: expected {cfg.population_size}, got {len(population)}",
        UsageError,
    )
    _require(
        len(fitness) == len(population),
        f"fitness size mismatch: expected {len(population)}, got {len(fitness)}",
        UsageError,
    )
    if cfg.selection_mode == "ranked":
        order = rank(fitness)
        survivors = [population[i] for i in order[:cfg.elite_count]]
        pool = survivors
    else:
        survivors = []
        pool = list(population)
    offspring = [
        _make_offspring(pool, cfg, rng)
        for _ in range(cfg.population_size - len(survivors))
    ]
    return survivors + offspring


def _score_genome(args: Tuple[Genome, int, GameConfig, Arena, bool]) -> ObjectiveScores:
    # 顶层函数，才能被 ProcessPoolExecutor pickle
    genome, seed, game_cfg, arena, normalized = args
    rng = make_rng(seed, "evaluate", genome_digest(genome))
    results = evaluate(genome, arena, game_cfg, rng)
    return score_results(results, game_cfg, arena, normalized=normalized)


def _evaluate_population(
    population: Sequence[Genome],
    cache: Dict[Genome, ObjectiveScores],
    cfg: EvolutionConfig,
    game_cfg: GameConfig,
    arena: Arena,
    executor,
) -> List[ObjectiveScores]:
    pending = list(dict.fromkeys(g for g in population if g not in cache))
    args = [(g, cfg.seed, game_cfg, arena, cfg.objective.normalized) for g in pending]
    if executor is not None and len(args) > 1:
        scored = list(executor.map(_score_genome, args))
    else:
        scored = [_score_genome(item) for item in args]
    cache.update(zip(pending, scored))
    return [cache[g] for g in population]


def evolve(
    cfg: EvolutionConfig,
    game_cfg: GameConfig,
    arena: Arena,
    *,
    criterion=None,
    logger=None,
) -> EvolutionTrace:
    """运行一次进化，返回逐代轨迹。

    ``criterion`` 是带 ``detect(trace)`` 方法的收敛判据；仅当 ``cfg.early_stop`` 为 True 时用于提前停止。
    """
    logger = logger or default_logger
    selector = cfg.objective
    init_rng = make_rng(cfg.seed, "population")
    variation_rng = make_rng(cfg.seed, "variation")
    population = [random_genome(init_rng) for _ in range(cfg.population_size)]
    cache: Dict[Genome, ObjectiveScores] = {}
    max_attainable = selector.attainable_max(game_cfg, arena)
    trace = EvolutionTrace(
        objective=selector,
        config={
            "evolution": cfg.to_dict(),
            "game": game_cfg.to_dict(),
            "free_cell_count": arena.free_cell_count,
            "max_attainable": max_attainable,
        },
        max_attainable=max_attainable,
    )

    logger.info(
        f"Start evolving: objective={selector.name}, mode={cfg.selection_mode}, "
        f"population={cfg.population_size}, generations={cfg.generations}, seed={cfg.seed}"
    )
    start_time = time.time()
    pool = ProcessPoolExecutor(max_workers=cfg.jobs) if cfg.jobs > 1 else nullcontext()
    with pool as executor:
        for generation in range(1, cfg.generations + 1):
            scores = _evaluate_population(population, cache, cfg, game_cfg, arena, executor)
            fitness = [selector.fitness(s, game_cfg, arena) for s in scores]
            best = rank(fitness)[0]
            trace.append(TraceRecord(
                generation=generation,
                best_fitness=fitness[best],
                mean_fitness=float(np.mean(fitness)),
                best_normalized=selector.normalized_value(scores[best], game_cfg, arena),
                best_scores=scores[best],
                best_genome=population[best],
                front_size=len(pareto_front([s.vector() for s in scores])),
            ))
            logger.debug(
                f"generation {generation}: best={fitness[best]:.6f}, "
                f"mean={trace[-1].mean_fitness:.6f}, front={trace[-1].front_size}"
            )

            if cfg.early_stop and criterion is not None:
                verdict = criterion.detect(trace)
                if verdict.converged:
                    logger.info(f"Early stop at generation {generation}: {verdict}")
                    break
            if generation < cfg.generations:
                population = next_generation(population, fitness, cfg, variation_rng)

    total_time = time.time() - start_time
    logger.info(
        f"Evolution finished: {len(trace)} generations, best={trace[-1].best_fitness:.6f}, "
        f"total time: {total_time:.2f}s"
    )
    return trace
