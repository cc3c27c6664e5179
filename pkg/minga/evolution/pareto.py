from typing import List, Sequence

import numpy as np

from ..errors import UsageError, _require


FitnessVector = Sequence[float]


def dominates(a: FitnessVector, b: FitnessVector) -> bool:
    """最大化意义下 a 支配 b: 每一维都不差，且至少一维更好。"""
    better_or_equal = True
    strictly_better = False
    for x, y in zip(a, b):
        if x < y:
            better_or_equal = False
            break
        if x > y:
            strictly_better = True
    return better_or_equal and strictly_better


def _dominated_mask(values: np.ndarray) -> np.ndarray:
    # ge[j, i]: j 在每一维都 >= i; gt[j, i]: j 至少一维 > i
    ge = np.all(values[:, None, :] >= values[None, :, :], axis=2)
    gt = np.any(values[:, None, :] > values[None, :, :], axis=2)
    return np.any(ge & gt, axis=0)


def pareto_front(vectors: Sequence[FitnessVector]) -> List[int]:
    """不被任何其他向量支配的下标，升序返回。"""
    _require(len(vectors) > 0, "pareto_front needs at least one vector", UsageError)
    values = np.asarray(vectors, dtype=float)
    return [int(i) for i in np.flatnonzero(~_dominated_mask(values))]


def non_dominated_sort(vectors: Sequence[FitnessVector]) -> List[List[int]]:
    """逐层剥离 Pareto 前沿，第 0 层即 pareto_front。只用于分析，不参与选择。"""
    _require(len(vectors) > 0, "non_dominated_sort needs at least one vector", UsageError)
    values = np.asarray(vectors, dtype=float)
    remaining = np.arange(len(values))
    fronts = []
    while remaining.size:
        mask = _dominated_mask(values[remaining])
        fronts.append([int(i) for i in remaining[~mask]])
        remaining = remaining[mask]
    return fronts


def rank(fitness: Sequence[float]) -> List[int]:
    """按适应度降序排列的下标；相同适应度保持原下标升序。"""
    _require(len(fitness) > 0, "rank needs at least one fitness value", UsageError)
    order = np.argsort(-np.asarray(fitness, dtype=float), kind="stable")
    return [int(i) for i in order]
