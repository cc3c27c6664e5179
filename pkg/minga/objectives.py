"""三个目标函数及其组合。

    L = sum(n) / N                              寿命
    C = exp(-0.5 * ((x - mu) / sigma) ** 2)     挑战度, x 为 N 局最终分数的均值
    U = sum(c) / N                              可用度, c 为智能体到过的格子数

组合目标默认使用归一化求和 L/steps_max + C + U/free_cells，每一项都落在 [0, 1]；
raw 模式直接求和 L + C + U。
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, Literal, Sequence, Tuple

import numpy as np

from .errors import ConfigError, UsageError, _require
from .game.arena import Arena
from .game.struct import GameConfig, GameResult


ObjectiveKind = Literal["lifespan", "challenge", "usability", "combined"]

OBJECTIVE_KINDS: Tuple[str, ...] = ("lifespan", "challenge", "usability", "combined")


@dataclass(frozen=True)
class ObjectiveScores:
    lifespan: float
    challenge: float
    usability: float
    combined: float

    def vector(self) -> Tuple[float, float, float]:
        return (self.lifespan, self.challenge, self.usability)


def _require_results(results: Sequence[GameResult]) -> None:
    _require(len(results) > 0, "objective needs at least one game result", UsageError)


def lifespan(results: Sequence[GameResult]) -> float:
    _require_results(results)
    return float(np.mean([r.steps_survived for r in results]))


def challenge(results: Sequence[GameResult], mu: float, sigma: float) -> float:
    if sigma <= 0:
        raise ConfigError(f"challenge sigma must be > 0, got {sigma}")
    _require_results(results)
    x = float(np.mean([r.final_score for r in results]))
    return math.exp(-0.5 * ((x - mu) / sigma) ** 2)


def usability(results: Sequence[GameResult]) -> float:
    _require_results(results)
    return float(np.mean([r.cells_visited for r in results]))


def combined(
    scores: ObjectiveScores,
    cfg: GameConfig,
    arena: Arena,
    normalized: bool = True,
) -> float:
    if normalized:
        return (
            scores.lifespan / cfg.steps_max
            + scores.challenge
            + scores.usability / arena.free_cell_count
        )
    return scores.lifespan + scores.challenge + scores.usability


def usability_ceiling(cfg: GameConfig, arena: Arena) -> int:
    """一局最多能到访的格子数：起点加每步一格，且不超过空格总数。"""
    return min(cfg.steps_max + 1, arena.free_cell_count)


def score_results(
    results: Sequence[GameResult],
    cfg: GameConfig,
    arena: Arena,
    normalized: bool = True,
) -> ObjectiveScores:
    partial = ObjectiveScores(
        lifespan=lifespan(results),
        challenge=challenge(results, cfg.challenge_mu, cfg.challenge_sigma),
        usability=usability(results),
        combined=0.0,
    )
    return ObjectiveScores(
        lifespan=partial.lifespan,
        challenge=partial.challenge,
        usability=partial.usability,
        combined=combined(partial, cfg, arena, normalized=normalized),
    )


_ALIASES = {
    "life": "lifespan",
    "lifespan": "lifespan",
    "challenge": "challenge",
    "usability": "usability",
    "combined": "combined",
    "sum": "combined",
}


@dataclass(frozen=True)
class ObjectiveSelector:
    """进化时唯一生效的目标。单目标直接用原始值排序；组合目标按 normalized 求和。"""

    kind: ObjectiveKind = "combined"
    normalized: bool = True

    def __post_init__(self):
        kind = _ALIASES.get(self.kind)
        if kind is None:
            raise ConfigError(f"objective must be one of {OBJECTIVE_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    @property
    def name(self) -> str:
        if self.kind == "combined" and not self.normalized:
            return "combined_raw"
        return self.kind

    @property
    def max_normalized(self) -> float:
        return 3.0 if self.kind == "combined" else 1.0

    def attainable_max(self, cfg: GameConfig, arena: Arena) -> float:
        """给定局长和场地时归一化值的可达上限；可用度受 steps_max 限制。"""
        usability_max = usability_ceiling(cfg, arena) / arena.free_cell_count
        if self.kind == "usability":
            return usability_max
        if self.kind == "combined":
            return 2.0 + usability_max
        return 1.0

    def fitness(self, scores: ObjectiveScores, cfg: GameConfig, arena: Arena) -> float:
        if self.kind == "lifespan":
            return scores.lifespan
        if self.kind == "challenge":
            return scores.challenge
        if self.kind == "usability":
            return scores.usability
        return combined(scores, cfg, arena, normalized=self.normalized)

    def normalized_value(self, scores: ObjectiveScores, cfg: GameConfig, arena: Arena) -> float:
        """收敛判定使用的归一化值，上限为 attainable_max。"""
        if self.kind == "lifespan":
            return scores.lifespan / cfg.steps_max
        if self.kind == "challenge":
            return scores.challenge
        if self.kind == "usability":
            return scores.usability / arena.free_cell_count
        return combined(scores, cfg, arena, normalized=True)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "normalized": self.normalized}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ObjectiveSelector":
        return cls(kind=data.get("kind", "combined"), normalized=data.get("normalized", True))
