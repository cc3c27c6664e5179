from dataclasses import asdict, dataclass, field, fields
from enum import IntEnum
from typing import Any, Dict, List, Literal, Optional, Set, Tuple

from ..errors import _require
from ..genome import EntityClass


Position = Tuple[int, int]

Outcome = Literal["Won", "TimedOut", "Died"]


class Direction(IntEnum):
    """逆时针顺序 E, N, W, S。y 轴向下，N 是 y - 1。"""

    E = 0
    N = 1
    W = 2
    S = 3

    @property
    def delta(self) -> Position:
        return _DELTAS[self]

    def left(self) -> "Direction":
        return Direction((self + 1) % 4)

    def right(self) -> "Direction":
        return Direction((self - 1) % 4)

    def reverse(self) -> "Direction":
        return Direction((self + 2) % 4)

    def ahead(self, pos: Position) -> Position:
        dx, dy = self.delta
        return pos[0] + dx, pos[1] + dy


_DELTAS = {
    Direction.E: (1, 0),
    Direction.N: (0, -1),
    Direction.W: (-1, 0),
    Direction.S: (0, 1),
}

# 智能体扫描邻居的固定顺序
SCAN_ORDER: Tuple[Direction, ...] = (Direction.E, Direction.N, Direction.W, Direction.S)


@dataclass(frozen=True)
class GameConfig:
    """单局游戏参数。

    Args:
        steps_max: 每局最多步数 t_max, >= 1
        games_per_eval: 每个基因组评估时的局数 N, >= 1
        score_max: 获胜分数, >= 1
        challenge_mu: 挑战度高斯中心 mu, 默认 score_max / 2
        challenge_sigma: 挑战度高斯宽度 sigma, > 0, 默认 score_max / 4
    """

    steps_max: int = 100
    games_per_eval: int = 10
    score_max: int = 30
    challenge_mu: Optional[float] = None
    challenge_sigma: Optional[float] = None

    def __post_init__(self):
        _require(self.steps_max >= 1, f"steps_max must be >= 1, got {self.steps_max}")
        _require(self.games_per_eval >= 1, f"games_per_eval must be >= 1, got {self.games_per_eval}")
        _require(self.score_max >= 1, f"score_max must be >= 1, got {self.score_max}")
        if self.challenge_mu is None:
            object.__setattr__(self, "challenge_mu", self.score_max / 2)
        if self.challenge_sigma is None:
            object.__setattr__(self, "challenge_sigma", self.score_max / 4)
        _require(self.challenge_sigma > 0, f"challenge_sigma must be > 0, got {self.challenge_sigma}")

    @classmethod
    def long_game(cls, **overrides) -> "GameConfig":
        """1000 步的长局设置，用于寿命实验。"""
        params = {"steps_max": 1000}
        params.update(overrides)
        return cls(**params)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GameConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in data.items() if key in names})


@dataclass
class PredatorState:
    klass: EntityClass
    pos: Position
    heading: Direction
    alive: bool = True
    index: int = 0


@dataclass
class GameState:
    t: int
    agent_pos: Position
    agent_alive: bool = True
    score: int = 0
    predators: List[PredatorState] = field(default_factory=list)
    visited: Set[Position] = field(default_factory=set)
    outcome: Optional[Outcome] = None
    collisions: int = 0

    @property
    def terminal(self) -> bool:
        return self.outcome is not None

    def live_predators(self, klass: Optional[EntityClass] = None) -> List[PredatorState]:
        return [
            p for p in self.predators
            if p.alive and (klass is None or p.klass == klass)
        ]

    def predator_at(self, pos: Position) -> Optional[PredatorState]:
        for predator in self.predators:
            if predator.alive and predator.pos == pos:
                return predator
        return None


@dataclass(frozen=True)
class GameResult:
    steps_survived: int
    final_score: int
    cells_visited: int
    outcome: Outcome

    @property
    def n(self) -> int:
        return self.steps_survived

    @property
    def x(self) -> int:
        return self.final_score

    @property
    def c(self) -> int:
        return self.cells_visited
