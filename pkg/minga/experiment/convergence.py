from dataclasses import dataclass
from typing import Any, Dict, Literal, Optional

from ..errors import UsageError, _require


CriterionKind = Literal["threshold", "stagnation"]

# 浮点比较容差，避免 0.95 * 上限这类乘积的舍入误差
_THRESHOLD_TOL = 1e-12


@dataclass(frozen=True)
class Verdict:
    generation: Optional[int] = None

    @property
    def converged(self) -> bool:
        return self.generation is not None

    def __str__(self) -> str:
        if self.generation is None:
            return "NotConverging"
        return f"Converged({self.generation})"

    @classmethod
    def parse(cls, text: str) -> "Verdict":
        if text == "NotConverging":
            return cls()
        if text.startswith("Converged(") and text.endswith(")"):
            return cls(int(text[len("Converged("):-1]))
        raise ValueError(f"unknown verdict: {text!r}")


NOT_CONVERGING = Verdict()


@dataclass(frozen=True)
class ConvergenceCriterion:
    """
    threshold: 最优归一化适应度首次 >= theta * trace.max_normalized(由局长和场地算出的可达上限);
    stagnation: 首个之后 window 代内最优适应度提升 < epsilon 的代。
    """

    kind: CriterionKind = "threshold"
    theta: float = 0.95
    window: int = 50
    epsilon: float = 1e-6

    def __post_init__(self):
        _require(self.kind in ("threshold", "stagnation"),
                 f"criterion kind must be threshold or stagnation, got {self.kind!r}")
        _require(0 < self.theta <= 1, f"theta must be in (0, 1], got {self.theta}")
        _require(self.window >= 1, f"window must be >= 1, got {self.window}")
        _require(self.epsilon >= 0, f"epsilon must be >= 0, got {self.epsilon}")

    def detect(self, trace) -> Verdict:
        return detect_convergence(trace, self)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "theta": self.theta, "window": self.window, "epsilon": self.epsilon}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ConvergenceCriterion":
        return cls(**data)


def detect_convergence(trace, crit: ConvergenceCriterion) -> Verdict:
    _require(len(trace) > 0, "cannot detect convergence on an empty trace", UsageError)
    records = list(trace)
    if crit.kind == "threshold":
        target = crit.theta * trace.max_normalized - _THRESHOLD_TOL
        for record in records:
            if record.best_normalized >= target:
                return Verdict(record.generation)
        return NOT_CONVERGING

    best = [record.best_fitness for record in records]
    for i in range(len(best) - crit.window):
        if max(best[i + 1:i + 1 + crit.window]) - best[i] < crit.epsilon:
            return Verdict(records[i].generation)
    return NOT_CONVERGING
