from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from ..errors import ReportIOError
from ..genome import Genome
from ..objectives import ObjectiveScores, ObjectiveSelector


TRACE_COLUMNS = [
    "generation",
    "best_fitness",
    "mean_fitness",
    "best_L",
    "best_C",
    "best_U",
    "best_genome",
]


@dataclass(frozen=True)
class TraceRecord:
    generation: int
    best_fitness: float
    mean_fitness: float
    best_normalized: float
    best_scores: Optional[ObjectiveScores] = None
    best_genome: Optional[Genome] = None
    front_size: int = 0


@dataclass
class EvolutionTrace:
    """每代一条记录；generation 从 1 开始，第 1 代即初始种群。"""

    objective: ObjectiveSelector = field(default_factory=ObjectiveSelector)
    records: List[TraceRecord] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    # None 时退回目标的名义上限(单目标 1.0，归一化求和 3.0)
    max_attainable: Optional[float] = None

    def append(self, record: TraceRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, index: int) -> TraceRecord:
        return self.records[index]

    @property
    def max_normalized(self) -> float:
        if self.max_attainable is not None:
            return self.max_attainable
        return self.objective.max_normalized

    @property
    def best_fitness(self) -> List[float]:
        return [record.best_fitness for record in self.records]

    @property
    def best_genome(self) -> Optional[Genome]:
        if not self.records:
            return None
        return self.records[-1].best_genome

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for record in self.records:
            scores = record.best_scores
            rows.append({
                "generation": record.generation,
                "best_fitness": record.best_fitness,
                "mean_fitness": record.mean_fitness,
                "best_L": None if scores is None else scores.lifespan,
                "best_C": None if scores is None else scores.challenge,
                "best_U": None if scores is None else scores.usability,
                "best_genome": "" if record.best_genome is None else str(record.best_genome),
            })
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        try:
            self.to_frame().to_csv(path, index=False, lineterminator="\n")
        except OSError as exc:
            raise ReportIOError(f"cannot write trace CSV ({exc.strerror or exc})", path) from exc
        return path
