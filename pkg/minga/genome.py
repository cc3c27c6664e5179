"""30 基因的游戏规则染色体。

扁平顺序固定为: 捕食者数量(3) -> 移动逻辑(3) -> 碰撞逻辑(15) -> 计分逻辑(9)，
每组内部按下表列出的顺序。交叉切点和变异位点都基于这一顺序。

    index  0- 2  count[R], count[G], count[B]                      0..20
    index  3- 5  move[R],  move[G],  move[B]                       0..3
    index  6-20  collide[R,R] ... collide[A,B]  (COLLISION_PAIRS)  0..2
    index 21-29  score[R,R]   ... score[B,G]    (SCORE_PAIRS)      -1..1
"""
import csv
import io
import json
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ConfigError, ReportIOError


class EntityClass(IntEnum):
    RED = 0
    GREEN = 1
    BLUE = 2
    AGENT = 3

    @property
    def letter(self) -> str:
        return "RGBA"[self.value]

    @property
    def is_predator(self) -> bool:
        return self is not EntityClass.AGENT


R, G, B, A = EntityClass.RED, EntityClass.GREEN, EntityClass.BLUE, EntityClass.AGENT

PREDATOR_CLASSES: Tuple[EntityClass, ...] = (R, G, B)

COLLISION_PAIRS: Tuple[Tuple[EntityClass, EntityClass], ...] = (
    (R, R), (R, G), (R, B), (R, A),
    (G, R), (G, G), (G, B), (G, A),
    (B, R), (B, G), (B, B), (B, A),
    (A, R), (A, G), (A, B),
)

SCORE_PAIRS: Tuple[Tuple[EntityClass, EntityClass], ...] = (
    (R, R), (G, G), (B, B),
    (A, R), (A, G), (A, B),
    (G, R), (B, R), (B, G),
)

COUNT_RANGE = (0, 20)
MOVEMENT_RANGE = (0, 3)
COLLISION_RANGE = (0, 2)
SCORE_RANGE = (-1, 1)

COUNTS = slice(0, 3)
MOVEMENT = slice(3, 6)
COLLISION = slice(6, 21)
SCORE = slice(21, 30)

GENE_COUNT = 30

# 分组对象格式的键，顺序即扁平顺序
GENE_GROUPS: Tuple[str, ...] = ("predator_counts", "movement_logic", "collision_effects", "score_logic")


class GeneSpec(NamedTuple):
    index: int
    name: str
    low: int
    high: int


def _build_gene_specs() -> Tuple[GeneSpec, ...]:
    specs = []
    for cls in PREDATOR_CLASSES:
        specs.append((f"count[{cls.letter}]", *COUNT_RANGE))
    for cls in PREDATOR_CLASSES:
        specs.append((f"move[{cls.letter}]", *MOVEMENT_RANGE))
    for mover, target in COLLISION_PAIRS:
        specs.append((f"collide[{mover.letter},{target.letter}]", *COLLISION_RANGE))
    for first, second in SCORE_PAIRS:
        specs.append((f"score[{first.letter},{second.letter}]", *SCORE_RANGE))
    return tuple(GeneSpec(index, name, low, high) for index, (name, low, high) in enumerate(specs))


GENE_SPECS = _build_gene_specs()
GENE_LOW = np.array([spec.low for spec in GENE_SPECS], dtype=np.int64)
GENE_HIGH = np.array([spec.high for spec in GENE_SPECS], dtype=np.int64)

_COLLISION_INDEX: Dict[Tuple[EntityClass, EntityClass], int] = {
    pair: COLLISION.start + offset for offset, pair in enumerate(COLLISION_PAIRS)
}
_SCORE_INDEX: Dict[Tuple[EntityClass, EntityClass], int] = {
    pair: SCORE.start + offset for offset, pair in enumerate(SCORE_PAIRS)
}


def gene_index(group: str, *classes: EntityClass) -> int:
    """返回某组基因在扁平顺序中的下标。

    Example:
        gene_index("count", R) == 0
        gene_index("collide", A, R) == 18
        gene_index("score", B, G) == 29
    """
    if group == "count" and len(classes) == 1 and classes[0].is_predator:
        return COUNTS.start + int(classes[0])
    if group == "move" and len(classes) == 1 and classes[0].is_predator:
        return MOVEMENT.start + int(classes[0])
    if group == "collide" and tuple(classes) in _COLLISION_INDEX:
        return _COLLISION_INDEX[tuple(classes)]
    if group == "score" and tuple(classes) in _SCORE_INDEX:
        return _SCORE_INDEX[tuple(classes)]
    raise KeyError(f"no gene for {group}{tuple(c.letter for c in classes)}")


class GeneViolation(NamedTuple):
    index: int
    name: str
    value: object
    low: int
    high: int

    def __str__(self) -> str:
        return f"gene {self.index} ({self.name}) = {self.value!r} not in [{self.low}, {self.high}]"


def validate(genes) -> List[GeneViolation]:
    """检查每个基因是否在合法范围内，返回违规列表；空列表即 ok。

    ``genes`` 可以是 Genome，也可以是任意长度为 30 的整数序列。
    """
    values = list(getattr(genes, "genes", genes))
    if len(values) != GENE_COUNT:
        raise ConfigError(f"genome must have exactly {GENE_COUNT} genes, got {len(values)}")
    violations = []
    for spec, value in zip(GENE_SPECS, values):
        if isinstance(value, (bool, np.bool_)) or not isinstance(value, (int, np.integer)):
            violations.append(GeneViolation(spec.index, spec.name, value, spec.low, spec.high))
        elif not spec.low <= value <= spec.high:
            violations.append(GeneViolation(spec.index, spec.name, int(value), spec.low, spec.high))
    return violations


@dataclass(frozen=True)
class Genome:
    """一条规则染色体。构造时校验全部基因，非法取值无法构造。"""

    genes: Tuple[int, ...]

    def __post_init__(self):
        genes = tuple(self.genes)
        violations = validate(genes)
        if violations:
            raise ConfigError("invalid genome: " + "; ".join(str(v) for v in violations))
        object.__setattr__(self, "genes", tuple(int(value) for value in genes))

    @classmethod
    def from_groups(
        cls,
        predator_counts: Sequence[int],
        movement_logic: Sequence[int],
        collision_effects: Sequence[int],
        score_logic: Sequence[int],
    ) -> "Genome":
        groups = (predator_counts, movement_logic, collision_effects, score_logic)
        sizes = (3, 3, 15, 9)
        for values, size in zip(groups, sizes):
            if len(values) != size:
                raise ConfigError(f"gene group must have {size} values, got {len(values)}")
        return cls(tuple(predator_counts) + tuple(movement_logic) + tuple(collision_effects) + tuple(score_logic))

    @classmethod
    def minimum(cls) -> "Genome":
        return cls(tuple(int(value) for value in GENE_LOW))

    @classmethod
    def maximum(cls) -> "Genome":
        return cls(tuple(int(value) for value in GENE_HIGH))

    @property
    def predator_counts(self) -> Tuple[int, ...]:
        return self.genes[COUNTS]

    @property
    def movement_logic(self) -> Tuple[int, ...]:
        return self.genes[MOVEMENT]

    @property
    def collision_effects(self) -> Tuple[int, ...]:
        return self.genes[COLLISION]

    @property
    def score_logic(self) -> Tuple[int, ...]:
        return self.genes[SCORE]

    @property
    def total_predators(self) -> int:
        return sum(self.predator_counts)

    def count(self, cls: EntityClass) -> int:
        return self.genes[gene_index("count", cls)]

    def movement(self, cls: EntityClass) -> int:
        return self.genes[gene_index("move", cls)]

    def collision(self, mover: EntityClass, target: EntityClass) -> Optional[int]:
        """有序对 (mover, target) 的碰撞效果；(A, A) 没有对应基因，返回 None。"""
        index = _COLLISION_INDEX.get((mover, target))
        return None if index is None else self.genes[index]

    def score(self, first: EntityClass, second: EntityClass) -> int:
        """计分表按列出的方向查找，与谁是移动方无关；不在表中的对返回 0。"""
        index = _SCORE_INDEX.get((first, second))
        if index is None:
            index = _SCORE_INDEX.get((second, first))
        return 0 if index is None else self.genes[index]

    def to_list(self) -> List[int]:
        return list(self.genes)

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    def to_csv_row(self) -> str:
        return ",".join(str(value) for value in self.genes)

    @classmethod
    def from_json(cls, text: str) -> "Genome":
        """扁平数组，或按基因组分组的对象(键同 from_groups 的参数名)。"""
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"genome file is not valid JSON ({exc.msg})") from exc
        if isinstance(values, dict):
            missing = [name for name in GENE_GROUPS if name not in values]
            if missing or len(values) != len(GENE_GROUPS):
                raise ConfigError(f"genome JSON object must have exactly the keys {', '.join(GENE_GROUPS)}")
            return cls.from_groups(*(values[name] for name in GENE_GROUPS))
        if not isinstance(values, list):
            raise ConfigError("genome JSON must be an array of 30 integers or an object of gene groups")
        return cls(tuple(values))

    @classmethod
    def from_csv_row(cls, text: str) -> "Genome":
        rows = [row for row in csv.reader(io.StringIO(text.strip())) if row]
        if len(rows) != 1:
            raise ConfigError(f"genome CSV must contain exactly one row, got {len(rows)}")
        try:
            values = [int(cell) for cell in rows[0]]
        except ValueError as exc:
            raise ConfigError(f"genome CSV must contain integers: {exc}") from exc
        return cls(tuple(values))

    def __str__(self) -> str:
        return ";".join(str(value) for value in self.genes)


def random_genome(rng: np.random.Generator) -> Genome:
    """每个基因在自身范围内独立均匀抽样。"""
    return Genome(tuple(int(value) for value in rng.integers(GENE_LOW, GENE_HIGH + 1)))


def crossover(a: Genome, b: Genome, rng: np.random.Generator, cut: Optional[int] = None) -> Genome:
    """单点交叉，产生一个后代: [0, k) 来自 a，[k, 30) 来自 b，k 在 [1, 29] 均匀抽取。"""
    if cut is None:
        cut = int(rng.integers(1, GENE_COUNT))
    if not 1 <= cut <= GENE_COUNT - 1:
        raise ConfigError(f"crossover cut must be in [1, {GENE_COUNT - 1}], got {cut}")
    return Genome(a.genes[:cut] + b.genes[cut:])


def mutate(g: Genome, rng: np.random.Generator) -> Genome:
    """均匀选一个位点，在该基因范围内重新抽样（可能抽到原值）。"""
    site = int(rng.integers(0, GENE_COUNT))
    value = int(rng.integers(GENE_LOW[site], GENE_HIGH[site] + 1))
    genes = list(g.genes)
    genes[site] = value
    return Genome(tuple(genes))


def save_genome(path: Union[str, Path], genome: Genome) -> Path:
    path = Path(path)
    text = genome.to_csv_row() + "\n" if path.suffix.lower() == ".csv" else genome.to_json() + "\n"
    try:
        path.write_text(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write genome file ({exc.strerror or exc})", path) from exc
    return path


def load_genome(path: Union[str, Path]) -> Genome:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ReportIOError(f"cannot read genome file ({exc.strerror or exc})", path) from exc
    if path.suffix.lower() == ".csv":
        return Genome.from_csv_row(text)
    return Genome.from_json(text)
