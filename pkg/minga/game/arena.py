from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from ..errors import ConfigError, _require
from .struct import Position


@dataclass(frozen=True)
class WallSpec:
    """一段直墙: 从 (x, y) 起，向下(vertical)或向右延伸 length 格。"""

    x: int
    y: int
    length: int = 7
    vertical: bool = True

    def cells(self) -> List[Position]:
        if self.vertical:
            return [(self.x, self.y + offset) for offset in range(self.length)]
        return [(self.x + offset, self.y) for offset in range(self.length)]


# 两段 7 格竖墙: 第 4 列 3-9 行，第 9 列 4-10 行
DEFAULT_WALLS: Tuple[WallSpec, ...] = (
    WallSpec(x=4, y=3, length=7),
    WallSpec(x=9, y=4, length=7),
)


@dataclass(frozen=True)
class ArenaLayout:
    width: int = 14
    height: int = 14
    walls: Tuple[WallSpec, ...] = DEFAULT_WALLS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "width": self.width,
            "height": self.height,
            "walls": [[w.x, w.y, w.length, w.vertical] for w in self.walls],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ArenaLayout":
        walls = data.get("walls")
        if walls is None:
            parsed = DEFAULT_WALLS
        else:
            parsed = tuple(WallSpec(*wall) if isinstance(wall, (list, tuple)) else WallSpec(**wall) for wall in walls)
        return cls(width=data.get("width", 14), height=data.get("height", 14), walls=parsed)


@dataclass(frozen=True)
class Arena:
    width: int
    height: int
    wall_cells: FrozenSet[Position] = field(default_factory=frozenset)

    def in_bounds(self, pos: Position) -> bool:
        return 0 <= pos[0] < self.width and 0 <= pos[1] < self.height

    def is_wall(self, pos: Position) -> bool:
        return pos in self.wall_cells

    def passable(self, pos: Position) -> bool:
        return self.in_bounds(pos) and pos not in self.wall_cells

    @property
    def free_cell_count(self) -> int:
        return self.width * self.height - len(self.wall_cells)

    def free_cells(self) -> List[Position]:
        """按行优先顺序列出所有非墙格子，顺序固定以保证随机摆放可复现。"""
        return [
            (x, y)
            for y in range(self.height)
            for x in range(self.width)
            if (x, y) not in self.wall_cells
        ]


def build_arena(layout: Optional[ArenaLayout] = None) -> Arena:
    """构造带墙的网格；墙体越界或互相重叠时抛出 ConfigError。"""
    layout = layout or ArenaLayout()
    _require(layout.width >= 1 and layout.height >= 1,
             f"arena size must be positive, got {layout.width}x{layout.height}")
    cells = set()
    for wall in layout.walls:
        _require(wall.length >= 1, f"wall length must be >= 1, got {wall}")
        for cell in wall.cells():
            x, y = cell
            if not (0 <= x < layout.width and 0 <= y < layout.height):
                raise ConfigError(f"wall cell {cell} out of bounds for {layout.width}x{layout.height} arena")
            if cell in cells:
                raise ConfigError(f"walls overlap at cell {cell}")
            cells.add(cell)
    return Arena(width=layout.width, height=layout.height, wall_cells=frozenset(cells))


def walls_from_cells(cells: Sequence[Position]) -> Tuple[WallSpec, ...]:
    """单格墙的便捷写法，主要用于测试和自定义地图。"""
    return tuple(WallSpec(x=x, y=y, length=1) for x, y in cells)
