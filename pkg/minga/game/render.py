from .arena import Arena
from .struct import GameState


_PREDATOR_CHARS = "rgb"


def render_state(state: GameState, arena: Arena) -> str:
    """'#' 墙, 'A' 智能体, 'r/g/b' 捕食者, '.' 空格。"""
    grid = [
        ["#" if (x, y) in arena.wall_cells else "." for x in range(arena.width)]
        for y in range(arena.height)
    ]
    for predator in state.predators:
        if predator.alive:
            x, y = predator.pos
            grid[y][x] = _PREDATOR_CHARS[int(predator.klass)]
    if state.agent_alive:
        x, y = state.agent_pos
        grid[y][x] = "A"
    return "\n".join("".join(row) for row in grid)


def format_step(state: GameState) -> str:
    x, y = state.agent_pos
    return (
        f"t={state.t} agent=({x},{y}) score={state.score} "
        f"predators={len(state.live_predators())}"
    )
