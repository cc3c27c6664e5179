from .struct import Direction, GameConfig, GameResult, GameState, PredatorState, Outcome
from .arena import Arena, ArenaLayout, WallSpec, DEFAULT_WALLS, build_arena
from .engine import (
    Collision,
    STAY,
    agent_policy,
    evaluate,
    init_game,
    play_game,
    predator_move,
    resolve_collision,
    step,
)
from .render import format_step, render_state

__all__ = [
    "Direction",
    "GameConfig",
    "GameResult",
    "GameState",
    "PredatorState",
    "Outcome",
    "Arena",
    "ArenaLayout",
    "WallSpec",
    "DEFAULT_WALLS",
    "build_arena",
    "Collision",
    "STAY",
    "agent_policy",
    "evaluate",
    "init_game",
    "play_game",
    "predator_move",
    "resolve_collision",
    "step",
    "format_step",
    "render_state",
]
