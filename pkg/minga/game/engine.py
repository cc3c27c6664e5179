"""单局猎物-捕食者游戏的模拟。

一步之内的顺序:
    1. 智能体按 agent_policy 移动，目标格有捕食者时以智能体为移动方结算碰撞;
    2. 捕食者按 红 -> 绿 -> 蓝、类内按序号依次移动，撞到智能体或其他捕食者时以捕食者为移动方结算;
    3. 记录智能体所在格;
    4. t += 1。
智能体死亡或分数达到 score_max 时立即结束，剩余捕食者不再移动。
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Literal, Optional, Tuple

import numpy as np

from ..errors import InitializationError, UsageError
from ..genome import PREDATOR_CLASSES, EntityClass, Genome
from ..utils.rng import game_streams
from .arena import Arena
from .struct import SCAN_ORDER, Direction, GameConfig, GameResult, GameState, Position, PredatorState


Effect = Literal["Block", "MoverDies", "TargetDies"]

# collision gene -> effect
_EFFECTS: Tuple[Effect, ...] = ("Block", "MoverDies", "TargetDies")

# movement gene: 0 左转, 1 右转, 2 随机左/右, 3 掉头
TURN_LEFT, TURN_RIGHT, TURN_RANDOM, TURN_REVERSE = 0, 1, 2, 3

Move = Optional[Direction]
STAY: Move = None

StepCallback = Callable[[GameState], None]


@dataclass(frozen=True)
class Collision:
    effect: Effect
    score_delta: int


def init_game(g: Genome, arena: Arena, rng: np.random.Generator) -> GameState:
    """智能体和所有捕食者随机摆放在互不相同的空格上，捕食者朝向随机。"""
    free = arena.free_cells()
    total = 1 + g.total_predators
    if total > len(free):
        raise InitializationError(
            f"cannot place {total} entities on {len(free)} free cells"
        )
    picks = rng.choice(len(free), size=total, replace=False)
    headings = rng.integers(0, 4, size=g.total_predators)

    agent_pos = free[int(picks[0])]
    predators = []
    slot = 1
    for klass in PREDATOR_CLASSES:
        for index in range(g.count(klass)):
            predators.append(PredatorState(
                klass=klass,
                pos=free[int(picks[slot])],
                heading=Direction(int(headings[slot - 1])),
                index=index,
            ))
            slot += 1
    return GameState(t=0, agent_pos=agent_pos, predators=predators, visited={agent_pos})


def _occupancy(state: GameState) -> Dict[Position, PredatorState]:
    return {p.pos: p for p in state.predators if p.alive}


def agent_policy(
    state: GameState,
    g: Genome,
    arena: Arena,
    rng: np.random.Generator,
    occupied: Optional[Dict[Position, PredatorState]] = None,
) -> Move:
    """按 E, N, W, S 扫描邻居。

    邻居中有 score(A, X) 取最大值且该值 > 0 的捕食者时，走向扫描顺序中第一个这样的邻居；
    否则在界内非墙的邻居里均匀随机选一个；没有可走的邻居时原地不动(STAY)。
    """
    if occupied is None:
        occupied = _occupancy(state)
    neighbors = []
    for direction in SCAN_ORDER:
        predator = occupied.get(direction.ahead(state.agent_pos))
        if predator is not None:
            neighbors.append((direction, g.score(EntityClass.AGENT, predator.klass)))
    if neighbors:
        best = max(value for _, value in neighbors)
        if best > 0:
            return next(direction for direction, value in neighbors if value == best)

    free = [d for d in SCAN_ORDER if arena.passable(d.ahead(state.agent_pos))]
    if not free:
        return STAY
    return free[int(rng.integers(0, len(free)))]


def predator_move(
    pred: PredatorState,
    g: Genome,
    arena: Arena,
    rng: np.random.Generator,
) -> Tuple[Direction, Position]:
    """直行直到前方是墙或边界，再按该类的移动基因转向。返回 (新朝向, 目标格)。"""
    ahead = pred.heading.ahead(pred.pos)
    if arena.passable(ahead):
        return pred.heading, ahead

    gene = g.movement(pred.klass)
    if gene == TURN_LEFT:
        heading = pred.heading.left()
    elif gene == TURN_RIGHT:
        heading = pred.heading.right()
    elif gene == TURN_RANDOM:
        heading = pred.heading.left() if rng.integers(0, 2) == 0 else pred.heading.right()
    else:
        heading = pred.heading.reverse()

    target = heading.ahead(pred.pos)
    if not arena.passable(target):
        return heading, pred.pos
    return heading, target


def resolve_collision(mover: EntityClass, target: EntityClass, g: Genome) -> Collision:
    """碰撞效果取有序对 (mover, target) 的碰撞基因；分数变化查计分表，不区分移动方。"""
    gene = g.collision(mover, target)
    effect = "Block" if gene is None else _EFFECTS[gene]
    return Collision(effect=effect, score_delta=g.score(mover, target))


def _apply_score(state: GameState, collision: Collision) -> None:
    state.collisions += 1
    state.score += collision.score_delta


def _check_end(state: GameState, cfg: GameConfig) -> bool:
    if not state.agent_alive:
        state.outcome = "Died"
        return True
    if state.score >= cfg.score_max:
        state.t += 1
        state.outcome = "Won"
        return True
    return False


def _move_agent(state, g, arena, rng, occupied) -> None:
    move = agent_policy(state, g, arena, rng, occupied)
    if move is STAY:
        return
    target = move.ahead(state.agent_pos)
    victim = occupied.get(target)
    if victim is None:
        state.agent_pos = target
        return

    collision = resolve_collision(EntityClass.AGENT, victim.klass, g)
    _apply_score(state, collision)
    if collision.effect == "MoverDies":
        state.agent_alive = False
    elif collision.effect == "TargetDies":
        victim.alive = False
        del occupied[target]
        state.agent_pos = target


def _relocate(pred: PredatorState, target: Position, occupied) -> None:
    del occupied[pred.pos]
    pred.pos = target
    occupied[target] = pred


def _move_predator(state, pred, g, arena, rng, occupied) -> None:
    heading, target = predator_move(pred, g, arena, rng)
    pred.heading = heading
    if target == pred.pos:
        return

    if target == state.agent_pos:
        collision = resolve_collision(pred.klass, EntityClass.AGENT, g)
        _apply_score(state, collision)
        if collision.effect == "MoverDies":
            pred.alive = False
            del occupied[pred.pos]
        elif collision.effect == "TargetDies":
            state.agent_alive = False
            _relocate(pred, target, occupied)
        return

    other = occupied.get(target)
    if other is None:
        _relocate(pred, target, occupied)
        return

    collision = resolve_collision(pred.klass, other.klass, g)
    _apply_score(state, collision)
    if collision.effect == "MoverDies":
        pred.alive = False
        del occupied[pred.pos]
    elif collision.effect == "TargetDies":
        other.alive = False
        del occupied[target]
        _relocate(pred, target, occupied)


def step(
    state: GameState,
    g: Genome,
    arena: Arena,
    cfg: GameConfig,
    rng: np.random.Generator,
) -> Tuple[GameState, bool]:
    """原地推进一步，返回 (state, 是否结束)。"""
    if state.terminal:
        raise UsageError(f"cannot step a terminal game (outcome={state.outcome}, t={state.t})")

    occupied = _occupancy(state)
    _move_agent(state, g, arena, rng, occupied)
    if state.agent_alive:
        state.visited.add(state.agent_pos)
    if _check_end(state, cfg):
        return state, True

    for pred in state.predators:
        if not pred.alive:
            continue
        _move_predator(state, pred, g, arena, rng, occupied)
        if _check_end(state, cfg):
            return state, True

    state.t += 1
    if state.t >= cfg.steps_max:
        state.outcome = "TimedOut"
        return state, True
    return state, False


def play_game(
    g: Genome,
    arena: Arena,
    cfg: GameConfig,
    rng: np.random.Generator,
    on_step: Optional[StepCallback] = None,
) -> GameResult:
    state = init_game(g, arena, rng)
    terminal = False
    while not terminal:
        state, terminal = step(state, g, arena, cfg, rng)
        if on_step is not None:
            on_step(state)
    return GameResult(
        steps_survived=state.t,
        final_score=state.score,
        cells_visited=len(state.visited),
        outcome=state.outcome,
    )


def evaluate(
    g: Genome,
    arena: Arena,
    cfg: GameConfig,
    rng: np.random.Generator,
) -> List[GameResult]:
    """独立进行 N 局，第 i 局使用由 (rng, i) 派生的子流。"""
    return [play_game(g, arena, cfg, stream) for stream in game_streams(rng, cfg.games_per_eval)]
