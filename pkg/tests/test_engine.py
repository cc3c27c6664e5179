import itertools

import numpy as np
import pytest

from minga.errors import InitializationError, UsageError
from minga.game import (
    STAY,
    ArenaLayout,
    Direction,
    GameConfig,
    GameState,
    PredatorState,
    agent_policy,
    build_arena,
    evaluate,
    format_step,
    init_game,
    play_game,
    predator_move,
    render_state,
    resolve_collision,
    step,
)
from minga.game.arena import walls_from_cells
from minga.genome import A, B, G, PREDATOR_CLASSES, R, EntityClass, Genome, gene_index, random_genome
from minga.utils import game_streams, make_rng


def make_genome(counts=(0, 0, 0), moves=(0, 0, 0), collide=None, score=None):
    genes = [0] * 30
    for klass, value in zip(PREDATOR_CLASSES, counts):
        genes[gene_index("count", klass)] = value
    for klass, value in zip(PREDATOR_CLASSES, moves):
        genes[gene_index("move", klass)] = value
    for (mover, target), value in (collide or {}).items():
        genes[gene_index("collide", mover, target)] = value
    for (first, second), value in (score or {}).items():
        genes[gene_index("score", first, second)] = value
    return Genome(tuple(genes))


def make_state(agent_pos, *predators):
    return GameState(
        t=0,
        agent_pos=agent_pos,
        predators=[PredatorState(klass, pos, heading, index=i) for i, (klass, pos, heading) in enumerate(predators)],
        visited={agent_pos},
    )


def pocket_arena():
    # 3x3，中心格四面是墙
    return build_arena(ArenaLayout(width=3, height=3, walls=walls_from_cells([(1, 0), (0, 1), (2, 1), (1, 2)])))


def test_init_game_without_predators():
    arena = build_arena()
    state = init_game(make_genome(), arena, make_rng(1))

    assert state.predators == []
    assert state.t == 0
    assert state.score == 0
    assert state.visited == {state.agent_pos}
    assert arena.passable(state.agent_pos)


def test_init_game_max_counts_places_distinct_entities():
    arena = build_arena()
    g = make_genome(counts=(20, 20, 20))
    state = init_game(g, arena, make_rng(2))

    positions = {state.agent_pos} | {p.pos for p in state.predators}
    assert len(positions) == 61
    assert all(arena.passable(pos) for pos in positions)
    assert [p.klass for p in state.predators] == [R] * 20 + [G] * 20 + [B] * 20
    assert all(isinstance(p.heading, Direction) for p in state.predators)


def test_init_game_is_deterministic():
    arena = build_arena()
    g = make_genome(counts=(3, 2, 1))
    assert init_game(g, arena, make_rng(3)) == init_game(g, arena, make_rng(3))


def test_init_game_too_many_entities():
    arena = build_arena(ArenaLayout(width=2, height=2, walls=()))
    with pytest.raises(InitializationError):
        init_game(make_genome(counts=(2, 2, 0)), arena, make_rng(4))


def test_agent_moves_to_high_scoring_predator():
    arena = build_arena()
    g = make_genome(score={(A, B): 1})
    state = make_state((6, 6), (B, (7, 6), Direction.N))
    assert agent_policy(state, g, arena, make_rng(0)) is Direction.E


def test_agent_prefers_highest_scoring_neighbor():
    arena = build_arena()
    g = make_genome(score={(A, R): 1, (A, G): 0})
    state = make_state((6, 6), (G, (7, 6), Direction.N), (R, (6, 5), Direction.N))
    assert agent_policy(state, g, arena, make_rng(0)) is Direction.N


def test_boxed_agent_stays():
    state = make_state((1, 1))
    assert agent_policy(state, make_genome(), pocket_arena(), make_rng(0)) is STAY

    corner = build_arena(ArenaLayout(width=1, height=1, walls=()))
    assert agent_policy(make_state((0, 0)), make_genome(), corner, make_rng(0)) is STAY


def test_agent_policy_matches_oracle_over_neighbor_configurations():
    arena = build_arena()
    center = (6, 6)
    rng = make_rng(5)
    for values in itertools.product((-1, 0, 1), repeat=3):
        g = make_genome(score=dict(zip([(A, R), (A, G), (A, B)], values)))
        for layout in itertools.product((None, R, G, B), repeat=4):
            predators = [
                (klass, direction.ahead(center), Direction.E)
                for direction, klass in zip(Direction, layout)
                if klass is not None
            ]
            state = make_state(center, *predators)
            move = agent_policy(state, g, arena, rng)

            scored = [(d, values[int(k)]) for d, k in zip(Direction, layout) if k is not None]
            best = max((value for _, value in scored), default=0)
            if best > 0:
                assert move is next(d for d, value in scored if value == best)
            else:
                assert move is not STAY
                assert arena.passable(move.ahead(center))


def test_agent_fallback_is_random_among_free_neighbors():
    arena = build_arena()
    rng = make_rng(6)
    moves = {agent_policy(make_state((6, 6)), make_genome(), arena, rng) for _ in range(200)}
    assert moves == set(Direction)


def test_predator_moves_straight_when_open():
    arena = build_arena()
    pred = PredatorState(R, (6, 6), Direction.E)
    assert predator_move(pred, make_genome(), arena, make_rng(0)) == (Direction.E, (7, 6))


@pytest.mark.parametrize("gene, heading, target", [
    (0, Direction.N, (3, 4)),
    (1, Direction.S, (3, 6)),
    (3, Direction.W, (2, 5)),
])
def test_predator_turns_at_wall(gene, heading, target):
    arena = build_arena()
    # (4, 5) 是墙
    pred = PredatorState(R, (3, 5), Direction.E)
    assert predator_move(pred, make_genome(moves=(gene, 0, 0)), arena, make_rng(0)) == (heading, target)


def test_predator_random_turn_is_left_or_right():
    arena = build_arena()
    pred = PredatorState(G, (3, 5), Direction.E)
    rng = make_rng(7)
    headings = {predator_move(pred, make_genome(moves=(0, 2, 0)), arena, rng)[0] for _ in range(100)}
    assert headings == {Direction.N, Direction.S}


def test_predator_blocked_after_turn_keeps_new_heading():
    arena = build_arena()
    pred = PredatorState(B, (13, 0), Direction.E)
    assert predator_move(pred, make_genome(moves=(0, 0, 0)), arena, make_rng(0)) == (Direction.N, (13, 0))


def test_predator_in_pocket_stays():
    arena = pocket_arena()
    for gene, heading in itertools.product(range(4), Direction):
        pred = PredatorState(R, (1, 1), heading)
        _, target = predator_move(pred, make_genome(moves=(gene, 0, 0)), arena, make_rng(gene))
        assert target == (1, 1)


def test_resolve_collision_examples():
    g = make_genome(collide={(A, R): 1})
    assert resolve_collision(A, R, g).effect == "MoverDies"

    g = make_genome(collide={(A, R): 2}, score={(A, R): 1})
    collision = resolve_collision(A, R, g)
    assert (collision.effect, collision.score_delta) == ("TargetDies", 1)

    g = make_genome(collide={(R, G): 0}, score={(G, R): -1})
    collision = resolve_collision(R, G, g)
    assert (collision.effect, collision.score_delta) == ("Block", -1)


def test_resolve_collision_matches_table_oracle():
    g = random_genome(make_rng(8))
    genes = g.genes
    collide_names = {spec: i for i, spec in enumerate(["RR", "RG", "RB", "RA", "GR", "GG", "GB", "GA",
                                                         "BR", "BG", "BB", "BA", "AR", "AG", "AB"])}
    score_names = ["RR", "GG", "BB", "AR", "AG", "AB", "GR", "BR", "BG"]
    effects = ("Block", "MoverDies", "TargetDies")
    for mover, target in itertools.product(EntityClass, repeat=2):
        key = mover.letter + target.letter
        expected_effect = effects[genes[6 + collide_names[key]]] if key in collide_names else "Block"
        if key in score_names:
            expected_delta = genes[21 + score_names.index(key)]
        elif key[::-1] in score_names:
            expected_delta = genes[21 + score_names.index(key[::-1])]
        else:
            expected_delta = 0
        collision = resolve_collision(mover, target, g)
        assert (collision.effect, collision.score_delta) == (expected_effect, expected_delta)


def test_step_without_collisions_advances_time():
    arena = build_arena()
    state = make_state((6, 6))
    state, terminal = step(state, make_genome(), arena, GameConfig(), make_rng(9))

    assert not terminal
    assert state.t == 1
    assert state.score == 0
    assert state.collisions == 0
    assert len(state.visited) == 2


def test_step_wins_when_score_reaches_max():
    arena = build_arena()
    g = make_genome(collide={(A, R): 2}, score={(A, R): 1})
    state = make_state((6, 6), (R, (6, 5), Direction.N), (G, (0, 0), Direction.E))
    state, terminal = step(state, g, arena, GameConfig(score_max=1), make_rng(0))

    assert terminal
    assert state.outcome == "Won"
    assert state.score == 1
    assert state.t == 1
    assert state.agent_pos == (6, 5)
    assert state.predators[0].alive is False
    # 获胜后剩下的捕食者不再移动
    assert state.predators[1].pos == (0, 0)


def test_death_step_is_not_counted():
    arena = build_arena()
    g = make_genome(collide={(A, R): 1}, score={(A, R): 1})
    state = make_state((6, 6), (R, (6, 5), Direction.N))
    state.t = 17
    state, terminal = step(state, g, arena, GameConfig(), make_rng(0))

    assert terminal
    assert state.outcome == "Died"
    assert state.t == 17
    assert not state.agent_alive


def test_death_takes_precedence_over_win():
    arena = build_arena()
    g = make_genome(collide={(A, R): 1}, score={(A, R): 1})
    state = make_state((6, 6), (R, (6, 5), Direction.N))
    state, _ = step(state, g, arena, GameConfig(score_max=1), make_rng(0))
    assert state.outcome == "Died"


def test_predator_kills_agent():
    arena = build_arena(ArenaLayout(width=3, height=1, walls=()))
    g = make_genome(collide={(R, A): 2})
    state = make_state((0, 0), (R, (2, 0), Direction.W))
    state, terminal = step(state, g, arena, GameConfig(), make_rng(0))

    assert terminal
    assert state.outcome == "Died"
    assert state.predators[0].pos == (1, 0)


def test_predator_collisions_update_agent_score():
    arena = build_arena(ArenaLayout(width=5, height=1, walls=()))
    g = make_genome(collide={(R, G): 0, (G, R): 2}, score={(G, R): 1})
    state = make_state((0, 0), (R, (2, 0), Direction.E), (G, (3, 0), Direction.W))
    state, terminal = step(state, g, arena, GameConfig(), make_rng(0))

    red, green = state.predators
    assert not terminal
    assert state.agent_pos == (1, 0)
    assert state.score == 2
    assert state.collisions == 2
    assert not red.alive
    assert green.pos == (2, 0)


def test_step_on_terminal_state_is_usage_error():
    arena = build_arena()
    state = make_state((6, 6))
    state, terminal = step(state, make_genome(), arena, GameConfig(steps_max=1), make_rng(0))
    assert terminal
    assert state.outcome == "TimedOut"
    with pytest.raises(UsageError):
        step(state, make_genome(), arena, GameConfig(steps_max=1), make_rng(0))


def test_play_game_without_predators_times_out():
    arena = build_arena()
    result = play_game(make_genome(), arena, GameConfig(), make_rng(10))

    assert result.n == 100
    assert result.x == 0
    assert result.outcome == "TimedOut"
    assert 1 < result.c <= 101


def test_play_game_on_step_callback_sees_every_step():
    arena = build_arena()
    lines = []
    play_game(make_genome(), arena, GameConfig(steps_max=5), make_rng(11), on_step=lambda s: lines.append(format_step(s)))
    assert len(lines) == 5
    assert lines[-1].startswith("t=5 agent=(")
    assert lines[-1].endswith("score=0 predators=0")


def test_play_game_is_deterministic():
    arena = build_arena()
    g = random_genome(make_rng(12))
    assert play_game(g, arena, GameConfig(), make_rng(13)) == play_game(g, arena, GameConfig(), make_rng(13))


def test_evaluate_plays_n_games_on_derived_streams():
    arena = build_arena()
    g = make_genome(counts=(3, 3, 3), collide={(A, R): 2}, score={(A, R): 1})

    assert len(evaluate(g, arena, GameConfig(), make_rng(14))) == 10

    single = evaluate(g, arena, GameConfig(games_per_eval=1), make_rng(15))
    stream = game_streams(make_rng(15), 1)[0]
    assert single == [play_game(g, arena, GameConfig(games_per_eval=1), stream)]


def test_evaluate_games_are_independent_of_order():
    arena = build_arena()
    g = random_genome(make_rng(16))
    cfg = GameConfig(games_per_eval=6)
    results = evaluate(g, arena, cfg, make_rng(17))
    streams = game_streams(make_rng(17), 6)
    for index in (5, 2, 0, 4, 1, 3):
        assert play_game(g, arena, cfg, streams[index]) == results[index]


@pytest.mark.parametrize("games", [100, pytest.param(1000, marks=pytest.mark.slow)])
def test_game_invariants_over_random_games(games):
    arena = build_arena()
    cfg = GameConfig()
    rng = make_rng(18)
    for _ in range(games):
        g = random_genome(rng)
        state = init_game(g, arena, rng)
        counts = {klass: g.count(klass) for klass in PREDATOR_CLASSES}
        visited = len(state.visited)
        terminal = False
        while not terminal:
            score, collisions = state.score, state.collisions
            state, terminal = step(state, g, arena, cfg, rng)
            live = state.live_predators()
            assert all(arena.passable(p.pos) for p in live)
            assert arena.passable(state.agent_pos)
            assert len({p.pos for p in live}) == len(live)
            for klass in PREDATOR_CLASSES:
                current = len(state.live_predators(klass))
                assert current <= counts[klass]
                counts[klass] = current
            assert len(state.visited) >= visited
            visited = len(state.visited)
            assert abs(state.score - score) <= state.collisions - collisions
        assert 0 <= state.t <= cfg.steps_max
        assert 1 <= len(state.visited) <= arena.free_cell_count
        if state.outcome == "Won":
            assert state.score >= cfg.score_max


def test_render_state_draws_entities():
    arena = build_arena(ArenaLayout(width=4, height=2, walls=walls_from_cells([(3, 0)])))
    state = make_state((0, 0), (R, (1, 0), Direction.E), (B, (2, 1), Direction.E))
    assert render_state(state, arena) == "Ar.#\n..b."
