import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import GAMES, seeded_game
from oracles import lexmin_model, naive_winner
from petrigame.game import BadSpec, PetriGame
from petrigame.io import read_game
from petrigame.multiset import Multiset
from petrigame.solver import InfeasibleBadReachable, TooManyEnvironmentTokens, build_cnf, decide, decide_twosat
from petrigame.strategy import validate_strategy


def test_lock_system_wins(lock, lock_verdict):
    assert lock_verdict.winner == "system"
    validate_strategy(lock, lock_verdict.strategy)


def test_lock_witness_is_lexmin(lock, lock_verdict):
    final = lock_verdict.attractor
    for m, c in lock_verdict.strategy.choices.items():
        cnf = build_cnf(lock, m, final)
        model = lexmin_model(len(cnf.variables), cnf.clauses)
        assert model is not None
        assert c == frozenset(v for i, v in enumerate(cnf.variables) if model[i + 1])


@pytest.mark.parametrize("mode", ["general", "twosat"])
@given(seed=st.integers(0, 10_000))
def test_witness_soundness(mode, seed):
    game = seeded_game(seed)
    v = decide(game, mode)
    if not v.system_wins:
        return
    for m, c in v.strategy.choices.items():
        cnf = build_cnf(game, m, v.attractor)
        assert cnf.evaluate({t: t in c for t in cnf.variables})
    validate_strategy(game, v.strategy)


@given(st.integers(0, 10_000))
def test_matches_graph_game_oracle(seed):
    game = seeded_game(seed)
    want = naive_winner(game)
    assert decide(game, "general").winner == want
    tw = decide_twosat(game)
    assert tw.winner == want
    assert tw.max_clause_len <= 2


@given(st.integers(0, 10_000))
def test_attractor_monotone_and_bounded(seed):
    game = seeded_game(seed)
    v = decide(game, "general")
    assert v.attractor_history == sorted(v.attractor_history)
    assert v.iterations <= v.reachable_markings + 1


@given(st.integers(0, 2_000))
def test_workers_do_not_change_result(seed):
    game = seeded_game(seed)
    a, b = decide(game, "general"), decide(game, "general", workers=3)
    assert a.winner == b.winner
    assert a.strategy == b.strategy
    assert a.attractor_history == b.attractor_history


def test_auto_mode_selection(lock):
    assert decide(lock).mode == "general"
    assert decide(seeded_game(3, env_tokens=2)).mode == "twosat"


def test_twosat_refuses_three_tokens():
    game = read_game(GAMES / "three_env.game")
    with pytest.raises(TooManyEnvironmentTokens):
        decide(game, "twosat")
    assert decide(game).winner == "system"


def test_unknown_mode(lock):
    with pytest.raises(ValueError):
        decide(lock, "fast")


def test_bad_initial_loses():
    g = read_game(GAMES / "bad_initial.game")
    v = decide(g)
    assert v.winner == "environment" and v.strategy is None and v.iterations == 1


def test_build_cnf_by_hand():
    # s may move alone (a) or with the environment token (b); nothing else moves
    g = PetriGame.build(
        ["s", "s2"], ["e", "f"],
        {"a": ({"s": 1}, {"s2": 1}), "b": ({"s": 1, "e": 1}, {"s2": 1, "f": 1})},
        ["s", "e"],
    )
    cnf = build_cnf(g, g.net.initial)
    assert cnf.variables == ("a", "b")
    assert sorted(map(sorted, cnf.clauses)) == [[-2, -1], [1, 2]]
    assert decide(g, "general").strategy[g.net.initial] == frozenset({"b"})


def test_build_cnf_infeasible():
    g = PetriGame.build(["s"], ["e", "f"], {"u": ({"e": 1}, {"f": 1})}, ["s", "e"], BadSpec.from_places(["f"]))
    with pytest.raises(InfeasibleBadReachable):
        build_cnf(g, g.net.initial)
    assert decide(g, "general").winner == "environment"


def _joint_game(bad=()):
    return PetriGame.build(
        ["s", "s1", "s2", "s3"], ["e1", "e2", "x1", "x2"],
        {
            "t1": ({"s": 1, "e1": 1}, {"s1": 1, "x1": 1}),
            "t2": ({"s": 1, "e2": 1}, {"s2": 1, "x2": 1}),
            "t12": ({"s": 1, "e1": 1, "e2": 1}, {"s3": 1, "x1": 1, "x2": 1}),
        },
        ["s", "e1", "e2"], BadSpec.from_places(bad),
    )


@pytest.mark.parametrize("bad", [(), ("s1",), ("s1", "s2"), ("s1", "s2", "s3")])
def test_joint_transition_case(bad):
    g = _joint_game(bad)
    gen, tw = decide(g, "general"), decide(g, "twosat")
    assert gen.winner == tw.winner == naive_winner(g)
    assert tw.max_clause_len <= 2
    if tw.system_wins:
        validate_strategy(g, tw.strategy)


def test_joint_game_needs_three_literal_clause_in_general_mode():
    v = decide(_joint_game(), "general")
    assert v.max_clause_len == 3
    assert v.strategy[Multiset(["s", "e1", "e2"])] == frozenset({"t2"})
