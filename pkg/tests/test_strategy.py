import json

import pytest

from petrigame.game import PetriGame
from petrigame.graphgame import BadClass
from petrigame.strategy import CommitmentStrategy, CounterexamplePlay, StrategyUndefined, validate_strategy


def _game():
    # s can step alone (a) or with e (b); afterwards the system is done
    return PetriGame.build(
        ["s", "s2"], ["e", "f"],
        {"a": ({"s": 1}, {"s2": 1}), "b": ({"s": 1, "e": 1}, {"s2": 1, "f": 1})},
        ["s", "e"],
    )


def test_witness_validates(lock, lock_verdict):
    report = validate_strategy(lock, lock_verdict.strategy)
    assert report.player0_markings >= 1
    assert report.visited_vertices > report.player0_markings


def test_empty_commitment_deadlocks():
    g = _game()
    with pytest.raises(CounterexamplePlay) as info:
        validate_strategy(g, CommitmentStrategy({g.net.initial: frozenset()}))
    assert info.value.bad_class is BadClass.X3
    assert info.value.path[-1].commitment == frozenset()


def test_two_enabled_commitments_conflict():
    g = _game()
    with pytest.raises(CounterexamplePlay) as info:
        validate_strategy(g, CommitmentStrategy({g.net.initial: frozenset({"a", "b"})}))
    assert info.value.bad_class is BadClass.X2A


def test_missing_marking():
    g = _game()
    with pytest.raises(StrategyUndefined):
        validate_strategy(g, CommitmentStrategy({}))


def test_good_strategy_visits_successors():
    g = _game()
    s2 = g.net.fire(g.net.initial, "a")
    report = validate_strategy(g, CommitmentStrategy({g.net.initial: frozenset({"a"}), s2: frozenset()}))
    assert report.player0_markings == 2


def test_json_round_trip(lock_verdict):
    s = lock_verdict.strategy
    data = json.loads(json.dumps(s.to_json()))
    assert CommitmentStrategy.from_json(data) == s
    assert len(s) == len(data)
