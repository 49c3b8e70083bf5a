import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeded_game
from oracles import dfs_reachable
from petrigame.game import BadSpec, GameError, NotOneSystemPlayer, PetriGame, validate
from petrigame.multiset import Multiset
from petrigame.net import BoundExceeded


def test_lock_validates_with_one_system_token(lock):
    report = validate(lock)
    assert report.reachable_markings == len(dfs_reachable(lock.net))
    assert report.max_env_tokens == 4
    for m in lock.reachability.markings:
        assert sum(m[p] for p in lock.system_places) == 1


def test_lock_transition_kinds(lock):
    kinds = lock.transition_kinds
    assert kinds["te11"] == "env" and kinds["te1a"] == "env"
    assert kinds["te12"] == "system" and kinds["ts"] == "system"


def test_bad_places_vs_markings():
    by_place = BadSpec.from_places(["x"])
    assert by_place.contains(Multiset({"x": 1, "y": 1}))
    by_marking = BadSpec.from_markings([{"x": 1}])
    assert by_marking.contains(Multiset({"x": 1}))
    assert not by_marking.contains(Multiset({"x": 1, "y": 1}))
    assert BadSpec().empty and not BadSpec().contains(Multiset({"x": 1}))


def test_bad_spec_cannot_mix():
    with pytest.raises(GameError):
        BadSpec(places=frozenset(["a"]), markings=frozenset())


def test_two_system_tokens_rejected():
    g = PetriGame.build(["s1", "s2"], [], {}, ["s1", "s2"])
    with pytest.raises(NotOneSystemPlayer) as info:
        validate(g)
    assert info.value.count == 2


def test_system_token_lost_rejected():
    g = PetriGame.build(["s"], ["e"], {"t": ({"s": 1}, {"e": 1})}, ["s"])
    with pytest.raises(NotOneSystemPlayer):
        validate(g)


def test_bound_violation_surfaces():
    g = PetriGame.build(["s"], ["e"], {"t": ({"s": 1}, {"s": 1, "e": 1})}, ["s"], bound=2)
    with pytest.raises(BoundExceeded):
        validate(g)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(system=["s"], env=["s"]),
        dict(system=["s"], env=[]),
        dict(system=["s"], env=["e"], bad=BadSpec.from_places(["zz"])),
        dict(system=["s"], env=["e"], bound=0),
    ],
    ids=["overlap", "unassigned", "unknown-bad", "bound-zero"],
)
def test_partition_errors(kwargs):
    from petrigame.net import PetriNet

    net = PetriNet(["s", "e"], {}, {"s": 1})
    with pytest.raises(GameError):
        PetriGame(net, frozenset(kwargs["system"]), frozenset(kwargs["env"]),
                  kwargs.get("bad", BadSpec()), kwargs.get("bound", 1))


@given(st.integers(0, 5000))
def test_random_games_validate(seed):
    g = seeded_game(seed)
    report = validate(g)
    assert report.max_env_tokens <= 2
    assert report.reachable_markings == len(dfs_reachable(g.net))
