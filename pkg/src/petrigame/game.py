"""Petri games with a single system player."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from .multiset import Multiset
from .net import Marking, PetriNet, ReachabilityGraph, explore, format_marking


class GameError(ValueError):
    """Structurally invalid game (partition, bound, bad specification)."""


class NotOneSystemPlayer(GameError):
    """A reachable marking does not hold exactly one system token."""

    def __init__(self, marking: Marking, count: int):
        self.marking = marking
        self.count = count
        super().__init__(
            f"reachable marking {format_marking(marking)} has {count} system tokens (expected exactly 1)"
        )


@dataclass(frozen=True)
class BadSpec:
    """Bad markings, given either by bad places or as an explicit marking set.

    With ``places`` a marking is bad iff it marks at least one of them; with
    ``markings`` membership is exact.  An empty spec marks nothing as bad.
    """

    places: frozenset[str] | None = None
    markings: frozenset[Multiset] | None = None

    def __post_init__(self):
        if self.places is not None and self.markings is not None:
            raise GameError("bad specification must use either bad places or bad markings, not both")

    @classmethod
    def from_places(cls, places: Iterable[str]) -> "BadSpec":
        return cls(places=frozenset(places))

    @classmethod
    def from_markings(cls, markings: Iterable[Mapping[str, int]]) -> "BadSpec":
        return cls(markings=frozenset(Multiset(m) for m in markings))

    def contains(self, m: Marking) -> bool:
        if self.places is not None:
            return any(p in m for p in self.places)
        if self.markings is not None:
            return m in self.markings
        return False

    @property
    def empty(self) -> bool:
        return not self.places and not self.markings


@dataclass(frozen=True)
class PetriGame:
    """A bounded Petri game: net, system/environment partition, bad markings, bound."""

    net: PetriNet
    system_places: frozenset[str]
    env_places: frozenset[str]
    bad: BadSpec = field(default_factory=BadSpec)
    bound: int = 1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "system_places", frozenset(self.system_places))
        object.__setattr__(self, "env_places", frozenset(self.env_places))
        both = self.system_places & self.env_places
        if both:
            raise GameError(f"places in both partitions: {sorted(both)}")
        places = set(self.net.places)
        covered = self.system_places | self.env_places
        if covered != places:
            missing = sorted(places - covered)
            extra = sorted(covered - places)
            raise GameError(f"partition does not match places (unassigned {missing}, unknown {extra})")
        if self.bound < 1:
            raise GameError("bound must be at least 1")
        bad_places = self.bad.places or frozenset()
        if bad_places - places:
            raise GameError(f"bad places reference unknown places {sorted(bad_places - places)}")
        for m in self.bad.markings or ():
            if m.support() - places:
                raise GameError(f"bad marking references unknown places {sorted(m.support() - places)}")

    @classmethod
    def build(
        cls,
        system_places: Iterable[str],
        env_places: Iterable[str],
        transitions: Mapping[str, tuple[Mapping[str, int], Mapping[str, int]]],
        initial: Mapping[str, int] | Iterable[str],
        bad: BadSpec | None = None,
        bound: int = 1,
        name: str = "",
    ) -> "PetriGame":
        """Convenience constructor; ``initial`` may be a list of marked places."""
        system_places = list(system_places)
        env_places = list(env_places)
        if not isinstance(initial, Mapping):
            initial = Multiset(initial)
        net = PetriNet(system_places + env_places, transitions, initial)
        return cls(net, frozenset(system_places), frozenset(env_places), bad or BadSpec(), bound, name)

    def is_bad(self, m: Marking) -> bool:
        return self.bad.contains(m)

    def is_system_place(self, p: str) -> bool:
        return p in self.system_places

    def purely_environmental(self, t: str) -> bool:
        """True iff no system place occurs in the precondition of ``t``."""
        return self._env_only[t]

    @cached_property
    def _env_only(self) -> dict[str, bool]:
        return {
            t: not any(p in self.system_places for p in self.net.pre[t]) for t in self.net.transitions
        }

    @cached_property
    def transition_kinds(self) -> dict[str, str]:
        """``"env"`` for purely environmental transitions, ``"system"`` otherwise."""
        return {t: "env" if env else "system" for t, env in self._env_only.items()}

    def system_place(self, m: Marking) -> str:
        """The unique system place marked in ``m``."""
        found = [p for p in m if p in self.system_places]
        if len(found) != 1 or m[found[0]] != 1:
            count = sum(m[p] for p in found)
            raise NotOneSystemPlayer(m, count)
        return found[0]

    def system_postset(self, m: Marking) -> tuple[str, ...]:
        """``post(s_M)``: transitions consuming from the system place, sorted."""
        return self.net.place_postset(self.system_place(m))

    def env_tokens(self, m: Marking) -> int:
        return sum(n for p, n in m.items() if p in self.env_places)

    @cached_property
    def reachability(self) -> ReachabilityGraph:
        return explore(self.net, self.bound)

    def __hash__(self) -> int:
        return hash((self.net, self.system_places, self.bound))


@dataclass(frozen=True)
class ValidationReport:
    reachable_markings: int
    max_env_tokens: int
    bound: int
    system_places: int
    env_places: int
    transitions: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def validate(game: PetriGame) -> ValidationReport:
    """Check k-boundedness and the one-system-player restriction on all reachable markings."""
    graph = game.reachability
    max_env = 0
    for m in graph.markings:
        count = sum(n for p, n in m.items() if p in game.system_places)
        if count != 1:
            raise NotOneSystemPlayer(m, count)
        max_env = max(max_env, game.env_tokens(m))
    return ValidationReport(
        reachable_markings=len(graph),
        max_env_tokens=max_env,
        bound=game.bound,
        system_places=len(game.system_places),
        env_places=len(game.env_places),
        transitions=len(game.net.transitions),
    )


def is_bad(game: PetriGame, m: Marking) -> bool:
    return game.is_bad(m)
