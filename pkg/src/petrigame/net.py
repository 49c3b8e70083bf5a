"""Place/transition nets, firing, and bounded reachability exploration."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .multiset import Multiset

Marking = Multiset


class NetError(ValueError):
    """Malformed net structure or a reference to an unknown node."""


class NotEnabled(ValueError):
    """Attempt to fire a transition whose precondition is not covered."""


class BoundExceeded(RuntimeError):
    """A reachable marking puts more than ``k`` tokens on some place."""

    def __init__(self, marking: Marking, place: str, bound: int):
        self.marking = marking
        self.place = place
        self.bound = bound
        super().__init__(
            f"place {place!r} holds {marking[place]} tokens (> bound {bound}) "
            f"in reachable marking {format_marking(marking)}"
        )


def format_marking(m: Mapping) -> str:
    items = sorted(m.items())
    return "{" + ", ".join(p if n == 1 else f"{p}:{n}" for p, n in items) + "}"


class PetriNet:
    """A finite Petri net ``(P, T, F, In)``.

    ``transitions`` maps every transition id to a ``(pre, post)`` pair of
    multisets over places.  The flow multiset is derived from these.
    Transitions are kept in lexicographic order, which every algorithm in
    the package uses as its canonical iteration order.
    """

    def __init__(
        self,
        places: Iterable[str],
        transitions: Mapping[str, tuple[Mapping[str, int], Mapping[str, int]]],
        initial: Mapping[str, int],
    ):
        places = list(places)
        place_set = set(places)
        if len(place_set) != len(places):
            raise NetError("duplicate place id")
        self.places: tuple[str, ...] = tuple(sorted(place_set))
        overlap = place_set & set(transitions)
        if overlap:
            raise NetError(f"ids used both as place and transition: {sorted(overlap)}")
        self.transitions: tuple[str, ...] = tuple(sorted(transitions))
        self.pre: dict[str, Multiset] = {}
        self.post: dict[str, Multiset] = {}
        for t in self.transitions:
            pre, post = transitions[t]
            pre, post = Multiset(pre), Multiset(post)
            for side, ms in (("pre", pre), ("post", post)):
                unknown = ms.support() - place_set
                if unknown:
                    raise NetError(f"transition {t!r} {side} references unknown places {sorted(unknown)}")
            if pre.cardinality == 0:
                raise NetError(f"transition {t!r} has an empty precondition (pre- and postconditions must be nonempty)")
            if post.cardinality == 0:
                raise NetError(f"transition {t!r} has an empty postcondition (pre- and postconditions must be nonempty)")
            self.pre[t] = pre
            self.post[t] = post
        self.initial: Multiset = Multiset(initial)
        unknown = self.initial.support() - place_set
        if unknown:
            raise NetError(f"initial marking references unknown places {sorted(unknown)}")
        self._postset_of_place: dict[str, tuple[str, ...]] = {p: () for p in self.places}
        for t in self.transitions:
            for p in self.pre[t]:
                self._postset_of_place[p] += (t,)

    @property
    def flow(self) -> Multiset:
        """Flow relation as a multiset over (place, transition) and (transition, place) arcs."""
        arcs: dict = {}
        for t in self.transitions:
            for p, n in self.pre[t].items():
                arcs[(p, t)] = n
            for p, n in self.post[t].items():
                arcs[(t, p)] = n
        return Multiset(arcs)

    def place_postset(self, place: str) -> tuple[str, ...]:
        """Transitions having ``place`` in their precondition, sorted."""
        return self._postset_of_place[place]

    def _check(self, t: str) -> None:
        if t not in self.pre:
            raise NetError(f"unknown transition {t!r}")

    def enabled(self, m: Marking, t: str) -> bool:
        self._check(t)
        return self.pre[t].issubset(m)

    def enabled_transitions(self, m: Marking) -> list[str]:
        return [t for t in self.transitions if self.pre[t].issubset(m)]

    def fire(self, m: Marking, t: str) -> Marking:
        self._check(t)
        if not self.pre[t].issubset(m):
            raise NotEnabled(f"transition {t!r} is not enabled in {format_marking(m)}")
        return m - self.pre[t] + self.post[t]

    def _key(self):
        return (
            self.places,
            tuple((t, self.pre[t].key, self.post[t].key) for t in self.transitions),
            self.initial.key,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PetriNet):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"PetriNet(|P|={len(self.places)}, |T|={len(self.transitions)}, In={format_marking(self.initial)})"


@dataclass(frozen=True)
class ReachabilityGraph:
    """Reachable markings of a net with their firing edges.

    ``markings[i]`` is the marking with index ``i``; index 0 is the initial
    marking.  ``edges`` holds ``(source, transition, target)`` triples.
    """

    markings: tuple[Marking, ...]
    edges: tuple[tuple[int, str, int], ...]
    index: dict = field(repr=False, compare=False)
    initial: int = 0

    def __len__(self) -> int:
        return len(self.markings)

    def successors(self, i: int) -> list[tuple[str, int]]:
        return self._out[i]

    @property
    def _out(self) -> list[list[tuple[str, int]]]:
        out = self.__dict__.get("_out_cache")
        if out is None:
            out = [[] for _ in self.markings]
            for i, t, j in self.edges:
                out[i].append((t, j))
            object.__setattr__(self, "_out_cache", out)
        return out


def explore(net: PetriNet, k: int) -> ReachabilityGraph:
    """Breadth-first reachability closure, aborting on a ``k``-bound violation."""
    if k < 1:
        raise ValueError("bound k must be at least 1")
    _check_bound(net.initial, k)
    markings = [net.initial]
    index = {net.initial: 0}
    edges = []
    queue = deque([0])
    pre, post = net.pre, net.post
    while queue:
        i = queue.popleft()
        m = markings[i]
        for t in net.transitions:
            if not pre[t].issubset(m):
                continue
            m2 = m - pre[t] + post[t]
            j = index.get(m2)
            if j is None:
                _check_bound(m2, k)
                j = len(markings)
                index[m2] = j
                markings.append(m2)
                queue.append(j)
            edges.append((i, t, j))
    return ReachabilityGraph(tuple(markings), tuple(edges), index)


def _check_bound(m: Marking, k: int) -> None:
    for p, n in m.items():
        if n > k:
            raise BoundExceeded(m, p, k)
