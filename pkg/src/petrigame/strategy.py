"""Memoryless commitment strategies and their play-level validation."""

from __future__ import annotations

from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass

from .game import PetriGame
from .net import Marking, format_marking


@dataclass(frozen=True)
class CommitmentStrategy:
    """Map from Player-0 markings to the set of allowed ``post(s_M)`` transitions."""

    choices: Mapping[Marking, frozenset]

    def __getitem__(self, m: Marking) -> frozenset:
        return self.choices[m]

    def get(self, m: Marking, default=frozenset()) -> frozenset:
        return self.choices.get(m, default)

    def __contains__(self, m: Marking) -> bool:
        return m in self.choices

    def __len__(self) -> int:
        return len(self.choices)

    def to_json(self) -> list[dict]:
        return [
            {"marking": dict(m.key), "commitment": sorted(self.choices[m])}
            for m in sorted(self.choices)
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "CommitmentStrategy":
        from .multiset import Multiset

        return cls({Multiset(d["marking"]): frozenset(d["commitment"]) for d in data})


class CounterexamplePlay(Exception):
    """A play consistent with the strategy that reaches a bad vertex."""

    def __init__(self, path: list, bad_class):
        self.path = path
        self.bad_class = bad_class
        steps = " -> ".join(
            format_marking(v.marking) + ("" if v.commitment is None else "/{" + ",".join(sorted(v.commitment)) + "}")
            for v in path
        )
        super().__init__(f"{bad_class.value} reached: {steps}")


class StrategyUndefined(KeyError):
    pass


@dataclass(frozen=True)
class StrategyReport:
    visited_vertices: int
    player0_markings: int


def validate_strategy(game: PetriGame, strategy: CommitmentStrategy) -> StrategyReport:
    """Explore ``Graph(G)`` with Player 0 following ``strategy``; fail on any bad vertex."""
    from .graphgame import GameVertex, classify_bad, successors

    start = GameVertex(game.net.initial)
    parent = {start: None}
    queue = deque([start])
    p0 = 0
    while queue:
        v = queue.popleft()
        if v.commitment is None:
            p0 += 1
            if v.marking not in strategy:
                raise StrategyUndefined(f"no commitment for reachable marking {format_marking(v.marking)}")
            nexts = [GameVertex(v.marking, frozenset(strategy[v.marking]))]
        else:
            cls = classify_bad(game, v)
            if cls is not None:
                path = []
                w = v
                while w is not None:
                    path.append(w)
                    w = parent[w]
                raise CounterexamplePlay(path[::-1], cls)
            nexts = [e.target for e in successors(game, v)]
        for w in nexts:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return StrategyReport(len(parent), p0)
