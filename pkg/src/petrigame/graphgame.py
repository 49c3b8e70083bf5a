"""Finite safety games ``Graph(G)`` and ``Graph'(G)`` built from a Petri game.

Player 0 (the system) picks a commitment ``c ⊆ post(s_M)`` right after
the system token moved; Player 1 fires purely environmental transitions
freely and system transitions only if they are committed.  The primed
variant carries a responsibility multiset ``R`` and only allows a
system transition once ``R ⊆ pre(t)``.

`solve_explicit` materialises every vertex reachable from the initial
vertex and runs a Player-1 attractor; it is meant as an oracle at small
scale, the production procedure lives in `petrigame.solver`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import NamedTuple

from .game import PetriGame
from .multiset import Multiset
from .net import Marking

PLAIN = "plain"
PRIMED = "primed"


class GameVertex(NamedTuple):
    """``(M, ⊤[, R])`` when ``commitment is None``, else ``(M, c[, R])``."""

    marking: Marking
    commitment: frozenset | None = None
    responsibility: Multiset | None = None

    @property
    def player(self) -> int:
        return 0 if self.commitment is None else 1


class EdgeKind(str, Enum):
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"


class BadClass(str, Enum):
    X1 = "X1"
    X2A = "X2a"
    X2B = "X2b"
    X3 = "X3"


class Edge(NamedTuple):
    kind: EdgeKind
    target: GameVertex
    transition: str | None = None
    carrier: str | None = None  # o ∈ post(t) chosen on a primed E2 edge


class VertexCapExceeded(RuntimeError):
    pass


def commitments(post: tuple[str, ...]) -> list[frozenset]:
    """All subsets of ``post`` ordered by size, then lexicographically."""
    return [frozenset(c) for r in range(len(post) + 1) for c in combinations(post, r)]


def initial_vertex(game: PetriGame, variant: str = PLAIN) -> GameVertex:
    m = game.net.initial
    if variant == PRIMED:
        return GameVertex(m, None, Multiset([game.system_place(m)]))
    return GameVertex(m, None, None)


def successors(game: PetriGame, v: GameVertex, variant: str = PLAIN) -> list[Edge]:
    net = game.net
    m = v.marking
    primed = variant == PRIMED
    if v.commitment is None:
        return [
            Edge(EdgeKind.E1, GameVertex(m, c, v.responsibility))
            for c in commitments(game.system_postset(m))
        ]
    out = []
    for t in net.transitions:
        pre = net.pre[t]
        if not pre.issubset(m):
            continue
        m2 = m - pre + net.post[t]
        if game.purely_environmental(t):
            if primed:
                rest = v.responsibility - pre
                for o in net.post[t]:
                    out.append(Edge(EdgeKind.E2, GameVertex(m2, v.commitment, rest + Multiset([o])), t, o))
            else:
                out.append(Edge(EdgeKind.E2, GameVertex(m2, v.commitment, None), t))
        elif t in v.commitment:
            if primed:
                if v.responsibility.issubset(pre):
                    out.append(Edge(EdgeKind.E3, GameVertex(m2, None, Multiset([game.system_place(m2)])), t))
            else:
                out.append(Edge(EdgeKind.E3, GameVertex(m2, None, None), t))
    return out


def classify_bad(game: PetriGame, v: GameVertex) -> BadClass | None:
    """First matching bad class in the order X1, X2a, X2b, X3 (Player-1 vertices only)."""
    if v.commitment is None:
        return None
    m, c = v.marking, v.commitment
    if game.is_bad(m):
        return BadClass.X1
    net = game.net
    enabled = net.enabled_transitions(m)
    committed = [t for t in enabled if t in c]
    if len(committed) >= 2:
        return BadClass.X2A
    for t in committed:
        if any(0 < n < m[p] for p, n in net.pre[t].items()):
            return BadClass.X2B
    if enabled and all(not game.purely_environmental(t) and t not in c for t in enabled):
        return BadClass.X3
    return None


@dataclass
class ExplicitSolution:
    winner: str
    variant: str
    vertices: list[GameVertex]
    attractor: set[int]
    strategy: dict[Marking, frozenset] | None
    bad: dict[int, BadClass]

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def attractor_vertices(self) -> set[GameVertex]:
        return {self.vertices[i] for i in self.attractor}


def plain_vertex_count(game: PetriGame) -> int:
    """Exact ``|V|`` of ``Graph(G)``: one ⊤ vertex plus ``2^|post(s_M)|`` per marking."""
    return sum(1 + 2 ** len(game.system_postset(m)) for m in game.reachability.markings)


def solve_explicit(game: PetriGame, variant: str = PLAIN, cap: int = 10**7) -> ExplicitSolution:
    """Winner of ``Graph(G)`` / ``Graph'(G)`` by a Player-1 attractor to the bad vertices.

    Vertices are generated lazily from the initial vertex; bad vertices are
    not expanded since a play is lost once it visits one.
    """
    if variant == PLAIN and plain_vertex_count(game) > cap:
        raise VertexCapExceeded(f"Graph(G) has {plain_vertex_count(game)} vertices (cap {cap})")
    primed = variant == PRIMED
    net = game.net
    graph = game.reachability
    marks = graph.markings
    # per-marking tables taken from the reachability graph
    moves: list[list[tuple[str, int, bool]]] = [[] for _ in marks]
    for i, t, j in graph.edges:
        moves[i].append((t, j, game.purely_environmental(t)))
    bad_marking = [game.is_bad(m) for m in marks]
    partial: dict[tuple[int, str], bool] = {}
    # commitments and responsibility multisets are interned as small ints
    c_ids: dict[frozenset, int] = {}
    c_list: list[frozenset] = []
    r_ids: dict[Multiset, int] = {}
    r_list: list[Multiset] = []

    def intern(obj, ids, items):
        i = ids.get(obj)
        if i is None:
            i = ids[obj] = len(items)
            items.append(obj)
        return i

    commits: dict[int, list[int]] = {}
    r_step: dict[tuple[int, str], tuple[int, ...]] = {}
    r_ok: dict[tuple[int, str], bool] = {}
    sys_r: dict[int, int] = {}

    def start_r(j):
        r = sys_r.get(j)
        if r is None:
            r = sys_r[j] = intern(Multiset([game.system_place(marks[j])]), r_ids, r_list)
        return r

    def classify(mi, c):
        if bad_marking[mi]:
            return BadClass.X1
        committed = [t for t, _, env in moves[mi] if not env and t in c]
        if len(committed) >= 2:
            return BadClass.X2A
        for t in committed:
            key = (mi, t)
            if key not in partial:
                m = marks[mi]
                partial[key] = any(0 < n < m[p] for p, n in net.pre[t].items())
            if partial[key]:
                return BadClass.X2B
        if moves[mi] and not committed and all(not env for _, _, env in moves[mi]):
            return BadClass.X3
        return None

    def expand(key):
        mi, ci, r = key
        if ci < 0:
            cs = commits.get(mi)
            if cs is None:
                cs = commits[mi] = [intern(c, c_ids, c_list) for c in commitments(game.system_postset(marks[mi]))]
            return [(mi, cc, r) for cc in cs]
        c = c_list[ci]
        out = []
        for t, j, env in moves[mi]:
            if env:
                if primed:
                    rs = r_step.get((r, t))
                    if rs is None:
                        rest = r_list[r] - net.pre[t]
                        rs = r_step[(r, t)] = tuple(
                            intern(rest + Multiset([o]), r_ids, r_list) for o in net.post[t]
                        )
                    out.extend((j, ci, r2) for r2 in rs)
                else:
                    out.append((j, ci, -1))
            elif t in c:
                if primed:
                    ok = r_ok.get((r, t))
                    if ok is None:
                        ok = r_ok[(r, t)] = r_list[r].issubset(net.pre[t])
                    if ok:
                        out.append((j, -1, start_r(j)))
                else:
                    out.append((j, -1, -1))
        return out

    k0 = (graph.initial, -1, start_r(graph.initial) if primed else -1)
    keys = [k0]
    index = {k0: 0}
    succ: list[list[int]] = []
    bad: dict[int, BadClass] = {}
    bad_cache: dict[tuple[int, int], BadClass | None] = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        key = keys[i]
        if key[1] >= 0:
            ck = (key[0], key[1])
            cls = bad_cache.get(ck, False)
            if cls is False:
                cls = bad_cache[ck] = classify(key[0], c_list[key[1]])
            if cls is not None:
                bad[i] = cls
                succ.append([])
                continue
        row = []
        for w in expand(key):
            j = index.get(w)
            if j is None:
                j = len(keys)
                if j >= cap:
                    raise VertexCapExceeded(f"{variant} graph game exceeds {cap} vertices")
                index[w] = j
                keys.append(w)
                queue.append(j)
            row.append(j)
        succ.append(row)
    vertices = [
        GameVertex(marks[mi], None if ci < 0 else c_list[ci], None if r < 0 else r_list[r])
        for mi, ci, r in keys
    ]
    n = len(vertices)
    while len(succ) < n:
        succ.append([])
    preds: list[list[int]] = [[] for _ in range(n)]
    remaining = [0] * n
    for i, js in enumerate(succ):
        distinct = set(js)
        remaining[i] = len(distinct)
        for j in distinct:
            preds[j].append(i)
    # Player 0 is attracted only when all of her successors are
    attr = set(bad)
    queue = deque(sorted(bad))
    while queue:
        j = queue.popleft()
        for i in preds[j]:
            if i in attr:
                continue
            if keys[i][1] < 0:
                remaining[i] -= 1
                if remaining[i] == 0:
                    attr.add(i)
                    queue.append(i)
            else:
                attr.add(i)
                queue.append(i)
    winner = "environment" if 0 in attr else "system"
    strategy = None
    if winner == "system":
        strategy = {}
        for i, v in enumerate(vertices):
            if v.commitment is None and i not in attr:
                for j in succ[i]:
                    if j not in attr:
                        strategy[v.marking] = vertices[j].commitment
                        break
    return ExplicitSolution(winner, variant, vertices, attr, strategy, bad)
