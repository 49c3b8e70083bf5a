"""Reference implementations used only by the tests.

Each one is written from the definitions, sharing no code with the
package beyond the net's ``pre``/``post`` tables and plain dictionaries.
"""

from __future__ import annotations

from collections import Counter
from itertools import chain, combinations

import numpy as np


# --- markings as sorted tuples of (place, count) --------------------------

def _key(counter) -> tuple:
    return tuple(sorted((p, n) for p, n in counter.items() if n))


def _enabled(pre: dict, m: Counter) -> bool:
    return all(m[p] >= n for p, n in pre.items())


def _fire(pre: dict, post: dict, m: Counter) -> Counter:
    out = Counter(m)
    out.subtract(pre)
    out.update(post)
    return +out


def dfs_reachable(net) -> set[tuple]:
    """Reachable markings by recursive-free depth-first search."""
    pre = {t: dict(net.pre[t]) for t in net.transitions}
    post = {t: dict(net.post[t]) for t in net.transitions}
    start = Counter(dict(net.initial))
    seen = {_key(start)}
    stack = [start]
    while stack:
        m = stack.pop()
        for t in pre:
            if _enabled(pre[t], m):
                m2 = _fire(pre[t], post[t], m)
                k = _key(m2)
                if k not in seen:
                    seen.add(k)
                    stack.append(m2)
    return seen


# --- SAT --------------------------------------------------------------------

def truth_table_models(num_vars: int, clauses) -> np.ndarray:
    """Boolean mask over all assignments in lexicographic order (var 1 most significant, false first)."""
    n = 1 << num_vars
    idx = np.arange(n, dtype=np.int64)
    values = [None] + [((idx >> (num_vars - v)) & 1).astype(bool) for v in range(1, num_vars + 1)]
    ok = np.ones(n, dtype=bool)
    for c in clauses:
        sat = np.zeros(n, dtype=bool)
        for lit in c:
            sat |= values[lit] if lit > 0 else ~values[-lit]
        ok &= sat
    return ok


def lexmin_model(num_vars: int, clauses) -> list[bool] | None:
    ok = truth_table_models(num_vars, clauses)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    first = int(hits[0])
    return [False] + [bool((first >> (num_vars - v)) & 1) for v in range(1, num_vars + 1)]


def satisfies(values, clauses) -> bool:
    return all(any(values[l] if l > 0 else not values[-l] for l in c) for c in clauses)


# --- Graph(G) straight from its definition ----------------------------------

def _powerset(items):
    items = sorted(items)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))]


class NaiveGraphGame:
    """``Graph(G)`` with vertices ``(marking_key, None)`` for Player 0 and ``(marking_key, c)`` for Player 1."""

    def __init__(self, game):
        self.game = game
        net = game.net
        self.pre = {t: dict(net.pre[t]) for t in net.transitions}
        self.post = {t: dict(net.post[t]) for t in net.transitions}
        self.sys = set(game.system_places)
        self.env_only = {t for t in self.pre if not (set(self.pre[t]) & self.sys)}

    def s_of(self, m: Counter) -> str:
        (s,) = [p for p in m if p in self.sys and m[p]]
        return s

    def post_of_place(self, p: str) -> set[str]:
        return {t for t in self.pre if p in self.pre[t]}

    def enabled(self, m: Counter) -> list[str]:
        return sorted(t for t in self.pre if _enabled(self.pre[t], m))

    def bad_marking(self, m: Counter) -> bool:
        from petrigame.multiset import Multiset

        return self.game.bad.contains(Multiset(dict(m)))

    def is_bad(self, m: Counter, c: frozenset) -> bool:
        if self.bad_marking(m):
            return True
        en = self.enabled(m)
        committed = [t for t in en if t in c]
        if len(committed) >= 2:
            return True
        for t in committed:
            if any(0 < n < m[p] for p, n in self.pre[t].items()):
                return True
        if en and all(t not in self.env_only for t in en) and not committed:
            return True
        return False

    def successors(self, vertex):
        key, c = vertex
        m = Counter(dict(key))
        if c is None:
            return [(key, cc) for cc in _powerset(self.post_of_place(self.s_of(m)))]
        out = []
        for t in self.enabled(m):
            m2 = _key(_fire(self.pre[t], self.post[t], m))
            if t in self.env_only:
                out.append((m2, c))
            elif t in c:
                out.append((m2, None))
        return out

    def initial(self):
        return (_key(Counter(dict(self.game.net.initial))), None)

    def solve(self) -> str:
        """Winner by iterating the attractor definition until nothing changes."""
        start = self.initial()
        seen = {start}
        order = [start]
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            if v[1] is not None and self.is_bad(Counter(dict(v[0])), v[1]):
                continue
            for w in self.successors(v):
                if w not in seen:
                    seen.add(w)
                    order.append(w)
        succ = {}
        attr = set()
        for v in order:
            if v[1] is not None and self.is_bad(Counter(dict(v[0])), v[1]):
                attr.add(v)
                succ[v] = []
            else:
                succ[v] = self.successors(v)
        changed = True
        while changed:
            changed = False
            for v in order:
                if v in attr:
                    continue
                nxt = succ[v]
                if v[1] is None:
                    hit = bool(nxt) and all(w in attr for w in nxt)
                else:
                    hit = any(w in attr for w in nxt)
                if hit:
                    attr.add(v)
                    changed = True
        self.vertex_count = len(order)
        return "environment" if start in attr else "system"


def naive_winner(game) -> str:
    return NaiveGraphGame(game).solve()
