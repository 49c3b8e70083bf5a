"""Attractor fixpoint over Player-0 markings with symbolic commitments.

For every reachable marking ``M`` the solver asks whether some
commitment ``c ⊆ post(s_M)`` keeps Player 1 from reaching a bad vertex
or the current attractor using environment moves and committed system
moves.  The question is a CNF over variables ``t ∈ post(s_M)``; markings
whose CNF is unsatisfiable join the attractor.  Games with at most two
environment tokens can use a 2SAT-only variant.
"""

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .game import PetriGame, validate
from .multiset import Multiset
from .net import Marking
from .sat import Cnf, dpll, sat_solve, two_sat
from .strategy import CommitmentStrategy

log = logging.getLogger(__name__)

AUTO, GENERAL, TWOSAT = "auto", "general", "twosat"


class InfeasibleBadReachable(Exception):
    """A bad marking is reachable by environment moves alone; no commitment helps."""

    def __init__(self, marking: Marking):
        self.marking = marking
        super().__init__(f"bad marking reachable via purely environmental transitions: {dict(marking.key)}")


class TooManyEnvironmentTokens(ValueError):
    pass


@dataclass
class Verdict:
    winner: str
    strategy: CommitmentStrategy | None
    mode: str
    iterations: int
    sat_calls: int
    reachable_markings: int
    attractor: frozenset[Marking] = field(default_factory=frozenset)
    attractor_history: list[int] = field(default_factory=list)
    max_clause_len: int = 0

    @property
    def system_wins(self) -> bool:
        return self.winner == "system"


class _Context:
    """Per-game caches shared across fixpoint iterations."""

    def __init__(self, game: PetriGame):
        self.game = game
        self.net = game.net
        graph = game.reachability
        self.graph = graph
        self.markings = graph.markings
        n = len(graph)
        self.env_succ: list[list[int]] = [[] for _ in range(n)]
        self.sys_succ: list[list[tuple[str, int]]] = [[] for _ in range(n)]
        self.enabled: list[list[str]] = [[] for _ in range(n)]
        env = game.purely_environmental
        for i, t, j in graph.edges:
            self.enabled[i].append(t)
            if env(t):
                self.env_succ[i].append(j)
            else:
                self.sys_succ[i].append((t, j))
        self.bad = [game.is_bad(m) for m in self.markings]
        self._reach: dict[int, list[int]] = {}
        self._static: dict[int, tuple[Cnf, list]] = {}

    def env_reach(self, i: int) -> list[int]:
        r = self._reach.get(i)
        if r is None:
            seen = {i}
            order = [i]
            queue = deque([i])
            while queue:
                k = queue.popleft()
                for j in self.env_succ[k]:
                    if j not in seen:
                        seen.add(j)
                        order.append(j)
                        queue.append(j)
            r = self._reach[i] = order
        return r

    def x2b(self, t: str, k: int) -> bool:
        m = self.markings[k]
        return any(0 < n < m[p] for p, n in self.net.pre[t].items())

    def static_cnf(self, i: int) -> tuple[Cnf, list[tuple[str, int]]]:
        """Clauses independent of the attractor, plus the system moves to watch."""
        cached = self._static.get(i)
        if cached is not None:
            return cached
        m = self.markings[i]
        post = self.game.system_postset(m)
        cnf = Cnf(post)
        seen: set = set()
        moves: list[tuple[str, int]] = []
        env = self.game.purely_environmental

        def add(clause):
            if clause not in seen:
                seen.add(clause)
                cnf.add(*clause)

        for k in self.env_reach(i):
            if self.bad[k]:
                raise InfeasibleBadReachable(self.markings[k])
            enabled = self.enabled[k]
            sys_enabled = [t for t in enabled if not env(t)]
            for t, u in combinations(sys_enabled, 2):
                add((-cnf.lit(t), -cnf.lit(u)))
            for t in sys_enabled:
                if self.x2b(t, k):
                    add((-cnf.lit(t),))
            if enabled and len(sys_enabled) == len(enabled):
                add(tuple(cnf.lit(t) for t in sys_enabled))
            moves.extend(self.sys_succ[k])
        self._static[i] = (cnf, moves)
        return cnf, moves

    def cnf(self, i: int, attr: set[int] | frozenset[int]) -> Cnf:
        base, moves = self.static_cnf(i)
        cnf = Cnf(base.variables, list(base.clauses))
        units = sorted({t for t, j in moves if j in attr})
        for t in units:
            clause = (-cnf.lit(t),)
            if clause not in base.clauses:
                cnf.add(*clause)
        return cnf

    # -- 2SAT variant ------------------------------------------------------

    def commit_twosat(self, i: int, attr) -> tuple[frozenset | None, int]:
        """Commitment for marking ``i`` from 2-clauses only; ``(None, _)`` if none exists.

        Returns the commitment and the longest clause generated.
        """
        if any(self.bad[k] for k in self.env_reach(i)):
            return None, 0
        game, net = self.game, self.net
        m = self.markings[i]
        s = game.system_place(m)
        post = game.system_postset(m)
        reach = self.env_reach(i)
        removed = set()
        for k in reach:
            for t, j in self.sys_succ[k]:
                if j in attr or self.x2b(t, k):
                    removed.add(t)
        reps: dict = {}
        for t in post:
            if t not in removed:
                reps.setdefault(net.pre[t].key, t)
        cands = sorted(reps.values())
        for t in cands:
            if net.pre[t].support() <= {s} and net.pre[t].issubset(m):
                return frozenset([t]), 0

        cand_set = set(cands)
        clauses: list[tuple[str, ...]] = []
        joint: dict[str, tuple[str, str]] = {}
        longest = 0

        def clause(*lits: tuple[str, bool]) -> None:
            nonlocal longest
            if len(lits) > 2:
                raise AssertionError(f"2SAT path built a {len(lits)}-literal clause")
            longest = max(longest, len(lits))
            clauses.append(lits)

        env = game.purely_environmental
        for k in reach:
            mk = self.markings[k]
            enabled = self.enabled[k]
            on = [t for t in cands if t in enabled]
            env_on = any(env(t) for t in enabled)
            if len(on) == 3 and not env_on:
                full = [t for t in on if net.pre[t] == mk]
                if len(full) != 1:
                    raise AssertionError("three enabled preconditions without a joint transition")
                t12 = full[0]
                t1, t2 = [t for t in on if t != t12]
                joint[t12] = (t1, t2)
                clause((t1, False), (t2, False))
                continue
            for t, u in combinations(on, 2):
                clause((t, False), (u, False))
            if enabled and not env_on:
                if not on:
                    return None, longest
                clause(*((t, True) for t in on))
        for t12 in joint:
            for c in clauses:
                if any(v == t12 for v, _ in c):
                    raise AssertionError(f"joint transition {t12} constrained outside its marking")
        variables = [t for t in cands if t not in joint]
        ids = {v: n + 1 for n, v in enumerate(variables)}
        int_clauses = [tuple(ids[v] if pos else -ids[v] for v, pos in c) for c in clauses]
        values = two_sat(len(variables), int_clauses)
        if values is None:
            return None, longest
        chosen = {v for v in variables if values[ids[v]]}
        for t12, (t1, t2) in joint.items():
            if t1 not in chosen and t2 not in chosen:
                chosen.add(t12)
        return frozenset(chosen), longest


def build_cnf(game: PetriGame, m: Marking, attr=frozenset()) -> Cnf:
    """Commitment constraints for marking ``m`` against the attractor ``attr`` (a set of markings).

    Raises `InfeasibleBadReachable` if environment moves alone reach a bad marking.
    """
    ctx = _Context(game)
    idx = ctx.graph.index[Multiset(m)]
    attr_idx = {ctx.graph.index[a] for a in attr if a in ctx.graph.index}
    return ctx.cnf(idx, attr_idx)


def decide(game: PetriGame, mode: str = AUTO, workers: int = 1) -> Verdict:
    """Decide whether the system has a winning, deadlock-avoiding strategy.

    ``mode`` is ``"general"`` (CNF + DPLL), ``"twosat"`` (requires at most
    two environment tokens in every reachable marking) or ``"auto"``.
    """
    report = validate(game)
    if mode == AUTO:
        mode = TWOSAT if report.max_env_tokens <= 2 else GENERAL
    elif mode == TWOSAT and report.max_env_tokens > 2:
        raise TooManyEnvironmentTokens(
            f"2SAT mode needs at most 2 environment tokens, found {report.max_env_tokens}"
        )
    elif mode not in (GENERAL, TWOSAT):
        raise ValueError(f"unknown mode {mode!r}")
    ctx = _Context(game)
    n = len(ctx.markings)
    attr: set[int] = set()
    history = [0]
    sat_calls = 0
    longest = 0
    witness: dict[int, frozenset] = {}

    def evaluate(i: int):
        if mode == TWOSAT:
            return ctx.commit_twosat(i, attr)
        try:
            cnf = ctx.cnf(i, attr)
        except InfeasibleBadReachable:
            return None, 0
        model = dpll(len(cnf.variables), cnf.clauses)
        clen = max((len(c) for c in cnf.clauses), default=0)
        if model is None:
            return None, clen
        return frozenset(v for k, v in enumerate(cnf.variables) if model[k + 1]), clen

    iteration = 0
    while True:
        iteration += 1
        todo = [i for i in range(n) if i not in attr]
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(evaluate, todo))
        else:
            results = [evaluate(i) for i in todo]
        sat_calls += len(todo)
        added = []
        for i, (commit, clen) in zip(todo, results):
            longest = max(longest, clen)
            if commit is None:
                added.append(i)
            else:
                witness[i] = commit
        attr.update(added)
        history.append(len(attr))
        log.debug("iteration %d: attractor size %d", iteration, len(attr))
        if ctx.graph.initial in attr:
            return Verdict(
                "environment", None, mode, iteration, sat_calls, n,
                frozenset(ctx.markings[i] for i in attr), history, longest,
            )
        if not added:
            choices = {ctx.markings[i]: witness[i] for i in range(n) if i not in attr}
            return Verdict(
                "system", CommitmentStrategy(choices), mode, iteration, sat_calls, n,
                frozenset(ctx.markings[i] for i in attr), history, longest,
            )


def decide_twosat(game: PetriGame) -> Verdict:
    return decide(game, TWOSAT)
