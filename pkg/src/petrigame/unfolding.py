"""Bounded branching-process view of a commitment strategy.

The prefix is built by walking the strategy tree of ``Graph'(G)`` breadth
first.  Every tree node carries the cuts reached by firing preimages of
the transitions on its path; a ``(label, preset)`` pair gets exactly one
transition instance, fresh places are created for new instances only.
Plays are cut off after ``depth`` fired transitions.

Causal structure is kept as Python-int bitmasks: ``place_past[p]`` holds
the transitions ``t < p``, ``place_before[p]`` the places ``q < p``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product

from .game import PetriGame
from .graphgame import PRIMED, EdgeKind, GameVertex, initial_vertex, successors
from .multiset import Multiset
from .strategy import CommitmentStrategy

Cut = frozenset  # of prefix place indices


@dataclass
class UnfoldingPrefix:
    place_labels: list[str]
    place_pre: list[int | None]
    trans_labels: list[str]
    trans_pre: list[frozenset[int]]
    trans_post: list[frozenset[int]]
    initial_cut: Cut
    depth: int
    place_past: list[int] = field(repr=False)
    place_before: list[int] = field(repr=False)
    trans_past: list[int] = field(repr=False)
    trans_before: list[int] = field(repr=False)
    # (marking, cut) for every Player-0 node of the construction
    player0_cuts: set[tuple] = field(default_factory=set, repr=False)
    truncated: bool = False
    nodes_visited: int = 0

    @property
    def num_places(self) -> int:
        return len(self.place_labels)

    @property
    def num_transitions(self) -> int:
        return len(self.trans_labels)

    def label(self, cut) -> Multiset:
        """``λ[C]`` as a marking of the game net."""
        return Multiset([self.place_labels[p] for p in cut])

    def past_transitions(self, nodes) -> int:
        """Bitmask of transitions in the causal past of a set of places."""
        mask = 0
        for p in nodes:
            mask |= self.place_past[p]
        return mask

    def causally_before(self, p: int, q: int) -> bool:
        """``p < q`` for places."""
        return bool(self.place_before[q] >> p & 1)

    def postset(self, p: int) -> list[int]:
        return self._postsets[p]

    @property
    def _postsets(self) -> list[list[int]]:
        cached = self.__dict__.get("_post_cache")
        if cached is None or len(cached) != self.num_places:
            cached = [[] for _ in self.place_labels]
            for t, pre in enumerate(self.trans_pre):
                for p in pre:
                    cached[p].append(t)
            self.__dict__["_post_cache"] = cached
        return cached

    def enabled(self, cut) -> list[int]:
        return [t for t, pre in enumerate(self.trans_pre) if pre <= cut]

    def fire(self, cut, t: int) -> Cut:
        if not self.trans_pre[t] <= cut:
            raise ValueError(f"prefix transition t{t} not enabled")
        return frozenset((cut - self.trans_pre[t]) | self.trans_post[t])

    def without_transition(self, t: int) -> "UnfoldingPrefix":
        """Copy with transition ``t`` and everything causally after it removed."""
        drop_t = {u for u in range(self.num_transitions) if u == t or self.trans_past[u] >> t & 1}
        drop_p = {p for p in range(self.num_places) if self.place_past[p] >> t & 1}
        keep_p = [p for p in range(self.num_places) if p not in drop_p]
        keep_t = [u for u in range(self.num_transitions) if u not in drop_t]
        pmap = {p: i for i, p in enumerate(keep_p)}
        tmap = {u: i for i, u in enumerate(keep_t)}

        def remask(mask, mapping):
            out = 0
            for old, new in mapping.items():
                if mask >> old & 1:
                    out |= 1 << new
            return out

        return UnfoldingPrefix(
            place_labels=[self.place_labels[p] for p in keep_p],
            place_pre=[None if self.place_pre[p] is None else tmap[self.place_pre[p]] for p in keep_p],
            trans_labels=[self.trans_labels[u] for u in keep_t],
            trans_pre=[frozenset(pmap[p] for p in self.trans_pre[u]) for u in keep_t],
            trans_post=[frozenset(pmap[p] for p in self.trans_post[u]) for u in keep_t],
            initial_cut=frozenset(pmap[p] for p in self.initial_cut),
            depth=self.depth,
            place_past=[remask(self.place_past[p], tmap) for p in keep_p],
            place_before=[remask(self.place_before[p], pmap) for p in keep_p],
            trans_past=[remask(self.trans_past[u], tmap) for u in keep_t],
            trans_before=[remask(self.trans_before[u], pmap) for u in keep_t],
            player0_cuts=set(),
            truncated=self.truncated,
        )


class _Builder:
    def __init__(self):
        self.place_labels: list[str] = []
        self.place_pre: list[int | None] = []
        self.place_past: list[int] = []
        self.place_before: list[int] = []
        self.trans_labels: list[str] = []
        self.trans_pre: list[frozenset[int]] = []
        self.trans_post: list[frozenset[int]] = []
        self.trans_past: list[int] = []
        self.trans_before: list[int] = []
        self.instances: dict[tuple[str, frozenset], int] = {}

    def new_place(self, label: str, pre: int | None) -> int:
        i = len(self.place_labels)
        self.place_labels.append(label)
        self.place_pre.append(pre)
        if pre is None:
            self.place_past.append(0)
            self.place_before.append(0)
        else:
            self.place_past.append(self.trans_past[pre] | (1 << pre))
            self.place_before.append(self.trans_before[pre])
        return i

    def instance(self, label: str, preset: frozenset[int], post: Multiset) -> int:
        key = (label, preset)
        t = self.instances.get(key)
        if t is not None:
            return t
        t = len(self.trans_labels)
        past = 0
        before = 0
        for p in preset:
            past |= self.place_past[p]
            before |= self.place_before[p] | (1 << p)
        self.trans_labels.append(label)
        self.trans_pre.append(preset)
        self.trans_past.append(past)
        self.trans_before.append(before)
        self.trans_post.append(frozenset())
        self.instances[key] = t
        self.trans_post[t] = frozenset(self.new_place(q, t) for q in post.elements())
        return t


def _preset_choices(cut, labels: list[str], pre: Multiset) -> list[frozenset[int]]:
    """All ``B ⊆ cut`` with ``λ[B] = pre``."""
    by_label: dict[str, list[int]] = {}
    for p in sorted(cut):
        by_label.setdefault(labels[p], []).append(p)
    options = []
    for q, n in pre.items():
        avail = by_label.get(q, [])
        if len(avail) < n:
            return []
        options.append(list(combinations(avail, n)))
    return [frozenset(x for part in combo for x in part) for combo in product(*options)]


def default_depth(game: PetriGame) -> int:
    return 2 * len(game.reachability)


def unfold(game: PetriGame, strategy: CommitmentStrategy, depth: int | None = None) -> UnfoldingPrefix:
    """Prefix of the strategy's branching process covering all plays of at most ``depth`` firings.

    Player-0 markings missing from ``strategy`` commit to the empty set.
    """
    if depth is None:
        depth = default_depth(game)
    b = _Builder()
    root_cut = frozenset(b.new_place(p, None) for p in game.net.initial.elements())
    start = initial_vertex(game, PRIMED)
    seen = {(start, root_cut)}
    queue = deque([(start, root_cut, 0)])
    player0 = set()
    truncated = False
    visited = 0
    while queue:
        v, cut, d = queue.popleft()
        visited += 1
        if v.commitment is None:
            player0.add((v.marking, cut))
            c = frozenset(strategy.get(v.marking, frozenset()))
            nxt = GameVertex(v.marking, c, v.responsibility)
            if (nxt, cut) not in seen:
                seen.add((nxt, cut))
                queue.append((nxt, cut, d))
            continue
        edges = successors(game, v, PRIMED)
        if d >= depth:
            truncated = truncated or bool(edges)
            continue
        for edge in edges:
            label = edge.transition
            for preset in _preset_choices(cut, b.place_labels, game.net.pre[label]):
                t = b.instance(label, preset, game.net.post[label])
                cut2 = frozenset((cut - preset) | b.trans_post[t])
                key = (edge.target, cut2)
                if key not in seen:
                    seen.add(key)
                    queue.append((edge.target, cut2, d + 1))
    return UnfoldingPrefix(
        place_labels=b.place_labels,
        place_pre=b.place_pre,
        trans_labels=b.trans_labels,
        trans_pre=b.trans_pre,
        trans_post=b.trans_post,
        initial_cut=root_cut,
        depth=depth,
        place_past=b.place_past,
        place_before=b.place_before,
        trans_past=b.trans_past,
        trans_before=b.trans_before,
        player0_cuts=player0,
        truncated=truncated,
        nodes_visited=visited,
    )


# --- causal relations and cuts ---------------------------------------------


def conflict_masks(prefix: UnfoldingPrefix) -> list[int]:
    """For each transition, the transitions sharing a preset place with it."""
    masks = [0] * prefix.num_transitions
    for p in range(prefix.num_places):
        outs = prefix.postset(p)
        for t in outs:
            for u in outs:
                if t != u:
                    masks[t] |= 1 << u
    return masks


def _spread(mask: int, per_item: list[int]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= per_item[i]
        mask >>= 1
        i += 1
    return out


def concurrency(prefix: UnfoldingPrefix) -> list[set[int]]:
    """Adjacency of the place concurrency relation (neither causal nor in conflict)."""
    direct = conflict_masks(prefix)
    n = prefix.num_places
    # transitions in conflict with something in the past of p
    reach_conflict = [_spread(prefix.place_past[p], direct) for p in range(n)]
    adj: list[set[int]] = [set() for _ in range(n)]
    for p in range(n):
        for q in range(p + 1, n):
            if prefix.causally_before(p, q) or prefix.causally_before(q, p):
                continue
            if reach_conflict[p] & prefix.place_past[q]:
                continue
            adj[p].add(q)
            adj[q].add(p)
    return adj


def in_conflict(prefix: UnfoldingPrefix, t: int, u: int) -> bool:
    """Conflict between two transitions (reflexive case gives self-conflict)."""
    direct = conflict_masks(prefix)
    past_t = prefix.trans_past[t] | (1 << t)
    past_u = prefix.trans_past[u] | (1 << u)
    return bool(_spread(past_t, direct) & past_u)


def reachable_cuts(prefix: UnfoldingPrefix) -> set[Cut]:
    """Markings of the prefix reachable by firing from the initial cut."""
    start = prefix.initial_cut
    seen = {start}
    queue = deque([start])
    post = prefix._postsets
    while queue:
        cut = queue.popleft()
        candidates = {t for p in cut for t in post[p]}
        for t in sorted(candidates):
            if prefix.trans_pre[t] <= cut:
                nxt = frozenset((cut - prefix.trans_pre[t]) | prefix.trans_post[t])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return seen


def maximal_cosets(prefix: UnfoldingPrefix) -> set[Cut]:
    """Maximal sets of pairwise concurrent places, i.e. cuts by definition."""
    import networkx as nx

    adj = concurrency(prefix)
    g = nx.Graph()
    g.add_nodes_from(range(prefix.num_places))
    for p, qs in enumerate(adj):
        g.add_edges_from((p, q) for q in qs if q > p)
    return {frozenset(c) for c in nx.find_cliques(g)}


def lkc(prefix: UnfoldingPrefix, x: int) -> Cut:
    """Last known cut of place ``x``: places not before ``x`` whose producer is before ``x``."""
    past_t = prefix.place_past[x]
    before = prefix.place_before[x]
    out = []
    for p in range(prefix.num_places):
        if before >> p & 1:
            continue
        t = prefix.place_pre[p]
        if t is None or past_t >> t & 1:
            out.append(p)
    return frozenset(out)


def mapping_cut(prefix: UnfoldingPrefix, transitions: int) -> Cut:
    """Cut reached by firing exactly the transitions in the given bitmask (causally closed)."""
    cut = set(prefix.initial_cut)
    pending = {t for t in range(prefix.num_transitions) if transitions >> t & 1}
    while pending:
        ready = sorted(t for t in pending if prefix.trans_pre[t] <= cut)
        if not ready:
            raise ValueError("transition set is not a configuration")
        for t in ready:
            if prefix.trans_pre[t] <= cut:
                cut -= prefix.trans_pre[t]
                cut |= prefix.trans_post[t]
                pending.discard(t)
    return frozenset(cut)


# --- structural checks -------------------------------------------------------


def occurrence_net_violations(prefix: UnfoldingPrefix) -> list[str]:
    """Occurrence-net and branching-process conditions that fail (empty if none)."""
    problems = []
    producers: dict[int, list[int]] = {}
    for t, post in enumerate(prefix.trans_post):
        for p in post:
            producers.setdefault(p, []).append(t)
    for p, ts in producers.items():
        if len(ts) > 1:
            problems.append(f"place p{p} has {len(ts)} incoming transitions")
        if prefix.place_pre[p] != ts[0]:
            problems.append(f"place p{p} producer mismatch")
    init = {p for p in range(prefix.num_places) if prefix.place_pre[p] is None}
    if init != set(prefix.initial_cut):
        problems.append("initial cut differs from the places without producers")
    for t in range(prefix.num_transitions):
        if prefix.trans_past[t] >> t & 1:
            problems.append(f"transition t{t} lies on a cycle")
        if not prefix.trans_pre[t] or not prefix.trans_post[t]:
            problems.append(f"transition t{t} has an empty pre- or postset")
        if in_conflict(prefix, t, t):
            problems.append(f"transition t{t} is in self-conflict")
    seen = {}
    for t, (lab, pre) in enumerate(zip(prefix.trans_labels, prefix.trans_pre)):
        if (lab, pre) in seen:
            problems.append(f"transitions t{seen[(lab, pre)]} and t{t} share label {lab} and preset")
        seen[(lab, pre)] = t
    return problems


def homomorphism_violations(game: PetriGame, prefix: UnfoldingPrefix) -> list[str]:
    problems = []
    net = game.net
    if prefix.label(prefix.initial_cut) != net.initial:
        problems.append("λ of the initial cut differs from the initial marking")
    for t, lab in enumerate(prefix.trans_labels):
        if prefix.label(prefix.trans_pre[t]) != net.pre[lab]:
            problems.append(f"λ[pre(t{t})] != pre({lab})")
        if prefix.label(prefix.trans_post[t]) != net.post[lab]:
            problems.append(f"λ[post(t{t})] != post({lab})")
    return problems


class AxiomViolation(AssertionError):
    def __init__(self, axiom: str, cut, detail: str = ""):
        self.axiom = axiom
        self.cut = cut
        super().__init__(f"{axiom} violated at cut {sorted(cut)}: {detail}")


@dataclass
class AxiomReport:
    cuts: int = 0
    checked: int = 0
    truncated: int = 0
    violations: list[tuple[str, Cut, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_axiom(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for axiom, _, _ in self.violations:
            out[axiom] = out.get(axiom, 0) + 1
        return out


def check_axioms(game: PetriGame, prefix: UnfoldingPrefix, raise_on_violation: bool = False) -> AxiomReport:
    """Justified refusal, safety, determinism and deadlock avoidance on the prefix cuts.

    Safety and determinism are checked on every cut.  Deadlock avoidance
    and justified refusal need every instance the full strategy would add,
    so they are only checked on cuts with fewer than ``depth`` transitions
    in their past; the others are counted as truncated.
    """
    net = game.net
    report = AxiomReport()
    post = prefix._postsets
    labels = prefix.place_labels

    def fail(axiom, cut, detail):
        if raise_on_violation:
            raise AxiomViolation(axiom, cut, detail)
        report.violations.append((axiom, cut, detail))

    for cut in sorted(reachable_cuts(prefix), key=sorted):
        report.cuts += 1
        marking = prefix.label(cut)
        if game.is_bad(marking):
            fail("safety", cut, f"λ[C] = {dict(marking.key)} is bad")
        enabled = [t for t in sorted({t for p in cut for t in post[p]}) if prefix.trans_pre[t] <= cut]
        for s in cut:
            if game.is_system_place(labels[s]):
                mine = [t for t in enabled if s in prefix.trans_pre[t]]
                if len(mine) > 1:
                    fail("determinism", cut, f"p{s} has {len(mine)} enabled transitions")
        if bin(prefix.past_transitions(cut)).count("1") >= prefix.depth:
            report.truncated += 1
            continue
        report.checked += 1
        if net.enabled_transitions(marking) and not enabled:
            fail("deadlock avoidance", cut, "underlying net enabled but strategy stuck")
        present = {(prefix.trans_labels[t], prefix.trans_pre[t]) for t in enabled}
        for lab in net.enabled_transitions(marking):
            for preset in _preset_choices(cut, labels, net.pre[lab]):
                if (lab, preset) in present:
                    continue
                refusers = [
                    s for s in preset
                    if game.is_system_place(labels[s])
                    and all(prefix.trans_labels[u] != lab for u in post[s])
                ]
                if not refusers:
                    fail("justified refusal", cut, f"{lab} on {sorted(preset)} missing without refusal")
    return report
