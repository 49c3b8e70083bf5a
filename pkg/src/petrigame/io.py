"""Line-oriented game file format and Graphviz export.

Game files are UTF-8 text; ``#`` starts a comment.  One statement per line::

    bound 1
    places system s_closed s_open
    places env e1 e1_attempt
    init s_closed e1
    transition t1 pre e1 post e1_attempt
    transition t2 pre e1_attempt s_closed post e1 s_closed
    bad places a1 a2
    bad marking s_open a1:1

Grammar (tokens are whitespace separated)::

    file       := stmt*
    stmt       := "bound" INT
                | "places" ("system" | "env") ID+
                | "init" entry*
                | "transition" ID "pre" entry+ "post" entry+
                | "bad" "places" ID*
                | "bad" "marking" entry*
    entry      := ID [":" INT]          # count defaults to 1

``places``, ``init`` and ``bad marking`` lines may repeat; counts of
repeated ``init`` entries add up.  A file must not mix ``bad places`` and
``bad marking``.  Self-loop arcs are written as the same place in both
``pre`` and ``post``.
"""

from __future__ import annotations

import re

from .game import BadSpec, GameError, PetriGame
from .multiset import Multiset
from .net import NetError, PetriNet, ReachabilityGraph, format_marking

_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _entry(tok: str, col: int, lineno: int) -> tuple[str, int]:
    name, sep, count = tok.partition(":")
    if not _ID.match(name):
        raise ParseError(f"invalid identifier {name!r}", lineno, col)
    if not sep:
        return name, 1
    if not count.isdigit() or int(count) < 1:
        raise ParseError(f"invalid count {count!r} for {name!r}", lineno, col + len(name) + 1)
    return name, int(count)


def _add(counts: dict, name: str, n: int) -> None:
    counts[name] = counts.get(name, 0) + n


def parse(text: str, name: str = "") -> PetriGame:
    """Parse a game file; raises `ParseError` with the offending position."""
    bound = None
    system: list[str] = []
    env: list[str] = []
    place_pos: dict[str, tuple[int, int]] = {}
    init: dict[str, int] = {}
    init_pos: dict[str, tuple[int, int]] = {}
    transitions: dict[str, tuple[dict, dict]] = {}
    trans_pos: dict[str, tuple[int, int]] = {}
    bad_places: list[str] | None = None
    bad_markings: list[Multiset] | None = None
    refs: list[tuple[str, int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        head, hcol = toks[0]
        rest = toks[1:]
        if head == "bound":
            if bound is not None:
                raise ParseError("duplicate bound statement", lineno, hcol)
            if len(rest) != 1 or not rest[0][0].isdigit() or int(rest[0][0]) < 1:
                raise ParseError("expected 'bound <positive integer>'", lineno, hcol)
            bound = int(rest[0][0])
        elif head == "places":
            if not rest or rest[0][0] not in ("system", "env"):
                raise ParseError("expected 'places system|env <ids>'", lineno, hcol)
            kind = rest[0][0]
            if len(rest) == 1:
                raise ParseError(f"empty places {kind} section", lineno, rest[0][1])
            for tok, col in rest[1:]:
                if not _ID.match(tok):
                    raise ParseError(f"invalid identifier {tok!r}", lineno, col)
                if tok in place_pos:
                    raise ParseError(f"duplicate place id {tok!r}", lineno, col)
                place_pos[tok] = (lineno, col)
                (system if kind == "system" else env).append(tok)
        elif head == "init":
            for tok, col in rest:
                p, n = _entry(tok, col, lineno)
                _add(init, p, n)
                init_pos.setdefault(p, (lineno, col))
        elif head == "transition":
            if not rest:
                raise ParseError("expected transition id", lineno, hcol)
            tid, tcol = rest[0]
            if not _ID.match(tid):
                raise ParseError(f"invalid identifier {tid!r}", lineno, tcol)
            if tid in transitions:
                raise ParseError(f"duplicate transition id {tid!r}", lineno, tcol)
            pre: dict[str, int] = {}
            post: dict[str, int] = {}
            section = None
            for tok, col in rest[1:]:
                if tok in ("pre", "post"):
                    if (tok == "pre" and section is not None) or (tok == "post" and section == "post"):
                        raise ParseError(f"unexpected keyword {tok!r}", lineno, col)
                    section = tok
                    continue
                if section is None:
                    raise ParseError("expected 'pre'", lineno, col)
                p, n = _entry(tok, col, lineno)
                _add(pre if section == "pre" else post, p, n)
                refs.append((p, lineno, col))
            if not pre:
                raise ParseError(
                    f"transition {tid!r} has an empty precondition; transitions need nonempty pre- and postconditions",
                    lineno, tcol,
                )
            if not post:
                raise ParseError(
                    f"transition {tid!r} has no outgoing arcs; transitions need nonempty pre- and postconditions",
                    lineno, tcol,
                )
            transitions[tid] = (pre, post)
            trans_pos[tid] = (lineno, tcol)
        elif head == "bad":
            if not rest or rest[0][0] not in ("places", "marking"):
                raise ParseError("expected 'bad places ...' or 'bad marking ...'", lineno, hcol)
            kind, kcol = rest[0]
            if kind == "places":
                if bad_markings is not None:
                    raise ParseError("cannot mix 'bad places' and 'bad marking'", lineno, kcol)
                bad_places = bad_places or []
                for tok, col in rest[1:]:
                    if not _ID.match(tok):
                        raise ParseError(f"invalid identifier {tok!r}", lineno, col)
                    bad_places.append(tok)
                    refs.append((tok, lineno, col))
            else:
                if bad_places is not None:
                    raise ParseError("cannot mix 'bad places' and 'bad marking'", lineno, kcol)
                bad_markings = bad_markings or []
                counts: dict[str, int] = {}
                for tok, col in rest[1:]:
                    p, n = _entry(tok, col, lineno)
                    _add(counts, p, n)
                    refs.append((p, lineno, col))
                bad_markings.append(Multiset(counts))
        else:
            raise ParseError(f"unknown statement {head!r}", lineno, hcol)

    if not place_pos:
        raise ParseError("no places declared (empty places section)", 1, 1)
    if bound is None:
        raise ParseError("missing 'bound' statement", 1, 1)
    for tid, (line, col) in trans_pos.items():
        if tid in place_pos:
            raise ParseError(f"id {tid!r} used for both a place and a transition", line, col)
    for p, line, col in refs:
        if p not in place_pos:
            raise ParseError(f"reference to unknown place {p!r}", line, col)
    for p, (line, col) in init_pos.items():
        if p not in place_pos:
            raise ParseError(f"initial marking references unknown place {p!r}", line, col)

    if bad_places is not None:
        bad = BadSpec(places=frozenset(bad_places))
    elif bad_markings is not None:
        bad = BadSpec(markings=frozenset(bad_markings))
    else:
        bad = BadSpec()
    try:
        net = PetriNet(system + env, transitions, init)
        return PetriGame(net, frozenset(system), frozenset(env), bad, bound, name)
    except (NetError, GameError) as exc:
        raise ParseError(str(exc), 1, 1) from exc


def read_game(path) -> PetriGame:
    from pathlib import Path

    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), name=path.stem)


def _entries(ms: Multiset) -> str:
    return " ".join(p if n == 1 else f"{p}:{n}" for p, n in ms.key)


def serialize(game: PetriGame) -> str:
    """Canonical text form; ``parse(serialize(g)) == g``."""
    net = game.net
    lines = []
    if game.name:
        lines.append(f"# {game.name}")
    lines.append(f"bound {game.bound}")
    lines.append("places system " + " ".join(sorted(game.system_places)))
    if game.env_places:
        lines.append("places env " + " ".join(sorted(game.env_places)))
    lines.append(("init " + _entries(net.initial)).rstrip())
    for t in net.transitions:
        lines.append(f"transition {t} pre {_entries(net.pre[t])} post {_entries(net.post[t])}")
    if game.bad.places is not None:
        lines.append(("bad places " + " ".join(sorted(game.bad.places))).rstrip())
    elif game.bad.markings is not None:
        for m in sorted(game.bad.markings):
            lines.append(("bad marking " + _entries(m)).rstrip())
    return "\n".join(lines) + "\n"


# --- Graphviz -------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def game_to_dot(game: PetriGame) -> str:
    """Net drawing: system places filled gray, transitions as boxes."""
    net = game.net
    out = ["digraph game {", "  rankdir=LR;"]
    for p in net.places:
        tokens = net.initial[p]
        label = p if not tokens else f"{p}\\n{'●' * tokens if tokens <= 3 else tokens}"
        attrs = [f"label={_q(label)}", "shape=circle"]
        if game.is_system_place(p):
            attrs.append('style=filled fillcolor="gray"')
        if game.bad.places and p in game.bad.places:
            attrs.append("peripheries=2")
        out.append(f"  {_q('p:' + p)} [{' '.join(attrs)}];")
    for t in net.transitions:
        out.append(f"  {_q('t:' + t)} [label={_q(t)} shape=box];")
    for t in net.transitions:
        for p, n in net.pre[t].items():
            lab = f" [label={n}]" if n > 1 else ""
            out.append(f"  {_q('p:' + p)} -> {_q('t:' + t)}{lab};")
        for p, n in net.post[t].items():
            lab = f" [label={n}]" if n > 1 else ""
            out.append(f"  {_q('t:' + t)} -> {_q('p:' + p)}{lab};")
    out.append("}")
    return "\n".join(out) + "\n"


def reachability_to_dot(graph: ReachabilityGraph, game: PetriGame | None = None) -> str:
    out = ["digraph reachability {"]
    for i, m in enumerate(graph.markings):
        attrs = f"label={_q(f'{i}: ' + format_marking(m))}"
        if game is not None and game.is_bad(m):
            attrs += " color=red"
        if i == graph.initial:
            attrs += " peripheries=2"
        out.append(f"  m{i} [{attrs}];")
    for i, t, j in graph.edges:
        out.append(f"  m{i} -> m{j} [label={_q(t)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def strategy_to_dot(game: PetriGame, strategy) -> str:
    """One node per Player-0 marking, annotated with its commitment set.

    Edges follow purely environmental transitions and committed system
    transitions between markings of the strategy's domain.
    """
    choices = strategy.choices
    order = sorted(choices)
    ids = {m: i for i, m in enumerate(order)}
    out = ["digraph strategy {"]
    for m in order:
        c = ",".join(sorted(choices[m]))
        out.append(f"  v{ids[m]} [label={_q(format_marking(m) + ' | {' + c + '}')} commitment={_q(c)}];")
    net = game.net
    for m in order:
        c = choices[m]
        for t in net.enabled_transitions(m):
            if game.purely_environmental(t) or t in c:
                m2 = net.fire(m, t)
                if m2 in ids:
                    out.append(f"  v{ids[m]} -> v{ids[m2]} [label={_q(t)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def prefix_to_dot(prefix, game: PetriGame | None = None) -> str:
    """Unfolding prefix with labels ``name=λ(name)``; initial cut marked."""
    out = ["digraph prefix {"]
    init = prefix.initial_cut
    for i, lab in enumerate(prefix.place_labels):
        attrs = [f"label={_q(f'p{i}={lab}')}", "shape=circle"]
        if game is not None and game.is_system_place(lab):
            attrs.append('style=filled fillcolor="gray"')
        if i in init:
            attrs.append('xlabel="init"')
        out.append(f"  p{i} [{' '.join(attrs)}];")
    for i, lab in enumerate(prefix.trans_labels):
        out.append(f"  t{i} [label={_q(f't{i}={lab}')} shape=box];")
        for p in sorted(prefix.trans_pre[i]):
            out.append(f"  p{p} -> t{i};")
        for p in sorted(prefix.trans_post[i]):
            out.append(f"  t{i} -> p{p};")
    out.append("}")
    return "\n".join(out) + "\n"


def export_dot(obj, game: PetriGame | None = None) -> str:
    """Dispatch on the object type: game, reachability graph, strategy or prefix."""
    from .strategy import CommitmentStrategy
    from .unfolding import UnfoldingPrefix

    if isinstance(obj, PetriGame):
        return game_to_dot(obj)
    if isinstance(obj, ReachabilityGraph):
        return reachability_to_dot(obj, game)
    if isinstance(obj, CommitmentStrategy):
        if game is None:
            raise ValueError("strategy export needs the game")
        return strategy_to_dot(game, obj)
    if isinstance(obj, UnfoldingPrefix):
        return prefix_to_dot(obj, game)
    raise TypeError(f"cannot export {type(obj).__name__} to DOT")
