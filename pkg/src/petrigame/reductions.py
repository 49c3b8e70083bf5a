"""Benchmark games: the access-control example and two hardness reductions.

Naming scheme of generated nodes (deterministic, so fixtures diff cleanly):

3SAT games
    ``sys``, ``sys_done``           system token start / sink
    ``env1`` .. ``env3``            initial environment places
    ``env_done``                    environment sink
    ``lit_<i>_<j>``                 literal place of clause i, position j (0-based)
    ``clause_<i>``                  clause transition
    ``pick_<i>_<j>``                joint literal transition with the system
    ``loop_<i>_<j>__<k>_<l>``       self-loop place of a contradiction gadget
    ``contra_<i>_<j>__<k>_<l>``     contradiction transition, ``spin_...`` its self-loop

G5 games
    ``turn_eq``, ``turn_e``, ``turn_sq``, ``turn_sinfo``, ``turn_s``, ``turn_p``
                                    turn counter positions (e?, e, s?, s_info, s, p)
    ``sys``                         the single system place
    ``<x>_T`` / ``<x>_F``           variable token of x
    ``f<i>_u`` / ``f<i>_p``         subformula i unproved / proved (i in preorder)
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from pathlib import Path

from .game import BadSpec, PetriGame

# --- built-in examples ------------------------------------------------------


def access_control(employees: int = 2) -> PetriGame:
    """Lock controller with employees and their authenticators (two of each by default).

    The safe is lost if it opens while an authenticator has not yet
    authenticated its employee.  Every employee adds two environment
    tokens, so larger ``employees`` values serve as a scaling family.
    """
    if employees < 1:
        raise ValueError("need at least one employee")
    ids = range(1, employees + 1)
    transitions = {"ts": ({"s_closed": 1}, {"s_open": 1})}
    for i in ids:
        e, a = f"e{i}", f"a{i}"
        auth, attempt, wait = f"a{i}_auth", f"e{i}_attempt", f"e{i}_wait"
        transitions[f"te{i}1"] = ({e: 1}, {attempt: 1})
        transitions[f"te{i}a"] = ({e: 1, a: 1}, {attempt: 1, auth: 1})
        transitions[f"te{i}2"] = ({attempt: 1, "s_closed": 1}, {e: 1, "s_closed": 1})
        transitions[f"te{i}3"] = ({e: 1, auth: 1}, {wait: 1, auth: 1})
    env = [f"{x}{i}{y}" for i in ids for x, y in (("e", ""), ("a", ""), ("a", "_auth"), ("e", "_attempt"), ("e", "_wait"))]
    # every marking with the safe open and an unused authenticator
    sides = [
        [(emp, au) for emp in (f"e{i}", f"e{i}_attempt", f"e{i}_wait") for au in (f"a{i}", f"a{i}_auth")]
        for i in ids
    ]
    bad = []
    for combo in itertools.product(*sides):
        if any(au == f"a{i}" for i, (_, au) in zip(ids, combo)):
            m = {"s_open": 1}
            for emp, au in combo:
                m[emp] = m[au] = 1
            bad.append(m)
    initial = ["s_closed"] + [x for i in ids for x in (f"e{i}", f"a{i}")]
    name = "access_control" if employees == 2 else f"access_control_{employees}"
    return PetriGame.build(
        ["s_closed", "s_open"], env, transitions, initial,
        BadSpec.from_markings(bad), 1, name,
    )


def minimal_winning() -> PetriGame:
    """No transitions and nothing bad: the system wins vacuously."""
    return PetriGame.build(["s"], [], {}, ["s"], BadSpec(), 1, "minimal_winning")


def minimal_losing() -> PetriGame:
    """The initial marking itself is bad."""
    return PetriGame.build(
        ["s"], ["e"], {"t": ({"e": 1}, {"e": 1})}, ["s", "e"],
        BadSpec.from_places(["e"]), 1, "minimal_losing",
    )


def builtin_examples() -> dict[str, PetriGame]:
    return {
        "access_control": access_control(),
        "minimal_winning": minimal_winning(),
        "minimal_losing": minimal_losing(),
    }


def random_game(
    rng: random.Random,
    env_tokens: int = 2,
    sys_places: int = 3,
    env_places: int = 2,
    transitions: int = 8,
    bad_prob: float = 0.3,
) -> PetriGame:
    """Small random 1-bounded game with one system token and ``env_tokens`` environment tokens.

    Each token lives in its own pool of places and every transition moves
    each token it consumes to a place of the same pool, so the token count
    per pool never changes.  Places ``s<i>`` belong to the system pool,
    ``e<j>_<i>`` to environment token j.
    """
    pools = [[f"s{i}" for i in range(sys_places)]]
    pools += [[f"e{j}_{i}" for i in range(env_places)] for j in range(env_tokens)]
    trans = {}
    for n in range(transitions):
        involved = [k for k in range(len(pools)) if rng.random() < 0.5]
        if not involved:
            involved = [rng.randrange(len(pools))]
        pre = {rng.choice(pools[k]): 1 for k in involved}
        post = {rng.choice(pools[k]): 1 for k in involved}
        trans[f"t{n}"] = (pre, post)
    initial = [pool[0] for pool in pools]
    candidates = [p for pool in pools for p in pool[1:]]
    bad = sorted(p for p in candidates if rng.random() < bad_prob)
    return PetriGame.build(
        pools[0], [p for pool in pools[1:] for p in pool], trans, initial,
        BadSpec.from_places(bad), 1, "random",
    )


# --- 3SAT -------------------------------------------------------------------


@dataclass(frozen=True)
class ThreeSatInstance:
    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if not self.clauses:
            raise ValueError("3SAT instance needs at least one clause")
        for c in self.clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have exactly 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")


def brute_force_sat(inst: ThreeSatInstance) -> bool:
    for bits in itertools.product((False, True), repeat=inst.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in inst.clauses):
            return True
    return False


def gen_3sat(inst: ThreeSatInstance) -> PetriGame:
    """Three environment tokens pick a clause or expose a contradiction; the system must pick a literal."""
    env = ["env1", "env2", "env3", "env_done"]
    transitions = {}
    lits = []
    for i, clause in enumerate(inst.clauses):
        names = [f"lit_{i}_{j}" for j in range(3)]
        env.extend(names)
        transitions[f"clause_{i}"] = ({"env1": 1, "env2": 1, "env3": 1}, {n: 1 for n in names})
        for j, (name, lit) in enumerate(zip(names, clause)):
            transitions[f"pick_{i}_{j}"] = ({name: 1, "sys": 1}, {"env_done": 1, "sys_done": 1})
            lits.append((i, j, lit))
    for (i, j, a), (k, l, b) in itertools.combinations(lits, 2):
        if a != -b:
            continue
        tag = f"{i}_{j}__{k}_{l}"
        loop = f"loop_{tag}"
        env.append(loop)
        transitions[f"contra_{tag}"] = (
            {"env1": 1, "env2": 1, "env3": 1},
            {f"lit_{i}_{j}": 1, f"lit_{k}_{l}": 1, loop: 1},
        )
        transitions[f"spin_{tag}"] = ({loop: 1}, {loop: 1})
    return PetriGame.build(
        ["sys", "sys_done"], env, transitions, ["sys", "env1", "env2", "env3"],
        BadSpec(), 1, "3sat",
    )


def random_3sat(rng: random.Random, num_vars: int, num_clauses: int) -> ThreeSatInstance:
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return ThreeSatInstance(num_vars, tuple(clauses))


def read_dimacs(text: str) -> ThreeSatInstance:
    num_vars = None
    clauses = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise ValueError("missing 'p cnf' line")
    return ThreeSatInstance(num_vars, tuple(clauses))


def write_dimacs(inst: ThreeSatInstance) -> str:
    lines = [f"p cnf {inst.num_vars} {len(inst.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in inst.clauses]
    return "\n".join(lines) + "\n"


# --- G5 ---------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    var: str
    positive: bool = True


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


Formula = Lit | And | Or


def formula_depth(f: Formula) -> int:
    if isinstance(f, Lit):
        return 1
    return 1 + max(formula_depth(f.left), formula_depth(f.right))


def formula_vars(f: Formula) -> set[str]:
    if isinstance(f, Lit):
        return {f.var}
    return formula_vars(f.left) | formula_vars(f.right)


def evaluate(f: Formula, assignment: dict[str, bool]) -> bool:
    if isinstance(f, Lit):
        return assignment[f.var] == f.positive
    if isinstance(f, And):
        return evaluate(f.left, assignment) and evaluate(f.right, assignment)
    return evaluate(f.left, assignment) or evaluate(f.right, assignment)


def format_formula(f: Formula) -> str:
    if isinstance(f, Lit):
        return f.var if f.positive else "~" + f.var
    op = "&" if isinstance(f, And) else "|"
    return f"({format_formula(f.left)} {op} {format_formula(f.right)})"


@dataclass(frozen=True)
class G5Instance:
    vars_s: tuple[str, ...]
    vars_e: tuple[str, ...]
    initial: dict
    formula: Formula
    first_mover: str = "E"

    def __post_init__(self):
        if set(self.vars_s) & set(self.vars_e):
            raise ValueError("system and environment variables overlap")
        allv = set(self.vars_s) | set(self.vars_e)
        if set(self.initial) != allv:
            raise ValueError("initial assignment must cover exactly the declared variables")
        if not formula_vars(self.formula) <= allv:
            raise ValueError(f"formula uses undeclared variables {sorted(formula_vars(self.formula) - allv)}")
        if self.first_mover not in ("S", "E"):
            raise ValueError("first mover must be 'S' or 'E'")

    def __hash__(self):
        return hash((self.vars_s, self.vars_e, tuple(sorted(self.initial.items())), self.formula, self.first_mover))


def _subformulas(f: Formula) -> list[Formula]:
    """Preorder list; shared subterms are duplicated (the formula is a tree)."""
    out = [f]
    if not isinstance(f, Lit):
        out += _subformulas(f.left)
        out += _subformulas(f.right)
    return out


def gen_g5(inst: G5Instance) -> PetriGame:
    """Turn-counter game: environment toggles its variables, the system its own, the environment may prove the formula."""
    turn = ["turn_eq", "turn_e", "turn_sq", "turn_sinfo", "turn_s", "turn_p"]
    env = list(turn)
    variables = list(inst.vars_s) + list(inst.vars_e)
    for x in variables:
        env += [f"{x}_T", f"{x}_F"]
    t: dict[str, tuple[dict, dict]] = {
        "go_e": ({"turn_eq": 1}, {"turn_e": 1}),
        "go_s": ({"turn_sq": 1}, {"turn_sinfo": 1}),
        "prove_at_e": ({"turn_eq": 1}, {"turn_p": 1}),
        "prove_at_s": ({"turn_sq": 1}, {"turn_p": 1}),
        "info": ({"turn_sinfo": 1, "sys": 1}, {"turn_s": 1, "sys": 1}),
        "pass_e": ({"turn_e": 1}, {"turn_sq": 1}),
        "pass_s": ({"turn_s": 1, "sys": 1}, {"turn_eq": 1, "sys": 1}),
    }
    for x in inst.vars_e:
        for a, b in (("T", "F"), ("F", "T")):
            t[f"toggle_e_{x}_{a}"] = ({"turn_e": 1, f"{x}_{a}": 1}, {"turn_sq": 1, f"{x}_{b}": 1})
    for x in inst.vars_s:
        for a, b in (("T", "F"), ("F", "T")):
            t[f"toggle_s_{x}_{a}"] = (
                {"turn_s": 1, "sys": 1, f"{x}_{a}": 1},
                {"turn_eq": 1, "sys": 1, f"{x}_{b}": 1},
            )
    subs = _subformulas(inst.formula)
    ids = {}
    # preorder numbering; identity-based so duplicated subterms get distinct tokens
    counter = itertools.count()

    def number(f):
        i = next(counter)
        ids[i] = f
        if isinstance(f, Lit):
            return (i,)
        return (i, number(f.left), number(f.right))

    tree = number(inst.formula)
    assert len(ids) == len(subs)

    def walk(node):
        i = node[0]
        f = ids[i]
        u, p = f"f{i}_u", f"f{i}_p"
        env.extend([u, p])
        base_pre = {"turn_p": 1, u: 1}
        base_post = {"turn_p": 1, p: 1}
        if isinstance(f, Lit):
            val = f"{f.var}_{'T' if f.positive else 'F'}"
            t[f"prove_f{i}"] = ({**base_pre, val: 1}, {**base_post, val: 1})
            return
        li, ri = node[1][0], node[2][0]
        lp, rp = f"f{li}_p", f"f{ri}_p"
        if isinstance(f, And):
            t[f"prove_f{i}"] = ({**base_pre, lp: 1, rp: 1}, {**base_post, lp: 1, rp: 1})
        else:
            t[f"prove_f{i}_l"] = ({**base_pre, lp: 1}, {**base_post, lp: 1})
            t[f"prove_f{i}_r"] = ({**base_pre, rp: 1}, {**base_post, rp: 1})
        walk(node[1])
        walk(node[2])

    walk(tree)
    initial = ["sys", "turn_sq" if inst.first_mover == "S" else "turn_eq"]
    initial += [f"{x}_{'T' if inst.initial[x] else 'F'}" for x in variables]
    initial += [f"f{i}_u" for i in ids]
    return PetriGame.build(["sys"], env, t, initial, BadSpec.from_places(["f0_p"]), 1, "g5")


def solve_g5_tiny(inst: G5Instance, max_vars: int = 10) -> str:
    """Exact winner of the original G5 game: ``"system"`` if P_S can keep the formula false forever."""
    variables = list(inst.vars_s) + list(inst.vars_e)
    if len(variables) > max_vars:
        raise ValueError(f"too many variables for the explicit oracle ({len(variables)} > {max_vars})")
    pos = {x: i for i, x in enumerate(variables)}

    def moves(state, who):
        bits, _ = state
        owned = inst.vars_e if who == "E" else inst.vars_s
        nxt = "S" if who == "E" else "E"
        out = [(bits, nxt)]
        for x in owned:
            b = list(bits)
            b[pos[x]] = not b[pos[x]]
            out.append((tuple(b), nxt))
        return out

    states = [(bits, who) for bits in itertools.product((False, True), repeat=len(variables)) for who in "SE"]
    succ = {s: moves(s, s[1]) for s in states}

    def true_at(s):
        return evaluate(inst.formula, dict(zip(variables, s[0])))

    # environment attractor to states where the formula holds
    win = {s for s in states if true_at(s)}
    changed = True
    while changed:
        changed = False
        for s in states:
            if s in win:
                continue
            nexts = succ[s]
            if (s[1] == "E" and any(n in win for n in nexts)) or (s[1] == "S" and all(n in win for n in nexts)):
                win.add(s)
                changed = True
    start = (tuple(inst.initial[x] for x in variables), inst.first_mover)
    return "environment" if start in win else "system"


def random_formula(rng: random.Random, variables: list[str], depth: int) -> Formula:
    if depth <= 1 or rng.random() < 0.3:
        return Lit(rng.choice(variables), rng.random() < 0.5)
    cls = And if rng.random() < 0.5 else Or
    return cls(random_formula(rng, variables, depth - 1), random_formula(rng, variables, depth - 1))


def random_g5(rng: random.Random, max_vars: int = 3, max_depth: int = 3) -> G5Instance:
    n = rng.randint(1, max_vars)
    names = [f"x{i}" for i in range(1, n + 1)]
    owners = [rng.choice("SE") for _ in names]
    vars_s = tuple(x for x, o in zip(names, owners) if o == "S")
    vars_e = tuple(x for x, o in zip(names, owners) if o == "E")
    initial = {x: rng.random() < 0.5 for x in names}
    formula = random_formula(rng, names, rng.randint(1, max_depth))
    return G5Instance(vars_s, vars_e, initial, formula, rng.choice("SE"))


# G5 instance text format:
#   vars_s x1 x2
#   vars_e y1
#   init x1=1 x2=0 y1=1
#   first E
#   formula (x1 & ~y1) | x2
_TOKEN = re.compile(r"\s*(?:(\()|(\))|(&)|(\|)|([~!])|([A-Za-z_][A-Za-z0-9_]*))")


def parse_formula(text: str) -> Formula:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        toks.append(m.group().strip())
        pos = m.end()
    toks = [x for x in toks if x]
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def parse_or():
        f = parse_and()
        while peek() == "|":
            take()
            f = Or(f, parse_and())
        return f

    def parse_and():
        f = parse_atom()
        while peek() == "&":
            take()
            f = And(f, parse_atom())
        return f

    def parse_atom():
        tok = peek()
        if tok is None:
            raise ValueError("unexpected end of formula")
        if tok == "(":
            take()
            f = parse_or()
            if take() != ")":
                raise ValueError("expected ')'")
            return f
        if tok in ("~", "!"):
            take()
            name = take()
            if not re.match(r"[A-Za-z_]", name):
                raise ValueError("negation applies to variables only (negation normal form)")
            return Lit(name, False)
        if re.match(r"[A-Za-z_]", tok):
            return Lit(take(), True)
        raise ValueError(f"unexpected token {tok!r}")

    f = parse_or()
    if i != len(toks):
        raise ValueError(f"trailing tokens {toks[i:]}")
    return f


def parse_g5(text: str) -> G5Instance:
    vars_s: list[str] = []
    vars_e: list[str] = []
    init = {}
    first = "E"
    formula = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "vars_s":
            vars_s += rest.split()
        elif head == "vars_e":
            vars_e += rest.split()
        elif head == "init":
            for tok in rest.split():
                name, _, val = tok.partition("=")
                if val not in ("0", "1"):
                    raise ValueError(f"bad initial value {tok!r}")
                init[name] = val == "1"
        elif head == "first":
            first = rest.strip()
        elif head == "formula":
            formula = parse_formula(rest)
        else:
            raise ValueError(f"unknown G5 statement {head!r}")
    if formula is None:
        raise ValueError("missing formula")
    return G5Instance(tuple(vars_s), tuple(vars_e), init, formula, first)


def format_g5(inst: G5Instance) -> str:
    lines = [
        "vars_s " + " ".join(inst.vars_s),
        "vars_e " + " ".join(inst.vars_e),
        "init " + " ".join(f"{x}={int(v)}" for x, v in sorted(inst.initial.items())),
        f"first {inst.first_mover}",
        "formula " + format_formula(inst.formula),
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def read_instance(path, kind: str):
    text = Path(path).read_text(encoding="utf-8")
    if kind == "3sat":
        return read_dimacs(text)
    if kind == "g5":
        return parse_g5(text)
    raise ValueError(f"unknown instance kind {kind!r}")
