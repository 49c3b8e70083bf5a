"""Small propositional solvers for commitment constraints.

Clauses are tuples of non-zero ints in DIMACS style: variable ``i`` is
``i`` (1-based), its negation ``-i``.  `Cnf` names the variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Cnf:
    variables: tuple[str, ...]
    clauses: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        self._ids = {v: i + 1 for i, v in enumerate(self.variables)}

    def lit(self, var: str, positive: bool = True) -> int:
        i = self._ids[var]
        return i if positive else -i

    def add(self, *lits: int) -> None:
        self.clauses.append(tuple(lits))

    def add_named(self, *named: tuple[str, bool]) -> None:
        self.add(*(self.lit(v, s) for v, s in named))

    def evaluate(self, assignment: dict[str, bool]) -> bool:
        vals = [None] + [assignment[v] for v in self.variables]
        return all(any(vals[l] if l > 0 else not vals[-l] for l in c) for c in self.clauses)

    def named_clauses(self) -> list[list[str]]:
        return [[("" if l > 0 else "¬") + self.variables[abs(l) - 1] for l in c] for c in self.clauses]


def dpll(num_vars: int, clauses: list[tuple[int, ...]]) -> list[bool] | None:
    """Unit propagation plus chronological backtracking.

    Decisions pick the lowest unassigned variable and try ``False`` first,
    so the result is the lexicographically smallest model (variable 1
    most significant, false < true).  Returns ``values[1..n]`` with index 0
    unused, or None when unsatisfiable.
    """
    for c in clauses:
        if not c:
            return None
    occurs: list[list[int]] = [[] for _ in range(2 * num_vars + 2)]
    for ci, c in enumerate(clauses):
        for l in set(c):
            occurs[l if l > 0 else num_vars - l].append(ci)
    value: list[int] = [0] * (num_vars + 1)  # 0 unassigned, 1 true, -1 false
    trail: list[int] = []

    def lit_val(l: int) -> int:
        v = value[abs(l)]
        return v if l > 0 else -v

    def propagate(start: int) -> bool:
        # examine clauses containing the negation of each newly assigned literal
        qi = start
        while qi < len(trail):
            l = trail[qi]
            qi += 1
            neg = -l
            for ci in occurs[neg if neg > 0 else num_vars - neg]:
                unassigned = None
                n_un = 0
                sat = False
                for x in clauses[ci]:
                    xv = lit_val(x)
                    if xv == 1:
                        sat = True
                        break
                    if xv == 0:
                        n_un += 1
                        unassigned = x
                if sat:
                    continue
                if n_un == 0:
                    return False
                if n_un == 1:
                    value[abs(unassigned)] = 1 if unassigned > 0 else -1
                    trail.append(unassigned)
        return True

    def assign(l: int) -> int:
        mark = len(trail)
        value[abs(l)] = 1 if l > 0 else -1
        trail.append(l)
        return mark

    def undo(mark: int) -> None:
        while len(trail) > mark:
            value[abs(trail.pop())] = 0

    # initial unit clauses
    for c in clauses:
        if len(c) == 1:
            l = c[0]
            if lit_val(l) == -1:
                return None
            if lit_val(l) == 0:
                assign(l)
    if not propagate(0):
        return None

    # explicit decision stack: (mark, var, tried_true)
    stack: list[tuple[int, int, bool]] = []
    var = 1
    while True:
        while var <= num_vars and value[var] != 0:
            var += 1
        if var > num_vars:
            return [False] + [v == 1 for v in value[1:]]
        mark = assign(-var)
        if propagate(mark):
            stack.append((mark, var, False))
            continue
        undo(mark)
        # false failed: try true, backtracking further on failure
        while True:
            mark = assign(var)
            if propagate(mark):
                stack.append((mark, var, True))
                break
            undo(mark)
            while stack and stack[-1][2]:
                undo(stack.pop()[0])
            if not stack:
                return None
            mark, var, _ = stack.pop()
            undo(mark)


def sat_solve(cnf: Cnf) -> dict[str, bool] | None:
    """Deterministic model of ``cnf`` (prefer-false, lexicographic), or None if UNSAT."""
    values = dpll(len(cnf.variables), cnf.clauses)
    if values is None:
        return None
    return {v: values[i + 1] for i, v in enumerate(cnf.variables)}


def two_sat(num_vars: int, clauses: list[tuple[int, ...]]) -> list[bool] | None:
    """Linear-time 2SAT via strongly connected components of the implication graph.

    Every clause must have one or two literals.  Returns ``values[1..n]`` or
    None when some variable shares a component with its negation.
    """
    n = 2 * num_vars

    def node(l: int) -> int:
        return 2 * (abs(l) - 1) + (0 if l > 0 else 1)

    adj: list[list[int]] = [[] for _ in range(n)]
    for c in clauses:
        if len(c) == 1:
            a = c[0]
            adj[node(-a)].append(node(a))
        elif len(c) == 2:
            a, b = c
            adj[node(-a)].append(node(b))
            adj[node(-b)].append(node(a))
        else:
            raise ValueError(f"2SAT clause with {len(c)} literals")

    # iterative Tarjan; components are numbered in reverse topological order
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            if pos < len(adj[v]):
                work[-1] = (v, pos + 1)
                w = adj[v][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    values = [False]
    for i in range(num_vars):
        pos, neg = comp[2 * i], comp[2 * i + 1]
        if pos == neg:
            return None
        # literal whose component comes later in topological order is true
        values.append(pos < neg)
    return values
