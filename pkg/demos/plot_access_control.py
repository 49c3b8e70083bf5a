"""
Synthesising a lock controller
==============================

An office safe is guarded by a lock that may open once an employee has
been authenticated.  Each employee either authenticates or walks up to
the lock directly, and the lock only learns what happened when the
employee talks to it.
"""

from petrigame import decide, unfold, check_axioms, validate, validate_strategy
from petrigame.net import format_marking
from petrigame.reductions import access_control

game = access_control()
report = validate(game)
print(f"{report.reachable_markings} reachable markings, "
      f"up to {report.max_env_tokens} environment tokens")

# decide the game; with more than two environment tokens the general CNF path is used
verdict = decide(game)
print("winner:", verdict.winner, "after", verdict.iterations, "iterations")

# the witness commits to at most one conversation at a time
for marking in sorted(verdict.strategy.choices)[:6]:
    print(format_marking(marking), "->", sorted(verdict.strategy[marking]))

# replay every play of the graph game against the strategy
print("strategy validated on", validate_strategy(game, verdict.strategy).visited_vertices, "vertices")

# unfold into a branching process and check the four strategy conditions
prefix = unfold(game, verdict.strategy, 12)
axioms = check_axioms(game, prefix)
print(f"prefix: {prefix.num_places} places, {prefix.num_transitions} transitions; "
      f"axioms ok on {axioms.checked} cuts: {axioms.ok}")
