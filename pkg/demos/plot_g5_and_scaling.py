"""
Boolean toggling games and growing environments
===============================================

G5 is a two-player game over boolean variables; its Petri-game encoding
keeps a single system token.  We compare the encoded game with an
explicit solve of G5, then watch solving time grow as the access-control
example gains employees.
"""

import random
import time

from petrigame import decide, gen_g5, solve_g5_tiny
from petrigame.reductions import access_control, format_g5, random_g5

rng = random.Random(3)
inst = random_g5(rng)
print(format_g5(inst))
print("Petri game:", decide(gen_g5(inst)).winner, "| G5 oracle:", solve_g5_tiny(inst))

for employees in (1, 2, 3):
    game = access_control(employees)
    t0 = time.perf_counter()
    v = decide(game)
    print(f"{2 * employees} environment tokens: {v.reachable_markings} markings, "
          f"{time.perf_counter() - t0:.3f}s, winner {v.winner}")
