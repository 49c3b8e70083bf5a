"""
Three environment tokens encode 3SAT
====================================

The environment either picks a clause and commits to its three literals,
or exposes a pair of complementary literals.  The system has to choose a
literal without knowing which; it wins exactly when the formula is
satisfiable.
"""

import random

from petrigame import decide, gen_3sat
from petrigame.reductions import ThreeSatInstance, brute_force_sat, random_3sat

# a small instance: (x1 | ~x2 | x3) & (~x3 | x1 | ~x4)
example = ThreeSatInstance(4, ((1, -2, 3), (-3, 1, -4)))
game = gen_3sat(example)
print(len(game.net.places), "places,", len(game.net.transitions), "transitions")
print("system wins:", decide(game).system_wins, "| satisfiable:", brute_force_sat(example))

rng = random.Random(0)
agree = 0
for _ in range(50):
    inst = random_3sat(rng, rng.randint(3, 5), rng.randint(2, 6))
    agree += decide(gen_3sat(inst)).system_wins == brute_force_sat(inst)
print(f"{agree}/50 random instances agree with brute force")
