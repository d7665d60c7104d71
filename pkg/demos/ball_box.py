"""Green and red balls.

Each Heads puts one green ball in a box, each Tails two red ones.  After n
tosses one ball is drawn.  The chance of green starts at 1/2 and sinks
towards 1/3 as n grows.
"""

from inducedprob.scenarios import build_groisman
from inducedprob.simulate import simulate_groisman

print(" n  P(green)")
for n in range(1, 13):
    p = build_groisman(n).evaluate("q_green")
    print(f"{n:2d}  {str(p):>14}  {float(p):.5f}")

# past n = 20 enumeration is too big; sample instead
for n in (100, 1000):
    est = simulate_groisman(n, trials=200_000, seed=1)
    print(f"n={n}: {est.estimate:.5f} +/- {est.stderr:.5f}")

# the one-toss question: did the first toss land Heads, given a ball was drawn?
print("n=1, P(first Heads | ball drawn) =", build_groisman(1).evaluate("q_first_H_given_pick"))
