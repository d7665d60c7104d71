"""Three ways of writing down the awakening experiment.

halfer: the coin is the uniform space; her awakening pattern is a function
of it.  thirder: (coin, day) pairs are the uniform space.  grumpy: day and
coin are independent roots of a small chain.
"""

from inducedprob import build, product_space, verify_scenario
from inducedprob.core import format_outcome
from inducedprob.simulate import simulate_sb_protocol

halfer = build("halfer")
thirder = build("thirder")
grumpy = build("grumpy")

print("halfer   P(H | awake) =", halfer.evaluate("p_H_given_W"))
print("thirder  P(H | awake) =", thirder.evaluate("p_H_given_A"))
print("grumpy   P(H | awake) =", grumpy.evaluate("p_H_given_A"))
print()

print("thirder joint over (coin, day, awake):")
for label, w in product_space(thirder.maps["a"]).dist.items():
    print(f"  {format_outcome(label):<12} {w}")
print()

# cross checks: indifference, experimentalists, grumpy == thirder
for sc in (halfer, thirder, grumpy):
    rep = verify_scenario(sc)
    print(rep.format().splitlines()[-1])
print()

# and the experiment itself, run for a million weeks
print(simulate_sb_protocol(seed=0, weeks=1_000_000).format_text())
