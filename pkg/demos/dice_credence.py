"""Alice, Bob and two dice.

Bob's credence about the sum is updated twice: first Bayesian (always going
back to the 36 rolls), then by the shortcut of striking impossible sums and
rescaling what is left.  The two disagree once he learns something about the
first die.
"""

from inducedprob import build
from inducedprob.credence import diff_tables, render_tables, two_dice_tables

sc = build("two-dice")
print("P(s = 6 | a die shows 1) =", sc.evaluate("p_s6_given_B"))
print()

bayes, adhoc = two_dice_tables(sc)
print("Bayesian updates")
print(render_tables([("C_A", bayes["CA"]), ("C_B", bayes["CB"]), ("C'_B", bayes["CB1"]), ("C''_B", bayes["CB2"])]))
print()
print("Strike and rescale")
print(render_tables([("C_B", adhoc["CB"]), ("C'_B", adhoc["CB1"]), ("C''_B", adhoc["CB2"])]))
print()

# the first update agrees, the second does not
for s, good, bad in diff_tables(bayes["CB2"], adhoc["CB2"]):
    print(f"s={s}: {good} vs {bad}")
