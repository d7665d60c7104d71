"""Writing scenarios as text.

A scenario file declares spaces, maps, events and queries.  Built-ins can be
exported, and a broken file gets line and column diagnostics instead of a
traceback.
"""

from inducedprob import build, dsl

text = """\
# a coin and the days it wakes her
scenario tiny
space Coin uniform { H, T }
space Days { mon, both }
map g : Coin -> Days { H -> mon, T -> both }
event H on Coin = { H }
event both on Days = { both }
query p := P(H | both) in g expect 0
"""
sc = dsl.parse(text)
print("P(H | both) =", sc.evaluate("p"))
print()

# same thing with a missing arm
broken = text.replace(", T -> both", "")
_, diags = dsl.parse_with_diagnostics(broken)
for d in diags:
    print(d.format("tiny.psc"))
print()

# round trip a built-in
grumpy = build("grumpy")
again = dsl.parse(dsl.render(grumpy))
same = all(again.evaluate(q) == grumpy.evaluate(q) for q in grumpy.queries)
print(dsl.render(grumpy).split("event")[0])
print("round trip preserves every query:", same)
