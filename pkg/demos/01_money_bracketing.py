"""Two money puzzles solved by evaluating each gamble in isolation.

First puzzle: offered a pair of simultaneous decisions, most people pick
a sure gain in one and a risky loss in the other.  Summing the payoffs
shows the combined lottery they chose is strictly worse, state by state,
than the combination they rejected.  A narrow evaluator reproduces the
choice; any pooled evaluator with a monotone index refuses it.

Second puzzle: turning down a 50-50 gamble that wins 1050 against a loss
of 1000 at every wealth level forces absurd large-stake behaviour under
pooled expected utility.  A narrow evaluator with a loss-averse square
root rejects the small gamble at any wealth and still accepts a gamble
that wins 80050 against a loss of 20000.
"""

from bracketlab import (
    EU,
    NB,
    AdditiveBivariate,
    Linear,
    LossAverseSqrt,
    SumBivariate,
    ce,
    compare,
    fosd_strict,
    make_marginal,
    money_aggregate,
    product,
)

v = LossAverseSqrt(2.0)

print("=== Concurrent decisions ===")
a = make_marginal([(2.4, 1.0)], source=1)
b = make_marginal([(10.0, 0.25), (0.0, 0.75)], source=1)
c = make_marginal([(-7.5, 1.0)], source=2)
d = make_marginal([(-10.0, 0.75), (0.0, 0.25)], source=2)

for name, lot in (("A", a), ("B", b), ("C", c), ("D", d)):
    print(f"  CE({name}) = {ce(v, lot):+.4f}")
print("  isolation picks A over B (sure gain) and D over C (risky loss)")

ad = product(a, d)
bc = product(b, c)

narrow = NB(AdditiveBivariate(Linear(), Linear()), v, v)
pref = compare(narrow, ad, bc)
print(f"  narrow evaluator: V(A&D) = {pref.value_p:.4f} > V(B&C) = {pref.value_q:.4f}")

print("  summed payoffs of A&D:", sorted(money_aggregate(ad).entries))
print("  summed payoffs of B&C:", sorted(money_aggregate(bc).entries))
print("  B&C strictly dominates A&D:", fosd_strict(money_aggregate(bc), money_aggregate(ad)))

pooled = EU(SumBivariate(v))
pref = compare(pooled, bc, ad)
print(f"  pooled evaluator: V(B&C) = {pref.value_p:.4f} > V(A&D) = {pref.value_q:.4f}")

print()
print("=== Wealth-independent small-gamble rejection ===")
small = make_marginal([(-1000.0, 0.5), (1050.0, 0.5)], source=1)
large = make_marginal([(-20000.0, 0.5), (80050.0, 0.5)], source=1)
refuse = make_marginal([(0.0, 1.0)], source=1)

for wealth in (0.0, 10_000.0, 50_000.0, 95_000.0):
    w = make_marginal([(wealth, 1.0)], source=2)
    r_small = compare(narrow, product(small, w), product(refuse, w)).relation.name
    r_large = compare(narrow, product(large, w), product(refuse, w)).relation.name
    print(f"  wealth {wealth:>8.0f}: small gamble {r_small}, large gamble {r_large}")

print(f"  utility gap, small: {v.value(1050.0) + v.value(-1000.0):+.4f} (reject)")
print(f"  utility gap, large: {v.value(80050.0) + v.value(-20000.0):+.4f} (accept)")
