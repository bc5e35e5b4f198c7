"""A strict ranking that flips after mixing with an indifferent pair.

Pooled expected utility is linear in probabilities, so mixing both
sides of a strict preference with both sides of an indifference can
never reverse the ranking.  A narrow evaluator takes a certainty
equivalent inside each source before aggregating, which is nonlinear
in the second source's probabilities, and the reversal below is the
witness.  The construction uses square-root utility on consumption
and a sure amount (4 + eps)^2 tuned so the top pair is strictly but
not overwhelmingly preferred.
"""

from bracketlab import NB, AdditiveBivariate, Linear, Power, compare, evaluate, mix, make_marginal, product

eps = 0.5
model = NB(AdditiveBivariate(Linear(), Linear()), Power(0.5), Power(0.5))

sure = lambda x, s: make_marginal([(float(x), 1.0)], source=s, lo=0.0)
p1, q1 = sure(25, 1), sure(16, 1)
p2, q2 = sure((4 + eps) ** 2, 2), sure(25, 2)
r, s = sure(0, 2), sure(9, 2)

pp, qq = product(p1, p2), product(q1, q2)
pr, qs = product(p1, r), product(q1, s)

print(f"V(p1, p2) = {evaluate(model, pp):.4f}   V(q1, q2) = {evaluate(model, qq):.4f}")
print("top pair:", compare(model, pp, qq).relation.name)
print(f"V(p1, r)  = {evaluate(model, pr):.4f}   V(q1, s)  = {evaluate(model, qs):.4f}")
print("padding pair:", compare(model, pr, qs).relation.name)

half_p = mix(0.5, pp, pr)
half_q = mix(0.5, qq, qs)
print()
print(f"V(half mix, preferred side)    = {evaluate(model, half_p):.4f}")
print(f"V(half mix, dispreferred side) = {evaluate(model, half_q):.4f}")
print("after mixing:", compare(model, half_p, half_q).relation.name)
print()
print("the 0.5-mixture of the preferred pair with its own indifferent")
print("padding is now strictly worse: 30.0625 < 32, so independence in")
print("the second source's probabilities fails for this evaluator")
