"""What a consumption stream's owner pays to learn the future early.

Two evaluators walk the same binomial consumption tree.  The recursive
certainty-equivalent evaluator folds continuation risk through a
curvature alpha that can differ from the intertemporal curvature rho;
whenever alpha < rho it strictly prefers a rewritten tree in which all
uncertainty resolves in the first period, and the premium below is the
fraction of the stream it would pay for that rewrite.  The history-based
evaluator scores the induced distribution over consumption paths, which
a timing rewrite leaves untouched, so its premium is identically zero.
"""

from bracketlab import build_iid_tree, collapse_early, ez_value, kmbib_value, timing_premium

tree = build_iid_tree(1.0, [(1.05, 0.5), (0.97, 0.5)], steps=4)
early = collapse_early(tree)

rho, beta = 0.5, 0.97
print(f"fixture: 4-period iid growth tree, rho = {rho}, beta = {beta}")
print()
for alpha in (0.5, -1.0, -4.0, -9.0):
    late = ez_value(tree, rho, alpha, beta)
    first = ez_value(early, rho, alpha, beta)
    prem = timing_premium(tree, rho, alpha, beta)
    print(f"  alpha = {alpha:+5.1f}: late = {late:.6f}  early = {first:.6f}  premium = {prem:.6f}")
print()
print("matched curvature (alpha = rho) is the knife edge: the recursion")
print("collapses to discounted expected utility and the premium vanishes")
print()
for alpha in (0.5, -4.0, -9.0):
    prem = timing_premium(tree, rho, alpha, beta, model="kmbib")
    print(f"  history-based, alpha = {alpha:+5.1f}: premium = {prem:.2e}")
print()
print("history-based premiums are zero at machine precision for every")
print("curvature: the path distribution does not change, so nothing is")
print("worth paying for")
print()
print(f"path-value check on the rewrite: kmbib late  = {kmbib_value(tree, rho, -9.0, beta):.12f}")
print(f"                                 kmbib early = {kmbib_value(early, rho, -9.0, beta):.12f}")
