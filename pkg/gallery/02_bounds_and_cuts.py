"""
Explicit bounds and the cut characterisation
============================================

Cheap lower bounds come from single vertices and from paths; for
``p <= q`` the norm is comparable to a supremum over "cuts" of the tree,
each cut pairing a minimal-norm ``beta`` with the ``w``-mass left below it.
"""

# %%
import numpy as np

from hardytree import (bound_report, cut_supremum, enumerate_cuts, random_weighted_tree,
                       star, WeightedTree, beta_recursive, beta_oracle)

wt = random_weighted_tree(np.random.default_rng(3), 8)
rep = bound_report(wt, (1.5, 3))
for name, q in rep.quantities.items():
    print(f"{name:<22} {q.value:10.5f}   [{q.method}]")

# %%
# Every cut of a three-vertex star. ``beta`` follows a bottom-up recursion;
# it agrees with a direct convex minimisation.
s = WeightedTree(star(2), np.ones(3), np.ones(3))
for cut in enumerate_cuts(s.tree, 0):
    print(sorted(cut.d_vertices), sorted(cut.gamma),
          f"beta = {beta_recursive(s, 2, cut):.5f}  (solver {beta_oracle(s, 2, cut):.5f})")

# %%
# The best cut for ``p = q = 2`` is the root alone: ``beta = 1`` and all of
# ``w`` remains, giving ``sqrt(3)``.
best = cut_supremum(s, (2, 2))
print(best.value, sorted(best.witness.d_vertices), sorted(best.witness.gamma))

# %%
# Over a family of random trees the norm never falls below the cut supremum,
# and exceeds it by a modest factor.
rng = np.random.default_rng(1)
ratios = []
for _ in range(100):
    t = random_weighted_tree(rng, int(rng.integers(1, 11)))
    rep = bound_report(t, (2, 2))
    ratios.append(rep["norm/cut_sup"])
print(f"norm / cut_sup over 100 trees: min {min(ratios):.4f}, max {max(ratios):.4f}")
