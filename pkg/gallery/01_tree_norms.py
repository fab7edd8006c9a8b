"""
Operator norms on small trees
=============================

The summation operator adds up ``u``-weighted values along the path from
the root and multiplies by ``w``. On a finite tree it is a lower-triangular
non-negative matrix, so its l_p -> l_q norm can be computed directly.
"""

# %%
# A two-vertex chain with unit weights has kernel ``[[1, 0], [1, 1]]``; its
# l_2 -> l_2 norm is the golden ratio.
import math

import numpy as np

from hardytree import (WeightedTree, assemble_matrix, chain, random_weighted_tree, star,
                       tree_norm)

c2 = WeightedTree(chain(2), [1, 1], [1, 1])
print(assemble_matrix(c2).entries)
print("||S||_{2->2} =", tree_norm(c2, (2, 2)).value, " golden ratio:", (1 + math.sqrt(5)) / 2)

# %%
# The dispatch picks an exact method when one exists: column norms for
# ``p = 1``, row norms for ``q = inf``, a symmetric eigensolve for
# ``p = q = 2``. Everything else uses a multi-start nonlinear power ascent,
# whose value is a certified lower bound with a witness vector.
s = WeightedTree(star(2), np.ones(3), np.ones(3))
for e in [(1, 2), (2, math.inf), (2, 2), (1.5, 3), (3, 1.5)]:
    est = tree_norm(s, e)
    print(f"(p, q) = {e!s:<10} norm = {est.value:.6f}  via {est.method}")

# %%
# The witness is a non-negative unit vector in l_p that attains the value.
est = tree_norm(s, (1.5, 3))
print("witness by vertex:", {v: round(x, 4) for v, x in est.witness_by_vertex().items()})

# %%
# Norms scale with the weights: multiplying ``u`` by ``a`` and ``w`` by
# ``b`` multiplies the norm by ``ab``.
wt = random_weighted_tree(np.random.default_rng(0), 9)
base = tree_norm(wt, (1.5, 3)).value
print("ratio after scaling by (2, 5):", tree_norm(wt.scaled(2, 5), (1.5, 3)).value / base)
