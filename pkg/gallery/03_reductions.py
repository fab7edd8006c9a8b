"""
Structural reductions
=====================

Two operations transform a weighted tree without decreasing the norm:
collapsing bands of levels into single vertices, and splitting a vertex
into copies that share out its children.
"""

# %%
import numpy as np

from hardytree import (LevelGrouping, SplitSpec, forest_norm, random_weighted_tree,
                       reduce_levels, split_vertex, tree_norm)
from hardytree.reductions import enumerate_level_groupings, enumerate_split_specs, lift_function

e = (2, 3)
wt = random_weighted_tree(np.random.default_rng(11), 10)
print("depths:", wt.tree.depth)
print("norm:", tree_norm(wt, e).value)

# %%
# Level bands: the components of each band become vertices carrying the
# l_{p'} norm of ``u`` and the l_q norm of ``w`` over the component.
for g in enumerate_level_groupings(wt.tree, wt.tree.root, max_levels=3)[:6]:
    red = reduce_levels(wt, g, e)
    print(f"levels {g.cut_levels}: {red.n} vertices, norm {tree_norm(red, e).value:.5f}")

# %%
# Vertex splitting: each copy gets ``u * n^{1/p}`` and ``w * n^{-1/q}``.
# Splitting the root produces a forest; forest norms combine block norms.
xi = wt.tree.root
for spec in list(enumerate_split_specs(wt.tree, xi))[:4]:
    res = split_vertex(wt, spec, e)
    print([sorted(b) for b in spec.partition], "->", len(res.components), "component(s),",
          f"norm {forest_norm(res.components, e).value:.5f}")

# %%
# The proof device behind monotonicity: lift a function to the split tree.
# The l_p norm is unchanged and the output norm can only grow.
res = split_vertex(wt, SplitSpec(xi, tuple(frozenset([c]) for c in wt.tree.children[xi])), e)
f = np.random.default_rng(0).random(wt.n)
lifted = lift_function(res, f, e[0])
print("||f||_p before/after:", np.sum(f ** 2) ** 0.5, np.sum(np.concatenate(lifted) ** 2) ** 0.5)
