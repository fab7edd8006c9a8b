"""
Regular trees and their one-dimensional shadow
==============================================

When every vertex at depth ``j`` has exactly ``b_j`` children and the
weights only depend on the level, the tree norm for ``p >= q`` equals the
norm of a one-dimensional Hardy operator with "hat" weights.
"""

# %%
import numpy as np

from hardytree import LevelWeights, PsiProfile, Sequences, hardy_norm_oracle, hat_weights, tree_norm
from hardytree.reductions import chain_weights, chainize, regular_weighted_tree

profile = PsiProfile((3, 2, 2))
print("level sizes:", profile.level_sizes(), " psi:", profile.psi_values())

# %%
lw = LevelWeights.geometric(profile.depth, 0.5, 0.5)
wt = regular_weighted_tree(profile, lw)
for e in [(2, 2), (3, 2), (np.inf, 1)]:
    tree = tree_norm(wt, e).value
    hat = hardy_norm_oracle(Sequences(*hat_weights(lw, profile, e)), e).value
    print(f"{e}: tree {tree:.10f}  hat {hat:.10f}")

# %%
# For ``p < q`` the identity is not guaranteed. It can survive for monotone
# level weights such as the geometric ones above, but fails for others.
bumpy = LevelWeights([1, 2, 1, 3], [1, 0.5, 2, 1])
wb = regular_weighted_tree(profile, bumpy)
e = (1.5, 3)
print("p < q:", tree_norm(wb, e).value,
      hardy_norm_oracle(Sequences(*hat_weights(bumpy, profile, e)), e).value)

# %%
# Chainization splits every vertex into singletons, leaving one weighted
# path per leaf. The path weights have a closed form.
chains = chainize(wt, (2, 2))
print(len(chains), "chains; first chain u:", np.round(chains[0].u, 4))
print("closed form u:", np.round(chain_weights(lw, profile, (2, 2))[0], 4))
