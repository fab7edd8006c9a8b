"""
Tail bounds for dyadic level weights
====================================

Weights that are powers of two times slowly varying corrections reduce the
norm to a supremum of tail sums. The evaluators report the truncated value,
a remainder-corrected upper value, and a divergence flag.
"""

# %%
import math

from hardytree import Example2Params, check_slowly_varying, example1_bound, example2_bound

tb = example1_bound(2, 2, psi_w=lambda y: 1 / math.log2(y))
print(f"M = {tb.value:.6f}, with remainder {tb.upper:.6f}, "
      f"series limit {math.sqrt(math.pi ** 2 / 6 - 1):.6f}")

# %%
# A constant tail is not summable and is flagged.
print("constant tail diverged:", example1_bound(2, 2).diverged)

# %%
# Polynomial level weights: case 1 is an explicit power of ``j0``.
p = Example2Params(gamma_star=1, alpha_u=1.0, alpha_w=1.5, j0=3)
print("case 1:", example2_bound(1, p, (2, 2)).value, "=", 3 ** -1.5)

# %%
# Slow variation is checked on the grid ``y, t in {1, 2, ..., 2^20}``: the
# constants must not grow when the grid is doubled.
for name, fn in [("log2(2y)", lambda y: math.log2(2 * y)), ("y", lambda y: y)]:
    rep = check_slowly_varying(fn, 0.5)
    print(f"{name:<9} upper {rep.upper_constant:.4g}  lower {rep.lower_constant:.4g}  "
          f"passed {rep.passed}")
