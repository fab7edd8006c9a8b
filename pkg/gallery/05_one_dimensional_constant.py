"""
The one-dimensional constant
============================

For sequences ``u, w`` the Hardy operator ``(Hf)_n = w_n sum_{k<=n} u_k f_k``
has a norm that is comparable to an explicit constant ``M``: a supremum of
tail-times-head products when ``p <= q`` and a weighted series when ``q < p``.
"""

# %%
import numpy as np

from hardytree import Sequences, bennett_constant, hardy_norm_oracle
from hardytree.hardy1d import bennett_terms

s = Sequences([1, 1, 1], [1, 0.5, 0.25])
print("M (p=q=2):", bennett_constant(s, (2, 2)), " terms:", bennett_terms(s, (2, 2)))
print("M (p=2, q=1) for u=w=(1,1):", bennett_constant(Sequences([1, 1], [1, 1]), (2, 1)))

# %%
# The ratio norm / M stays bounded as the sequences get longer.
n = np.arange(64.0)
for e in [(2, 2), (1.5, 3), (3, 1.5), (np.inf, 2)]:
    for length in (16, 32, 64):
        seq = Sequences((n[:length] + 1) ** -0.3, (n[:length] + 1) ** -0.9)
        r = hardy_norm_oracle(seq, e).value / bennett_constant(seq, e)
        print(f"{e!s:<12} length {length:>2}: norm/M = {r:.4f}")
