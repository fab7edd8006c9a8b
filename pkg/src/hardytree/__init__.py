"""Operator norms of weighted summation operators on rooted trees.

The summation operator ``(Sf)(xi) = w(xi) sum_{xi' <= xi} u(xi') f(xi')``
maps l_p on the vertices of a rooted tree to l_q. This package computes its
norm numerically on small trees, evaluates explicit two-sided bounds, and
implements the structural reductions that relate trees of different shape.
"""

__version__ = "0.1.0"

from .errors import (ConvergenceError, CutError, HardyTreeError, ParseError, RegimeError,
                     SizeLimitError, TreeError)
from .exponents import Exponents, conjugate, parse_exponent
from .tree_core import (Cut, RootedTree, WeightedTree, build_tree, canonical_form, chain,
                        enumerate_cuts, full_tree, level_set, path_segment, random_tree,
                        random_weighted_tree, star, subtree, validate_cut, weighted_norm)
from .oracle import (KernelMatrix, NormEstimate, apply_operator, assemble_matrix, forest_norm,
                     operator_norm, tree_norm)
from .bounds import (BoundReport, Hypothesis1Report, beta_oracle, beta_recursive, bound_report,
                     check_theorem1_hypotheses, cut_supremum, path_lower_bound,
                     residual_weight_norm, sup_product)
from .reductions import (Example2Params, LevelGrouping, LevelWeights, PsiProfile, SplitSpec,
                         TailBound, chain_count, chain_weights, check_slowly_varying,
                         example1_bound, example1_weights, example2_bound,
                         generate_regular_tree, hat_weights, reduce_levels, split_vertex)
from .hardy1d import Sequences, bennett_constant, hardy_norm_oracle

__all__ = [name for name in dir() if not name.startswith("_")]
