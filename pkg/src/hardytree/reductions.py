"""Structural reductions of weighted trees.

* :func:`reduce_levels` collapses level bands into single vertices (the
  tree ``A_J``); the norm can only grow.
* :func:`split_vertex` replaces a vertex by one copy per block of a
  partition of its children, rescaling the copies so that the norm can
  only grow.
* :func:`generate_regular_tree`, :func:`hat_weights` and
  :func:`chain_weights` describe trees with exact level-wise branching and
  the one-dimensional problems they reduce to.
* :func:`example1_bound`, :func:`example2_bound` and
  :func:`check_slowly_varying` evaluate the explicit two-sided bounds for
  level-regular weights with slowly varying corrections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator, Sequence

import numpy as np
from more_itertools import set_partitions

from .errors import RegimeError, SizeLimitError, TreeError
from .exponents import Exponents, as_exponents
from .tree_core import RootedTree, WeightedTree, lp_norm

Handle = Callable[[float], float]

DEFAULT_REGULAR_CAP = 1 << 20
DEFAULT_TAIL_CAP = 150
DIVERGENCE_RATIO = 10.0


def _one(_: float) -> float:
    return 1.0


# ------------------------------------------------------------ types --


@dataclass(frozen=True)
class LevelGrouping:
    """Cut levels ``j_0 < j_1 < ...`` below the base vertex ``base``.

    Levels are absolute depths; ``j_0`` must equal the depth of ``base``.
    """

    base: int
    cut_levels: tuple

    def __post_init__(self):
        levels = tuple(int(j) for j in self.cut_levels)
        if not levels:
            raise TreeError("a level grouping needs at least one level")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise TreeError(f"cut levels must be strictly increasing, got {levels}")
        object.__setattr__(self, "cut_levels", levels)


@dataclass(frozen=True)
class SplitSpec:
    """Vertex ``xi`` and a partition of its children into non-empty blocks."""

    xi: int
    partition: tuple

    def __post_init__(self):
        blocks = tuple(frozenset(int(v) for v in b) for b in self.partition)
        object.__setattr__(self, "partition", blocks)

    @property
    def n(self) -> int:
        return len(self.partition)


@dataclass(frozen=True)
class PsiProfile:
    """Level-wise branching numbers ``b_0, ..., b_{N-1}`` of a regular tree.

    Every vertex at depth ``j`` has exactly ``b_j`` children, so the number
    of descendants ``j' - j`` levels below it is the exact integer product
    ``b_j * ... * b_{j'-1}`` and ``psi(j) = sum_{i<j} log2 b_i``.
    """

    branching: tuple

    def __post_init__(self):
        b = tuple(int(x) for x in self.branching)
        if any(x < 1 for x in b):
            raise TreeError(f"branching numbers must be >= 1, got {b}")
        object.__setattr__(self, "branching", b)

    @property
    def depth(self) -> int:
        return len(self.branching)

    def count(self, j: int, j2: int) -> int:
        """Descendants of a depth-``j`` vertex at depth ``j2`` (exact)."""
        if not 0 <= j <= j2 <= self.depth:
            raise TreeError(f"levels must satisfy 0 <= j <= j2 <= {self.depth}")
        return math.prod(self.branching[j:j2])

    def psi(self, j: int) -> float:
        return math.log2(self.count(0, j))

    def psi_values(self) -> np.ndarray:
        return np.array([self.psi(j) for j in range(self.depth + 1)])

    def level_sizes(self) -> list[int]:
        return [self.count(0, j) for j in range(self.depth + 1)]


@dataclass(frozen=True)
class LevelWeights:
    """Weights constant on levels: ``u(xi) = u_j``, ``w(xi) = w_j`` at depth ``j``."""

    u_levels: np.ndarray
    w_levels: np.ndarray

    def __init__(self, u_levels, w_levels):
        u = np.array(u_levels, dtype=float).reshape(-1)
        w = np.array(w_levels, dtype=float).reshape(-1)
        if u.shape != w.shape:
            raise TreeError("u_levels and w_levels must have equal length")
        if np.any(u <= 0) or np.any(w <= 0):
            raise TreeError("level weights must be positive")
        object.__setattr__(self, "u_levels", u)
        object.__setattr__(self, "w_levels", w)

    @property
    def depth(self) -> int:
        return len(self.u_levels) - 1

    @classmethod
    def geometric(cls, depth: int, ru: float, rw: float) -> "LevelWeights":
        j = np.arange(depth + 1)
        return cls(ru ** j, rw ** j)


def _check_lengths(lw: LevelWeights, profile: PsiProfile) -> None:
    if lw.depth != profile.depth:
        raise TreeError(f"level weights cover depth {lw.depth}, profile has depth {profile.depth}")


# ---------------------------------------------------- relabelling --


def _relabel(parent_of: dict, roots: Sequence) -> tuple[list[RootedTree], list[list]]:
    """Dense trees from a parent map over arbitrary hashable keys.

    Returns one tree per root plus, for each tree, the key of every new
    vertex id. Ids are assigned in breadth-first order with children in
    the order of their sorted keys.
    """
    kids: dict = {}
    for v, pv in parent_of.items():
        if pv is not None:
            kids.setdefault(pv, []).append(v)
    trees, keys = [], []
    for r in roots:
        order = [r]
        for v in order:
            order.extend(sorted(kids.get(v, []), key=_sort_key))
        index = {v: i for i, v in enumerate(order)}
        parent = [-1] + [index[parent_of[v]] for v in order[1:]]
        trees.append(RootedTree(parent, 0))
        keys.append(order)
    return trees, keys


def _sort_key(k):
    return k if isinstance(k, tuple) else (k,)


def _origin(wt: WeightedTree, v: int) -> int:
    return wt.origin[v] if wt.origin else v


# --------------------------------------------------- level grouping --


def _band_index(levels: Sequence[int], depth: int) -> int:
    return int(np.searchsorted(levels, depth, side="right")) - 1


def reduce_levels(wt: WeightedTree, g: LevelGrouping, e) -> WeightedTree:
    """Collapse the level bands ``[j_k, j_{k+1})`` below ``g.base``.

    Each connected component of a band becomes one vertex carrying the
    l_{p'} norm of ``u`` and the l_q norm of ``w`` over the component. The
    reduced tree's ``origin`` records the minimal vertex of each component.

    Raises
    ------
    TreeError
        If ``j_0`` differs from the depth of the base or a band is empty.
    """
    e = as_exponents(e)
    t = wt.tree
    t.check_vertex(g.base)
    levels = g.cut_levels
    if levels[0] != t.depth[g.base]:
        raise TreeError(f"first cut level must be the base depth {t.depth[g.base]}")
    verts = sorted(t.subtree(g.base), key=lambda v: (t.depth[v], v))
    bottom = max(t.depth[v] for v in verts)
    if levels[-1] > bottom:
        raise TreeError(f"empty band: level {levels[-1]} lies below the deepest vertex ({bottom})")

    comp: dict[int, int] = {}
    for v in verts:
        pv = t.parent[v]
        if v == g.base or _band_index(levels, t.depth[v]) != _band_index(levels, t.depth[pv]):
            comp[v] = v
        else:
            comp[v] = comp[pv]
    members: dict[int, list[int]] = {}
    for v in verts:
        members.setdefault(comp[v], []).append(v)
    parent_of = {r: (None if r == g.base else comp[t.parent[r]]) for r in members}
    (tree,), (keys,) = _relabel(parent_of, [g.base])
    u = [lp_norm(wt.u[members[r]], e.p_conj) for r in keys]
    w = [lp_norm(wt.w[members[r]], e.q) for r in keys]
    return WeightedTree(tree, u, w, [_origin(wt, r) for r in keys])


def enumerate_level_groupings(tree: RootedTree, xi: int, max_levels: int = 3) -> list[LevelGrouping]:
    """All groupings below ``xi`` with at most ``max_levels`` cut levels."""
    j0 = tree.depth[xi]
    bottom = max(tree.depth[v] for v in tree.subtree(xi))
    extra = range(j0 + 1, bottom + 1)
    out = []
    for k in range(0, max_levels):
        for rest in combinations(extra, k):
            out.append(LevelGrouping(xi, (j0,) + rest))
    return out


# ------------------------------------------------------ vertex split --


@dataclass
class SplitResult:
    """Outcome of :func:`split_vertex`.

    ``components`` holds one weighted tree (or several when the root was
    split). ``source[c][v]`` is the vertex of the input tree that vertex
    ``v`` of component ``c`` came from; ``copies`` lists the ``(c, v)``
    positions of the new copies, in block order.
    """

    components: list
    source: list
    copies: list
    n: int
    spec: SplitSpec = field(repr=False)

    @property
    def is_forest(self) -> bool:
        return len(self.components) > 1


def validate_split(tree: RootedTree, s: SplitSpec) -> None:
    tree.check_vertex(s.xi)
    kids = set(tree.children[s.xi])
    if not kids:
        raise TreeError(f"vertex {s.xi} has no children to split")
    seen: set[int] = set()
    for b in s.partition:
        if not b:
            raise TreeError("partition blocks must be non-empty")
        if seen & b:
            raise TreeError("partition blocks must be disjoint")
        seen |= b
    if seen != kids:
        raise TreeError(f"partition must cover exactly the children {sorted(kids)} of {s.xi}")


def split_vertex(wt: WeightedTree, s: SplitSpec, e) -> SplitResult:
    """Replace ``s.xi`` by one copy per block, each adopting its block's subtrees.

    Copies carry ``u = n^{1/p} u(xi)`` and ``w = n^{-1/q} w(xi)``; every other
    weight is unchanged. Splitting the root yields a forest of ``n`` trees;
    otherwise all copies hang from the parent of ``xi``.
    """
    e = as_exponents(e)
    t = wt.tree
    validate_split(t, s)
    n = s.n
    xi = s.xi
    parent_of: dict = {}
    for v in range(t.n):
        if v == xi:
            continue
        pv = t.parent[v]
        if pv == xi:
            block = next(k for k, b in enumerate(s.partition) if v in b)
            parent_of[(v,)] = (xi, block)
        else:
            parent_of[(v,)] = None if pv < 0 else (pv,)
    up = None if t.parent[xi] < 0 else (t.parent[xi],)
    for k in range(n):
        parent_of[(xi, k)] = up
    roots = [(xi, k) for k in range(n)] if up is None else [(t.root,)]
    trees, keys = _relabel(parent_of, roots)

    cu = n ** (1.0 / e.p) if e.p != math.inf else 1.0
    cw = n ** (-1.0 / e.q) if e.q != math.inf else 1.0
    comps, source, copies = [], [], []
    for c, (tree, kk) in enumerate(zip(trees, keys)):
        src = [k[0] for k in kk]
        u = wt.u[src].copy()
        w = wt.w[src].copy()
        for i, k in enumerate(kk):
            if len(k) == 2:
                u[i] *= cu
                w[i] *= cw
                copies.append((c, i, k[1]))
        comps.append(WeightedTree(tree, u, w, [_origin(wt, v) for v in src]))
        source.append(src)
    copies = [(c, i) for c, i, _ in sorted(copies, key=lambda x: x[2])]
    return SplitResult(comps, source, copies, n, s)


def lift_function(result: SplitResult, f, p) -> list[np.ndarray]:
    """Transport ``f`` on the input tree to the split tree.

    Copies of ``xi`` receive ``n^{-1/p} f(xi)``; every other vertex keeps its
    value. The l_p norm is preserved, and for non-negative ``f`` the value
    of ``||S f||_q`` does not decrease.
    """
    pe = as_exponents((p, 1)).p
    f = np.asarray(f, dtype=float)
    scale = result.n ** (-1.0 / pe) if pe != math.inf else 1.0
    out = [f[np.asarray(src)].copy() for src in result.source]
    for c, i in result.copies:
        out[c][i] *= scale
    return out


def enumerate_split_specs(tree: RootedTree, xi: int) -> Iterator[SplitSpec]:
    """Every partition of the children of ``xi`` (Bell-number many)."""
    kids = list(tree.children[xi])
    if not kids:
        return
    for part in set_partitions(kids):
        yield SplitSpec(xi, tuple(frozenset(b) for b in part))


def chainize(wt: WeightedTree, e) -> list[WeightedTree]:
    """Split every vertex into singletons, deepest levels first.

    On a tree this produces one weighted path per leaf; it is the repeated
    application of :func:`split_vertex` with singleton partitions.
    """
    forest = [wt]
    while True:
        for idx, comp in enumerate(forest):
            t = comp.tree
            branching = [v for v in t.order if len(t.children[v]) > 1]
            if branching:
                v = max(branching, key=lambda x: (t.depth[x], x))
                spec = SplitSpec(v, tuple(frozenset([c]) for c in t.children[v]))
                res = split_vertex(comp, spec, e)
                forest = forest[:idx] + res.components + forest[idx + 1:]
                break
        else:
            return forest


# --------------------------------------------------- regular trees --


def generate_regular_tree(profile: PsiProfile, max_vertices: int = DEFAULT_REGULAR_CAP) -> RootedTree:
    """Tree in which every depth-``j`` vertex has exactly ``b_j`` children.

    Vertex ids follow breadth-first order, so ``(depth, id)`` order is the
    id order.
    """
    total = sum(profile.level_sizes())
    if total > max_vertices:
        raise SizeLimitError(f"regular tree would have {total} vertices (cap {max_vertices})")
    parent = [-1]
    frontier = [0]
    for b in profile.branching:
        nxt = []
        for v in frontier:
            for _ in range(b):
                parent.append(v)
                nxt.append(len(parent) - 1)
        frontier = nxt
    return RootedTree(parent, 0)


def level_weighted_tree(tree: RootedTree, lw: LevelWeights) -> WeightedTree:
    """Attach level weights to ``tree`` by depth."""
    depth = np.array(tree.depth)
    if depth.max(initial=0) > lw.depth:
        raise TreeError(f"tree has depth {depth.max()} but weights stop at {lw.depth}")
    return WeightedTree(tree, lw.u_levels[depth], lw.w_levels[depth])


def regular_weighted_tree(profile: PsiProfile, lw: LevelWeights,
                          max_vertices: int = DEFAULT_REGULAR_CAP) -> WeightedTree:
    _check_lengths(lw, profile)
    return level_weighted_tree(generate_regular_tree(profile, max_vertices), lw)


def _pow2(psi: np.ndarray, r: float, sign: float) -> np.ndarray:
    if r == math.inf:
        return np.ones_like(psi)
    return np.exp2(sign * psi / r)


def hat_weights(lw: LevelWeights, profile: PsiProfile, e) -> tuple[np.ndarray, np.ndarray]:
    """One-dimensional weights ``u_j 2^{-psi(j)/p}`` and ``w_j 2^{psi(j)/q}``.

    For a regular tree and ``p >= q`` the tree norm equals the norm of the
    one-dimensional Hardy operator with these weights.
    """
    e = as_exponents(e)
    _check_lengths(lw, profile)
    psi = profile.psi_values()
    return lw.u_levels * _pow2(psi, e.p, -1.0), lw.w_levels * _pow2(psi, e.q, 1.0)


def chain_weights(lw: LevelWeights, profile: PsiProfile, e) -> tuple[np.ndarray, np.ndarray]:
    """Weights of each of the ``chain_count`` paths obtained by chainization.

    ``u_i 2^{(psi(N) - psi(i))/p}`` and ``w_i 2^{-(psi(N) - psi(i))/q}``.
    """
    e = as_exponents(e)
    _check_lengths(lw, profile)
    psi = profile.psi_values()
    gap = psi[-1] - psi
    return lw.u_levels * _pow2(gap, e.p, 1.0), lw.w_levels * _pow2(gap, e.q, -1.0)


def chain_count(profile: PsiProfile) -> int:
    """Number of leaves ``2^{psi(N)}``, i.e. of disjoint chains after chainization."""
    return profile.count(0, profile.depth)


# ------------------------------------------------ example weights --


def example1_weights(theta: float, s: int, psi_u: Handle, psi_w: Handle, j: int,
                     q: float = 2.0) -> tuple[float, float]:
    """Level weights ``(2^{theta s j/q} psi_u(2^{sj}), 2^{-theta s j/q} psi_w(2^{sj}))``."""
    qf = as_exponents((1, q)).q
    y = 2.0 ** (s * j)
    g = 0.0 if qf == math.inf else theta * s * j / qf
    return 2.0 ** g * psi_u(y), 2.0 ** -g * psi_w(y)


@dataclass(frozen=True)
class TailBound:
    """A supremum of truncated tail sums.

    ``value`` uses the partial sums up to level ``truncation``; ``upper``
    adds the estimated remainder of the series; ``remainder`` is that
    estimate (NaN when not applicable). Divergent cases have
    ``diverged=True`` and ``value = upper = inf``.
    """

    value: float
    upper: float
    remainder: float
    diverged: bool
    witness: int
    truncation: int
    decay: float = math.nan

    def as_dict(self) -> dict:
        return {"value": self.value, "upper": self.upper, "remainder": self.remainder,
                "diverged": self.diverged, "witness": self.witness,
                "truncation": self.truncation, "decay": self.decay}


def _tail_remainder(idx: np.ndarray, terms: np.ndarray) -> tuple[float, float]:
    """Power-law estimate of ``sum_{i > idx[-1]} terms_i``.

    Fits ``terms_i ~ C i^{-a}`` on the last quarter of the window. For
    ``a > 1`` the remainder is bounded by the integral ``terms_I I/(a-1)``
    (exact for decreasing power laws); ``a <= 1`` signals divergence and
    returns ``inf``.
    """
    k = max(8, len(idx) // 4)
    ii, tt = idx[-k:], terms[-k:]
    keep = (ii >= 1) & (tt > 0)
    if keep.sum() < 2:
        return math.nan, math.nan
    slope = np.polyfit(np.log(ii[keep]), np.log(tt[keep]), 1)[0]
    decay = -float(slope)
    if decay <= 1.0 + 1e-6:
        return math.inf, decay
    return float(tt[-1] * ii[-1] / (decay - 1.0)), decay


def _tail_supremum(j0: int, s: int, q: float, outer: Handle, inner: Handle,
                   weight: Handle, tail_cap: int) -> TailBound:
    if q == math.inf:
        raise RegimeError("tail bounds need a finite q")
    if tail_cap < 8:
        raise SizeLimitError("tail_cap must be at least 8")
    last = j0 + tail_cap
    if s * last > 1000:
        raise SizeLimitError(f"2^(s*j) overflows for j = {last}; lower tail_cap")
    idx = np.arange(j0, last + 1)
    y = np.array([2.0 ** (s * int(i)) for i in idx])
    lam = np.array([weight(v) for v in y], dtype=float)
    terms = np.array([inner(v) for v in y], dtype=float) ** q * lam
    out = np.array([outer(v) for v in y], dtype=float)
    if not (np.all(np.isfinite(terms)) and np.all(np.isfinite(out))):
        raise RegimeError("weight handles returned non-finite values on the level grid")
    tails = np.cumsum(terms[::-1])[::-1]
    rem, decay = _tail_remainder(idx, terms)
    # A remainder far above the partial sum means the series diverges or at
    # least cannot be resolved at this truncation; both are flagged.
    if math.isinf(rem) or rem > DIVERGENCE_RATIO * tails[0]:
        return TailBound(math.inf, math.inf, math.inf, True, int(j0), int(last), decay)
    vals = out * (tails / lam) ** (1.0 / q)
    best = int(np.argmax(vals))
    if math.isnan(rem):
        upper = math.nan
    else:
        upper = float(np.max(out * ((tails + rem) / lam) ** (1.0 / q)))
    return TailBound(float(vals[best]), upper, rem, False, int(idx[best]), int(last), decay)


def example1_bound(j0: int, q, psi_u: Handle = _one, psi_w: Handle = _one,
                   lambda_star: Handle = _one, s: int = 1,
                   tail_cap: int = DEFAULT_TAIL_CAP) -> TailBound:
    """``sup_{j >= j0} psi_u(2^{sj}) (sum_{i >= j} psi_w^q(2^{si}) L(2^{si}) / L(2^{sj}))^{1/q}``.

    The series run over levels ``j0 .. j0 + tail_cap``; ``upper``
    includes a power-law remainder estimate. The result is flagged as
    divergent when the fitted decay exponent is at most 1 or the estimated
    remainder exceeds ``DIVERGENCE_RATIO`` times the partial sum.
    """
    qf = as_exponents((1, q)).q
    return _tail_supremum(int(j0), int(s), qf, psi_u, psi_w, lambda_star, int(tail_cap))


@dataclass(frozen=True)
class Example2Params:
    """Parameters of polynomial level weights ``u_j = j^{-alpha_u} rho_u(j)``."""

    gamma_star: float
    alpha_u: float
    alpha_w: float
    rho_u: Handle = _one
    rho_w: Handle = _one
    tau_star: Handle = _one
    k0: int = 0
    j0: int | None = None

    @property
    def start(self) -> int:
        return self.j0 if self.j0 is not None else 2 ** self.k0


def example2_bound(case: int, params: Example2Params, e,
                   tail_cap: int = DEFAULT_TAIL_CAP) -> TailBound:
    """Evaluate the two-sided bound for polynomial level weights.

    Case 1 (``-alpha_w + 1/q + gamma*/q < 0``): ``sup_{j >= j0}
    j^{-alpha + 1/q + 1/p'} rho(j)`` with ``alpha = alpha_u + alpha_w`` and
    ``rho = rho_u rho_w``. Case 2 (both exponent identities hold): the
    dyadic tail supremum in ``rho_u``, ``rho_w``, ``tau*`` starting at
    ``k0``.

    Raises
    ------
    RegimeError
        If the exponent conditions of the requested case fail.
    """
    e = as_exponents(e)
    inv_q = 0.0 if e.q == math.inf else 1.0 / e.q
    inv_pc = 0.0 if e.p_conj == math.inf else 1.0 / e.p_conj
    pr = params
    lead = -pr.alpha_w + inv_q + pr.gamma_star * inv_q
    if case == 1:
        if not lead < 0:
            raise RegimeError(f"case 1 needs -alpha_w + 1/q + gamma*/q < 0, got {lead:g}")
        a = -(pr.alpha_u + pr.alpha_w) + inv_q + inv_pc
        j0 = pr.start
        if j0 < 1:
            raise RegimeError("case 1 needs j0 >= 1")
        last = j0 + int(tail_cap)
        if a > 1e-12:
            return TailBound(math.inf, math.inf, math.nan, True, j0, last, -a)
        js = np.arange(j0, last + 1, dtype=float)
        vals = js ** a * np.array([pr.rho_u(j) * pr.rho_w(j) for j in js])
        best = int(np.argmax(vals))
        # A maximum on the truncation edge leaves the supremum unresolved.
        upper = float(vals[best]) if best < len(js) - 1 else math.inf
        return TailBound(float(vals[best]), upper, math.nan, False, int(js[best]), last, -a)
    if case == 2:
        second = -pr.alpha_u + inv_pc - pr.gamma_star * inv_q
        if abs(lead) > 1e-12 or abs(second) > 1e-12:
            raise RegimeError("case 2 needs -alpha_w + 1/q + gamma*/q = 0 and "
                              f"-alpha_u + 1/p' - gamma*/q = 0, got {lead:g} and {second:g}")
        return _tail_supremum(pr.k0, 1, e.q, pr.rho_u, pr.rho_w, pr.tau_star, int(tail_cap))
    raise RegimeError(f"unknown case {case!r}; expected 1 or 2")


@dataclass(frozen=True)
class SlowVariationReport:
    """Grid check of ``t^{-eps} <~ L(ty)/L(y) <~ t^{eps}`` for ``y, t >= 1``.

    ``upper_constant`` is the least ``C`` with ``L(ty)/L(y) <= C t^eps`` on
    the grid and ``lower_constant`` the least ``C`` with
    ``t^{-eps} <= C L(ty)/L(y)``. The check passes when both constants are
    finite and do not grow when the grid is extended from its lower half
    to the full range (and stay within ``bound`` when one is given).
    """

    eps: float
    upper_constant: float
    lower_constant: float
    upper_witness: tuple
    lower_witness: tuple
    half_grid_constants: tuple
    stable: bool
    passed: bool


def check_slowly_varying(fn: Handle, eps: float, exponents: Sequence[int] = tuple(range(21)),
                         rtol: float = 1e-2, bound: float | None = None) -> SlowVariationReport:
    """Evaluate the slow-variation inequality on the grid ``y, t in 2^exponents``."""
    ex = np.asarray(sorted(set(int(a) for a in exponents)))
    if eps <= 0:
        raise RegimeError("eps must be positive")
    if ex.size == 0 or ex[0] < 0:
        raise RegimeError("grid exponents must be non-negative (y, t >= 1)")

    def constants(grid):
        vals = np.array([fn(2.0 ** int(a)) for a in grid], dtype=float)
        prod = np.array([[fn(2.0 ** int(a + b)) for b in grid] for a in grid], dtype=float)
        ratio = prod / vals[:, None]
        teps = 2.0 ** (eps * grid.astype(float))[None, :]
        up = ratio / teps
        lo = 1.0 / (ratio * teps)
        iu = np.unravel_index(np.argmax(up), up.shape)
        il = np.unravel_index(np.argmax(lo), lo.shape)
        wit = lambda ij: (2.0 ** int(grid[ij[0]]), 2.0 ** int(grid[ij[1]]))  # noqa: E731
        return float(up[iu]), float(lo[il]), wit(iu), wit(il)

    cu, cl, wu, wl = constants(ex)
    hu, hl, _, _ = constants(ex[: max(1, (len(ex) + 1) // 2)])
    finite = math.isfinite(cu) and math.isfinite(cl)
    stable = finite and cu <= hu * (1 + rtol) and cl <= hl * (1 + rtol)
    passed = stable and (bound is None or (cu <= bound and cl <= bound))
    return SlowVariationReport(eps, cu, cl, wu, wl, (hu, hl), stable, passed)
