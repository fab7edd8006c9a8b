"""Rooted trees, weighted trees and the cut family on a subtree.

Vertices are dense integer ids ``0..n-1``. Trees are immutable once built;
children lists are stored in increasing id order so every enumeration in
this package is deterministic.

Cuts
----
For a base vertex ``xi*`` a cut is a pair ``(D, Gamma)`` where ``D`` is a
subtree of ``A_{xi*}`` with minimum ``xi*`` in which every non-maximal
vertex keeps *all* of its children, and ``Gamma`` is a non-empty set of
maximal vertices of ``D`` that contains every maximal vertex of ``D`` that
is not a leaf of the whole tree.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CutError, SizeLimitError, TreeError

DEFAULT_CUT_CAP = 2 ** 18


class RootedTree:
    """Immutable rooted tree on vertices ``0..n-1``.

    Attributes
    ----------
    n : int
        Number of vertices.
    root : int
        Root vertex id.
    parent : tuple[int, ...]
        ``parent[v]``; ``-1`` for the root.
    children : tuple[tuple[int, ...], ...]
        Children of each vertex, sorted by id.
    depth : tuple[int, ...]
        Distance from the root.
    order : tuple[int, ...]
        Vertices sorted by ``(depth, id)``; parents always precede children.
    """

    __slots__ = ("n", "root", "parent", "children", "depth", "order", "_sub")

    def __init__(self, parent: Sequence[int], root: int):
        n = len(parent)
        if n == 0:
            raise TreeError("a tree needs at least one vertex")
        if not 0 <= root < n:
            raise TreeError(f"root {root} is not a vertex")
        if parent[root] != -1:
            raise TreeError(f"root {root} must not have a parent")
        children: list[list[int]] = [[] for _ in range(n)]
        for v, pv in enumerate(parent):
            if v == root:
                continue
            if not 0 <= pv < n:
                raise TreeError(f"vertex {v} has no valid parent (got {pv})")
            if pv == v:
                raise TreeError(f"cycle detected: vertex {v} is its own parent")
            children[pv].append(v)
        depth = [-1] * n
        depth[root] = 0
        queue = deque([root])
        order = []
        while queue:
            v = queue.popleft()
            order.append(v)
            for c in children[v]:
                depth[c] = depth[v] + 1
                queue.append(c)
        if len(order) != n:
            missing = [v for v in range(n) if depth[v] < 0]
            raise TreeError(f"cycle detected or vertices disconnected from root: {missing}")
        order.sort(key=lambda v: (depth[v], v))
        self.n = n
        self.root = root
        self.parent = tuple(int(x) for x in parent)
        self.children = tuple(tuple(sorted(c)) for c in children)
        self.depth = tuple(depth)
        self.order = tuple(order)
        self._sub: dict[int, frozenset[int]] = {}

    def __repr__(self) -> str:
        return f"RootedTree(n={self.n}, root={self.root}, height={self.height})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self.root == other.root and self.parent == other.parent

    def __hash__(self) -> int:
        return hash((self.root, self.parent))

    @property
    def height(self) -> int:
        return max(self.depth)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in enumerate(self.parent) if p >= 0]

    def check_vertex(self, xi: int) -> None:
        if not (isinstance(xi, (int, np.integer)) and 0 <= xi < self.n):
            raise TreeError(f"unknown vertex {xi!r}")

    def is_leaf(self, xi: int) -> bool:
        return not self.children[xi]

    @property
    def leaves(self) -> frozenset[int]:
        return frozenset(v for v in range(self.n) if not self.children[v])

    def leq(self, a: int, b: int) -> bool:
        """``a <= b`` in the tree order (``a`` is an ancestor-or-self of ``b``)."""
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
        return a == b

    def level_set(self, xi: int, j: int) -> frozenset[int]:
        self.check_vertex(xi)
        if j < 0:
            raise TreeError("level index must be non-negative")
        layer = [xi]
        for _ in range(j):
            layer = [c for v in layer for c in self.children[v]]
            if not layer:
                break
        return frozenset(layer)

    def subtree(self, xi: int) -> frozenset[int]:
        self.check_vertex(xi)
        cached = self._sub.get(xi)
        if cached is None:
            out, stack = [], [xi]
            while stack:
                v = stack.pop()
                out.append(v)
                stack.extend(self.children[v])
            cached = self._sub[xi] = frozenset(out)
        return cached

    def path_segment(self, xi_star: int, xi: int) -> list[int]:
        self.check_vertex(xi_star)
        self.check_vertex(xi)
        path = [xi]
        while path[-1] != xi_star:
            pv = self.parent[path[-1]]
            if pv < 0 or self.depth[pv] < self.depth[xi_star]:
                raise TreeError(f"{xi_star} is not an ancestor of {xi}")
            path.append(pv)
        return path[::-1]


def build_tree(edges: Iterable[tuple[int, int]], root: int, n: int | None = None) -> RootedTree:
    """Build a :class:`RootedTree` from ``(parent, child)`` edges.

    ``n`` defaults to one more than the largest id mentioned (at least
    ``root + 1``). Raises :class:`TreeError` on cycles, duplicate parents or
    vertices not reachable from ``root``.
    """
    edges = [(int(a), int(b)) for a, b in edges]
    if n is None:
        n = 1 + max([root] + [max(e) for e in edges])
    parent = [-1] * n
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n):
            raise TreeError(f"edge {(a, b)} references a vertex outside 0..{n - 1}")
        if a == b:
            raise TreeError(f"cycle detected: self-loop at {a}")
        if b == root:
            raise TreeError(f"cycle detected: edge {(a, b)} points into the root")
        if parent[b] != -1:
            raise TreeError(f"duplicate parent for vertex {b}")
        parent[b] = a
    for v in range(n):
        if v != root and parent[v] == -1:
            raise TreeError(f"disconnected vertex {v}")
    return RootedTree(parent, root)


def tree_from_parents(parent: Sequence[int]) -> RootedTree:
    roots = [v for v, p in enumerate(parent) if p < 0]
    if len(roots) != 1:
        raise TreeError(f"expected exactly one root, found {len(roots)}")
    return RootedTree([p if p >= 0 else -1 for p in parent], roots[0])


def level_set(tree: RootedTree, xi: int, j: int) -> frozenset[int]:
    """Descendants of ``xi`` at distance exactly ``j``."""
    return tree.level_set(xi, j)


def subtree(tree: RootedTree, xi: int) -> frozenset[int]:
    """Vertex set of ``A_xi`` (``xi`` and all its descendants)."""
    return tree.subtree(xi)


def path_segment(tree: RootedTree, xi_star: int, xi: int) -> list[int]:
    """Vertices from ``xi_star`` up to ``xi`` inclusive, root-side first."""
    return tree.path_segment(xi_star, xi)


def weighted_norm(f: Mapping[int, float] | Sequence[float] | np.ndarray,
                  support: Iterable[int], r: float) -> float:
    """l_r norm of ``f`` restricted to ``support`` (0 for empty support)."""
    if r < 1:
        raise ValueError(f"norm exponent must be >= 1, got {r}")
    vals = np.abs(np.array([f[v] for v in support], dtype=float))
    if vals.size == 0:
        return 0.0
    return lp_norm(vals, r)


def lp_norm(x: np.ndarray, r: float, axis=None) -> np.ndarray | float:
    """Overflow-safe l_r norm of non-negative data along ``axis``."""
    x = np.abs(np.asarray(x, dtype=float))
    if r == math.inf:
        out = x.max(axis=axis, initial=0.0)
        return float(out) if axis is None else out
    if r == 1:
        out = x.sum(axis=axis)
        return float(out) if axis is None else out
    scale = x.max(axis=axis, keepdims=True, initial=0.0)
    safe = np.where(scale > 0, scale, 1.0)
    out = safe * ((x / safe) ** r).sum(axis=axis, keepdims=True) ** (1.0 / r)
    out = np.where(scale > 0, out, 0.0)
    if axis is None:
        return float(out.reshape(()))
    return np.squeeze(out, axis=axis)


class WeightedTree:
    """A :class:`RootedTree` with positive vertex weights ``u`` and ``w``.

    ``origin`` optionally maps each vertex to the vertex of a source tree it
    was derived from (set by reductions and restrictions).
    """

    __slots__ = ("tree", "u", "w", "origin")

    def __init__(self, tree: RootedTree, u, w, origin: Sequence[int] | None = None):
        u = np.array(u, dtype=float).reshape(-1)
        w = np.array(w, dtype=float).reshape(-1)
        if u.shape != (tree.n,) or w.shape != (tree.n,):
            raise TreeError(f"weights must have length {tree.n}")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(w))):
            raise TreeError("weights must be finite")
        if np.any(u <= 0) or np.any(w <= 0):
            raise TreeError("weights u and w must be strictly positive")
        u.setflags(write=False)
        w.setflags(write=False)
        self.tree = tree
        self.u = u
        self.w = w
        self.origin = None if origin is None else tuple(int(x) for x in origin)

    @property
    def n(self) -> int:
        return self.tree.n

    def __repr__(self) -> str:
        return f"WeightedTree(n={self.n}, root={self.tree.root})"

    def scaled(self, cu: float = 1.0, cw: float = 1.0) -> "WeightedTree":
        return WeightedTree(self.tree, self.u * cu, self.w * cw, self.origin)

    def subtree_norms(self, q: float) -> np.ndarray:
        """``||w||_{l_q(A_xi)}`` for every vertex, by one leaf-to-root sweep."""
        t = self.tree
        out = np.zeros(t.n)
        if q == math.inf:
            for v in reversed(t.order):
                out[v] = max([self.w[v]] + [out[c] for c in t.children[v]])
            return out
        # Accumulate scaled power sums to avoid overflow for large q.
        scale = self.w.max()
        acc = (self.w / scale) ** q
        for v in reversed(t.order):
            pv = t.parent[v]
            if pv >= 0:
                acc[pv] += acc[v]
        return scale * acc ** (1.0 / q)


def induced_subtree(wt: WeightedTree, xi: int) -> WeightedTree:
    """Restriction of ``wt`` to ``A_xi``, relabelled in ``(depth, id)`` order."""
    t = wt.tree
    verts = sorted(t.subtree(xi), key=lambda v: (t.depth[v], v))
    index = {v: i for i, v in enumerate(verts)}
    parent = [-1] * len(verts)
    for v in verts[1:]:
        parent[index[v]] = index[t.parent[v]]
    sub = RootedTree(parent, 0)
    origin = [wt.origin[v] if wt.origin else v for v in verts]
    return WeightedTree(sub, wt.u[verts], wt.w[verts], origin)


def canonical_form(tree: RootedTree, *labels: Sequence) -> str:
    """Label-independent encoding of a rooted tree (AHU), optionally decorated.

    Each entry of ``labels`` is a per-vertex sequence (e.g. rounded weights)
    folded into the encoding; two trees have equal forms iff they are
    isomorphic as rooted, decorated trees.
    """
    code: dict[int, str] = {}
    for v in reversed(tree.order):
        tag = ",".join(repr(lab[v]) for lab in labels)
        kids = sorted(code[c] for c in tree.children[v])
        code[v] = "(" + tag + "".join(kids) + ")"
    return code[tree.root]


@dataclass(frozen=True)
class Cut:
    """A pair ``(D, Gamma)`` based at ``base``."""

    d_vertices: frozenset
    gamma: frozenset
    base: int

    def sort_key(self) -> tuple:
        return (sorted(self.d_vertices), sorted(self.gamma))

    def maximal(self, tree: RootedTree) -> frozenset[int]:
        """Maximal vertices of ``D``."""
        d = self.d_vertices
        return frozenset(v for v in d if not any(c in d for c in tree.children[v]))


def cut_violations(tree: RootedTree, cut: Cut) -> list[str]:
    """List every violated cut invariant (empty list for a valid cut)."""
    d, gamma, base = cut.d_vertices, cut.gamma, cut.base
    problems = []
    if not (0 <= base < tree.n):
        return [f"base {base} is not a vertex"]
    if base not in d:
        problems.append("base not in D")
    if not d <= tree.subtree(base):
        problems.append("D leaves the subtree of the base")
    for v in d:
        if v != base and tree.parent[v] not in d:
            problems.append(f"D is not connected at {v}")
            break
    for v in d:
        kids = tree.children[v]
        inside = [c for c in kids if c in d]
        if inside and len(inside) != len(kids):
            problems.append(f"non-maximal vertex {v} lacks some children")
    vmax = cut.maximal(tree)
    if not gamma <= vmax:
        problems.append("Gamma contains non-maximal vertices of D")
    forced = {v for v in vmax if tree.children[v]}
    if not forced <= gamma:
        problems.append("Gamma misses a maximal vertex of D that is not a leaf")
    if not gamma:
        problems.append("Gamma is empty")
    return problems


def validate_cut(tree: RootedTree, cut: Cut) -> None:
    problems = cut_violations(tree, cut)
    if problems:
        raise CutError("invalid cut: " + "; ".join(problems))


def _cut_options(tree: RootedTree, v: int) -> list[tuple[frozenset, frozenset]]:
    """All (D, Gamma) pairs based at ``v``, allowing Gamma to be empty."""
    kids = tree.children[v]
    if not kids:
        single = frozenset([v])
        return [(single, frozenset()), (single, single)]
    single = frozenset([v])
    out = [(single, single)]
    per_child = [_cut_options(tree, c) for c in kids]
    for combo in itertools.product(*per_child):
        d = single.union(*(c[0] for c in combo))
        g = frozenset().union(*(c[1] for c in combo))
        out.append((d, g))
    return out


def enumerate_cuts(tree: RootedTree, xi_star: int, max_candidates: int = DEFAULT_CUT_CAP) -> list[Cut]:
    """Every cut ``(D, Gamma)`` based at ``xi_star``, each exactly once.

    Sorted lexicographically by ``(sorted(D), sorted(Gamma))``. The family
    grows exponentially, so instances whose subtree admits more than
    ``max_candidates`` vertex subsets are refused with
    :class:`SizeLimitError`.
    """
    tree.check_vertex(xi_star)
    size = len(tree.subtree(xi_star))
    if 2.0 ** size > max_candidates:
        raise SizeLimitError(
            f"subtree of {xi_star} has {size} vertices; 2^{size} exceeds the cap {max_candidates}")
    cuts = [Cut(d, g, xi_star) for d, g in _cut_options(tree, xi_star) if g]
    cuts.sort(key=Cut.sort_key)
    return cuts


def count_cuts(tree: RootedTree, xi_star: int) -> int:
    """Size of the cut family at ``xi_star`` without materialising it."""
    def options(v: int) -> tuple[int, int]:
        # (number of pairs with empty Gamma, number with non-empty Gamma)
        kids = tree.children[v]
        if not kids:
            return 1, 1
        total, empty = 1, 1
        for c in kids:
            e, ne = options(c)
            total *= e + ne
            empty *= e
        return empty, total - empty + 1
    return options(xi_star)[1]


def random_tree(rng: np.random.Generator, n: int, shuffle: bool = True) -> RootedTree:
    """Random recursive tree on ``n`` vertices (each vertex picks an earlier parent)."""
    parent = [-1] + [int(rng.integers(0, i)) for i in range(1, n)]
    if not shuffle:
        return RootedTree(parent, 0)
    perm = rng.permutation(n)
    new_parent = [-1] * n
    for v in range(1, n):
        new_parent[perm[v]] = int(perm[parent[v]])
    return RootedTree(new_parent, int(perm[0]))


def random_weighted_tree(rng: np.random.Generator, n: int, log2_range: float = 4.0,
                         shuffle: bool = True) -> WeightedTree:
    """Random tree with log-uniform weights in ``[2^-r, 2^r]``."""
    t = random_tree(rng, n, shuffle=shuffle)
    u = 2.0 ** rng.uniform(-log2_range, log2_range, n)
    w = 2.0 ** rng.uniform(-log2_range, log2_range, n)
    return WeightedTree(t, u, w)


def chain(n: int) -> RootedTree:
    """The path ``0 < 1 < ... < n-1``."""
    return RootedTree([-1] + list(range(n - 1)), 0)


def star(k: int) -> RootedTree:
    """Root ``0`` with leaves ``1..k``."""
    return RootedTree([-1] + [0] * k, 0)


def full_tree(branching: int, height: int) -> RootedTree:
    """Complete ``branching``-ary tree of the given height, ids in BFS order."""
    parent = [-1]
    frontier = [0]
    for _ in range(height):
        nxt = []
        for v in frontier:
            for _ in range(branching):
                parent.append(v)
                nxt.append(len(parent) - 1)
        frontier = nxt
    return RootedTree(parent, 0)
