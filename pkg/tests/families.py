"""Seeded instance families shared by the acceptance tests and calibration.

Everything here is deterministic given the seed, so the brackets frozen in
``test_acceptance.py`` can be regenerated with ``python tests/calibrate.py``.
"""

from __future__ import annotations

import math

import numpy as np

from hardytree.hardy1d import Sequences
from hardytree.tree_core import WeightedTree, full_tree, random_weighted_tree

INF = math.inf
GRID = (1.0, 1.5, 2.0, 3.0, INF)
TREE_SEED = 20240611
HARDY_SEED = 7
HARDY_P = (1.5, 2.0, 3.0, INF)
HARDY_Q = (1.0, 1.5, 2.0, 3.0)


def random_tree_family(count: int = 200, max_n: int = 12, seed: int = TREE_SEED):
    """Random recursive trees with 1..max_n vertices and weights in [2^-4, 2^4]."""
    rng = np.random.default_rng(seed)
    return [random_weighted_tree(rng, int(rng.integers(1, max_n + 1)), log2_range=4.0)
            for _ in range(count)]


def pq_pairs(grid=GRID, regime: str | None = None):
    pairs = [(p, q) for p in grid for q in grid]
    if regime == "p<=q":
        pairs = [(p, q) for p, q in pairs if p <= q]
    return pairs


def hardy_pairs():
    """(p, q) pairs covered by one of the two regimes of the 1D constant."""
    out = []
    for p in HARDY_P:
        for q in HARDY_Q:
            if q < p or (1 < p <= q < INF):
                out.append((p, q))
    return out


def hardy_members(count: int = 8, seed: int = HARDY_SEED):
    """Weight laws: half geometric ``(a^n, b^n)``, half polynomial ``((n+1)^a, (n+1)^b)``."""
    rng = np.random.default_rng(seed)
    members = []
    for k in range(count):
        if k % 2 == 0:
            a = 2.0 ** rng.uniform(-0.5, 0.5)
            b = 2.0 ** rng.uniform(-1.5, -0.6) / a
            members.append(("geometric", a, b))
        else:
            a = rng.uniform(-1.0, 0.5)
            b = rng.uniform(-2.5, -1.2) - a
            members.append(("polynomial", a, b))
    return members


def hardy_sequences(member, length: int) -> Sequences:
    kind, a, b = member
    n = np.arange(length, dtype=float)
    if kind == "geometric":
        return Sequences(a ** n, b ** n)
    return Sequences((n + 1) ** a, (n + 1) ** b)


def decay_tree(depth: int) -> WeightedTree:
    """Full binary tree with ``u = 1`` and ``w = 4^{-depth}``."""
    t = full_tree(2, depth)
    w = 4.0 ** -np.array(t.depth, dtype=float)
    return WeightedTree(t, np.ones(t.n), w)


DECAY_PAIRS = ((1.0, 2.0), (1.5, 2.0), (1.0, 3.0), (1.5, 3.0), (2.0, 3.0))
DECAY_DEPTHS = tuple(range(4, 11))
