"""Numerical ground truth for the l_p -> l_q norm of the summation operator.

The operator is ``(Sf)(xi) = w(xi) * sum_{xi' <= xi} u(xi') f(xi')``. Its
kernel is entrywise non-negative, so ``|Sf| <= S|f|`` pointwise and the norm
is attained on the non-negative part of the unit sphere. Every routine here
works on non-negative vectors only.

Exact cases (non-negative kernel ``A``):

* ``p = 1``: largest column l_q norm.
* ``q = inf``: largest row l_{p'} norm.
* ``p = inf``: ``||A 1||_q``.
* ``q = 1``: ``||A^T 1||_{p'}``.
* ``p = q = 2``: largest singular value.

Everything else uses a multi-start nonlinear power iteration
``x <- (A^T (Ax)^{q-1})^{p'-1}``, normalised in l_p. Its value is always a
certified lower bound (a feasible point). For ``p >= q`` the objective is
concave in ``phi = x^p`` on the simplex, so positive fixed points are global
maximisers; for ``p < q`` the iteration contracts on positive vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, SizeLimitError
from .exponents import Exponents, as_exponents
from .tree_core import WeightedTree, lp_norm

DEFAULT_MAX_VERTICES = 4096
DEFAULT_STARTS = 32
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
_SPARSE_THRESHOLD = 256

METHODS = ("closed-form-col", "closed-form-row", "closed-form-ones",
           "closed-form-colsum", "spectral", "multistart-ascent")


@dataclass(frozen=True)
class KernelMatrix:
    """Dense kernel ``entries[i, j] = w(order[i]) u(order[j])`` if ``order[j] <= order[i]``."""

    entries: np.ndarray
    order: tuple

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass
class NormEstimate:
    value: float
    witness: np.ndarray
    method: str
    converged: bool = True
    starts: int = 0
    seed: int | None = None
    iterations: int = 0
    order: tuple | None = field(default=None, repr=False)

    def witness_by_vertex(self) -> dict[int, float]:
        order = self.order if self.order is not None else range(len(self.witness))
        return {int(v): float(x) for v, x in zip(order, self.witness)}


def assemble_matrix(wt: WeightedTree, max_vertices: int = DEFAULT_MAX_VERTICES) -> KernelMatrix:
    """Dense kernel of ``S`` with rows and columns in ``(depth, id)`` order."""
    t = wt.tree
    if t.n > max_vertices:
        raise SizeLimitError(f"{t.n} vertices exceed the matrix cap {max_vertices}")
    order = t.order
    pos = {v: i for i, v in enumerate(order)}
    anc = np.zeros((t.n, t.n))
    for v in order:
        i = pos[v]
        pv = t.parent[v]
        if pv >= 0:
            anc[i] = anc[pos[pv]]
        anc[i, i] = 1.0
    u = wt.u[list(order)]
    w = wt.w[list(order)]
    entries = w[:, None] * anc * u[None, :]
    entries.setflags(write=False)
    return KernelMatrix(entries, tuple(order))


def apply_operator(wt: WeightedTree, f) -> np.ndarray:
    """``(Sf)(xi)`` for every vertex, indexed by vertex id; O(n)."""
    t = wt.tree
    if isinstance(f, dict):
        f = np.array([f[v] for v in range(t.n)], dtype=float)
    else:
        f = np.asarray(f, dtype=float)
    acc = np.empty(t.n)
    for v in t.order:
        pv = t.parent[v]
        acc[v] = wt.u[v] * f[v] + (acc[pv] if pv >= 0 else 0.0)
    return wt.w * acc


def _as_operator(m):
    if isinstance(m, KernelMatrix):
        return np.asarray(m.entries), m.order
    if sp.issparse(m):
        return m.tocsr(), None
    return np.asarray(m, dtype=float), None


def _normalise(x: np.ndarray, p: float) -> np.ndarray:
    nrm = lp_norm(x, p, axis=0)
    nrm = np.where(nrm > 0, nrm, 1.0)
    return x / nrm


def _estimate(A, x: np.ndarray, p: float, q: float, method: str, **kw) -> NormEstimate:
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    x = x / lp_norm(x, p)
    value = lp_norm(np.asarray(A @ x).ravel(), q)
    return NormEstimate(float(value), x, method, **kw)


def operator_norm(m, e, seed: int = 0, tol: float = DEFAULT_TOL, starts: int = DEFAULT_STARTS,
                  method: str | None = None, max_iter: int = DEFAULT_MAX_ITER) -> NormEstimate:
    """l_p -> l_q norm of a non-negative matrix.

    Parameters
    ----------
    m : KernelMatrix, ndarray or scipy sparse matrix
        Non-negative matrix (need not be square or triangular).
    e : Exponents or (p, q)
    seed : int
        Seed for the random starts of the ascent.
    tol : float
        Relative Cauchy tolerance on successive objective values.
    starts : int
        Number of ascent starts (start 0 is the all-ones vector).
    method : str, optional
        Force ``"multistart-ascent"`` or ``"spectral"`` instead of the
        default dispatch.
    """
    e = as_exponents(e)
    A, order = _as_operator(m)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return NormEstimate(0.0, np.zeros(A.shape[1]), "closed-form-col", order=order)
    p, q = e.p, e.q
    if method is None:
        if p == 1:
            method = "closed-form-col"
        elif q == math.inf:
            method = "closed-form-row"
        elif p == math.inf:
            method = "closed-form-ones"
        elif q == 1:
            method = "closed-form-colsum"
        elif p == 2 and q == 2:
            method = "spectral"
        else:
            method = "multistart-ascent"
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")

    if method == "closed-form-col":
        dense = A.toarray() if sp.issparse(A) else A
        cols = lp_norm(dense, q, axis=0)
        j = int(np.argmax(cols))
        x = np.zeros(A.shape[1])
        x[j] = 1.0
        return _estimate(A, x, p, q, method, order=order)
    if method == "closed-form-row":
        dense = A.toarray() if sp.issparse(A) else A
        pc = e.p_conj
        rows = lp_norm(dense, pc, axis=1)
        i = int(np.argmax(rows))
        a = dense[i]
        if p == math.inf:
            x = np.ones(A.shape[1])
        elif rows[i] == 0:
            x = np.ones(A.shape[1])
        else:
            x = (a / rows[i]) ** (pc - 1.0)
        return _estimate(A, x, p, q, method, order=order)
    if method == "closed-form-ones":
        return _estimate(A, np.ones(A.shape[1]), p, q, method, order=order)
    if method == "closed-form-colsum":
        c = np.asarray(A.T @ np.ones(A.shape[0])).ravel()
        x = (c / c.max()) ** (e.p_conj - 1.0)
        return _estimate(A, x, p, q, method, order=order)
    if method == "spectral":
        return _spectral(A, order)
    return _ascent(A, e, seed, tol, starts, max_iter, order)


def _spectral(A, order) -> NormEstimate:
    n = A.shape[1]
    if sp.issparse(A) or n > 512:
        As = sp.csr_matrix(A)
        if n <= 2:
            G = (As.T @ As).toarray()
            vals, vecs = np.linalg.eigh(G)
            x = vecs[:, -1]
        else:
            G = spla.LinearOperator((n, n), matvec=lambda v: As.T @ (As @ v), dtype=float)
            vals, vecs = spla.eigsh(G, k=1, which="LA", tol=1e-14)
            x = vecs[:, 0]
    else:
        vals, vecs = np.linalg.eigh(A.T @ A)
        x = vecs[:, -1]
    return _estimate(A, np.abs(x), 2.0, 2.0, "spectral", order=order)


def _one_hot(Y: np.ndarray) -> np.ndarray:
    out = np.zeros(Y.shape)
    out[np.argmax(Y, axis=0), np.arange(Y.shape[1])] = 1.0
    return out


def _ascent(A, e: Exponents, seed: int, tol: float, starts: int, max_iter: int,
            order) -> NormEstimate:
    p, q = e.p, e.q
    pc = e.p_conj
    n = A.shape[1]
    if not sp.issparse(A) and n > _SPARSE_THRESHOLD and np.count_nonzero(A) < 0.25 * A.size:
        A = sp.csr_matrix(A)
    AT = A.T.tocsr() if sp.issparse(A) else A.T
    starts = max(int(starts), 1)
    rng = np.random.default_rng(seed)
    X = np.empty((n, starts))
    X[:, 0] = 1.0
    if starts > 1:
        X[:, 1:] = rng.uniform(0.05, 1.0, size=(n, starts - 1)) ** 4
    if p == 1.0 and starts > 1:
        # Maximisers over the l_1 sphere sit at its vertices; spend the
        # remaining starts on coordinate vectors before random points.
        k = min(n, starts - 1)
        X[:, 1:k + 1] = np.eye(n, k)
    X = _normalise(X, p)

    values = np.zeros(starts)
    done = np.zeros(starts, dtype=bool)
    active = np.arange(starts)
    iterations = 0
    for it in range(max_iter):
        iterations = it + 1
        Xa = X[:, active]
        Y = np.asarray(A @ Xa)
        vals = lp_norm(Y, q, axis=0)
        safe = np.where(vals > 0, vals, 1.0)
        if q == math.inf:
            # Subgradient of the max norm: the largest row of each column.
            G = _one_hot(Y)
        else:
            G = (Y / safe) ** (q - 1.0)
        Z = np.asarray(AT @ G)
        Zmax = Z.max(axis=0)
        Z = Z / np.where(Zmax > 0, Zmax, 1.0)
        if pc == math.inf:
            # p = 1: the l_1 sphere is maximised at a vertex of the simplex.
            Xn = _one_hot(Z)
        else:
            Xn = _normalise(Z ** (pc - 1.0), p)
        prev = values[active]
        values[active] = vals
        settled = np.abs(vals - prev) <= tol * np.maximum(vals, 1e-300)
        X[:, active] = Xn
        if it > 0 and settled.any():
            done[active[settled]] = True
            active = active[~settled]
        if active.size == 0:
            break

    # Re-evaluate every start at its final iterate; the ascent value is monotone
    # so the last iterate is the best point seen along each trajectory.
    final = lp_norm(np.asarray(A @ X), q, axis=0)
    best = int(np.argmax(final))
    return _estimate(A, X[:, best], p, q, "multistart-ascent", converged=bool(done.all()),
                     starts=starts, seed=seed, iterations=iterations, order=order)


def tree_norm(wt: WeightedTree, e, seed: int = 0, tol: float = DEFAULT_TOL,
              starts: int = DEFAULT_STARTS, max_vertices: int = DEFAULT_MAX_VERTICES,
              method: str | None = None) -> NormEstimate:
    """Norm of ``S_{u,w}`` on a weighted tree."""
    return operator_norm(assemble_matrix(wt, max_vertices), e, seed=seed, tol=tol,
                         starts=starts, method=method)


@dataclass
class ForestNorm:
    value: float
    components: list
    combine: str


def combine_block_norms(values: Sequence[float], e) -> float:
    """Norm of a direct sum of operators from the norms of its blocks.

    For ``p <= q`` this is the largest block norm. For ``p > q`` the blocks
    combine in l_r with ``1/r = 1/q - 1/p``.
    """
    e = as_exponents(e)
    vals = np.asarray(values, dtype=float)
    if vals.size == 0:
        return 0.0
    if e.regime != "p>q":
        return float(vals.max())
    return float(lp_norm(vals, e.mixing_exponent()))


def forest_norm(components: Sequence[WeightedTree], e, seed: int = 0, tol: float = DEFAULT_TOL,
                starts: int = DEFAULT_STARTS) -> ForestNorm:
    """Norm of the summation operator on a disjoint union of weighted trees."""
    e = as_exponents(e)
    ests = [tree_norm(c, e, seed=seed, tol=tol, starts=starts) for c in components]
    combine = "max" if e.regime != "p>q" else f"l_{e.mixing_exponent():g}"
    return ForestNorm(combine_block_norms([x.value for x in ests], e), ests, combine)


def block_diagonal(components: Sequence[WeightedTree]) -> np.ndarray:
    """Dense kernel of the summation operator on a forest (block diagonal)."""
    blocks = [assemble_matrix(c).entries for c in components]
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def require_converged(est: NormEstimate) -> NormEstimate:
    """Raise :class:`ConvergenceError` unless every ascent start converged."""
    if not est.converged:
        raise ConvergenceError(
            f"ascent did not converge within its iteration budget ({est.iterations} iterations)")
    return est
