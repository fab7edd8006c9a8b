"""Two-sided quantities for the summation operator on a finite tree.

``beta(D, Gamma)`` is the least l_p norm of a non-negative function whose
u-weighted sums along the path from the base to each vertex of ``Gamma``
all equal one. It is computed two ways: by the l_{p'}/l_p recursion over
the children of the base (:func:`beta_recursive`) and by solving the convex
program directly (:func:`beta_oracle`).

For ``p <= q`` the norm is equivalent, up to constants depending on
``(p, q)``, to the supremum over cuts of
``||w||_{l_q(union of A_gamma)} / beta(D, Gamma)`` (:func:`cut_supremum`).
Every single cut ratio is also a lower bound with constant one.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog

from .errors import ConvergenceError, RegimeError, SizeLimitError
from .exponents import as_exponents, conjugate, parse_exponent
from .oracle import tree_norm
from .tree_core import (DEFAULT_CUT_CAP, Cut, WeightedTree, enumerate_cuts, lp_norm,
                        validate_cut)


class Bound(NamedTuple):
    """A supremum together with the object that attains it."""

    value: float
    witness: object


@dataclass(frozen=True)
class Hypothesis1Report:
    """Smallest constants for the branching/decay hypotheses at step ``l0``."""

    K: float
    lam: float
    l0: int
    satisfied: bool
    max_branching: int
    max_u_ratio: float


@dataclass
class Quantity:
    value: float
    method: str
    witness: object = None


@dataclass
class BoundReport:
    quantities: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> float:
        return self.quantities[name].value

    def add(self, name: str, value: float, method: str, witness=None) -> None:
        self.quantities[name] = Quantity(float(value), method, witness)


def _p_of(p) -> float:
    return float(parse_exponent(p))


# ---------------------------------------------------------------- beta --


def beta_recursive(wt: WeightedTree, p, cut: Cut) -> float:
    """``beta(D, Gamma)`` by the recursion over children of the base.

    ``1/beta = || (u(base), 1/||(beta_j)_j||_{l_p}) ||_{l_{p'}}`` where
    ``beta_j`` is the value of the restricted cut at child ``j`` (zero when
    that child's part of ``Gamma`` is empty). A single-vertex ``D`` gives
    ``1/u(base)``.
    """
    t = wt.tree
    validate_cut(t, cut)
    pf = _p_of(p)
    pc = conjugate(p)
    d, gamma = cut.d_vertices, cut.gamma

    def rec(v: int) -> float:
        kids = [c for c in t.children[v] if c in d]
        if not kids:
            return 1.0 / wt.u[v] if v in gamma else 0.0
        bn = lp_norm(np.array([rec(c) for c in kids]), pf)
        if bn == 0.0:
            return 0.0
        return 1.0 / lp_norm(np.array([wt.u[v], 1.0 / bn]), pc)

    return rec(cut.base)


def _constraint_system(wt: WeightedTree, cut: Cut) -> tuple[np.ndarray, list[int]]:
    t = wt.tree
    gamma = sorted(cut.gamma)
    paths = [t.path_segment(cut.base, g) for g in gamma]
    support = sorted({v for path in paths for v in path})
    col = {v: i for i, v in enumerate(support)}
    M = np.zeros((len(gamma), len(support)))
    for r, path in enumerate(paths):
        for v in path:
            M[r, col[v]] = wt.u[v]
    return M, support


def beta_oracle(wt: WeightedTree, p, cut: Cut, tol: float = 1e-9,
                max_iter: int = 100_000) -> float:
    """``beta(D, Gamma)`` by direct convex minimisation.

    Minimises ``||phi||_p`` subject to ``M phi = 1, phi >= 0`` where row
    ``gamma`` of ``M`` holds ``u`` on the path from the base to ``gamma``.
    For ``1 < p < inf`` the smooth concave dual
    ``g(lam) = sum(lam) - sum((M^T lam)_+^{p'}) / p'`` is maximised by damped
    Newton steps and ``phi = (M^T lam)_+^{1/(p-1)}`` is recovered; ``p = 1``
    and ``p = inf`` are linear programs.
    """
    validate_cut(wt.tree, cut)
    pf = _p_of(p)
    M, _ = _constraint_system(wt, cut)
    k, m = M.shape
    if pf == 1.0:
        res = linprog(np.ones(m), A_eq=M, b_eq=np.ones(k), bounds=(0, None), method="highs")
        if not res.success:
            raise ConvergenceError(f"linear program failed: {res.message}")
        return float(res.fun)
    if pf == math.inf:
        # variables (phi, t): minimise t with phi <= t
        c = np.zeros(m + 1)
        c[-1] = 1.0
        A_ub = np.hstack([np.eye(m), -np.ones((m, 1))])
        A_eq = np.hstack([M, np.zeros((k, 1))])
        res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=np.ones(k),
                      bounds=(0, None), method="highs")
        if not res.success:
            raise ConvergenceError(f"linear program failed: {res.message}")
        return float(res.fun)
    return _beta_dual_newton(M, pf, tol, max_iter)


def _beta_dual_newton(M: np.ndarray, p: float, tol: float, max_iter: int) -> float:
    pc = p / (p - 1.0)
    k = M.shape[0]
    ones = np.ones(k)

    def primal(lam):
        z = M.T @ lam
        zp = np.maximum(z, 0.0)
        return z, zp, zp ** (1.0 / (p - 1.0))

    def dual_value(lam):
        zp = np.maximum(M.T @ lam, 0.0)
        return lam.sum() - (zp ** pc).sum() / pc

    # Scale the start so the path sums are of order one.
    lam = ones.copy()
    _, _, phi = primal(lam)
    lam *= (1.0 / max((M @ phi).max(), 1e-300)) ** (p - 1.0)
    for _ in range(max_iter):
        z, zp, phi = primal(lam)
        resid = ones - M @ phi
        if np.abs(resid).max() <= tol:
            return float(lp_norm(phi, p))
        dphi = zp ** ((2.0 - p) / (p - 1.0)) / (p - 1.0)
        H = (M * dphi) @ M.T
        H += 1e-14 * max(np.trace(H), 1e-300) * np.eye(k)
        try:
            step = np.linalg.solve(H, resid)
        except np.linalg.LinAlgError:
            step = resid
        g0 = dual_value(lam)
        slope = resid @ step
        # Every path vertex is strictly positive at the optimum, so iterates
        # stay inside z > 0 where the dual is smooth.
        dz = M.T @ step
        shrinking = dz < 0
        t = 1.0
        if shrinking.any():
            t = min(1.0, 0.95 * float(np.min(-z[shrinking] / dz[shrinking])))
        # Slack for rounding: near the optimum the ascent is below machine precision.
        slack = 64.0 * np.finfo(float).eps * max(1.0, abs(g0))
        while t > 1e-12:
            cand = lam + t * step
            if dual_value(cand) >= g0 + 1e-4 * t * slope - slack:
                break
            t *= 0.5
        lam = lam + t * step
    raise ConvergenceError(f"dual Newton did not reach tolerance {tol} in {max_iter} steps")


def closed_form_path_beta(u_path, p) -> float:
    """``beta`` of a single path constraint: ``||u||_{l_{p'}}^{-1}``."""
    return 1.0 / lp_norm(np.asarray(u_path, dtype=float), conjugate(p))


# ------------------------------------------------------- cut supremum --


def residual_weight_norm(wt: WeightedTree, q, cut: Cut) -> float:
    """``||w||_{l_q}`` over the union of the subtrees rooted in ``Gamma``."""
    t = wt.tree
    validate_cut(t, cut)
    support = set()
    for g in cut.gamma:
        support |= t.subtree(g)
    return lp_norm(wt.w[sorted(support)], _p_of(q))


def cut_supremum(wt: WeightedTree, e, xi_star: int | None = None,
                 max_candidates: int = DEFAULT_CUT_CAP) -> Bound:
    """Largest ratio ``residual_weight_norm / beta`` over all cuts at ``xi_star``.

    Only meaningful for ``p <= q``; other regimes raise :class:`RegimeError`.
    Ties go to the lexicographically smallest cut (the first one returned by
    :func:`enumerate_cuts`).

    The family is evaluated by a dynamic programme over the children of
    each vertex that carries, for every partial cut, its ``beta`` and its
    residual power sum; no :class:`Cut` objects are built except for the
    witness.
    """
    e = as_exponents(e)
    if e.regime == "p>q":
        raise RegimeError("the cut characterisation requires p <= q")
    t = wt.tree
    xi_star = t.root if xi_star is None else xi_star
    t.check_vertex(xi_star)
    size = len(t.subtree(xi_star))
    if size > 60 or 2 ** size > max_candidates:
        raise SizeLimitError(f"subtree of {size} vertices exceeds the cut enumeration cap "
                             f"({max_candidates} candidate subsets)")
    sub = wt.subtree_norms(e.q)
    scale = float(sub[xi_star])
    table = _cut_table(wt, e, xi_star, sub / scale)
    beta, resid = table[xi_star][0], table[xi_star][1]
    live = beta > 0
    if e.q == math.inf:
        norms = scale * resid
    else:
        norms = scale * resid ** (1.0 / e.q)
    ratio = np.where(live, norms / np.where(live, beta, 1.0), -np.inf)
    best = float(ratio.max())
    ties = np.flatnonzero(ratio >= best * (1.0 - 1e-12))[:1024]
    cuts = [_rebuild_cut(t, table, xi_star, int(i)) for i in ties]
    return Bound(best, min(cuts, key=Cut.sort_key))


def _cut_table(wt: WeightedTree, e, root: int, sub: np.ndarray) -> dict:
    """Per vertex: (beta, residual, child option counts) over all partial cuts.

    Option order matches :func:`enumerate_cuts` before sorting: for a leaf
    ``[empty Gamma, {v}]``; otherwise ``[{v}]`` followed by the product of
    the children's options with the last child varying fastest.
    ``residual`` is the sum of ``sub**q`` over Gamma (the maximum for
    ``q = inf``).
    """
    t = wt.tree
    p, q, pc = e.p, e.q, e.p_conj
    table: dict[int, tuple] = {}
    verts = sorted(t.subtree(root), key=lambda v: (t.depth[v], v), reverse=True)
    own_r = sub if q == math.inf else sub ** q
    for v in verts:
        kids = t.children[v]
        u = wt.u[v]
        if not kids:
            table[v] = (np.array([0.0, 1.0 / u]), np.array([0.0, own_r[v]]), ())
            continue
        m = len(kids)
        bsum = np.zeros(())
        rsum = np.zeros(())
        for k, c in enumerate(kids):
            shape = [1] * m
            shape[k] = -1
            bc = table[c][0].reshape(shape)
            rc = table[c][1].reshape(shape)
            if p == math.inf:
                bsum = np.maximum(bsum, bc)
            elif p == 1:
                bsum = bsum + bc
            else:
                bsum = bsum + bc ** p
            rsum = np.maximum(rsum, rc) if q == math.inf else rsum + rc
        bn = (bsum if p in (1, math.inf) else bsum ** (1.0 / p)).ravel()
        rsum = np.broadcast_to(rsum, bsum.shape).ravel()
        with np.errstate(divide="ignore"):
            inv = np.where(bn > 0, 1.0 / np.where(bn > 0, bn, 1.0), np.inf)
        if pc == math.inf:
            B = np.maximum(u, inv)
        elif pc == 1:
            B = u + inv
        else:
            B = np.where(bn > 0, (u ** pc + np.where(bn > 0, inv, 0.0) ** pc) ** (1.0 / pc), np.inf)
        beta = np.where(bn > 0, 1.0 / B, 0.0)
        counts = tuple(len(table[c][0]) for c in kids)
        table[v] = (np.concatenate([[1.0 / u], beta]), np.concatenate([[own_r[v]], rsum]), counts)
    return table


def _rebuild_cut(t, table: dict, root: int, index: int) -> Cut:
    d: set[int] = set()
    g: set[int] = set()

    def walk(v: int, i: int) -> None:
        d.add(v)
        kids = t.children[v]
        if not kids:
            if i == 1:
                g.add(v)
            return
        if i == 0:
            g.add(v)
            return
        for c, j in zip(kids, np.unravel_index(i - 1, table[v][2])):
            walk(c, int(j))

    walk(root, index)
    return Cut(frozenset(d), frozenset(g), root)


# ------------------------------------------------- simple lower bounds --


def sup_product(wt: WeightedTree, q) -> Bound:
    """``max_xi u(xi) ||w||_{l_q(A_xi)}`` with the smallest maximising vertex."""
    vals = wt.u * wt.subtree_norms(_p_of(q))
    i = int(np.argmax(vals))
    return Bound(float(vals[i]), i)


def path_lower_bound(wt: WeightedTree, e, xi_star: int | None = None) -> Bound:
    """``max_{xi >= xi*} ||u||_{l_{p'}(path xi*..xi)} ||w||_{l_q(A_xi)}``.

    Witness: ``f`` proportional to ``u^{p'-1}`` on the path attains it, so
    this never exceeds the operator norm on ``A_{xi*}``.
    """
    e = as_exponents(e)
    t = wt.tree
    xi_star = t.root if xi_star is None else xi_star
    t.check_vertex(xi_star)
    pc = e.p_conj
    sub = wt.subtree_norms(e.q)
    scale = wt.u.max()
    acc: dict[int, float] = {}
    best_val, best_v = -1.0, None
    for v in sorted(t.subtree(xi_star), key=lambda x: (t.depth[x], x)):
        own = wt.u[v] / scale
        if v == xi_star:
            prev = 0.0
        else:
            prev = acc[t.parent[v]]
        acc[v] = max(prev, own) if pc == math.inf else prev + own ** pc
        path_norm = scale * (acc[v] if pc == math.inf else acc[v] ** (1.0 / pc))
        val = path_norm * sub[v]
        if val > best_val or (val == best_val and v < best_v):
            best_val, best_v = val, v
    return Bound(float(best_val), best_v)


def check_theorem1_hypotheses(wt: WeightedTree, q, l0: int = 1) -> Hypothesis1Report:
    """Smallest ``K`` and ``lambda`` for the branching/decay hypotheses.

    ``K`` bounds both the number of children and the ratio
    ``u(child)/u(parent)`` (and is at least 1); ``lambda`` is the largest
    ratio ``||w||_{l_q(A_xi'')} / ||w||_{l_q(A_xi)}`` over ``xi'' `` at
    distance ``l0`` below ``xi``. Vertices with nothing ``l0`` levels below
    contribute nothing; if no vertex qualifies ``lambda`` is 0.
    """
    if l0 < 1:
        raise ValueError("l0 must be a positive integer")
    t = wt.tree
    sub = wt.subtree_norms(_p_of(q))
    branching = max(len(c) for c in t.children)
    ratio = max([wt.u[v] / wt.u[t.parent[v]] for v in range(t.n) if t.parent[v] >= 0],
                default=0.0)
    lam = 0.0
    for v in range(t.n):
        below = t.level_set(v, l0)
        if below:
            lam = max(lam, max(sub[x] for x in below) / sub[v])
    K = max(1.0, float(branching), float(ratio))
    return Hypothesis1Report(K, float(lam), int(l0), bool(lam < 1.0), int(branching), float(ratio))


# --------------------------------------------------------------- report --


def tree_digest(wt: WeightedTree) -> str:
    h = hashlib.sha256()
    h.update(np.asarray(wt.tree.parent, dtype=np.int64).tobytes())
    h.update(wt.u.tobytes())
    h.update(wt.w.tobytes())
    return h.hexdigest()[:16]


def bound_report(wt: WeightedTree, e, seed: int = 0, tol: float = 1e-10, starts: int = 32,
                 l0: int = 1, max_candidates: int = DEFAULT_CUT_CAP) -> BoundReport:
    """Oracle norm and every available bound at the root, plus their ratios."""
    e = as_exponents(e)
    rep = BoundReport(metadata={"p": e.p, "q": e.q, "regime": e.regime,
                                "tree": tree_digest(wt), "n": wt.n, "seed": seed,
                                "tol": tol, "starts": starts, "warnings": []})
    est = tree_norm(wt, e, seed=seed, tol=tol, starts=starts)
    rep.add("norm", est.value, est.method, est.witness_by_vertex())
    if not est.converged:
        rep.metadata["warnings"].append("oracle ascent did not converge for every start")
    sp = sup_product(wt, e.q)
    rep.add("sup_product", sp.value, "exact", sp.witness)
    pl = path_lower_bound(wt, e)
    rep.add("path_lb", pl.value, "exact", pl.witness)
    if e.regime == "p>q":
        rep.metadata["warnings"].append("cut_sup skipped: the cut characterisation needs p <= q")
    else:
        try:
            cs = cut_supremum(wt, e, max_candidates=max_candidates)
            rep.add("cut_sup", cs.value, "cut-enumeration",
                    {"D": sorted(cs.witness.d_vertices), "Gamma": sorted(cs.witness.gamma)})
        except SizeLimitError as exc:
            rep.metadata["warnings"].append(f"cut_sup skipped: {exc}")
    hyp = check_theorem1_hypotheses(wt, e.q, l0)
    rep.add("K", hyp.K, "exact")
    rep.add("lambda", hyp.lam, "exact")
    rep.add("l0", hyp.l0, "input")
    main = [k for k in ("norm", "sup_product", "path_lb", "cut_sup") if k in rep.quantities]
    for i, a in enumerate(main):
        for b in main[i + 1:]:
            den = rep[b]
            rep.add(f"{a}/{b}", rep[a] / den if den > 0 else math.inf, "ratio")
    return rep
