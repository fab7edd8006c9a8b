"""One-dimensional weighted Hardy operator ``(Hf)_n = w_n sum_{k<=n} u_k f_k``.

:func:`bennett_constant` evaluates the explicit two-regime constant
``M_{u,w}`` that is equivalent (up to constants depending on ``p, q``) to
the operator norm; :func:`hardy_norm_oracle` computes the norm itself.
The sequences are finite truncations of the infinite ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import RegimeError
from .exponents import as_exponents
from .oracle import DEFAULT_STARTS, DEFAULT_TOL, NormEstimate, operator_norm


@dataclass(frozen=True)
class Sequences:
    """Non-negative weight sequences ``u_0..u_N`` and ``w_0..w_N``."""

    u: np.ndarray
    w: np.ndarray

    def __init__(self, u, w):
        u = np.array(u, dtype=float).reshape(-1)
        w = np.array(w, dtype=float).reshape(-1)
        if u.shape != w.shape or u.size == 0:
            raise ValueError("u and w must be non-empty and of equal length")
        if np.any(u < 0) or np.any(w < 0) or not (np.all(np.isfinite(u)) and np.all(np.isfinite(w))):
            raise ValueError("u and w must be finite and non-negative")
        u.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)

    def __len__(self) -> int:
        return self.u.size

    def scaled(self, cu: float = 1.0, cw: float = 1.0) -> "Sequences":
        return Sequences(self.u * cu, self.w * cw)


def _log(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(x)


def _log_power_sums(s: Sequences, e) -> tuple[np.ndarray, np.ndarray]:
    """``log(sum_{n>=m} w_n^q)/q`` and ``log(sum_{n<=m} u_n^{p'})/p'`` per ``m``.

    Both are the logs of l_q / l_{p'} norms of a tail / head, so the
    extended conventions (``r = inf`` gives a running maximum) apply.
    """
    q, pc = e.q, e.p_conj
    lw, lu = _log(s.w), _log(s.u)
    if q == math.inf:
        tail = np.maximum.accumulate(lw[::-1])[::-1]
    else:
        tail = np.logaddexp.accumulate((q * lw)[::-1])[::-1] / q
    if pc == math.inf:
        head = np.maximum.accumulate(lu)
    else:
        head = np.logaddexp.accumulate(pc * lu) / pc
    return tail, head


def regime(e) -> str:
    """``"A"`` for ``1 < p <= q < inf``, ``"B"`` for ``1 <= q < p <= inf``.

    Raises
    ------
    RegimeError
        For ``p = 1`` or ``q = inf`` with ``p <= q``, where neither form is stated.
    """
    e = as_exponents(e)
    if e.regime == "p>q":
        return "B"
    if e.p == 1 or e.q == math.inf:
        raise RegimeError(f"{e!r} is outside both regimes (need 1 < p <= q < inf or q < p)")
    return "A"


def bennett_terms(s: Sequences, e) -> np.ndarray:
    """Per-index terms of ``M_{u,w}``.

    Regime A: ``(sum_{n>=m} w_n^q)^{1/q} (sum_{n<=m} u_n^{p'})^{1/p'}`` (M is
    their maximum). Regime B: ``[(sum_{n>=m} w_n^q)^{1/p}
    (sum_{n<=m} u_n^{p'})^{1/p'}]^{r} w_m^q`` with ``r = pq/(p-q)`` (M is
    their sum raised to ``1/q - 1/p = 1/r``).
    """
    e = as_exponents(e)
    return np.exp(_log_terms(s, e))


def _log_terms(s: Sequences, e) -> np.ndarray:
    tail, head = _log_power_sums(s, e)
    if regime(e) == "A":
        return tail + head
    r = e.mixing_exponent()
    q = e.q
    # (sum w^q)^{1/p} = exp(q * tail / p); with p = inf this factor is 1.
    tail_p = 0.0 if e.p == math.inf else q * tail / e.p
    with np.errstate(invalid="ignore"):
        out = r * (tail_p + head) + q * _log(s.w)
    return np.where(np.isnan(out), -np.inf, out)


def bennett_constant(s: Sequences, e) -> float:
    """The constant ``M_{u,w}`` on the finite sequences ``s``.

    Regime-B exponents ``pq/(p-q)`` and ``1/q - 1/p`` come from exact
    rationals when ``p, q`` are given as rationals, avoiding cancellation
    near ``p = q``.

    Examples
    --------
    >>> round(bennett_constant(Sequences([1, 1, 1], [1, .5, .25]), (2, 2)), 5)
    1.14564
    >>> bennett_constant(Sequences([1, 1], [1, 1]), (2, 1))
    2.0
    """
    e = as_exponents(e)
    logs = _log_terms(s, e)
    if regime(e) == "A":
        return float(np.exp(np.max(logs)))
    r = e.mixing_exponent()
    return float(np.exp(logsumexp(logs) / r))


def truncation_diagnostic(s: Sequences, e) -> float:
    """Share of the final index in the defining sum of ``M_{u,w}``.

    Regime A: ``w_N^q / sum_n w_n^q``; regime B: last term over the total.
    A large share suggests that the truncated sequences do not yet
    represent the infinite ones.
    """
    e = as_exponents(e)
    if regime(e) == "A":
        q = e.q
        tot = logsumexp(q * _log(s.w))
        return float(np.exp(q * _log(s.w[-1:])[0] - tot))
    logs = _log_terms(s, e)
    return float(np.exp(logs[-1] - logsumexp(logs)))


def hardy_kernel(s: Sequences) -> np.ndarray:
    """Lower-triangular kernel ``K[n, k] = w_n u_k`` for ``k <= n``."""
    return np.tril(np.outer(s.w, s.u))


def hardy_norm_oracle(s: Sequences, e, seed: int = 0, tol: float = DEFAULT_TOL,
                      starts: int = DEFAULT_STARTS) -> NormEstimate:
    """Norm of the one-dimensional Hardy operator via :func:`operator_norm`."""
    return operator_norm(hardy_kernel(s), e, seed=seed, tol=tol, starts=starts)
