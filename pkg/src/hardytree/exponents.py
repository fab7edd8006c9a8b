"""Exponent pairs (p, q) with extended-value conjugates.

Rational inputs are kept exactly next to their float values so that
regime tests (p < q, p = q, p > q) and derived exponents such as
pq/(p - q) do not suffer from rounding near the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import RegimeError

ExponentLike = Union[int, float, str, Fraction]

INF = math.inf


def parse_exponent(value: ExponentLike) -> Fraction | float:
    """Parse an exponent literal into an exact ``Fraction`` or ``math.inf``.

    Accepts ints, floats, Fractions and strings such as ``"2"``, ``"1.5"``,
    ``"3/2"``, ``"inf"``. Floats are converted exactly (``Fraction(1.5)``).
    """
    if isinstance(value, Fraction):
        out: Fraction | float = value
    elif isinstance(value, bool):
        raise RegimeError(f"invalid exponent {value!r}")
    elif isinstance(value, int):
        out = Fraction(value)
    elif isinstance(value, float):
        if math.isnan(value):
            raise RegimeError("exponent is NaN")
        out = INF if math.isinf(value) else Fraction(value)
    elif isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "+inf", "oo"):
            out = INF
        else:
            try:
                out = Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise RegimeError(f"cannot parse exponent {value!r}") from exc
    else:
        raise RegimeError(f"unsupported exponent type {type(value).__name__}")
    if out != INF and out < 1:
        raise RegimeError(f"exponent must lie in [1, inf], got {value!r}")
    if out == -INF:
        raise RegimeError(f"exponent must lie in [1, inf], got {value!r}")
    return out


def conjugate(r: ExponentLike) -> float:
    """Hoelder conjugate r' with 1' = inf and inf' = 1."""
    exact = parse_exponent(r)
    if exact == INF:
        return 1.0
    if exact == 1:
        return INF
    return float(exact / (exact - 1))


def _exact_conjugate(r: Fraction | float) -> Fraction | float:
    if r == INF:
        return Fraction(1)
    if r == 1:
        return INF
    return r / (r - 1)


@dataclass(frozen=True)
class Exponents:
    """Source exponent ``p`` and target exponent ``q`` of an l_p -> l_q norm.

    ``p`` and ``q`` are always plain floats (``math.inf`` allowed); the exact
    values are available as ``p_exact`` / ``q_exact``.
    """

    p_exact: Fraction | float
    q_exact: Fraction | float
    p: float = field(init=False)
    q: float = field(init=False)

    def __init__(self, p: ExponentLike, q: ExponentLike):
        pe, qe = parse_exponent(p), parse_exponent(q)
        object.__setattr__(self, "p_exact", pe)
        object.__setattr__(self, "q_exact", qe)
        object.__setattr__(self, "p", float(pe))
        object.__setattr__(self, "q", float(qe))

    @property
    def p_conj(self) -> float:
        return float(_exact_conjugate(self.p_exact))

    @property
    def q_conj(self) -> float:
        return float(_exact_conjugate(self.q_exact))

    @property
    def regime(self) -> str:
        """One of ``"p<q"``, ``"p=q"``, ``"p>q"`` (decided exactly)."""
        if self.p_exact == self.q_exact:
            return "p=q"
        return "p<q" if self.p_exact < self.q_exact else "p>q"

    @property
    def dual(self) -> "Exponents":
        """Exponents (q', p') of the transposed operator."""
        return Exponents(_as_literal(_exact_conjugate(self.q_exact)),
                         _as_literal(_exact_conjugate(self.p_exact)))

    def mixing_exponent(self) -> float:
        """r with 1/r = 1/q - 1/p for p > q (r = q when p = inf).

        This is the exponent that combines block norms of a direct sum when
        p > q. Computed from exact rationals when available.
        """
        if self.regime != "p>q":
            raise RegimeError("mixing exponent is only defined for p > q")
        if self.p_exact == INF:
            return float(self.q_exact)
        return float(self.p_exact * self.q_exact / (self.p_exact - self.q_exact))

    def __repr__(self) -> str:
        return f"Exponents(p={_fmt(self.p_exact)}, q={_fmt(self.q_exact)})"


def _as_literal(x: Fraction | float) -> ExponentLike:
    return "inf" if x == INF else x


def _fmt(x: Fraction | float) -> str:
    if x == INF:
        return "inf"
    return str(x) if isinstance(x, Fraction) and x.denominator != 1 else str(int(x))


def as_exponents(e: "Exponents | tuple") -> Exponents:
    """Coerce ``(p, q)`` tuples to :class:`Exponents`."""
    if isinstance(e, Exponents):
        return e
    p, q = e
    return Exponents(p, q)
