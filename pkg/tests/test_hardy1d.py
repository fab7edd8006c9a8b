import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardytree import RegimeError, Sequences, bennett_constant, hardy_norm_oracle
from hardytree.hardy1d import bennett_terms, hardy_kernel, regime, truncation_diagnostic

INF = math.inf
seqs = st.integers(1, 24).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0.05, 20), min_size=n, max_size=n),
    st.lists(st.floats(0.05, 20), min_size=n, max_size=n)))


def test_anchors():
    assert bennett_constant(Sequences([1, 1, 1], [1, 0.5, 0.25]), (2, 2)) == pytest.approx(
        math.sqrt(1.3125), rel=1e-14)
    assert bennett_constant(Sequences([1, 1], [1, 1]), (2, 1)) == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("e", [(2, 2), (1.5, 3), (3, 2), (2, 1), (INF, 1), (INF, 3)])
def test_single_term(e):
    assert bennett_constant(Sequences([3.0], [0.5]), e) == pytest.approx(1.5)


def test_regimes():
    assert regime((2, 3)) == "A" and regime((3, 2)) == "B" and regime((INF, 1)) == "B"
    for e in [(1, 2), (2, INF), (1, 1)]:
        with pytest.raises(RegimeError):
            regime(e)
        with pytest.raises(RegimeError):
            bennett_constant(Sequences([1], [1]), e)


def test_sequences_validation():
    with pytest.raises(ValueError):
        Sequences([1, 2], [1])
    with pytest.raises(ValueError):
        Sequences([-1], [1])
    with pytest.raises(ValueError):
        Sequences([], [])


def test_oracle_examples():
    assert hardy_norm_oracle(Sequences([1, 1], [1, 1]), (2, 2)).value == pytest.approx(
        (1 + math.sqrt(5)) / 2)
    assert hardy_norm_oracle(Sequences([1], [5]), (3, 1.5)).value == pytest.approx(5)
    assert hardy_norm_oracle(Sequences([1, 1], [1, 1]), (1, 2)).value == pytest.approx(math.sqrt(2))
    assert hardy_kernel(Sequences([1, 2], [3, 4])).tolist() == [[3, 0], [4, 8]]


def test_zero_weights_are_allowed():
    s = Sequences([1, 0, 1], [0, 1, 1])
    assert math.isfinite(bennett_constant(s, (2, 2)))
    assert math.isfinite(bennett_constant(s, (3, 2)))


@settings(max_examples=60, deadline=None)
@given(seqs, st.sampled_from([(1.5, 1.5), (1.5, 3), (2, 2), (2, 3), (3, 3)]))
def test_regime_a_terms_are_lower_bounds(uw, e):
    s = Sequences(*uw)
    assert hardy_norm_oracle(s, e).value >= bennett_constant(s, e) * (1 - 1e-9)


@settings(max_examples=60, deadline=None)
@given(seqs, st.sampled_from([(1.5, 3), (2, 2), (3, 2), (INF, 1.5), (2, 1)]),
       st.floats(0.1, 10), st.floats(0.1, 10))
def test_homogeneity(uw, e, cu, cw):
    s = Sequences(*uw)
    assert bennett_constant(s.scaled(cu, cw), e) == pytest.approx(
        bennett_constant(s, e) * cu * cw, rel=1e-10)


def test_regime_b_matches_direct_formula():
    rng = np.random.default_rng(0)
    u, w = rng.random(9) + 0.1, rng.random(9) + 0.1
    p, q = 3.0, 1.5
    r = p * q / (p - q)
    pc = p / (p - 1)
    total = sum((np.sum(w[m:] ** q) ** (1 / p) * np.sum(u[:m + 1] ** pc) ** (1 / pc)) ** r * w[m] ** q
                for m in range(9))
    assert bennett_constant(Sequences(u, w), (p, q)) == pytest.approx(total ** (1 / r), rel=1e-12)
    assert bennett_terms(Sequences(u, w), (p, q)).sum() == pytest.approx(total, rel=1e-12)


def test_regime_b_exact_rationals():
    s = Sequences([1, 2, 3], [3, 2, 1])
    assert bennett_constant(s, ("3/2", "4/3")) == pytest.approx(bennett_constant(s, (1.5, 4 / 3)),
                                                                rel=1e-9)


def test_large_exponents_do_not_overflow():
    n = np.arange(400.0)
    s = Sequences(1.5 ** n, 0.5 ** n)
    assert math.isfinite(bennett_constant(s, (1.01, 1.005)))


def test_truncation_diagnostic():
    s = Sequences(np.ones(50), 0.5 ** np.arange(50))
    assert truncation_diagnostic(s, (2, 2)) < 1e-25
    flat = Sequences(np.ones(50), np.ones(50))
    assert truncation_diagnostic(flat, (2, 2)) == pytest.approx(1 / 50)
    assert 0 < truncation_diagnostic(s, (3, 2)) < 1
