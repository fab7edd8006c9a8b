import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardytree import (Example2Params, LevelGrouping, LevelWeights, PsiProfile, RegimeError,
                       SizeLimitError, SplitSpec, TreeError, WeightedTree, apply_operator,
                       canonical_form, chain, chain_count, chain_weights, check_slowly_varying,
                       example1_bound, example1_weights, example2_bound, forest_norm, full_tree,
                       generate_regular_tree, hat_weights, random_weighted_tree, reduce_levels,
                       split_vertex, star, tree_norm)
from hardytree.reductions import (chainize, enumerate_level_groupings, enumerate_split_specs,
                                  lift_function, regular_weighted_tree, validate_split)
from hardytree.tree_core import lp_norm

INF = math.inf
SQ2 = math.sqrt(2)


def ones(t):
    return WeightedTree(t, np.ones(t.n), np.ones(t.n))


# ------------------------------------------------------- level reduction --


def test_reduce_levels_chain():
    red = reduce_levels(ones(chain(3)), LevelGrouping(0, (0, 2)), (2, 2))
    assert red.n == 2 and red.tree.parent == (-1, 0)
    assert np.allclose(red.u, [SQ2, 1]) and np.allclose(red.w, [SQ2, 1])
    assert red.origin == (0, 2)


def test_reduce_levels_all_levels_is_identity():
    c = WeightedTree(chain(4), [1, 2, 3, 4], [5, 6, 7, 8])
    red = reduce_levels(c, LevelGrouping(0, (0, 1, 2, 3)), (1.5, 3))
    assert np.array_equal(red.u, c.u) and np.array_equal(red.w, c.w)
    b = full_tree(2, 2)
    bw = WeightedTree(b, np.arange(1, 8), np.arange(1, 8))
    rb = reduce_levels(bw, LevelGrouping(0, (0, 1, 2)), (2, 2))
    assert canonical_form(rb.tree, rb.u.tolist()) == canonical_form(b, bw.u.tolist())


def test_reduce_levels_errors():
    with pytest.raises(TreeError, match="base depth"):
        reduce_levels(ones(chain(3)), LevelGrouping(1, (0, 2)), (2, 2))
    with pytest.raises(TreeError, match="empty band"):
        reduce_levels(ones(chain(3)), LevelGrouping(0, (0, 5)), (2, 2))
    with pytest.raises(TreeError):
        LevelGrouping(0, (0, 0))


def test_enumerate_level_groupings():
    gs = enumerate_level_groupings(chain(4), 0, max_levels=3)
    assert len(gs) == 1 + 3 + 3
    assert all(g.cut_levels[0] == 0 for g in gs)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2 ** 32 - 1),
       st.sampled_from([(1, 2), (1.5, 1.5), (2, 3), (3, 2), (INF, 1)]))
def test_level_reduction_never_decreases_norm(n, seed, e):
    wt = random_weighted_tree(np.random.default_rng(seed), n)
    norm = tree_norm(wt, e).value
    for g in enumerate_level_groupings(wt.tree, wt.tree.root):
        assert tree_norm(reduce_levels(wt, g, e), e).value >= norm - 1e-9


# ------------------------------------------------------------ splitting --


def test_split_star_root_gives_forest():
    res = split_vertex(ones(star(2)), SplitSpec(0, ({1}, {2})), (2, 2))
    assert res.is_forest and len(res.components) == 2
    for comp in res.components:
        assert comp.n == 2
        assert comp.u[0] == pytest.approx(SQ2) and comp.w[0] == pytest.approx(1 / SQ2)


def test_trivial_partition_keeps_weights():
    wt = random_weighted_tree(np.random.default_rng(2), 7)
    xi = next(v for v in range(7) if wt.tree.children[v])
    res = split_vertex(wt, SplitSpec(xi, (set(wt.tree.children[xi]),)), (2, 3))
    comp, = res.components
    assert np.allclose(np.sort(comp.u), np.sort(wt.u))
    assert np.allclose(np.sort(comp.w), np.sort(wt.w))


def test_split_inner_vertex_adds_one_vertex():
    b = full_tree(2, 2)
    kids = b.children[1]
    res = split_vertex(ones(b), SplitSpec(1, ({kids[0]}, {kids[1]})), (2, 2))
    assert not res.is_forest and res.components[0].n == b.n + 1


def test_validate_split():
    with pytest.raises(TreeError):
        validate_split(star(3), SplitSpec(0, ({1}, {2})))
    with pytest.raises(TreeError):
        validate_split(star(2), SplitSpec(1, ({2},)))
    with pytest.raises(TreeError):
        validate_split(star(2), SplitSpec(0, ({1, 2}, {2})))


def test_enumerate_split_specs_counts_bell_numbers():
    assert len(list(enumerate_split_specs(star(4), 0))) == 15
    assert list(enumerate_split_specs(star(2), 1)) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2 ** 32 - 1),
       st.sampled_from([(1, 2), (1.5, 1.5), (2, 3), (3, 2), (INF, 1), (2, INF)]))
def test_lift_preserves_norm_and_does_not_decrease_output(n, seed, e):
    rng = np.random.default_rng(seed)
    wt = random_weighted_tree(rng, n)
    p, q = e
    xi = int(rng.choice([v for v in range(n) if wt.tree.children[v]]))
    specs = list(enumerate_split_specs(wt.tree, xi))
    spec = specs[int(rng.integers(len(specs)))]
    res = split_vertex(wt, spec, e)
    f = rng.random(n)
    lifted = lift_function(res, f, p)
    assert lp_norm(np.concatenate(lifted), p) == pytest.approx(lp_norm(f, p), rel=1e-12)
    before = lp_norm(apply_operator(wt, f), q)
    after_blocks = [lp_norm(apply_operator(c, g), q) for c, g in zip(res.components, lifted)]
    after = lp_norm(np.array(after_blocks), q)
    assert after >= before * (1 - 1e-12)
    assert forest_norm(res.components, e).value >= tree_norm(wt, e).value - 1e-9


# -------------------------------------------------------- regular trees --


def test_regular_tree_examples():
    t = generate_regular_tree(PsiProfile((2, 2)))
    assert t.n == 7
    assert np.allclose(PsiProfile((2, 2)).psi_values(), [0, 1, 2])
    assert generate_regular_tree(PsiProfile((1, 1, 1))).parent == chain(4).parent
    assert PsiProfile((1, 1, 1)).psi_values().tolist() == [0, 0, 0, 0]
    assert PsiProfile((3, 1, 2)).level_sizes() == [1, 3, 3, 6]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=4))
def test_regular_tree_descendant_counts_are_exact(b):
    profile = PsiProfile(b)
    t = generate_regular_tree(profile)
    for v in range(t.n):
        j = t.depth[v]
        for j2 in range(j, profile.depth + 1):
            assert len(t.level_set(v, j2 - j)) == profile.count(j, j2)


def test_regular_tree_cap_and_validation():
    with pytest.raises(SizeLimitError):
        generate_regular_tree(PsiProfile((10, 10, 10)), max_vertices=100)
    with pytest.raises(TreeError):
        PsiProfile((2, 0))


def test_hat_weights_examples():
    lw = LevelWeights([1, 2, 3], [4, 5, 6])
    u, w = hat_weights(lw, PsiProfile((1, 1)), (2, 2))
    assert np.allclose(u, lw.u_levels) and np.allclose(w, lw.w_levels)
    geo = LevelWeights.geometric(3, 1.0, 0.5)
    u, w = hat_weights(geo, PsiProfile((2, 2, 2)), (2, 2))
    j = np.arange(4)
    assert np.allclose(w, 2.0 ** (-j / 2)) and np.allclose(u, 2.0 ** (-j / 2))


def test_chain_weights_examples():
    lw = LevelWeights.geometric(1, 1, 1)
    u, w = chain_weights(lw, PsiProfile((2,)), (2, 2))
    assert np.allclose(u, [SQ2, 1]) and np.allclose(w, [1 / SQ2, 1])
    assert chain_count(PsiProfile((2, 3))) == 6


@pytest.mark.parametrize("b", [(2,), (2, 2), (3, 2), (1, 3)])
@pytest.mark.parametrize("e", [(2, 2), (3, 2), (1.5, 3)])
def test_chainize_produces_chain_weights(b, e):
    profile = PsiProfile(b)
    lw = LevelWeights([1.0, 0.7, 1.3][:profile.depth + 1], [0.9, 1.1, 0.5][:profile.depth + 1])
    chains = chainize(regular_weighted_tree(profile, lw), e)
    assert len(chains) == chain_count(profile)
    cu, cw = chain_weights(lw, profile, e)
    for c in chains:
        assert c.tree.parent == chain(profile.depth + 1).parent
        assert np.allclose(c.u, cu) and np.allclose(c.w, cw)


# ------------------------------------------------------------- examples --


def test_example1_weights():
    assert example1_weights(1, 1, lambda y: 1.0, lambda y: 1.0, 2) == pytest.approx((2, 0.5))
    u, w = example1_weights(1, 1, lambda y: 1.0, lambda y: 1 / math.log2(y), 4)
    assert w == pytest.approx(1 / 16)
    assert example1_weights(1, 1, lambda y: 1.0, lambda y: 1.0, 0) == (1.0, 1.0)


def test_example1_bound_anchor():
    tb = example1_bound(2, 2, psi_w=lambda y: 1 / math.log2(y))
    direct = math.sqrt(sum(i ** -2.0 for i in range(2, 153)))
    assert tb.value == pytest.approx(direct, rel=1e-12)
    assert tb.value == pytest.approx(0.79898, abs=5e-6)
    assert tb.value <= math.sqrt(math.pi ** 2 / 6 - 1) <= tb.upper
    assert tb.witness == 2 and not tb.diverged


def test_example1_bound_divergence_and_errors():
    assert example1_bound(2, 2).diverged
    assert example1_bound(2, 2).value == INF
    with pytest.raises(RegimeError):
        example1_bound(2, INF)
    with pytest.raises(SizeLimitError):
        example1_bound(2, 2, tail_cap=4)


def test_example2_case1():
    p = Example2Params(gamma_star=1, alpha_u=1.0, alpha_w=1.5, j0=3)
    a = -2.5 + 0.5 + 0.5
    tb = example2_bound(1, p, (2, 2))
    assert tb.value == pytest.approx(3 ** a) and tb.witness == 3
    flat = Example2Params(gamma_star=0, alpha_u=0.4, alpha_w=0.6, j0=2)
    assert example2_bound(1, flat, (2, 2)).value == pytest.approx(1.0)
    with pytest.raises(RegimeError):
        example2_bound(1, Example2Params(gamma_star=1, alpha_u=0, alpha_w=0.5), (2, 2))


def test_example2_case2():
    params = Example2Params(gamma_star=1, alpha_u=0.0, alpha_w=1.0,
                            rho_w=lambda y: 1 / math.log2(y), k0=1)
    tb = example2_bound(2, params, (2, 2))
    direct = math.sqrt(sum(t ** -2.0 for t in range(1, 152)))
    assert tb.value == pytest.approx(direct, rel=1e-12) and tb.witness == 1
    with pytest.raises(RegimeError):
        example2_bound(2, Example2Params(gamma_star=1, alpha_u=0.3, alpha_w=1.0), (2, 2))
    with pytest.raises(RegimeError):
        example2_bound(3, params, (2, 2))


def test_slow_variation():
    ok = check_slowly_varying(lambda y: math.log2(2 * y), 0.5)
    assert ok.passed and ok.upper_constant == pytest.approx(1.5) and ok.lower_constant <= 1.0
    assert not check_slowly_varying(lambda y: y, 0.5).passed
    assert check_slowly_varying(lambda y: 1.0, 0.1).passed
    with pytest.raises(RegimeError):
        check_slowly_varying(lambda y: 1.0, 0)
