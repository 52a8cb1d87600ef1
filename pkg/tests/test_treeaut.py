import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reebsplit.errors import (
    EdgeNotFound,
    InvalidTree,
    SideNotInvariant,
)
from reebsplit.selftest import brute_force_aut, oracle_corpus, star_tree
from reebsplit.treeaut import (
    LabeledTree,
    close_under_composition,
    compose,
    cut_tree_at,
    element_order_histogram,
    enumerate_aut,
    enumerate_general_aut,
    fixed_set,
    glue_aut,
    group_order,
    identity_perm,
    invert,
    perm_order,
    restrict_aut,
    verify_group_axioms,
    verify_isomorphism,
    verify_isomorphism_pairs,
)


def test_tree_invariants_enforced():
    with pytest.raises(InvalidTree):
        LabeledTree([0.0, 0.0], [(0, 1)])  # adjacent equal labels
    with pytest.raises(InvalidTree):
        LabeledTree([0.0, 1.0, 2.0], [(0, 1)])  # disconnected
    with pytest.raises(InvalidTree):
        LabeledTree([0.0, 1.0, 2.0], [(0, 1), (1, 2), (0, 2)])  # cycle


def test_path_group_is_trivial():
    group = enumerate_aut(LabeledTree([0.0, 1.0], [(0, 1)]))
    assert group.order == 1
    assert group.elements == (identity_perm(2),)


def test_three_leaf_star_order_six(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    assert group.order == 6
    assert element_order_histogram(group) == {1: 1, 2: 3, 3: 2}
    assert list(group.elements) == brute_force_aut(three_bump_tree)


def test_double_fork_group(double_fork_tree):
    group = enumerate_aut(double_fork_tree)
    assert group.order == 4
    assert element_order_histogram(group) == {1: 1, 2: 3}
    assert list(group.elements) == brute_force_aut(double_fork_tree)


@pytest.mark.parametrize("k,order", [(2, 2), (3, 6), (4, 24), (5, 120)])
def test_star_orders(k, order):
    assert enumerate_aut(star_tree(k)).order == order


def test_enumeration_matches_oracle_on_corpus():
    for tree in oracle_corpus(60):
        assert list(enumerate_aut(tree).elements) == brute_force_aut(tree)


def test_marked_vertex_restricts_group(three_bump_tree):
    marked = three_bump_tree.with_marked(2)  # pin one peak
    group = enumerate_aut(marked)
    assert group.order == 2
    assert list(group.elements) == brute_force_aut(marked)


def test_group_axioms_and_generators(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    assert verify_group_axioms(group)
    assert group_order(group) == 6
    regenerated = close_under_composition(list(group.generators), group.n)
    assert tuple(regenerated) == group.elements
    assert not verify_group_axioms([group.elements[-1]])  # no identity


def test_perm_helpers():
    p = (1, 2, 0, 3)
    assert compose(p, invert(p)) == identity_perm(4)
    assert perm_order(p) == 3


def test_fixed_set_path_center():
    tree = LabeledTree([0.0, 1.0, 0.0], [(0, 1), (1, 2)])
    group = enumerate_aut(tree)  # swaps the two equal leaves
    assert group.order == 2
    fx = fixed_set(group, tree)
    assert fx.variant == "subtree"
    assert fx.vertices == (1,)
    assert fx.edge_ids == ()


def test_fixed_set_midpoint_flip():
    tree = LabeledTree([0.0, 1.0], [(0, 1)])
    general = enumerate_general_aut(tree)
    assert general.order == 2
    fx = fixed_set(general, tree)
    assert fx.variant == "midpoint"
    assert fx.midpoint_edge == 0
    assert fx.flip_witness == (1, 0)


def test_fixed_set_three_bump(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    fx = fixed_set(group, three_bump_tree)
    assert fx.variant == "subtree"
    assert fx.vertices == (0, 1)
    assert fx.edge_ids == (0,)


def test_fixed_set_requires_a_group(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    with pytest.raises(ValueError):
        fixed_set([group.elements[-1]], three_bump_tree)


def test_cut_tree_basic(three_bump_tree):
    cut = cut_tree_at(three_bump_tree, 0)
    assert cut.side_a.tree.n == 2
    assert cut.side_b.tree.n == 5
    lo, hi = three_bump_tree.edges[0]
    assert min(three_bump_tree.labels[lo], three_bump_tree.labels[hi]) \
        < cut.cut_label < max(three_bump_tree.labels[lo], three_bump_tree.labels[hi])
    assert cut.side_a.tree.labels[cut.side_a.marked] == cut.cut_label
    with pytest.raises(EdgeNotFound):
        cut_tree_at(three_bump_tree, 9)


def test_cut_single_edge():
    tree = LabeledTree([0.0, 1.0], [(0, 1)])
    cut = cut_tree_at(tree, 0)
    for side in (cut.side_a, cut.side_b):
        assert side.tree.n == 2
        assert side.tree.labels[side.marked] == 0.5


def test_restrict_and_glue_roundtrip(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    cut = cut_tree_at(three_bump_tree, 0)
    for g in group.elements:
        a = restrict_aut(cut, g, "A")
        b = restrict_aut(cut, g, "B")
        assert glue_aut(cut, a, b) == g


def test_restrict_is_multiplicative(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    cut = cut_tree_at(three_bump_tree, 0)
    rng = random.Random(0)
    for _ in range(20):
        d = group.elements[rng.randrange(group.order)]
        w = group.elements[rng.randrange(group.order)]
        lhs = restrict_aut(cut, compose(d, w), "B")
        rhs = compose(restrict_aut(cut, d, "B"), restrict_aut(cut, w, "B"))
        assert lhs == rhs


def test_glue_order_is_lcm(double_fork_tree):
    group = enumerate_aut(double_fork_tree)
    fx = fixed_set(group, double_fork_tree)
    cut = cut_tree_at(double_fork_tree, fx.edge_ids[0])
    ga = enumerate_aut(cut.side_a.tree)
    gb = enumerate_aut(cut.side_b.tree)
    rng = random.Random(1)
    from math import lcm

    for _ in range(20):
        a = ga.elements[rng.randrange(ga.order)]
        b = gb.elements[rng.randrange(gb.order)]
        assert perm_order(glue_aut(cut, a, b)) == lcm(perm_order(a), perm_order(b))


def test_side_not_invariant_raises(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    swap = next(g for g in group.elements if g != identity_perm(5))
    # cutting a peak edge: elements moving that peak break both conditions
    cut = cut_tree_at(three_bump_tree, 1)
    mover = next(g for g in group.elements if g[2] != 2)
    with pytest.raises(SideNotInvariant):
        restrict_aut(cut, mover, "A")


def test_verify_isomorphism_trivial():
    tree = LabeledTree([0.0, 1.0], [(0, 1)])
    group = enumerate_aut(tree)
    cut = cut_tree_at(tree, 0)
    ga = enumerate_aut(cut.side_a.tree)
    gb = enumerate_aut(cut.side_b.tree)
    verdict = verify_isomorphism(cut, group, ga, gb)
    assert verdict.passed
    assert group.order == ga.order * gb.order == 1


def test_verify_isomorphism_three_bump(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    cut = cut_tree_at(three_bump_tree, 0)
    ga = enumerate_aut(cut.side_a.tree)
    gb = enumerate_aut(cut.side_b.tree)
    verdict = verify_isomorphism(cut, group, ga, gb)
    assert verdict.passed
    assert (ga.order, gb.order) == (1, 6)


def test_verify_isomorphism_detects_missing_element(three_bump_tree):
    group = enumerate_aut(three_bump_tree)
    cut = cut_tree_at(three_bump_tree, 0)
    ga = enumerate_aut(cut.side_a.tree)
    gb = enumerate_aut(cut.side_b.tree)
    dropped = [g for g in group.elements if g != group.elements[-1]]

    def pair_of(g):
        return (restrict_aut(cut, g, "A"), restrict_aut(cut, g, "B"))

    verdict = verify_isomorphism_pairs(dropped, ga, gb, pair_of,
                                       lambda a, b: glue_aut(cut, a, b))
    assert not verdict.surjective
    assert not verdict.passed


def test_setwise_invariant_edges_pointwise_fixed():
    for tree in oracle_corpus(40):
        group = enumerate_aut(tree)
        for p in group.elements:
            for u, v in tree.edges:
                if {p[u], p[v]} == {u, v}:
                    assert p[u] == u and p[v] == v


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_label_scaling_leaves_group_unchanged(seed):
    rng = random.Random(seed)
    from reebsplit.gen import random_realizable_tree

    tree = random_realizable_tree(2 + seed % 7, symmetry=(1, 2, 3)[seed % 3],
                                  seed=seed)
    a = rng.choice([0.5, 2.0, 4.0])  # powers of two scale exactly
    b = float(rng.randrange(-5, 6))
    moved = LabeledTree([a * x + b for x in tree.labels], tree.edges)
    assert enumerate_aut(tree).elements == enumerate_aut(moved).elements


def test_group_order_bound_enforced():
    from reebsplit.errors import GroupTooLarge

    with pytest.raises(GroupTooLarge):
        enumerate_aut(star_tree(8))  # 8! = 40320 exceeds the explicit bound
    assert enumerate_aut(star_tree(8), max_order=50_000).order == 40_320


def test_group_json_dump_is_deterministic(three_bump_tree):
    g1 = enumerate_aut(three_bump_tree).to_dict()
    g2 = enumerate_aut(three_bump_tree).to_dict()
    assert g1 == g2
    assert g1["order"] == 6
    assert g1["schema"] == "reeb-split/1"
