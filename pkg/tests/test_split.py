from reebsplit.gen import random_realizable_tree, realize_tree
from reebsplit.reeb import build_reeb
from reebsplit.split import (
    check_subtree_group_gap,
    reeb_to_tree,
    verify_all_fixed_edges,
    verify_theorem,
)
from reebsplit.treeaut import LabeledTree, cut_tree_at, enumerate_aut


def test_octahedron_split_passes(octahedron):
    mesh, field = octahedron
    report = verify_theorem(mesh, field)
    assert report.hypothesis_holds
    assert report.passed
    assert report.group_order == 1
    assert report.side_orders == (1, 1)
    assert report.euler_sum_ok
    assert all(d.is_disk for d in report.disks)


def test_three_bump_split_orders(three_bump):
    mesh, field = three_bump
    report = verify_theorem(mesh, field)
    assert report.passed
    assert report.group_order == 6
    assert report.side_orders == (1, 6)
    assert report.phi["injective"] and report.phi["surjective"]
    assert report.phi["homomorphism"]
    assert report.sides_invariant
    assert all(d.tree_matches_cut_side for d in report.disks)
    assert report.crossings == 4


def test_double_fork_both_cuts(double_fork_tree):
    mesh, field = realize_tree(double_fork_tree, 4)
    reports = verify_all_fixed_edges(mesh, field)
    assert len(reports) == 2
    orders = sorted(r.side_orders for r in reports)
    assert orders == [(1, 4), (2, 2)]
    assert all(r.passed for r in reports)
    assert all(r.group_order == 4 for r in reports)


def test_hypothesis_failure_is_clean():
    # two equal branches below and two above one center: only the center is
    # fixed, no edge, so the pipeline reports instead of cutting
    tree = LabeledTree([1.0, 0.0, 0.0, 2.0, 2.0],
                       [(0, 1), (0, 2), (0, 3), (0, 4)])
    mesh, field = realize_tree(tree, 4)
    report = verify_theorem(mesh, field)
    assert not report.hypothesis_holds
    assert not report.passed
    assert report.fixed_variant == "subtree"
    assert len(report.fixed_vertices) == 1
    assert verify_all_fixed_edges(mesh, field) == []


def test_cut_value_choice_does_not_change_groups(three_bump):
    mesh, field = three_bump
    graph = build_reeb(mesh, field)
    lo = graph.vertices[graph.edges[0].lower].label
    hi = graph.vertices[graph.edges[0].upper].label
    probes = [lo + 0.31 * (hi - lo), lo + 0.77 * (hi - lo)]
    keys = set()
    for c in probes:
        r = verify_theorem(mesh, field, edge_id=0, cut_value=c)
        assert r.passed
        keys.add((r.group_order, r.side_orders, r.phi["passed"]))
    assert len(keys) == 1


def test_all_fixed_edges_pass_on_symmetric_corpus():
    count = 0
    for seed in range(12):
        tree = random_realizable_tree(2 + seed % 6,
                                      symmetry=(1, 2, 3)[seed % 3], seed=seed)
        mesh, field = realize_tree(tree, 4)
        for report in verify_all_fixed_edges(mesh, field):
            count += 1
            assert report.passed, (seed, report.edge_id, report.notes)
            assert report.group_order == report.side_orders[0] * report.side_orders[1]
            assert report.euler_sum_ok
    assert count > 10


def test_subtree_group_gap_three_bump(three_bump_tree):
    cut = cut_tree_at(three_bump_tree, 0)
    notes = check_subtree_group_gap(cut)
    assert all(n.equal for n in notes)


def test_subtree_group_gap_detects_marking():
    # a leaf in side B shares the cut point's label, so forgetting the mark
    # doubles the subtree group
    tree = LabeledTree([0.0, 2.0, 4.0, 3.0, 6.0, 6.0],
                       [(0, 1), (1, 2), (2, 3), (2, 4), (2, 5)])
    cut = cut_tree_at(tree, 1)  # between labels 2 and 4: cut label 3
    assert cut.cut_label == 3.0
    notes = {n.side: n for n in check_subtree_group_gap(cut)}
    assert notes["B"].marked_order == 2
    assert notes["B"].unmarked_order == 4
    assert not notes["B"].equal
    assert notes["A"].equal


def test_report_serialization_shape(octahedron):
    mesh, field = octahedron
    report = verify_theorem(mesh, field)
    data = report.to_dict()
    assert data["schema"] == "reeb-split/1"
    assert "seconds" not in data
    assert data["passed"] is True
    timed = report.to_dict(include_timing=True)
    assert "seconds" in timed
    assert "PASS" in report.summary()


def test_replay_group_tamper_detected(three_bump):
    from reebsplit.treeaut import AutGroup

    mesh, field = three_bump
    graph = build_reeb(mesh, field)
    group = enumerate_aut(reeb_to_tree(graph))
    tampered = AutGroup(elements=group.elements[:-1],
                        generators=group.generators)
    report = verify_theorem(mesh, field, replay_group=tampered)
    assert report.hypothesis_holds
    assert not report.passed


def test_sides_invariant_claim(three_bump):
    mesh, field = three_bump
    report = verify_theorem(mesh, field)
    assert report.sides_invariant is True
