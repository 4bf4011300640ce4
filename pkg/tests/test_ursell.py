import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mayerbc import ursell
from mayerbc.potential import hard_rod, square_well, zero_potential


@pytest.mark.parametrize("m,count", [(1, 1), (2, 1), (3, 4), (4, 38), (5, 728), (6, 26704)])
def test_connected_counts(m, count):
    assert len(ursell.connected_graph_masks(m)) == count


@pytest.mark.parametrize("m", range(2, 8))
def test_cayley(m):
    assert len(ursell.tree_edge_index(m)) == m ** (m - 2)


def test_every_enumerated_tree_is_distinct_and_spanning():
    trees = list(ursell.enumerate_trees(5))
    assert len({tuple(sorted(t)) for t in trees}) == 125
    for t in trees:
        assert len(t) == 4
        assert ursell.LabeledGraph(5, sum(1 << ursell.edge_pairs(5).index(e) for e in t)).is_connected


def test_prufer_round_trip_small():
    assert sorted(ursell.prufer_decode([3, 3], 4)) == [(0, 3), (1, 3), (2, 3)]


def test_caps():
    with pytest.raises(ursell.CapabilityError):
        ursell.connected_graph_masks(ursell.GRAPH_CAP + 1)
    with pytest.raises(ursell.CapabilityError):
        ursell.tree_edge_index(ursell.TREE_CAP + 1)


def test_two_point_function_is_the_bond():
    p = square_well()
    assert ursell.ursell_subset_recursion([[0.0], [0.7]], p, 1.0) == pytest.approx(math.e - 1)
    assert ursell.ursell_subset_recursion([[0.0], [0.2]], p, 1.0) == -1.0


def test_three_hard_rods_closed_form():
    # all three overlapping: f = -1 on each pair, Phi = 3 f^2 + f^3 = 2
    p = hard_rod()
    assert ursell.ursell_graph_sum([[0.0], [0.1], [0.2]], p, 1.0) == 2.0
    assert ursell.ursell_subset_recursion([[0.0], [0.1], [0.2]], p, 1.0) == pytest.approx(2.0)


def test_zero_potential_has_no_connected_part():
    p = zero_potential()
    assert ursell.ursell_subset_recursion(np.zeros((4, 1)), p, 1.0) == 0.0


def test_disconnected_bond_graph_is_exact_zero():
    p = square_well()
    pts = np.array([[0.0], [0.5], [5.0], [5.2]])
    assert ursell.ursell_subset_recursion(pts, p, 1.0) == 0.0


configs = st.integers(2, 6).flatmap(
    lambda m: st.lists(st.floats(0.0, 0.7 * m), min_size=m, max_size=m)
)


@given(configs)
def test_dual_route_agrees(xs):
    p = square_well()
    pts = np.array(xs)[:, None]
    a = ursell.ursell_graph_sum(pts, p, 1.0)
    b = ursell.ursell_subset_recursion(pts, p, 1.0)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


@given(configs, st.randoms(use_true_random=False))
def test_ursell_symmetric_under_relabeling(xs, rnd):
    p = square_well()
    pts = np.array(xs)[:, None]
    perm = list(range(len(xs)))
    rnd.shuffle(perm)
    a = ursell.ursell_subset_recursion(pts, p, 1.0)
    b = ursell.ursell_subset_recursion(pts[perm], p, 1.0)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


@given(configs, st.sampled_from([0.3, 1.0, 2.5]))
def test_tree_bound_dominates(xs, beta):
    for p in (square_well(), hard_rod()):
        pts = np.array(xs)[:, None]
        assert abs(ursell.ursell_subset_recursion(pts, p, beta)) <= ursell.tree_bound(pts, p, beta) * (1 + 1e-12)


def test_batch_matches_single():
    p = square_well(d=2)
    rng = np.random.default_rng(1)
    pts = rng.uniform(0, 2, size=(50, 4, 2))
    batch = ursell.ursell_from_bonds(ursell.bond_matrices(pts, p, 1.0))
    single = [ursell.ursell_subset_recursion(x, p, 1.0) for x in pts]
    assert np.allclose(batch, single, rtol=0, atol=1e-14)


def test_edge_order_is_lexicographic():
    assert ursell.edge_pairs(4) == tuple(itertools.combinations(range(4), 2))
