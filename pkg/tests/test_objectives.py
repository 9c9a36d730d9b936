import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import TRIANGLES, graphs, random_network
from oracles import (
    all_partitions,
    crossing_edges,
    exhaustive_min_ratio_cut,
    nmi_from_entropies,
    ratio_cut_bruteforce,
)
from mlpareto import (
    InputError,
    Partition,
    build_network,
    confusion_matrix,
    cut,
    move_delta,
    nmi,
    objective_vector,
    ratio_cut,
)
from mlpareto.objectives import CutTracker

K4 = build_network([list(itertools.combinations(range(4), 2))], 4)
SPLIT = Partition([0, 0, 0, 1, 1, 1], 2)


def test_cut_disconnected_triangles_is_zero():
    net = build_network([TRIANGLES], 6)
    assert cut(net, 0, SPLIT, 0) == 0 and cut(net, 0, SPLIT, 1) == 0


def test_cut_bridge(two_triangles_bridge):
    assert cut(two_triangles_bridge, 0, SPLIT, 0) == 1
    assert cut(two_triangles_bridge, 0, SPLIT, 1) == 1


def test_cut_k4():
    part = Partition([0, 0, 1, 1], 2)
    assert cut(K4, 0, part, 0) == 4 and cut(K4, 0, part, 1) == 4


def test_cut_errors(two_triangles_bridge):
    with pytest.raises(InputError):
        cut(two_triangles_bridge, 1, SPLIT, 0)
    with pytest.raises(InputError):
        cut(two_triangles_bridge, 0, SPLIT, 2)
    with pytest.raises(InputError):
        ratio_cut(two_triangles_bridge, 0, Partition([0, 1], 2))


def test_ratio_cut_examples(two_triangles_bridge):
    assert ratio_cut(two_triangles_bridge, 0, Partition([0] * 6, 1)) == 0.0
    assert ratio_cut(two_triangles_bridge, 0, SPLIT) == pytest.approx(1 / 3, abs=1e-12)
    A = two_triangles_bridge.adjacency(0)
    assert exhaustive_min_ratio_cut(A, 2) == pytest.approx(1 / 3, abs=1e-12)
    assert ratio_cut(K4, 0, Partition([0, 0, 1, 1], 2)) == pytest.approx(2.0, abs=1e-12)


def test_empty_community_contributes_zero(two_triangles_bridge):
    padded = Partition(SPLIT.assignment, 3)
    assert ratio_cut(two_triangles_bridge, 0, padded) == ratio_cut(two_triangles_bridge, 0, SPLIT)


def test_objective_vector_examples(two_triangles_bridge):
    edges = two_triangles_bridge.edge_list(0)
    net = build_network([edges, edges], 6)
    vec = objective_vector(net, SPLIT)
    assert vec.values[0] == vec.values[1]
    assert vec.values == pytest.approx((1 / 3, 1 / 3), abs=1e-12)
    assert objective_vector(net, Partition([0] * 6, 1)).values == (0.0, 0.0)
    assert len(vec) == net.L


@given(graphs(max_p=9), st.integers(1, 4), st.data())
@settings(max_examples=150, deadline=None)
def test_ratio_cut_matches_bruteforce_and_is_label_invariant(net, k, data):
    labels = data.draw(st.lists(st.integers(0, k - 1), min_size=net.p, max_size=net.p))
    part = Partition(labels, k)
    A = net.adjacency(0)
    value = ratio_cut(net, 0, part)
    assert value == pytest.approx(ratio_cut_bruteforce(A, labels, k), abs=1e-12)
    perm = data.draw(st.permutations(range(k)))
    relabelled = Partition([perm[x] for x in labels], k)
    assert ratio_cut(net, 0, relabelled) == pytest.approx(value, abs=1e-12)
    assert value >= 0
    assert (value == 0) == (crossing_edges(A, labels) == 0)


@given(graphs(max_p=10), st.data())
@settings(max_examples=100, deadline=None)
def test_two_way_cut_sum_is_twice_crossing_edges(net, data):
    labels = data.draw(st.lists(st.integers(0, 1), min_size=net.p, max_size=net.p))
    part = Partition(labels, 2)
    total = cut(net, 0, part, 0) + cut(net, 0, part, 1)
    assert total == 2 * crossing_edges(net.adjacency(0), labels)


def test_move_delta_isolated_vertex_closed_form():
    # vertex 4 isolated; communities {0,1,4} and {2,3}; edges 0-2, 1-3
    net = build_network([[(0, 2), (1, 3), (0, 1)]], 5)
    part = Partition([0, 0, 1, 1, 0], 2)
    md = move_delta(net, part, 4, 1)
    # cuts stay 2 and 2; sizes go 3,2 -> 2,3
    closed = 0.5 * ((2 / 2 + 2 / 3) - (2 / 3 + 2 / 2))
    assert md.delta_per_layer[0] == pytest.approx(closed, abs=1e-12)
    after = ratio_cut(net, 0, part.with_move(4, 1))
    assert ratio_cut(net, 0, part) + md.delta_per_layer[0] == pytest.approx(after, abs=1e-9)


def test_move_delta_merge_gives_minus_old(two_triangles_bridge):
    part = Partition([0, 0, 0, 0, 0, 1], 2)
    old = ratio_cut(two_triangles_bridge, 0, part)
    md = move_delta(two_triangles_bridge, part, 5, 0)
    assert md.delta_per_layer[0] == pytest.approx(-old, abs=1e-12)
    assert (md.vertex, md.from_community, md.to_community) == (5, 1, 0)


def test_move_delta_symmetric_under_automorphism(two_triangles_bridge):
    # swapping the triangles (v -> 5 - v) is an automorphism of the bridge graph
    d1 = move_delta(two_triangles_bridge, SPLIT, 0, 1).delta_per_layer
    mirrored = Partition([1, 1, 1, 0, 0, 0], 2)
    d2 = move_delta(two_triangles_bridge, mirrored, 5, 1).delta_per_layer
    assert d1 == pytest.approx(d2, abs=1e-12)


def test_move_delta_errors(two_triangles_bridge):
    with pytest.raises(InputError):
        move_delta(two_triangles_bridge, SPLIT, 0, 0)
    with pytest.raises(InputError):
        move_delta(two_triangles_bridge, SPLIT, 0, 2)
    with pytest.raises(InputError):
        move_delta(two_triangles_bridge, SPLIT, 6, 1)


@pytest.mark.parametrize("seed", range(20))
def test_move_delta_matches_recompute_fuzz(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(2, 31))
    k = int(rng.integers(2, 5))
    net = random_network(rng, p)
    part = Partition(rng.integers(0, k, size=p), k)
    for _ in range(25):
        v = int(rng.integers(p))
        b = int(rng.choice([c for c in range(k) if c != part.assignment[v]]))
        md = move_delta(net, part, v, b)
        before = objective_vector(net, part).values
        part = part.with_move(v, b)
        after = objective_vector(net, part).values
        for l in range(net.L):
            assert abs(before[l] + md.delta_per_layer[l] - after[l]) <= 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_cut_tracker_matches_full_recompute(seed):
    rng = np.random.default_rng(100 + seed)
    p, k = int(rng.integers(3, 25)), int(rng.integers(2, 5))
    net = random_network(rng, p)
    part = Partition(rng.integers(0, k, size=p), k)
    tracker = CutTracker(net, part)
    for _ in range(30):
        v = int(rng.integers(p))
        b = int(rng.choice([c for c in range(k) if c != tracker.labels[v]]))
        predicted = tracker.deltas(1, np.array([v]), np.array([b]))[0]
        before = tracker.ratio_cut(1)
        tracker.move(v, b)
        part = part.with_move(v, b)
        assert tracker.objectives() == objective_vector(net, part)
        assert abs(before + predicted - tracker.ratio_cut(1)) <= 1e-9


def test_confusion_matrix_examples():
    a = Partition([0, 0, 1, 1], 2)
    assert confusion_matrix(a, a).tolist() == [[2, 0], [0, 2]]
    assert confusion_matrix(a, Partition([1, 1, 0, 0], 2)).tolist() == [[0, 2], [2, 0]]
    assert confusion_matrix(a, Partition([0, 1, 0, 1], 2)).tolist() == [[1, 1], [1, 1]]
    with pytest.raises(InputError):
        confusion_matrix(a, Partition([0, 1], 2))


def test_nmi_examples():
    a = Partition([0, 0, 1, 1], 2)
    assert nmi(a, Partition([1, 1, 0, 0], 2)) == pytest.approx(1.0, abs=1e-12)
    assert nmi(a, Partition([0, 1, 0, 1], 2)) == pytest.approx(0.0, abs=1e-12)
    # entropy oracle, frozen
    assert nmi(Partition([0, 0, 0, 1], 2), Partition([0, 0, 1, 1], 2)) == pytest.approx(
        0.3437110184854508, abs=1e-12)
    assert nmi(Partition([0, 0, 0], 1), Partition([0, 0, 0], 2)) == 1.0
    with pytest.raises(InputError):
        nmi(a, Partition([0, 1], 2))


@given(st.integers(1, 30).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 3), min_size=n, max_size=n),
    st.lists(st.integers(0, 3), min_size=n, max_size=n))))
@settings(max_examples=200)
def test_nmi_matches_oracle_and_is_symmetric(pair):
    a, b = pair
    pa, pb = Partition(a, 4), Partition(b, 4)
    assert nmi(pa, pb) == pytest.approx(nmi(pb, pa), abs=1e-12)
    assert nmi(pa, pb) == pytest.approx(min(1.0, max(0.0, nmi_from_entropies(a, b))), abs=1e-9)
    assert 0.0 <= nmi(pa, pb) <= 1.0
