import random

import networkx as nx
import pytest

from phylo.connectivity import BACKENDS, DecrementalGraph
from phylo.errors import DoubleDelete

both = pytest.mark.parametrize("backend", BACKENDS)


@both
def test_path_connected(backend):
    g = DecrementalGraph(4, [(0, 1), (1, 2), (2, 3)], backend)
    assert g.connected(0, 3)


@both
def test_no_edges(backend):
    g = DecrementalGraph(2, [], backend)
    assert not g.connected(0, 1)


@both
def test_cycle_all_connected(backend):
    g = DecrementalGraph(5, [(i, (i + 1) % 5) for i in range(5)], backend)
    assert all(g.connected(i, j) for i in range(5) for j in range(5))


@both
def test_leaf_detaches(backend):
    g = DecrementalGraph(3, [(0, 1), (1, 2)], backend)
    assert g.delete_edge(1) == [2]
    assert not g.connected(1, 2)


@both
def test_cycle_edge_no_split(backend):
    g = DecrementalGraph(3, [(0, 1), (1, 2), (2, 0)], backend)
    assert g.delete_edge(0) is None
    assert g.connected(0, 1)


@both
def test_parallel_edges_tie_rule(backend):
    g = DecrementalGraph(2, [(0, 1), (0, 1)], backend)
    assert g.delete_edge(0) is None
    # equal sides: the one holding the smaller minimum vertex id
    assert g.delete_edge(1) == [0]


@both
def test_self_loop_never_splits(backend):
    g = DecrementalGraph(2, [(0, 0), (0, 1)], backend)
    assert g.delete_edge(0) is None
    assert g.delete_edge(1) == [0]


@both
def test_double_delete(backend):
    g = DecrementalGraph(3, [(0, 1), (1, 2)], backend)
    g.delete_edge(0)
    with pytest.raises(DoubleDelete):
        g.delete_edge(0)
    with pytest.raises(DoubleDelete):
        g.delete_edges([1, 1])


@both
def test_vertex_out_of_range(backend):
    with pytest.raises(ValueError):
        DecrementalGraph(2, [(0, 2)], backend)
    g = DecrementalGraph(2, [(0, 1)], backend)
    with pytest.raises(ValueError):
        g.connected(0, 5)


def test_unknown_backend():
    with pytest.raises(ValueError):
        DecrementalGraph(2, [], "fast")


@both
def test_spanning_forest_spans_components(backend):
    rng = random.Random(3)
    n = 40
    edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(60)]
    g = DecrementalGraph(n, edges, backend)
    for e in rng.sample(range(60), 25):
        g.delete_edge(e)
    forest = g.spanning_forest()
    alive = [e for e in range(60) if not g._deleted[e]]
    assert set(forest) <= set(alive)
    full = nx.MultiGraph()
    full.add_nodes_from(range(n))
    full.add_edges_from(edges[e] for e in alive)
    tree = nx.Graph()
    tree.add_nodes_from(range(n))
    tree.add_edges_from(edges[e] for e in forest)
    assert nx.is_forest(tree)
    assert nx.number_connected_components(tree) == nx.number_connected_components(full)


@both
def test_split_side_is_smaller_half(backend):
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(2, 60)
        edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, 2 * n))]
        g = DecrementalGraph(n, edges, backend)
        ref = nx.MultiGraph()
        ref.add_nodes_from(range(n))
        ref.add_edges_from((u, v, e) for e, (u, v) in enumerate(edges))
        for e in rng.sample(range(len(edges)), len(edges)):
            u, v = edges[e]
            before = len(nx.node_connected_component(ref, u))
            ref.remove_edge(u, v, key=e)
            side = g.delete_edge(e)
            if side is None:
                assert nx.has_path(ref, u, v)
                continue
            assert not nx.has_path(ref, u, v)
            assert 2 * len(side) <= before
            comp_u = nx.node_connected_component(ref, u)
            comp_v = nx.node_connected_component(ref, v)
            assert set(side) in (comp_u, comp_v)


def test_hdt_matches_naive_small_sample():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(1, 30)
        edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 3 * n))]
        a = DecrementalGraph(n, edges, "hdt")
        b = DecrementalGraph(n, edges, "naive")
        order = rng.sample(range(len(edges)), len(edges))
        for e in order:
            assert a.delete_edge(e) == b.delete_edge(e)
            u, v = rng.randrange(n), rng.randrange(n)
            assert a.connected(u, v) == b.connected(u, v)


def test_batch_equals_single_deletions():
    rng = random.Random(2)
    n = 300
    edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(900)]
    order = rng.sample(range(900), 900)
    a = DecrementalGraph(n, edges)
    b = DecrementalGraph(n, edges)
    batched = a.delete_edges(order)
    single = [(e, s) for e in order if (s := b.delete_edge(e)) is not None]
    assert batched == single
