import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_dags
from lnec import (
    Network,
    max_flow_unit,
    mincut_edges_to_node,
    mincut_node_to_edges,
    primary_min_cut,
    source_capacity,
)
from lnec.exceptions import ParameterError, UnknownEdgeError
from oracles import brute_mincut, brute_primary


def _nx_flow(net, u, v):
    g = nx.DiGraph()
    for e in net.edges:
        cap = g.get_edge_data(e.tail, e.head, {"capacity": 0})["capacity"]
        g.add_edge(e.tail, e.head, capacity=cap + 1)
    if u not in g or v not in g:
        return 0
    return nx.maximum_flow_value(g, u, v)


def test_fig4_capacities(fig4):
    assert source_capacity(fig4, "t1") == 5
    assert source_capacity(fig4, "t2") == 5


@pytest.mark.parametrize(
    "rho, cut",
    [
        ({"e2", "e5"}, {"e18", "e20"}),
        ({"e2", "e4"}, {"e4", "e18"}),
        ({"e3"}, {"e10"}),
        ({"e9"}, set()),
        ({"e18"}, {"e18"}),
    ],
)
def test_fig4_primary_cuts(fig4, rho, cut):
    assert primary_min_cut(fig4, rho, "t1") == cut
    assert mincut_edges_to_node(fig4, rho, "t1") == len(cut)


def test_flow_paths_are_edge_disjoint(fig4):
    fa = max_flow_unit(fig4, "s", "t1")
    assert fa.value == len(fa.paths) == 5
    used = [e for p in fa.paths for e in p]
    assert len(used) == len(set(used))
    assert {e for e, f in fa.flow.items() if f} == set(used)
    for p in fa.paths:
        assert fig4.tail(p[0]) == "s" and fig4.head(p[-1]) == "t1"
        for a, b in zip(p, p[1:]):
            assert fig4.head(a) == fig4.tail(b)


def test_node_to_edges_figure2_example():
    # u feeds e5 and e7 only through the single edge e1
    net = Network(
        ["s", "u", "a", "b", "c", "t"],
        [
            ("e0", "s", "u"), ("e1", "u", "a"), ("e2", "a", "b"), ("e3", "a", "c"),
            ("e5", "b", "t"), ("e7", "c", "t"),
        ],
        "s",
        ["t"],
    )
    assert mincut_node_to_edges(net, "u", {"e5", "e7"}) == 1
    assert mincut_node_to_edges(net, "a", {"e5", "e7"}) == 2
    assert mincut_node_to_edges(net, "u", set()) == 0


def test_parallel_edges_capacity():
    net = Network(["s", "t"], [(f"p{i}", "s", "t") for i in range(4)], "s", ["t"])
    assert source_capacity(net, "t") == 4
    assert primary_min_cut(net, ["p0", "p2"], "t") == {"p0", "p2"}


def test_bad_inputs(fig4):
    with pytest.raises(UnknownEdgeError):
        mincut_edges_to_node(fig4, ["nope"], "t1")
    with pytest.raises(ParameterError):
        max_flow_unit(fig4, "s", "s")
    with pytest.raises(ParameterError):
        primary_min_cut(fig4, ["e2"], "t1", edge_order=["e1", "e2"])


def test_shuffled_orders_same_primary_cut(fig4):
    rng = random.Random(7)
    for _ in range(5):
        order = list(fig4.order)
        rng.shuffle(order)
        assert primary_min_cut(fig4, {"e2", "e4"}, "t1", edge_order=order) == {"e4", "e18"}


@settings(max_examples=80, deadline=None, derandomize=True)
@given(small_dags(max_edges=8), st.randoms(use_true_random=False))
def test_against_brute_force(net, rnd):
    edges = list(net.edges)
    for t in net.sinks:
        assert source_capacity(net, t) == _nx_flow(net, "s", t)
        k = rnd.randint(1, min(3, net.n_edges))
        rho = set(rnd.sample(list(net.order), k))
        assert mincut_edges_to_node(net, rho, t) == brute_mincut(edges, t, rho)
        order = list(net.order)
        rnd.shuffle(order)
        expected = brute_primary(edges, t, rho)
        assert primary_min_cut(net, rho, t) == expected
        assert primary_min_cut(net, rho, t, edge_order=order) == expected


@settings(max_examples=60, deadline=None, derandomize=True)
@given(small_dags(max_edges=8), st.randoms(use_true_random=False))
def test_node_to_edges_matches_brute(net, rnd):
    u = rnd.choice([v for v in net.nodes if v not in net.sinks])
    xi = set(rnd.sample(list(net.order), rnd.randint(1, min(3, net.n_edges))))
    # reversing every edge turns the node-to-edges problem into edges-to-node
    rev = [(e.id, e.head, e.tail) for e in net.edges]
    assert mincut_node_to_edges(net, u, xi) == brute_mincut(rev, u, xi)
