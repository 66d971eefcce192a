from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_dags
from lnec import (
    Network,
    classify_by_primary,
    correctable_family,
    count_correctable,
    enumerate_primary,
    enumerate_R,
    field_size_bound,
    mds_field_size_bound,
    mincut_edges_to_node,
    source_capacity,
)
from lnec.exceptions import ParameterError, ScanGuardError
from oracles import brute_mincut, brute_primary_family

FIG4_A1 = [{"e1"}, {"e4"}, {"e6"}, {"e10"}, {"e12"}, {"e18"}, {"e20"}]


def test_fig4_singletons(fig4):
    fam = enumerate_primary(fig4, "t1", 1)
    assert set(fam.members) == {frozenset(s) for s in FIG4_A1}
    assert len(fam) == 7


def test_fig4_pairs_match_definition(fig4):
    # independent definition-level enumeration is slow at |E| = 21, so only
    # the edges reaching t1 are handed to the oracle
    reach = [e for e in fig4.edges if e.id not in {"e9", "e11", "e15", "e19", "e21"}]
    fam = enumerate_primary(fig4, "t1", 2)
    assert fam.as_set() == brute_primary_family(reach, "t1", 2)
    assert len(fam) == 17


def test_input_edges_are_primary(fig4):
    fam = enumerate_primary(fig4, "t2", 2)
    for pair in combinations(fig4.in_edges("t2"), 2):
        assert pair in fam


def test_r_zero_and_range(fig4):
    assert len(enumerate_primary(fig4, "t1", 0)) == 0
    with pytest.raises(ParameterError):
        enumerate_primary(fig4, "t1", 6)
    with pytest.raises(ParameterError):
        enumerate_primary(fig4, "t1", -1)
    with pytest.raises(ParameterError):
        enumerate_R(fig4, "t1", 0)


def test_R_contains_A(fig4):
    R = enumerate_R(fig4, "t1", 2)
    assert len(R) == 99
    assert enumerate_primary(fig4, "t1", 2).as_set() <= R


def test_classes_fig4(fig4):
    classes = classify_by_primary(fig4, "t1")
    assert len(classes) == 8
    assert classes[frozenset({"e20"})] == ("e5", "e13", "e14", "e17", "e20")
    assert classes[frozenset({"e10"})] == ("e3", "e10")


def test_count_methods_and_threads(fig4):
    a = count_correctable(fig4, "t1", 1, method="classes")
    b = count_correctable(fig4, "t1", 1, threads=3)
    assert a == b == 2239
    with pytest.raises(ParameterError):
        count_correctable(fig4, "t1", 2, method="classes")
    with pytest.raises(ParameterError):
        count_correctable(fig4, "t1", 1, method="magic")


def test_scan_guards():
    edges = [(f"p{i}", "s", "t") for i in range(26)]
    net = Network(["s", "t"], edges, "s", ["t"])
    with pytest.raises(ScanGuardError):
        count_correctable(net, "t", 1)
    with pytest.raises(ScanGuardError):
        list(correctable_family(net, "t", 1))
    wide = Network(["s", "t"], [(f"p{i}", "s", "t") for i in range(120)], "s", ["t"])
    with pytest.raises(ScanGuardError):
        enumerate_R(wide, "t", 4)


def test_parallel_edges_all_primary():
    net = Network(["s", "t"], [(f"p{i}", "s", "t") for i in range(6)], "s", ["t"])
    for b in range(1, 4):
        assert len(enumerate_primary(net, "t", b)) == len(enumerate_R(net, "t", b)) == comb(6, b)


def test_bound_beta_zero(fig4):
    rep = field_size_bound(fig4, 3, (0, 0))
    assert (rep.improved, rep.r_bound, rep.naive, rep.min_prime_power) == (0, 0, 0, 2)
    assert all(s.floor == 0 for s in rep.per_sink)


def test_bound_validation(fig4):
    with pytest.raises(ParameterError):
        field_size_bound(fig4, 6, (0, 0))
    with pytest.raises(ParameterError):
        field_size_bound(fig4, 3, (3, 0))
    with pytest.raises(ParameterError):
        field_size_bound(fig4, 3, (1,))
    with pytest.raises(ParameterError):
        field_size_bound(fig4, 3, {"t1": 1})


def test_mds_bound_fig4(fig4):
    rep = mds_field_size_bound(fig4, 3)
    assert rep.beta == {"t1": 2, "t2": 2}
    assert rep.improved <= rep.r_bound <= rep.naive
    d = rep.to_dict()
    assert set(d) == {"w", "per_sink", "improved", "r_bound", "naive", "min_prime_power"}


@settings(max_examples=60, deadline=None, derandomize=True)
@given(small_dags(max_edges=7), st.integers(1, 3))
def test_family_matches_definition(net, r):
    edges = list(net.edges)
    for t in net.sinks:
        if r > source_capacity(net, t):
            continue
        fam = enumerate_primary(net, t, r)
        assert fam.as_set() == brute_primary_family(edges, t, r)
        assert len(fam) >= comb(len(net.in_edges(t)), r)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(small_dags(max_edges=9), st.integers(0, 3))
def test_correctable_count_matches_flows(net, r):
    for t in net.sinks:
        if r > source_capacity(net, t):
            continue
        by_flow = [
            frozenset(rho)
            for k in range(1, net.n_edges + 1)
            for rho in combinations(net.order, k)
            if mincut_edges_to_node(net, rho, t) <= r
        ]
        assert count_correctable(net, t, r) == len(by_flow)
        assert set(correctable_family(net, t, r)) == set(by_flow)
        if r <= 1:
            assert count_correctable(net, t, r, method="classes") == len(by_flow)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(small_dags(max_edges=8), st.integers(1, 3))
def test_R_matches_brute(net, r):
    edges = list(net.edges)
    for t in net.sinks:
        if r > source_capacity(net, t):
            continue
        expected = {
            frozenset(rho)
            for rho in combinations(net.order, r)
            if brute_mincut(edges, t, rho) == r
        }
        assert enumerate_R(net, t, r) == expected
