"""Unit-capacity max-flow and primary minimum cuts.

Cuts separating a node from an edge subset are computed on a gadget graph:
each edge ``e`` of the subset is split into ``e^1 -> v_e -> e^2`` and a super
node is wired to (or from) every ``v_e`` with unit-capacity super-edges.  A
unit capacity is enough because no minimum cut closest to the sink ever uses a
super-edge, which :func:`primary_min_cut` asserts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .exceptions import ParameterError
from .netgraph import Network, reachable_edges

__all__ = [
    "FlowAssignment",
    "max_flow_unit",
    "source_capacity",
    "mincut_edges_to_node",
    "mincut_node_to_edges",
    "primary_min_cut",
]

_SUPER = ("__super__",)


@dataclass(frozen=True)
class FlowAssignment:
    """A maximum flow with unit edge capacities.

    ``flow`` maps every edge id to 0 or 1; ``paths`` is an edge-disjoint path
    decomposition with ``len(paths) == value``.
    """

    value: int
    flow: dict = field(repr=False)
    paths: tuple = ()


class _FlowGraph:
    """Multigraph of unit-capacity arcs with a 0/1 flow per arc."""

    def __init__(self):
        self.tails = []
        self.heads = []
        self.labels = []
        self.out = {}
        self.inn = {}

    def add(self, u, v, label):
        i = len(self.tails)
        self.tails.append(u)
        self.heads.append(v)
        self.labels.append(label)
        self.out.setdefault(u, []).append(i)
        self.inn.setdefault(v, []).append(i)
        self.out.setdefault(v, [])
        self.inn.setdefault(u, [])

    def max_flow(self, src, dst):
        flow = [0] * len(self.tails)
        if src not in self.out or dst not in self.out:
            return flow, 0
        value = 0
        while True:
            # BFS in the residual graph; pred[x] = (arc, forward?)
            pred = {src: None}
            queue = deque([src])
            while queue and dst not in pred:
                x = queue.popleft()
                for a in self.out[x]:
                    y = self.heads[a]
                    if not flow[a] and y not in pred:
                        pred[y] = (a, True)
                        queue.append(y)
                for a in self.inn[x]:
                    y = self.tails[a]
                    if flow[a] and y not in pred:
                        pred[y] = (a, False)
                        queue.append(y)
            if dst not in pred:
                return flow, value
            x = dst
            while pred[x] is not None:
                a, fwd = pred[x]
                flow[a] = 1 if fwd else 0
                x = self.tails[a] if fwd else self.heads[a]
            value += 1

    def decompose(self, flow, src, dst):
        used = [False] * len(flow)
        paths = []
        while True:
            x, path = src, []
            while x != dst:
                nxt = next((a for a in self.out[x] if flow[a] and not used[a]), None)
                if nxt is None:
                    break
                used[nxt] = True
                path.append(nxt)
                x = self.heads[nxt]
            if x != dst:
                return paths
            paths.append(path)

    def sink_side(self, flow, dst):
        """Label set: nodes that reach ``dst`` in the residual graph."""
        S = {dst}
        work = [dst]
        while work:
            v = work.pop()
            for a in self.inn[v]:
                u = self.tails[a]
                if not flow[a] and u not in S:
                    S.add(u)
                    work.append(u)
            for a in self.out[v]:
                u = self.heads[a]
                if flow[a] and u not in S:
                    S.add(u)
                    work.append(u)
        return S


def _scan_order(net: Network, edge_order: Optional[Sequence[str]]):
    if edge_order is None:
        return net.order
    edge_order = tuple(edge_order)
    if sorted(edge_order) != sorted(net.order):
        raise ParameterError("edge_order must be a permutation of the network's edges")
    return edge_order


def max_flow_unit(net: Network, src: str, dst: str, *, edge_order=None) -> FlowAssignment:
    """Maximum flow from ``src`` to ``dst`` by shortest augmenting paths.

    Arcs are scanned in ancestral order (or ``edge_order`` when given), which
    makes the returned flow deterministic.
    """
    net.check_node(src)
    net.check_node(dst)
    if src == dst:
        raise ParameterError("source and destination must differ")
    g = _FlowGraph()
    for eid in _scan_order(net, edge_order):
        e = net.edge(eid)
        g.add(e.tail, e.head, eid)
    flow, value = g.max_flow(src, dst)
    paths = tuple(tuple(g.labels[a] for a in p) for p in g.decompose(flow, src, dst))
    return FlowAssignment(
        value=value,
        flow={g.labels[a]: flow[a] for a in range(len(flow))},
        paths=paths,
    )


def source_capacity(net: Network, t: str) -> int:
    """``C_t``: minimum cut capacity between the source and node ``t``."""
    key = ("C", t)
    if key not in net._cache:
        net._cache[key] = max_flow_unit(net, net.source, t).value
    return net._cache[key]


def _edges_to_node_gadget(net, rho, t, edge_order):
    reach = reachable_edges(net, t)
    g = _FlowGraph()
    for eid in _scan_order(net, edge_order):
        if eid not in reach:
            continue
        e = net.edge(eid)
        if eid in rho:
            mid = ("__mid__", eid)
            g.add(_SUPER, mid, None)
            g.add(e.tail, mid, eid)
            g.add(mid, e.head, eid)
        else:
            g.add(e.tail, e.head, eid)
    return g


def mincut_edges_to_node(net: Network, rho: Iterable[str], t: str, *, edge_order=None) -> int:
    """``mincut(rho, t)``: fewest edges cutting every path from ``rho`` to ``t``."""
    net.check_node(t)
    rho = net.check_edges(rho)
    if not rho & reachable_edges(net, t):
        return 0
    g = _edges_to_node_gadget(net, rho, t, edge_order)
    return g.max_flow(_SUPER, t)[1]


def mincut_node_to_edges(net: Network, u: str, xi: Iterable[str], *, edge_order=None) -> int:
    """Minimum cut capacity separating the edge subset ``xi`` from node ``u``."""
    net.check_node(u)
    xi = net.check_edges(xi)
    if not xi:
        return 0
    g = _FlowGraph()
    for eid in _scan_order(net, edge_order):
        e = net.edge(eid)
        if eid in xi:
            mid = ("__mid__", eid)
            g.add(e.tail, mid, eid)
            g.add(mid, e.head, eid)
            g.add(mid, _SUPER, None)
        else:
            g.add(e.tail, e.head, eid)
    return g.max_flow(u, _SUPER)[1]


def primary_min_cut(net: Network, rho: Iterable[str], t: str, *, edge_order=None) -> frozenset:
    """The minimum cut separating ``t`` from ``rho`` that lies closest to ``t``.

    Returns the empty set when no edge of ``rho`` reaches ``t``.
    """
    net.check_node(t)
    rho = net.check_edges(rho)
    if not rho & reachable_edges(net, t):
        return frozenset()
    g = _edges_to_node_gadget(net, rho, t, edge_order)
    flow, value = g.max_flow(_SUPER, t)
    S = g.sink_side(flow, t)
    arcs = [a for a in range(len(flow)) if g.tails[a] not in S and g.heads[a] in S]
    labels = [g.labels[a] for a in arcs]
    assert None not in labels, "super-edge in primary minimum cut"
    cut = frozenset(labels)
    assert len(cut) == len(arcs) == value
    return cut
