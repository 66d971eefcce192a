"""Directed acyclic multigraphs with a single source and a set of sinks.

Edges are identified by explicit string ids, so parallel edges are
unambiguous.  Every edge set handed back by this package is a ``frozenset`` of
edge ids; :meth:`Network.sort_edges` gives the ancestral-order view.

Text format (UTF-8, line oriented, ``#`` starts a comment)::

    node s source
    node a
    node t sink
    edge e1 s a
    edge e2 a t
"""

from __future__ import annotations

import heapq
from pathlib import Path
from typing import Iterable, NamedTuple

from .exceptions import (
    CycleError,
    DuplicateIdError,
    NetworkFormatError,
    SinkOutputError,
    SourceInputError,
    UnknownEdgeError,
    UnknownNodeError,
)

__all__ = [
    "Edge",
    "Network",
    "parse_network",
    "read_network",
    "ancestral_order",
    "reachable_edges",
    "partition_reachable",
]


class Edge(NamedTuple):
    id: str
    tail: str
    head: str


class Network:
    """Immutable acyclic multigraph with one source and at least one sink.

    Parameters
    ----------
    nodes : iterable of str
        Node ids in declaration order.
    edges : iterable of (id, tail, head)
        Edges in declaration order.
    source : str
    sinks : iterable of str

    Raises
    ------
    DuplicateIdError, UnknownNodeError, CycleError, SourceInputError,
    SinkOutputError, NetworkFormatError
    """

    __slots__ = (
        "_nodes",
        "_edges",
        "_source",
        "_sinks",
        "_by_id",
        "_in",
        "_out",
        "_topo",
        "_order",
        "_pos",
        "_cache",
    )

    def __init__(self, nodes, edges, source, sinks):
        nodes = tuple(nodes)
        edges = tuple(Edge(*e) for e in edges)
        sinks = tuple(sinks)

        seen = set()
        for v in nodes:
            if v in seen:
                raise DuplicateIdError(f"duplicate node id {v!r}")
            seen.add(v)
        by_id = {}
        for e in edges:
            if e.id in by_id:
                raise DuplicateIdError(f"duplicate edge id {e.id!r}")
            by_id[e.id] = e
            for v in (e.tail, e.head):
                if v not in seen:
                    raise UnknownNodeError(f"edge {e.id!r} references unknown node {v!r}")
        if source not in seen:
            raise UnknownNodeError(f"unknown source node {source!r}")
        if not sinks:
            raise NetworkFormatError("at least one sink node is required")
        if len(set(sinks)) != len(sinks):
            raise DuplicateIdError("sink listed twice")
        for t in sinks:
            if t not in seen:
                raise UnknownNodeError(f"unknown sink node {t!r}")
            if t == source:
                raise NetworkFormatError(f"node {t!r} cannot be both source and sink")

        in_map = {v: [] for v in nodes}
        out_map = {v: [] for v in nodes}
        for e in edges:
            out_map[e.tail].append(e.id)
            in_map[e.head].append(e.id)

        topo = _kahn(nodes, edges)
        if in_map[source]:
            raise SourceInputError(f"source {source!r} has input edges {in_map[source]}")
        for t in sinks:
            if out_map[t]:
                raise SinkOutputError(f"sink {t!r} has output edges {out_map[t]}")

        rank = {v: i for i, v in enumerate(topo)}
        decl = {e.id: i for i, e in enumerate(edges)}
        order = tuple(sorted(by_id, key=lambda eid: (rank[by_id[eid].tail], decl[eid])))
        pos = {eid: i for i, eid in enumerate(order)}

        self._nodes = nodes
        self._edges = edges
        self._source = source
        self._sinks = sinks
        self._by_id = by_id
        self._in = {v: tuple(sorted(ids, key=pos.__getitem__)) for v, ids in in_map.items()}
        self._out = {v: tuple(sorted(ids, key=pos.__getitem__)) for v, ids in out_map.items()}
        self._topo = topo
        self._order = order
        self._pos = pos
        self._cache = {}

    # -- basic accessors -------------------------------------------------
    @property
    def nodes(self) -> tuple:
        return self._nodes

    @property
    def edges(self) -> tuple:
        """Edge records in declaration order."""
        return self._edges

    @property
    def source(self) -> str:
        return self._source

    @property
    def sinks(self) -> tuple:
        return self._sinks

    @property
    def order(self) -> tuple:
        """Edge ids in ancestral order."""
        return self._order

    @property
    def topological_nodes(self) -> tuple:
        return self._topo

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def edge(self, eid: str) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise UnknownEdgeError(f"unknown edge {eid!r}") from None

    def tail(self, eid: str) -> str:
        return self.edge(eid).tail

    def head(self, eid: str) -> str:
        return self.edge(eid).head

    def in_edges(self, v: str) -> tuple:
        self.check_node(v)
        return self._in[v]

    def out_edges(self, v: str) -> tuple:
        self.check_node(v)
        return self._out[v]

    def position(self, eid: str) -> int:
        """Index of ``eid`` in the ancestral order."""
        try:
            return self._pos[eid]
        except KeyError:
            raise UnknownEdgeError(f"unknown edge {eid!r}") from None

    def has_node(self, v) -> bool:
        return v in self._in

    def check_node(self, v):
        if v not in self._in:
            raise UnknownNodeError(f"unknown node {v!r}")

    def check_edges(self, edges: Iterable[str]) -> frozenset:
        edges = frozenset(edges)
        for eid in edges:
            if eid not in self._by_id:
                raise UnknownEdgeError(f"unknown edge {eid!r}")
        return edges

    def sort_edges(self, edges: Iterable[str]) -> tuple:
        """Return ``edges`` as a tuple in ancestral order."""
        return tuple(sorted(edges, key=self.position))

    def mask(self, edges: Iterable[str]) -> int:
        """Bitmask over ancestral positions."""
        m = 0
        for eid in edges:
            m |= 1 << self.position(eid)
        return m

    def edges_of(self, mask: int) -> frozenset:
        return frozenset(eid for i, eid in enumerate(self._order) if mask >> i & 1)

    # -- serialization ---------------------------------------------------
    def to_text(self) -> str:
        lines = []
        for v in self._nodes:
            role = " source" if v == self._source else (" sink" if v in self._sinks else "")
            lines.append(f"node {v}{role}")
        lines.extend(f"edge {e.id} {e.tail} {e.head}" for e in self._edges)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "nodes": list(self._nodes),
            "edges": [list(e) for e in self._edges],
            "source": self._source,
            "sinks": list(self._sinks),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Network":
        try:
            return cls(d["nodes"], d["edges"], d["source"], d["sinks"])
        except (KeyError, TypeError) as exc:
            raise NetworkFormatError(f"malformed network object: {exc}") from None

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and self._edges == other._edges
            and self._source == other._source
            and self._sinks == other._sinks
        )

    def __hash__(self):
        return hash((self._nodes, self._edges, self._source, self._sinks))

    def __repr__(self):
        return (
            f"Network(|V|={len(self._nodes)}, |E|={len(self._edges)}, "
            f"source={self._source!r}, sinks={list(self._sinks)!r})"
        )


def _kahn(nodes, edges):
    """Topological node order; ties go to the earliest declared node."""
    decl = {v: i for i, v in enumerate(nodes)}
    indeg = {v: 0 for v in nodes}
    succ = {v: [] for v in nodes}
    for e in edges:
        indeg[e.head] += 1
        succ[e.tail].append(e.head)
    heap = [decl[v] for v in nodes if indeg[v] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        v = nodes[heapq.heappop(heap)]
        out.append(v)
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(heap, decl[u])
    if len(out) != len(nodes):
        stuck = [v for v in nodes if indeg[v] > 0]
        raise CycleError(f"directed cycle through nodes {stuck}")
    return tuple(out)


def parse_network(text: str) -> Network:
    """Parse the line-oriented network description."""
    nodes, edges, sources, sinks = [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "node":
            if len(parts) not in (2, 3):
                raise NetworkFormatError(f"line {lineno}: expected 'node <id> [source|sink]'")
            nodes.append(parts[1])
            if len(parts) == 3:
                if parts[2] == "source":
                    sources.append(parts[1])
                elif parts[2] == "sink":
                    sinks.append(parts[1])
                else:
                    raise NetworkFormatError(f"line {lineno}: unknown node role {parts[2]!r}")
        elif kind == "edge":
            if len(parts) != 4:
                raise NetworkFormatError(f"line {lineno}: expected 'edge <id> <tail> <head>'")
            edges.append(tuple(parts[1:]))
        else:
            raise NetworkFormatError(f"line {lineno}: unknown directive {kind!r}")
    if len(sources) != 1:
        raise NetworkFormatError(f"exactly one source node required, found {len(sources)}")
    return Network(nodes, edges, sources[0], sinks)


def read_network(path) -> Network:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def ancestral_order(net: Network) -> tuple:
    """Edges sorted by (topological index of tail, declaration index)."""
    return net.order


def reachable_edges(net: Network, t: str) -> frozenset:
    """All edges with a directed path to node ``t`` (``E_t``)."""
    net.check_node(t)
    key = ("reach", t)
    if key not in net._cache:
        net._cache[key] = _backward_search(net, t, frozenset())
    return net._cache[key]


def partition_reachable(net: Network, t: str, rho: Iterable[str]) -> tuple:
    """Split ``E_t`` into edges that still reach ``t`` once ``rho`` is deleted
    and the rest.

    Returns
    -------
    (reach, blocked) : tuple of frozenset
        ``reach`` is ``E_{t,rho}``; ``blocked = E_t - reach``.
    """
    net.check_node(t)
    rho = net.check_edges(rho)
    reach = _backward_search(net, t, rho)
    return reach, reachable_edges(net, t) - reach


def _backward_search(net, t, removed):
    # marked nodes can reach t; frontier holds marked nodes with unscanned inputs
    marked = {t}
    frontier = [t]
    found = set()
    while frontier:
        v = frontier.pop()
        for eid in net._in[v]:
            if eid in removed:
                continue
            found.add(eid)
            u = net._by_id[eid].tail
            if u not in marked:
                marked.add(u)
                frontier.append(u)
    return frozenset(found)
