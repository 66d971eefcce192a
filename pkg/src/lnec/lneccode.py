"""Linear network error correction codes on a known acyclic network.

A code is stored as its local encoding kernels.  The extended global kernel
of edge ``e`` is a column of length ``w + |E|``: rows ``d'1 .. d'w`` carry the
message, then one row ``e'`` per real edge (in ancestral order) carries the
error injected on that edge.  Imaginary edges are never added to the graph;
each error row enters the recursion as the ``+1`` on the diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional

import numpy as np

from .exceptions import (
    AmbiguousDecodingError,
    ConstructionError,
    DimensionError,
    NetworkFormatError,
    NoSolutionError,
    NotDecodableError,
    ParameterError,
    ScanGuardError,
    ValidationError,
)
from .galois import GF, field_arith, rank, rref, solve_left, trivial_intersection
from .mincut import primary_min_cut, source_capacity
from .netgraph import Network, reachable_edges
from .primaries import _beta_map, check_rate, correctable_family, enumerate_primary

__all__ = [
    "SCHEMA_VERSION",
    "LnecCode",
    "SinkView",
    "ErrorVector",
    "derive_kernels",
    "transmit",
    "sink_view",
    "distance",
    "min_distance",
    "is_decodable",
    "is_mds",
    "construct",
    "decode",
    "EquivalenceCheck",
    "check_equivalence",
    "verify_equivalence",
    "path_gain_sum",
    "verify_path_sums",
]

SCHEMA_VERSION = 1
SCAN_EDGE_LIMIT = 16
PATH_LIMIT = 100_000


def source_labels(w: int) -> tuple:
    return tuple(f"d'{i}" for i in range(1, w + 1))


class LnecCode:
    """Rate-``w`` code over ``field`` given by local kernels.

    Parameters
    ----------
    network : Network
    w : int
        Number of message symbols.
    field : GF or int
    local_kernels : mapping node -> 2-D array
        For the source, a ``w x |Out(s)|`` matrix; for every other non-sink
        node ``v`` a ``|In(v)| x |Out(v)|`` matrix.  Rows and columns follow
        the ancestral order of the edges.  Nodes without output edges may be
        omitted.
    """

    def __init__(self, network: Network, w: int, field, local_kernels: Mapping):
        if not isinstance(field, GF):
            field = field_arith(int(field))
        if w < 1:
            raise ParameterError(f"rate w must be positive, got {w}")
        self.network = network
        self.w = int(w)
        self.field = field
        locals_ = {}
        for v in network.nodes:
            if v in network.sinks:
                if v in local_kernels:
                    raise DimensionError(f"sink {v!r} has no local kernel")
                continue
            n_in = self.w if v == network.source else len(network.in_edges(v))
            shape = (n_in, len(network.out_edges(v)))
            K = local_kernels.get(v)
            K = np.zeros(shape, dtype=np.int64) if K is None else field.asarray(K)
            if K.shape != shape:
                raise DimensionError(f"local kernel at {v!r} has shape {K.shape}, expected {shape}")
            K.setflags(write=False)
            locals_[v] = K
        unknown = set(local_kernels) - set(network.nodes)
        if unknown:
            raise DimensionError(f"local kernels for unknown nodes {sorted(unknown)}")
        self.local_kernels = locals_
        self.kernels = self._derive()
        self.kernels.setflags(write=False)
        self._views = {}
        self._solvers = {}

    def _derive(self):
        net, F, w = self.network, self.field, self.w
        K = np.zeros((w + net.n_edges, net.n_edges), dtype=np.int64)
        for j, eid in enumerate(net.order):
            v = net.tail(eid)
            c = net.out_edges(v).index(eid)
            coeffs = self.local_kernels[v][:, c]
            if v == net.source:
                K[:w, j] = coeffs
            else:
                col = np.zeros(K.shape[0], dtype=np.int64)
                for d, k in zip(net.in_edges(v), coeffs):
                    if k:
                        col = F.add(col, F.mul(k, K[:, net.position(d)]))
                K[:, j] = col
            K[w + j, j] = F.add(K[w + j, j], 1)
        return K

    # -- accessors ---------------------------------------------------------
    @property
    def row_labels(self) -> tuple:
        return source_labels(self.w) + tuple(f"{e}'" for e in self.network.order)

    def kernel(self, eid: str) -> np.ndarray:
        """Extended global kernel of ``eid`` (length ``w + |E|``)."""
        return self.kernels[:, self.network.position(eid)]

    def global_kernel(self, eid: str) -> np.ndarray:
        return self.kernel(eid)[: self.w]

    def error_kernel(self, eid: str) -> np.ndarray:
        return self.kernel(eid)[self.w :]

    def local_coefficient(self, d: str, e: str) -> int:
        """``k_{d,e}`` for real edges with ``head(d) == tail(e)``."""
        net = self.network
        v = net.tail(e)
        if net.head(d) != v:
            raise ParameterError(f"{d!r} and {e!r} are not adjacent")
        return int(self.local_kernels[v][net.in_edges(v).index(d), net.out_edges(v).index(e)])

    def sink_view(self, t: str) -> "SinkView":
        if t not in self._views:
            self._views[t] = sink_view(self, t)
        return self._views[t]

    # -- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        net = self.network
        kernels = {}
        for v, K in self.local_kernels.items():
            if not K.shape[1]:
                continue
            rows = source_labels(self.w) if v == net.source else net.in_edges(v)
            kernels[v] = {
                "rows": list(rows),
                "cols": list(net.out_edges(v)),
                "matrix": K.tolist(),
            }
        return {
            "schema": SCHEMA_VERSION,
            "field": self.field.to_dict(),
            "w": self.w,
            "network": net.to_dict(),
            "local_kernels": kernels,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: Mapping) -> "LnecCode":
        if d.get("schema") != SCHEMA_VERSION:
            raise ValidationError(f"unsupported code schema {d.get('schema')!r}")
        try:
            fspec, w = d["field"], int(d["w"])
            net = Network.from_dict(d["network"])
            raw = d["local_kernels"]
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkFormatError(f"malformed code object: {exc}") from None
        field = field_arith(int(fspec["order"]))
        if list(fspec.get("modulus", field.modulus)) != list(field.modulus):
            raise ValidationError("field modulus does not match the built-in table")
        locals_ = {}
        for v, entry in raw.items():
            net.check_node(v)
            rows = source_labels(w) if v == net.source else net.in_edges(v)
            cols = net.out_edges(v)
            if set(entry["rows"]) != set(rows) or set(entry["cols"]) != set(cols):
                raise DimensionError(f"local kernel labels at {v!r} do not match the network")
            M = np.asarray(entry["matrix"], dtype=np.int64)
            if M.shape != (len(rows), len(cols)):
                raise DimensionError(f"local kernel at {v!r} has shape {M.shape}")
            ri = [entry["rows"].index(x) for x in rows]
            ci = [entry["cols"].index(x) for x in cols]
            locals_[v] = M[np.ix_(ri, ci)]
        code = cls(net, w, field, locals_)
        for t in net.sinks:
            code.sink_view(t)  # re-asserts the identity-submatrix invariant
        return code

    @classmethod
    def from_json(cls, text: str) -> "LnecCode":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from None
        return cls.from_dict(d)

    def __repr__(self):
        return f"LnecCode(w={self.w}, field={self.field!r}, network={self.network!r})"


def derive_kernels(net: Network, w: int, field, local_kernels: Mapping) -> LnecCode:
    """Build a code from local kernels and compute all extended global kernels."""
    return LnecCode(net, w, field, local_kernels)


@dataclass(frozen=True)
class ErrorVector:
    """Errors injected on the real edges, indexed in ancestral order."""

    values: np.ndarray
    support: frozenset

    @classmethod
    def from_array(cls, net: Network, z) -> "ErrorVector":
        z = np.asarray(z, dtype=np.int64)
        if z.shape != (net.n_edges,):
            raise DimensionError(f"error vector must have length {net.n_edges}")
        return cls(z, frozenset(net.order[i] for i in np.nonzero(z)[0]))

    @classmethod
    def from_mapping(cls, net: Network, errors: Mapping[str, int]) -> "ErrorVector":
        z = np.zeros(net.n_edges, dtype=np.int64)
        for eid, val in errors.items():
            z[net.position(eid)] = val
        return cls.from_array(net, z)

    def matches(self, rho: Iterable[str]) -> bool:
        return self.support <= frozenset(rho)


def _as_error(code, z):
    if z is None:
        return np.zeros(code.network.n_edges, dtype=np.int64)
    if isinstance(z, ErrorVector):
        z = z.values
    z = code.field.asarray(z)
    if z.shape != (code.network.n_edges,):
        raise DimensionError(f"error vector must have length {code.network.n_edges}")
    return z


def _as_message(code, x):
    x = code.field.asarray(x)
    if x.shape != (code.w,):
        raise DimensionError(f"message must have length {code.w}")
    return x


def transmit(code: LnecCode, x, z=None) -> np.ndarray:
    """Symbols carried by every edge (ancestral order) for message ``x`` and
    error vector ``z``, evaluated hop by hop."""
    net, F = code.network, code.field
    x = _as_message(code, x)
    z = _as_error(code, z)
    y = np.zeros(net.n_edges, dtype=np.int64)
    for j, eid in enumerate(net.order):
        v = net.tail(eid)
        coeffs = code.local_kernels[v][:, net.out_edges(v).index(eid)]
        inputs = x if v == net.source else y[[net.position(d) for d in net.in_edges(v)]]
        acc = 0
        for k, s in zip(coeffs, inputs):
            acc = F.add(acc, F.mul(k, s))
        y[j] = F.add(acc, z[j])
    assert np.array_equal(y, F.matmul(np.concatenate([x, z]), code.kernels))
    return y


@dataclass(frozen=True)
class SinkView:
    """Decoding data at sink ``t``.

    ``F`` (``w x |In(t)|``) and ``G`` (``|E| x |In(t)|``) split the stacked
    extended kernels of the input edges; columns follow ``inputs``.
    """

    code: LnecCode
    sink: str
    inputs: tuple
    F: np.ndarray
    G: np.ndarray

    @property
    def field(self) -> GF:
        return self.code.field

    @property
    def F_tilde(self) -> np.ndarray:
        return np.vstack([self.F, self.G])

    def row(self, label: str) -> np.ndarray:
        """Row of ``F_tilde`` for an imaginary edge label (``d'i`` or ``e'``)."""
        return self.F_tilde[self.code.row_labels.index(label)]

    def error_rows(self, rho: Iterable[str]) -> np.ndarray:
        net = self.code.network
        idx = [net.position(e) for e in net.sort_edges(net.check_edges(rho))]
        return self.G[idx]

    def received(self, x, z=None) -> np.ndarray:
        """``x F + z G``."""
        x = _as_message(self.code, x)
        z = _as_error(self.code, z)
        return self.field.matmul(np.concatenate([x, z]), self.F_tilde)


def sink_view(code: LnecCode, t: str) -> SinkView:
    net = code.network
    net.check_node(t)
    if t not in net.sinks:
        raise ParameterError(f"{t!r} is not a sink")
    inputs = net.in_edges(t)
    cols = [net.position(e) for e in inputs]
    Ft = code.kernels[:, cols]
    F, G = Ft[: code.w], Ft[code.w :]
    assert np.array_equal(G[cols], np.eye(len(cols), dtype=np.int64)), "G_t identity block"
    return SinkView(code=code, sink=t, inputs=inputs, F=F, G=G)


def _check_word(view, y):
    y = view.field.asarray(y)
    if y.shape != (len(view.inputs),):
        raise DimensionError(f"received word must have length {len(view.inputs)}")
    return y


def _useful_edges(view):
    # edges whose error row is zero never enlarge an error space
    return [e for e in view.code.network.order if view.G[view.code.network.position(e)].any()]


def distance(view: SinkView, y, y2) -> int:
    """Fewest edges whose errors can turn ``y2`` into ``y`` at this sink."""
    F = view.field
    diff = F.sub(_check_word(view, y), _check_word(view, y2))
    if not diff.any():
        return 0
    edges = _useful_edges(view)
    for k in range(1, len(edges) + 1):
        for rho in combinations(edges, k):
            if solve_left(F, view.error_rows(rho), diff) is not None:
                return k
    raise AssertionError("identity block guarantees a solution")  # pragma: no cover


def _decodable_at(view) -> bool:
    return rank(view.field, view.F) == view.code.w


def _meets(view, rho) -> bool:
    """True when the message space and the error space of ``rho`` share a nonzero vector."""
    return not trivial_intersection(view.field, view.F, view.error_rows(rho))


def min_distance(code: LnecCode, t: str, method: str = "exhaustive") -> int:
    """Minimum distance at sink ``t``.

    ``"exhaustive"`` scans all edge subsets by size; ``"primaries"`` scans
    only primary edge subsets of each size.  Both return the same value.
    """
    view = code.sink_view(t)
    if not _decodable_at(view):
        raise NotDecodableError(f"code is not decodable at {t!r}")
    if method == "exhaustive":
        edges = _useful_edges(view)
        for k in range(1, len(edges) + 1):
            if any(_meets(view, rho) for rho in combinations(edges, k)):
                return k
    elif method == "primaries":
        net = code.network
        for k in range(1, source_capacity(net, t) + 1):
            if any(_meets(view, rho) for rho in enumerate_primary(net, t, k)):
                return k
    else:
        raise ParameterError(f"unknown method {method!r}")
    raise AssertionError("input-edge rows span the whole space")  # pragma: no cover


def is_decodable(code: LnecCode) -> dict:
    return {t: _decodable_at(code.sink_view(t)) for t in code.network.sinks}


def is_mds(code: LnecCode) -> bool:
    """Decodable everywhere and meeting ``d_min = C_t - w + 1`` at every sink."""
    net = code.network
    if not all(is_decodable(code).values()):
        return False
    return all(
        min_distance(code, t, "primaries") == source_capacity(net, t) - code.w + 1
        for t in net.sinks
    )


def _random_locals(net, w, field, rng):
    out = {}
    for v in net.nodes:
        if v in net.sinks:
            continue
        n_in = w if v == net.source else len(net.in_edges(v))
        out[v] = field.random((n_in, len(net.out_edges(v))), rng)
    return out


def construct(
    net: Network,
    w: int,
    beta,
    field,
    seed=None,
    max_attempts: int = 50,
) -> LnecCode:
    """Sample local kernels until ``d_min >= beta_t + 1`` holds at every sink.

    Each candidate is accepted only if ``F_t`` has full rank and its message
    space meets no error space of a size-``beta_t`` primary subset.

    Raises
    ------
    ConstructionError
        After ``max_attempts`` rejected candidates.
    """
    caps = check_rate(net, w)
    beta = _beta_map(net, beta)
    for t in net.sinks:
        if not 0 <= beta[t] <= caps[t] - w:
            raise ParameterError(f"beta_{t}={beta[t]} outside [0, {caps[t] - w}]")
    if max_attempts < 1:
        raise ParameterError("max_attempts must be positive")
    field = field if isinstance(field, GF) else field_arith(int(field))
    families = {t: enumerate_primary(net, t, beta[t]) for t in net.sinks}
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        code = LnecCode(net, w, field, _random_locals(net, w, field, rng))
        if all(
            _decodable_at(code.sink_view(t))
            and not any(_meets(code.sink_view(t), rho) for rho in families[t])
            for t in net.sinks
        ):
            return code
    raise ConstructionError(
        f"no acceptable code over GF({field.order}) in {max_attempts} attempts",
        attempts=max_attempts,
    )


class _LeftSolver:
    """Solves ``x @ M == y`` for many ``y`` with one elimination.

    Row-reducing ``[M^T | I]`` gives ``E`` with ``E @ M^T`` in reduced form;
    ``y`` is consistent iff ``E @ y`` vanishes past the rank.
    """

    def __init__(self, F, M):
        m, n = M.shape
        R, pivots = rref(F, np.hstack([M.T, np.eye(n, dtype=np.int64)]))
        self.F = F
        self.m = m
        self.pivots = [c for c in pivots if c < m]
        self.E = R[:, m:]

    def solve(self, y):
        v = self.F.matmul(self.E, y)
        k = len(self.pivots)
        if v[k:].any():
            return None
        x = np.zeros(self.m, dtype=np.int64)
        x[self.pivots] = v[:k]
        return x


def _solver(view, rho):
    key = (view.sink, rho)
    cache = view.code._solvers
    if key not in cache:
        M = np.vstack([view.F, view.error_rows(rho)])
        cache[key] = (_LeftSolver(view.field, M), bool(rho) and _meets(view, rho))
    return cache[key]


def decode(view: SinkView, y, radius: int):
    """Minimum-distance decoding of a received word.

    Error patterns are tried by increasing minimum-cut size ``0..radius``,
    each size represented by its primary edge subsets.  Within
    ``radius <= (d_min - 1) // 2`` this recovers the message for every error
    whose support has ``mincut(support, t) <= radius``.

    Raises
    ------
    NoSolutionError
        No pattern within the radius explains ``y``.
    AmbiguousDecodingError
        Two different messages explain ``y`` equally well.
    """
    code = view.code
    y = _check_word(view, y)
    if not _decodable_at(view):
        raise NotDecodableError(f"code is not decodable at {view.sink!r}")
    cap = source_capacity(code.network, view.sink)
    if not 0 <= radius <= cap:
        raise ParameterError(f"radius must lie in [0, {cap}]")
    for k in range(radius + 1):
        patterns = [frozenset()] if k == 0 else enumerate_primary(code.network, view.sink, k)
        found = []
        for rho in patterns:
            solver, meets = _solver(view, rho)
            sol = solver.solve(y)
            if sol is None:
                continue
            if meets:
                raise AmbiguousDecodingError(
                    f"pattern {sorted(rho)} leaves the message undetermined"
                )
            found.append(sol[: code.w])
        if found:
            first = found[0]
            if any(not np.array_equal(first, other) for other in found[1:]):
                raise AmbiguousDecodingError(f"several messages at error size {k}")
            return first
    raise NoSolutionError(f"no error pattern with minimum cut <= {radius} explains the word")


@dataclass(frozen=True)
class EquivalenceCheck:
    """Trivial-intersection condition over three families at one sink.

    ``primary``, ``hamming`` and ``correctable`` hold when the message space
    meets no error space of a pattern in ``A_t(r)``, ``H(r)`` and
    ``{rho : mincut(rho, t) <= r}`` respectively; ``containment`` holds when
    every pattern's error space lies inside that of its primary minimum cut.
    """

    sink: str
    r: int
    primary: bool
    hamming: bool
    correctable: bool
    containment: bool

    @property
    def holds(self) -> bool:
        return self.primary == self.hamming == self.correctable and self.containment


def check_equivalence(code: LnecCode, t: str, r: int, *, force: bool = False) -> EquivalenceCheck:
    net = code.network
    view = code.sink_view(t)
    cap = source_capacity(net, t)
    if not 0 <= r <= cap - code.w:
        raise ParameterError(f"r must lie in [0, C_t - w] = [0, {cap - code.w}]")
    if r == 0:
        return EquivalenceCheck(t, 0, True, True, True, True)
    if net.n_edges > SCAN_EDGE_LIMIT and not force:
        raise ScanGuardError(
            f"|E|={net.n_edges} exceeds {SCAN_EDGE_LIMIT}; pass force=True (--force-scan)"
        )
    field = code.field
    primary = not any(_meets(view, rho) for rho in enumerate_primary(net, t, r))
    hamming = not any(
        _meets(view, rho) for k in range(1, r + 1) for rho in combinations(net.order, k)
    )
    correctable = True
    containment = True
    for rho in correctable_family(net, t, r, force=force):
        if correctable and _meets(view, rho):
            correctable = False
        eta = primary_min_cut(net, rho, t)
        G_eta = view.error_rows(eta)
        if rank(field, G_eta) != rank(field, np.vstack([G_eta, view.error_rows(rho)])):
            containment = False
    return EquivalenceCheck(t, r, primary, hamming, correctable, containment)


def verify_equivalence(code: LnecCode, t: str, r: int, *, force: bool = False) -> bool:
    """True when the three pattern families agree and every containment holds."""
    return check_equivalence(code, t, r, force=force).holds


def _paths(net, e, e_hat, limit):
    out = []
    stack = [(e,)]
    while stack:
        path = stack.pop()
        last = path[-1]
        if last == e_hat:
            out.append(path)
            if len(out) > limit:
                raise ScanGuardError(f"more than {limit} paths from {e!r} to {e_hat!r}")
            continue
        for nxt in net.out_edges(net.head(last)):
            stack.append(path + (nxt,))
    return out


def path_gain_sum(code: LnecCode, e: str, e_hat: str, limit: int = PATH_LIMIT) -> int:
    """Sum over all directed paths from ``e`` to ``e_hat`` of the product of
    local coefficients along the path (an empty product for ``e == e_hat``)."""
    F = code.field
    total = 0
    for path in _paths(code.network, e, e_hat, limit):
        gain = 1
        for d, nxt in zip(path, path[1:]):
            gain = F.mul(gain, code.local_coefficient(d, nxt))
        total = F.add(total, gain)
    return int(total)


def verify_path_sums(code: LnecCode, e: str, e_hat: str, limit: int = PATH_LIMIT) -> bool:
    """Compare the path-gain sum with the stored kernel entry ``f_{e_hat}(e')``."""
    stored = int(code.kernel(e_hat)[code.w + code.network.position(e)])
    return path_gain_sum(code, e, e_hat, limit) == stored
