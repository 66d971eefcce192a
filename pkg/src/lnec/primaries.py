"""Primary edge subsets and the field-size bounds they drive.

An edge subset is *primary* for a sink ``t`` when it is its own primary
minimum cut.  :func:`enumerate_primary` lists every size-``r`` primary subset
without testing all size-``r`` subsets of ``E``: each primary cut found rules
out every candidate lying entirely behind it.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Mapping, Sequence, Union

import numpy as np

from .exceptions import ParameterError, ScanGuardError
from .galois import least_prime_power_above
from .mincut import mincut_edges_to_node, primary_min_cut, source_capacity
from .netgraph import Network, partition_reachable, reachable_edges

__all__ = [
    "PrimaryFamily",
    "SinkBound",
    "BoundReport",
    "enumerate_primary",
    "enumerate_R",
    "count_correctable",
    "correctable_family",
    "classify_by_primary",
    "field_size_bound",
    "mds_field_size_bound",
]

EXHAUSTIVE_EDGE_LIMIT = 24
SUBSET_SCAN_LIMIT = 1_000_000


@dataclass(frozen=True)
class PrimaryFamily:
    """All size-``r`` primary edge subsets for ``sink``.

    ``members`` are in discovery order.  ``cut_calls`` counts primary-cut
    computations made while enumerating (a traversal statistic, not part of
    the result).
    """

    sink: str
    r: int
    members: tuple
    cut_calls: int = 0

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, rho):
        return frozenset(rho) in self.as_set()

    def as_set(self) -> frozenset:
        return frozenset(self.members)


def _check_sink_r(net, t, r):
    net.check_node(t)
    if r < 0:
        raise ParameterError(f"r must be nonnegative, got {r}")
    c = source_capacity(net, t)
    if r > c:
        raise ParameterError(f"r={r} exceeds the source capacity C_{t}={c}")


def enumerate_primary(net: Network, t: str, r: int) -> PrimaryFamily:
    """Size-``r`` primary edge subsets for ``t`` (the family ``A_t(r)``)."""
    _check_sink_r(net, t, r)
    key = ("A", t, r)
    if key in net._cache:
        return net._cache[key]
    members = []
    seen = set()
    blocked_masks = []
    calls = 0
    if r > 0:
        candidates = net.sort_edges(reachable_edges(net, t))
        bits = {eid: 1 << net.position(eid) for eid in candidates}
        for eta in combinations(candidates, r):
            m = 0
            for eid in eta:
                m |= bits[eid]
            # candidates behind an accepted cut have already been removed
            if any(not (m & ~b) for b in blocked_masks):
                continue
            cut = primary_min_cut(net, eta, t)
            calls += 1
            if len(cut) < r:
                continue
            assert cut not in seen
            seen.add(cut)
            members.append(cut)
            _, behind = partition_reachable(net, t, cut)
            assert cut <= behind
            blocked_masks.append(net.mask(behind))
    fam = PrimaryFamily(sink=t, r=r, members=tuple(members), cut_calls=calls)
    net._cache[key] = fam
    return fam


def enumerate_R(net: Network, t: str, r: int, *, force: bool = False) -> frozenset:
    """Brute-force ``{rho : |rho| = mincut(rho, t) = r}``."""
    _check_sink_r(net, t, r)
    if r == 0:
        raise ParameterError("R_t(0) is not defined; use r >= 1")
    if comb(net.n_edges, r) > SUBSET_SCAN_LIMIT and not force:
        raise ScanGuardError(f"{comb(net.n_edges, r)} subsets of size {r}; pass force=True (--force-scan)")
    return frozenset(
        frozenset(rho)
        for rho in combinations(net.order, r)
        if mincut_edges_to_node(net, rho, t) == r
    )


def _n_threads(threads):
    if threads is not None:
        return max(1, int(threads))
    return max(1, int(os.environ.get("LNEC_THREADS", "1") or 1))


def count_correctable(
    net: Network,
    t: str,
    r: int,
    *,
    method: str = "exhaustive",
    force: bool = False,
    threads: int = None,
) -> int:
    """Number of nonempty ``rho`` with ``mincut(rho, t) <= r``.

    ``method="exhaustive"`` scans all ``2^|E| - 1`` nonempty subsets and
    tests each against every cut of at most ``r`` edges.  ``method="classes"``
    (``r <= 1`` only) counts unions within classes sharing a primary cut.
    """
    _check_sink_r(net, t, r)
    if method == "exhaustive":
        return _count_exhaustive(net, t, r, force, _n_threads(threads))
    if method == "classes":
        return _count_by_classes(net, t, r)
    raise ParameterError(f"unknown method {method!r}")


def _separated_complements(net, t, r):
    """Bitmasks ``c`` such that ``rho`` has ``mincut(rho, t) <= r`` iff
    ``rho & c == 0`` for some ``c``."""
    full = (1 << net.n_edges) - 1
    # rho is separated from t by cut C iff rho avoids every edge still reaching t
    allowed = set()
    for k in range(r + 1):
        for cut in combinations(net.order, k):
            reach, _ = partition_reachable(net, t, cut)
            allowed.add(full & ~net.mask(reach))
    allowed = sorted(allowed, key=lambda u: -bin(u).count("1"))
    maximal = []
    for u in allowed:
        if not any(u & ~v == 0 for v in maximal):
            maximal.append(u)
    return [full & ~u for u in maximal]


def _guard_subsets(net, force):
    if net.n_edges > EXHAUSTIVE_EDGE_LIMIT and not force:
        raise ScanGuardError(f"|E|={net.n_edges} exceeds {EXHAUSTIVE_EDGE_LIMIT}; pass force=True (--force-scan)")


def correctable_family(net: Network, t: str, r: int, *, force: bool = False):
    """Yield every nonempty ``rho`` with ``mincut(rho, t) <= r``, as frozensets,
    in increasing bitmask order."""
    _check_sink_r(net, t, r)
    _guard_subsets(net, force)
    complements = _separated_complements(net, t, r)
    return (
        net.edges_of(m)
        for m in range(1, 1 << net.n_edges)
        if any(not m & c for c in complements)
    )


def _count_exhaustive(net, t, r, force, threads):
    _guard_subsets(net, force)
    full = (1 << net.n_edges) - 1
    complements = np.array(_separated_complements(net, t, r), dtype=np.int64)

    chunk = 1 << 20

    def scan(start):
        masks = np.arange(max(start, 1), min(start + chunk, full + 1), dtype=np.int64)
        hit = np.zeros(masks.shape, dtype=bool)
        for c in complements:
            hit |= (masks & c) == 0
        return int(hit.sum())

    starts = range(0, full + 1, chunk)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(scan, starts))
    return sum(scan(s) for s in starts)


def _count_by_classes(net, t, r):
    if r > 1:
        raise ParameterError("the class-based count is only available for r <= 1")
    unreachable = net.n_edges - len(reachable_edges(net, t))
    behind = (1 << unreachable) - 1
    if r == 0:
        return behind
    classes = classify_by_primary(net, t)
    per_class = sum((1 << len(members)) - 1 for key, members in classes.items() if key)
    return per_class * (1 << unreachable) + behind


def classify_by_primary(net: Network, t: str) -> dict:
    """Group the edges by the primary minimum cut of their singleton.

    Returns an ordered ``{cut: edges}`` mapping; the key of edges that cannot
    reach ``t`` is the empty frozenset.
    """
    net.check_node(t)
    classes = {}
    for eid in net.order:
        key = primary_min_cut(net, [eid], t)
        classes.setdefault(key, []).append(eid)
    return {k: tuple(v) for k, v in classes.items()}


@dataclass(frozen=True)
class SinkBound:
    sink: str
    beta: int
    capacity: int
    n_in: int
    n_primary: int
    n_R: int
    naive: int
    floor: int

    def to_dict(self):
        return {
            "beta": self.beta,
            "capacity": self.capacity,
            "in_degree": self.n_in,
            "primary": self.n_primary,
            "R": self.n_R,
            "naive": self.naive,
            "floor": self.floor,
        }


@dataclass(frozen=True)
class BoundReport:
    """Field-size bounds for a rate-``w`` code with redundancies ``beta``.

    ``improved <= r_bound <= naive``; any field of order above ``improved``
    (e.g. ``min_prime_power``) admits a code with ``d_min >= beta_t + 1``.
    """

    w: int
    per_sink: tuple
    improved: int
    r_bound: int
    naive: int
    min_prime_power: int

    @property
    def beta(self) -> dict:
        return {s.sink: s.beta for s in self.per_sink}

    def to_dict(self):
        return {
            "w": self.w,
            "per_sink": {s.sink: s.to_dict() for s in self.per_sink},
            "improved": self.improved,
            "r_bound": self.r_bound,
            "naive": self.naive,
            "min_prime_power": self.min_prime_power,
        }


def _beta_map(net, beta) -> dict:
    if isinstance(beta, Mapping):
        missing = set(net.sinks) - set(beta)
        if missing or set(beta) - set(net.sinks):
            raise ParameterError(f"beta must give one value per sink {list(net.sinks)}")
        return {t: int(beta[t]) for t in net.sinks}
    beta = list(beta)
    if len(beta) != len(net.sinks):
        raise ParameterError(
            f"beta has {len(beta)} entries but the network has {len(net.sinks)} sinks"
        )
    return {t: int(b) for t, b in zip(net.sinks, beta)}


def check_rate(net: Network, w: int) -> dict:
    """Validate the rate against every sink; return ``{t: C_t}``."""
    if w < 1:
        raise ParameterError(f"rate w must be positive, got {w}")
    caps = {t: source_capacity(net, t) for t in net.sinks}
    for t, c in caps.items():
        if c < w:
            raise ParameterError(f"rate w={w} exceeds C_{t}={c}")
    return caps


def field_size_bound(
    net: Network, w: int, beta: Union[Sequence[int], Mapping[str, int]]
) -> BoundReport:
    """Improved, comparison and naive field-size bounds.

    Every count is over nonempty error patterns, so a sink with ``beta_t = 0``
    contributes zero to each sum.
    """
    caps = check_rate(net, w)
    beta = _beta_map(net, beta)
    rows = []
    for t in net.sinks:
        b, c = beta[t], caps[t]
        if not 0 <= b <= c - w:
            raise ParameterError(f"beta_{t}={b} outside [0, C_t - w] = [0, {c - w}]")
        n_in = len(net.in_edges(t))
        if b == 0:
            rows.append(SinkBound(t, 0, c, n_in, 0, 0, 0, 0))
            continue
        rows.append(
            SinkBound(
                sink=t,
                beta=b,
                capacity=c,
                n_in=n_in,
                n_primary=len(enumerate_primary(net, t, b)),
                n_R=len(enumerate_R(net, t, b)),
                naive=comb(net.n_edges, b),
                floor=comb(n_in, b),
            )
        )
    improved = sum(s.n_primary for s in rows)
    return BoundReport(
        w=w,
        per_sink=tuple(rows),
        improved=improved,
        r_bound=sum(s.n_R for s in rows),
        naive=sum(s.naive for s in rows),
        min_prime_power=least_prime_power_above(improved),
    )


def mds_field_size_bound(net: Network, w: int) -> BoundReport:
    """Bounds with ``beta_t = C_t - w`` at every sink (MDS codes)."""
    caps = check_rate(net, w)
    return field_size_bound(net, w, {t: caps[t] - w for t in net.sinks})
