"""Estimator-style wrapper: ``fit`` builds a code for a network, ``transform``
encodes batches of messages and ``predict`` decodes received words at a sink."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import DimensionError, ParameterError
from .galois import field_arith
from .lneccode import construct, decode, min_distance, transmit
from .mincut import source_capacity
from .netgraph import Network, parse_network, read_network
from .primaries import field_size_bound


def as_network(net) -> Network:
    """Accept a Network, a path to a network file, or network text."""
    if isinstance(net, Network):
        return net
    if isinstance(net, Path):
        return read_network(net)
    if isinstance(net, str):
        if "\n" in net or net.lstrip().startswith(("node ", "edge ")):
            return parse_network(net)
        return read_network(net)
    raise ParameterError(f"cannot interpret {type(net).__name__} as a network")


class LnecEncoder(TransformerMixin, BaseEstimator):
    """Error-correcting linear network code fitted to a network topology.

    Parameters
    ----------
    rate : int
        Message length ``w``.
    beta : sequence or mapping, optional
        Per-sink redundancy to guarantee (``d_min >= beta_t + 1``).  ``None``
        asks for an MDS code (``beta_t = C_t - w``).
    field_order : int, optional
        Field size.  ``None`` uses the least prime power above the improved
        field-size bound, which always admits such a code.
    random_state : int or None
    max_attempts : int

    Attributes
    ----------
    network_, code_, beta_, bound_, min_distance_
    """

    def __init__(self, rate=1, beta=None, field_order=None, random_state=None, max_attempts=50):
        self.rate = rate
        self.beta = beta
        self.field_order = field_order
        self.random_state = random_state
        self.max_attempts = max_attempts

    def fit(self, X, y=None):
        net = as_network(X)
        if self.beta is None:
            beta = {t: source_capacity(net, t) - self.rate for t in net.sinks}
        else:
            beta = self.beta
        bound = field_size_bound(net, self.rate, beta)
        q = bound.min_prime_power if self.field_order is None else self.field_order
        self.network_ = net
        self.beta_ = bound.beta
        self.bound_ = bound
        self.field_ = field_arith(q)
        self.code_ = construct(
            net, self.rate, self.beta_, self.field_, seed=self.random_state,
            max_attempts=self.max_attempts,
        )
        self.min_distance_ = {t: min_distance(self.code_, t, "primaries") for t in net.sinks}
        return self

    def _batch(self, X, width, what):
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        if X.ndim != 2 or X.shape[1] != width:
            raise DimensionError(f"{what} must have {width} columns, got shape {X.shape}")
        return X

    def transform(self, X, Z=None):
        """Edge symbols (ancestral order) for each message row of ``X``,
        optionally with per-row error vectors ``Z``."""
        check_is_fitted(self, "code_")
        X = self._batch(X, self.rate, "messages")
        n_e = self.network_.n_edges
        Z = np.zeros((len(X), n_e), dtype=np.int64) if Z is None else self._batch(Z, n_e, "errors")
        if len(Z) != len(X):
            raise DimensionError("X and Z must have the same number of rows")
        return np.array([transmit(self.code_, x, z) for x, z in zip(X, Z)], dtype=np.int64)

    def received(self, symbols, sink):
        """Restrict edge symbols to the input edges of ``sink``."""
        check_is_fitted(self, "code_")
        symbols = self._batch(symbols, self.network_.n_edges, "edge symbols")
        cols = [self.network_.position(e) for e in self.network_.in_edges(sink)]
        return symbols[:, cols]

    def predict(self, Y, sink=None, radius=None):
        """Decode rows of ``Y`` received at ``sink`` (default: first sink).

        ``radius`` defaults to ``(d_min - 1) // 2`` at that sink.
        """
        check_is_fitted(self, "code_")
        sink = self.network_.sinks[0] if sink is None else sink
        view = self.code_.sink_view(sink)
        if radius is None:
            radius = (self.min_distance_[sink] - 1) // 2
        Y = self._batch(Y, len(view.inputs), "received words")
        return np.array([decode(view, y, radius) for y in Y], dtype=np.int64)
