"""Input validation helpers for the estimator API."""

from __future__ import annotations

import numpy as np

from .errors import NonFiniteWeightError, SelfLoopError, TooFewNodesError
from .network import DirectedWeightedNetwork

__all__ = ["check_weight_matrix", "as_network"]


def check_weight_matrix(X, min_nodes: int = 2) -> np.ndarray:
    """Validate an adjacency/weight matrix and return it as float64.

    Accepts anything array-like and enforces the invariants the
    estimators rely on: square, at least ``min_nodes`` rows, all entries
    finite, and an exactly zero diagonal (self-loops carry no meaning for
    pairwise edge covariances and are rejected rather than ignored).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square weight matrix, got shape {X.shape}")
    if X.shape[0] < min_nodes:
        raise TooFewNodesError(f"need at least {min_nodes} nodes, got {X.shape[0]}")
    if not np.isfinite(X).all():
        raise NonFiniteWeightError("weight matrix contains NaN or infinite entries")
    if np.any(np.diagonal(X) != 0.0):
        raise SelfLoopError("diagonal must be exactly zero (no self-loops)")
    return X


def as_network(X) -> DirectedWeightedNetwork:
    """Coerce a matrix or network object to :class:`DirectedWeightedNetwork`."""
    if isinstance(X, DirectedWeightedNetwork):
        return X
    return DirectedWeightedNetwork(check_weight_matrix(X))
