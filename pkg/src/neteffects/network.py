"""Network data model: dense weighted directed adjacency with zero diagonal.

The adjacency matrix is stored densely because the effect estimators
integrate over all ordered node pairs; a zero weight is data, not absence.
Networks are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateEdgeError,
    NonFiniteWeightError,
    SelfLoopError,
    TooFewNodesError,
)

__all__ = [
    "DirectedWeightedNetwork",
    "EdgeRecord",
    "EffectKind",
    "NodeSummaries",
    "from_edge_list",
    "read_edge_list",
    "edge_records",
    "row_col_summaries",
]


class EffectKind(enum.Enum):
    """Which pairwise edge covariance is under consideration.

    Each effect is the covariance of two edge weights sharing at least one
    endpoint (i, j, k distinct):

    * ``RECIPROCITY``     -- Cov(e[i,j], e[j,i]); a mutual dyad.
    * ``SAME_SENDER``     -- Cov(e[i,j], e[i,k]); two edges out of one node.
    * ``SAME_RECEIVER``   -- Cov(e[i,j], e[k,j]); two edges into one node.
    * ``SENDER_RECEIVER`` -- Cov(e[i,j], e[j,k]); a directed two-path.
    """

    RECIPROCITY = "reciprocity"
    SAME_SENDER = "same_sender"
    SAME_RECEIVER = "same_receiver"
    SENDER_RECEIVER = "sender_receiver"

    @classmethod
    def parse(cls, name: str) -> "EffectKind":
        """Accept canonical names or the CLI short forms eta2..eta5."""
        aliases = {
            "eta2": cls.RECIPROCITY,
            "eta3": cls.SAME_SENDER,
            "eta4": cls.SAME_RECEIVER,
            "eta5": cls.SENDER_RECEIVER,
        }
        key = name.strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            valid = sorted(e.value for e in cls) + sorted(aliases)
            raise ValueError(f"unknown effect {name!r}; expected one of {valid}") from None

    @property
    def short_name(self) -> str:
        """The compact eta2..eta5 form used in CLI output."""
        return {
            EffectKind.RECIPROCITY: "eta2",
            EffectKind.SAME_SENDER: "eta3",
            EffectKind.SAME_RECEIVER: "eta4",
            EffectKind.SENDER_RECEIVER: "eta5",
        }[self]


@dataclass(frozen=True)
class EdgeRecord:
    """One directed weighted edge, by node label."""

    source: str
    target: str
    weight: float


@dataclass(frozen=True, eq=False)
class DirectedWeightedNetwork:
    """A dense weighted directed network on n >= 2 nodes.

    Parameters
    ----------
    weights : ndarray of shape (n, n)
        Entry (i, j) is the weight of the edge i -> j.  The diagonal must
        be exactly zero and every entry finite.
    labels : tuple of str, optional
        Bijection between node labels and row/column indices.

    The weight matrix is copied, cast to float64, and frozen, so instances
    can be shared freely between threads or processes.
    """

    weights: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=np.float64, copy=True, order="C")
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be a square matrix, got shape {w.shape}")
        n = w.shape[0]
        if n < 2:
            raise TooFewNodesError(f"need at least 2 nodes, got {n}")
        if not np.isfinite(w).all():
            raise NonFiniteWeightError("weight matrix contains NaN or infinite entries")
        if np.any(np.diagonal(w) != 0.0):
            raise SelfLoopError("diagonal entries must be exactly zero (no self-loops)")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError(f"got {len(self.labels)} labels for {n} nodes")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        """Node count."""
        return self.weights.shape[0]

    @cached_property
    def summaries(self) -> "NodeSummaries":
        """Per-node sums, computed once per instance (weights are frozen)."""
        w = self.weights
        sq = w * w
        return NodeSummaries(
            out_sum=w.sum(axis=1),
            in_sum=w.sum(axis=0),
            out_sq_sum=sq.sum(axis=1),
            in_sq_sum=sq.sum(axis=0),
            reciprocal_sum=(w * w.T).sum(axis=1),
        )

    def transposed(self) -> "DirectedWeightedNetwork":
        """The network with every edge direction reversed."""
        return DirectedWeightedNetwork(self.weights.T, labels=self.labels)

    def require_nodes(self, minimum: int, what: str = "this operation") -> None:
        if self.n < minimum:
            raise TooFewNodesError(f"{what} needs at least {minimum} nodes, got {self.n}")


def from_edge_list(
    records: Sequence[EdgeRecord | tuple],
    node_universe: Iterable[str] | None = None,
) -> DirectedWeightedNetwork:
    """Build a network from (source, target, weight) records.

    Node labels are collected from the records plus the optional
    ``node_universe`` and sorted lexicographically before indexing, so the
    result does not depend on record order.  Ordered pairs that are not
    listed get weight 0.  Duplicate ordered pairs and self-loops are
    errors rather than being silently merged or dropped: summing
    duplicates would invisibly change every downstream estimate.

    Raises
    ------
    DuplicateEdgeError, SelfLoopError, NonFiniteWeightError, ValueError
    """
    recs = [r if isinstance(r, EdgeRecord) else EdgeRecord(*r) for r in records]
    labels = {str(r.source) for r in recs} | {str(r.target) for r in recs}
    if node_universe is not None:
        labels |= {str(u) for u in node_universe}
    if not labels:
        raise ValueError("no records and no node universe: cannot size the network")
    ordered = tuple(sorted(labels))
    index = {lab: i for i, lab in enumerate(ordered)}

    n = len(ordered)
    weights = np.zeros((n, n), dtype=np.float64)
    seen: set[tuple[int, int]] = set()
    for r in recs:
        if str(r.source) == str(r.target):
            raise SelfLoopError(f"self-loop record {r.source!r} -> {r.target!r}")
        w = float(r.weight)
        if not math.isfinite(w):
            raise NonFiniteWeightError(f"non-finite weight on {r.source!r} -> {r.target!r}")
        ij = (index[str(r.source)], index[str(r.target)])
        if ij in seen:
            raise DuplicateEdgeError(f"duplicate edge {r.source!r} -> {r.target!r}")
        seen.add(ij)
        weights[ij] = w
    return DirectedWeightedNetwork(weights, labels=ordered)


def edge_records(net: DirectedWeightedNetwork) -> list[EdgeRecord]:
    """All nonzero edges of ``net`` as labelled records (row-major order)."""
    labels = net.labels or tuple(str(i) for i in range(net.n))
    out = []
    for i, j in zip(*np.nonzero(net.weights)):
        out.append(EdgeRecord(labels[i], labels[j], float(net.weights[i, j])))
    return out


def read_edge_list(path) -> DirectedWeightedNetwork:
    """Read a UTF-8 CSV edge list with header ``source,target,weight``."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:3]] != ["source", "target", "weight"]:
            raise ValueError(f"{path}: expected CSV header 'source,target,weight'")
        records = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 3:
                raise ValueError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            try:
                weight = float(row[2])
            except ValueError:
                raise NonFiniteWeightError(f"{path}:{lineno}: cannot parse weight {row[2]!r}") from None
            records.append(EdgeRecord(row[0].strip(), row[1].strip(), weight))
    return from_edge_list(records)


@dataclass(frozen=True, eq=False)
class NodeSummaries:
    """Per-node accumulations that let the estimators run in O(n^2).

    For node i (sums over j != i):

    * ``out_sum[i]``        = sum_j e[i,j]
    * ``in_sum[i]``         = sum_j e[j,i]
    * ``out_sq_sum[i]``     = sum_j e[i,j]^2
    * ``in_sq_sum[i]``      = sum_j e[j,i]^2
    * ``reciprocal_sum[i]`` = sum_j e[i,j] * e[j,i]
    """

    out_sum: np.ndarray
    in_sum: np.ndarray
    out_sq_sum: np.ndarray
    in_sq_sum: np.ndarray
    reciprocal_sum: np.ndarray
    total: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "total", float(self.out_sum.sum()))


def row_col_summaries(net: DirectedWeightedNetwork) -> NodeSummaries:
    """All per-node sums of :class:`NodeSummaries`, one matrix pass, cached."""
    return net.summaries
