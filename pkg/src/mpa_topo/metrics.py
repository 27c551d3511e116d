"""2K-annotated projections and standard topology metrics.

Series indexed by degree use raw integer bins up to ``LOG_BIN_START`` and
base-2 logarithmic bins above it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .graph import AnnotatedGraph, LinkKind, NodeClass
from .powerlaw import FitMethod, PowerLawFit, fit_power_law

LOG_BIN_START = 16

__all__ = [
    "BinnedSeries",
    "CcdfSeries",
    "EmptyGraph",
    "NoSuchLinks",
    "add_binned",
    "annotated_ccdf",
    "avg_neighbor_degree",
    "clustering_by_degree",
    "degree_ccdf",
    "fit_power_law",
    "FitMethod",
    "jdd_avg_neighbor",
    "local_clustering",
    "mean_degree",
    "PowerLawFit",
]


class EmptyGraph(ValueError):
    pass


class NoSuchLinks(ValueError):
    pass


@dataclass(frozen=True)
class CcdfSeries:
    values: np.ndarray
    fractions: np.ndarray

    def rows(self) -> list[tuple[float, float]]:
        return [(_num(v), float(f)) for v, f in zip(self.values, self.fractions)]

    def to_csv(self) -> str:
        return _csv(("key", "value"), self.rows())

    def to_json(self) -> dict:
        return {"key": [_num(v) for v in self.values], "value": [float(f) for f in self.fractions]}


@dataclass(frozen=True)
class BinnedSeries:
    keys: np.ndarray
    means: np.ndarray
    counts: np.ndarray

    def rows(self) -> list[tuple[float, float, int]]:
        return [(_num(k), float(m), int(c)) for k, m, c in zip(self.keys, self.means, self.counts)]

    def to_csv(self) -> str:
        return _csv(("key", "value", "count"), self.rows())

    def to_json(self) -> dict:
        return {
            "key": [_num(k) for k in self.keys],
            "value": [float(m) for m in self.means],
            "count": [int(c) for c in self.counts],
        }


def _num(x) -> int | float:
    x = float(x)
    return int(x) if x.is_integer() else x


def _csv(header: tuple[str, ...], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _ccdf(samples: np.ndarray) -> CcdfSeries:
    values, counts = np.unique(samples, return_counts=True)
    fractions = np.cumsum(counts[::-1])[::-1] / samples.size
    return CcdfSeries(values, fractions)


def bin_key(k: int, log_bins: bool = True) -> float:
    """Bin representative for degree ``k``."""
    if not log_bins or k <= LOG_BIN_START:
        return float(k)
    j = int(math.floor(math.log2(k)))
    lo = max(2**j, LOG_BIN_START + 1)
    hi = 2 ** (j + 1) - 1
    return math.sqrt(lo * hi)


def _binned(keys: np.ndarray, values: np.ndarray, log_bins: bool = True) -> BinnedSeries:
    if keys.size == 0:
        empty = np.array([], dtype=float)
        return BinnedSeries(empty, empty, np.array([], dtype=int))
    bins = np.array([bin_key(int(k), log_bins) for k in keys])
    uniq, inverse = np.unique(bins, return_inverse=True)
    counts = np.bincount(inverse, minlength=uniq.size)
    sums = np.bincount(inverse, weights=values, minlength=uniq.size)
    return BinnedSeries(uniq, sums / counts, counts)


def _class_mask(graph: AnnotatedGraph, class_filter: NodeClass | str | None) -> np.ndarray:
    if graph.n_nodes == 0:
        raise EmptyGraph("graph has no nodes")
    if class_filter is None:
        return np.ones(graph.n_nodes, dtype=bool)
    wanted = NodeClass(class_filter)
    mask = np.array([c is wanted for c in graph.classes], dtype=bool)
    if not mask.any():
        raise EmptyGraph(f"graph has no {wanted.value} nodes")
    return mask


def degree_array(graph: AnnotatedGraph) -> np.ndarray:
    return np.fromiter((len(a) for a in graph.adjacency), dtype=np.int64, count=graph.n_nodes)


def _edges(graph: AnnotatedGraph, kind: LinkKind | None = None) -> tuple[np.ndarray, np.ndarray]:
    links = graph.links if kind is None else [l for l in graph.links if l.kind is kind]
    a = np.fromiter((l.a for l in links), dtype=np.int64, count=len(links))
    b = np.fromiter((l.b for l in links), dtype=np.int64, count=len(links))
    return a, b


def degree_ccdf(graph: AnnotatedGraph, class_filter: NodeClass | str | None = None) -> CcdfSeries:
    mask = _class_mask(graph, class_filter)
    return _ccdf(degree_array(graph)[mask])


def annotated_array(graph: AnnotatedGraph, which: str) -> np.ndarray:
    try:
        counts = {"customers": graph.customers, "providers": graph.providers, "peers": graph.peers}[which]
    except KeyError:
        raise ValueError(f"unknown degree type {which!r}") from None
    return np.asarray(counts, dtype=np.int64)


def annotated_ccdf(
    graph: AnnotatedGraph, which: str, class_filter: NodeClass | str | None = NodeClass.ISP
) -> CcdfSeries:
    """CCDF of the number of customers, providers or peers per node."""
    mask = _class_mask(graph, class_filter)
    return _ccdf(annotated_array(graph, which)[mask])


def add_binned(graph: AnnotatedGraph, y: str, log_bins: bool = True) -> BinnedSeries:
    """Mean customers (or peers) of ISPs, binned by their provider count."""
    if y not in ("customers", "peers"):
        raise ValueError("y must be 'customers' or 'peers'")
    mask = _class_mask(graph, NodeClass.ISP)
    x = annotated_array(graph, "providers")[mask]
    return _binned(x, annotated_array(graph, y)[mask].astype(float), log_bins)


def jdd_avg_neighbor(
    graph: AnnotatedGraph,
    link_kind: LinkKind | str,
    normalize: bool = False,
    log_bins: bool = True,
) -> BinnedSeries:
    """Average total degree across links of one kind, keyed by the near-end degree.

    For C2P links the near end is the customer and the far end its provider;
    P2P links count in both directions. Counts are link ends, not nodes.
    """
    kind = LinkKind(link_kind)
    if graph.n_nodes == 0:
        raise EmptyGraph("graph has no nodes")
    a, b = _edges(graph, kind)
    if a.size == 0:
        raise NoSuchLinks(f"graph has no {kind.value} links")
    deg = degree_array(graph)
    if kind is LinkKind.C2P:
        near, far = a, b
    else:
        near, far = np.concatenate([a, b]), np.concatenate([b, a])
    values = deg[far].astype(float)
    if normalize:
        values = values / (graph.n_nodes - 1)
    return _binned(deg[near], values, log_bins)


def neighbor_degree_means(graph: AnnotatedGraph) -> np.ndarray:
    """Per-node mean total degree of neighbours (NaN for isolated nodes)."""
    deg = degree_array(graph)
    a, b = _edges(graph)
    sums = np.bincount(a, weights=deg[b], minlength=graph.n_nodes) + np.bincount(
        b, weights=deg[a], minlength=graph.n_nodes
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        return sums / deg


def avg_neighbor_degree(
    graph: AnnotatedGraph, class_filter: NodeClass | str | None = None, log_bins: bool = True
) -> BinnedSeries:
    mask = _class_mask(graph, class_filter)
    deg = degree_array(graph)
    knn = neighbor_degree_means(graph)
    keep = mask & (deg > 0)
    return _binned(deg[keep], knn[keep], log_bins)


def triangle_counts(graph: AnnotatedGraph) -> np.ndarray:
    """Triangles through each node on the undirected simple-graph view."""
    n = graph.n_nodes
    deg = degree_array(graph)
    # orient each edge from lower to higher (degree, id) rank; each triangle is seen once
    rank = np.lexsort((np.arange(n), deg))
    position = np.empty(n, dtype=np.int64)
    position[rank] = np.arange(n)
    out: list[set[int]] = [set() for _ in range(n)]
    for v, adj in enumerate(graph.adjacency):
        pv = position[v]
        out[v] = {u for u in adj if position[u] > pv}
    tri = np.zeros(n, dtype=np.int64)
    for v in range(n):
        higher = out[v]
        for u in higher:
            common = higher & out[u]
            if common:
                c = len(common)
                tri[v] += c
                tri[u] += c
                for w in common:
                    tri[w] += 1
    return tri


def local_clustering(graph: AnnotatedGraph) -> np.ndarray:
    """``2 T_i / (k_i (k_i - 1))`` per node; NaN where ``k_i < 2``."""
    deg = degree_array(graph).astype(float)
    tri = triangle_counts(graph)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = 2.0 * tri / (deg * (deg - 1.0))
    c[deg < 2] = np.nan
    return c


def clustering_by_degree(
    graph: AnnotatedGraph, class_filter: NodeClass | str | None = None, log_bins: bool = True
) -> BinnedSeries:
    mask = _class_mask(graph, class_filter)
    deg = degree_array(graph)
    c = local_clustering(graph)
    keep = mask & (deg >= 2)
    return _binned(deg[keep], c[keep], log_bins)


def mean_degree(graph: AnnotatedGraph) -> float:
    if graph.n_nodes == 0:
        raise EmptyGraph("graph has no nodes")
    return 2.0 * graph.n_links / graph.n_nodes
