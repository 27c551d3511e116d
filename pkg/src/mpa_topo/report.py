"""Metric battery bundling and synthetic-vs-observed comparison."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import metrics
from .graph import AnnotatedGraph, LinkKind, NodeClass
from .powerlaw import InsufficientTail, fit_power_law

# metric name -> output file stem
BATTERY = {
    "dd": "dd.all",
    "ad.customers": "ad.customers",
    "ad.providers": "ad.providers",
    "ad.peers": "ad.peers",
    "add.customers": "add.customers",
    "add.peers": "add.peers",
    "jdd.c2p": "jdd.c2p",
    "jdd.p2p": "jdd.p2p",
    "knn": "knn.all",
    "clustering": "clustering.all",
}
FITTED = ("dd", "ad.customers", "ad.peers")

DEFAULT_THRESHOLDS = {"max_dd_delta": 0.2, "observed_dd_range": [2.0, 2.3]}

_EMPTY_CCDF = metrics.CcdfSeries(np.array([]), np.array([]))
_EMPTY_BINNED = metrics.BinnedSeries(np.array([]), np.array([]), np.array([], dtype=int))


def _safe(fn, empty):
    try:
        return fn()
    except (metrics.EmptyGraph, metrics.NoSuchLinks):
        return empty


def metric_battery(graph: AnnotatedGraph) -> dict[str, metrics.CcdfSeries | metrics.BinnedSeries]:
    isp = NodeClass.ISP
    return {
        "dd": metrics.degree_ccdf(graph),
        "ad.customers": _safe(lambda: metrics.annotated_ccdf(graph, "customers", isp), _EMPTY_CCDF),
        "ad.providers": _safe(lambda: metrics.annotated_ccdf(graph, "providers", isp), _EMPTY_CCDF),
        "ad.peers": _safe(lambda: metrics.annotated_ccdf(graph, "peers", isp), _EMPTY_CCDF),
        "add.customers": _safe(lambda: metrics.add_binned(graph, "customers"), _EMPTY_BINNED),
        "add.peers": _safe(lambda: metrics.add_binned(graph, "peers"), _EMPTY_BINNED),
        "jdd.c2p": _safe(lambda: metrics.jdd_avg_neighbor(graph, LinkKind.C2P, normalize=True), _EMPTY_BINNED),
        "jdd.p2p": _safe(lambda: metrics.jdd_avg_neighbor(graph, LinkKind.P2P, normalize=True), _EMPTY_BINNED),
        "knn": metrics.avg_neighbor_degree(graph),
        "clustering": _safe(lambda: metrics.clustering_by_degree(graph), _EMPTY_BINNED),
    }


def fit_samples(graph: AnnotatedGraph) -> dict[str, np.ndarray]:
    isp = np.array([c is NodeClass.ISP for c in graph.classes], dtype=bool)
    return {
        "dd": metrics.degree_array(graph),
        "ad.customers": metrics.annotated_array(graph, "customers")[isp],
        "ad.peers": metrics.annotated_array(graph, "peers")[isp],
    }


def exponent_fits(graph: AnnotatedGraph) -> dict[str, dict | None]:
    out: dict[str, dict | None] = {}
    for name, samples in fit_samples(graph).items():
        try:
            out[name] = fit_power_law(samples).to_dict()
        except InsufficientTail:
            out[name] = None
    return out


@dataclass
class Analysis:
    series: dict
    fits: dict
    mean_degree: float
    n_nodes: int
    n_links: int
    n_isps: int

    def summary(self) -> dict:
        return {
            "nodes": self.n_nodes,
            "links": self.n_links,
            "isps": self.n_isps,
            "non_isps": self.n_nodes - self.n_isps,
            "mean_degree": self.mean_degree,
            "fits": self.fits,
        }


def analyze(graph: AnnotatedGraph) -> Analysis:
    return Analysis(
        series=metric_battery(graph),
        fits=exponent_fits(graph),
        mean_degree=metrics.mean_degree(graph),
        n_nodes=graph.n_nodes,
        n_links=graph.n_links,
        n_isps=graph.count_class(NodeClass.ISP),
    )


def write_analysis(analysis: Analysis, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, stem in BATTERY.items():
        path = out_dir / f"{stem}.csv"
        path.write_text(analysis.series[name].to_csv(), encoding="utf-8")
        written.append(path)
    return written


@dataclass
class CompareReport:
    metrics: dict[str, dict]
    fits: dict[str, dict]
    mean_degree: dict[str, float]
    params: dict | None = None
    seed: int | None = None
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "metrics": self.metrics,
            "fits": self.fits,
            "mean_degree": self.mean_degree,
            "params": self.params,
            "seed": self.seed,
            "violations": self.violations,
        }


def _gamma(fit: dict | None) -> float | None:
    return None if fit is None else fit["gamma_hat"]


def compare(
    synthetic: Analysis,
    observed: Analysis,
    thresholds: dict | None = None,
    params: dict | None = None,
    seed: int | None = None,
) -> CompareReport:
    """Side-by-side battery with exponent deltas and threshold checks.

    Supported thresholds: ``max_dd_delta`` and ``observed_dd_range``; a
    ``None`` value disables a check.
    """
    limits = dict(DEFAULT_THRESHOLDS)
    limits.update(thresholds or {})
    pairs = {
        name: {"synthetic": synthetic.series[name].to_json(), "observed": observed.series[name].to_json()}
        for name in BATTERY
    }
    pairs["mean_degree"] = {"synthetic": synthetic.mean_degree, "observed": observed.mean_degree}
    fits = {}
    for name in FITTED:
        g_syn, g_obs = _gamma(synthetic.fits[name]), _gamma(observed.fits[name])
        delta = None if g_syn is None or g_obs is None else abs(g_syn - g_obs)
        fits[name] = {"synthetic": synthetic.fits[name], "observed": observed.fits[name], "delta": delta}
    violations = []
    dd_delta = fits["dd"]["delta"]
    if limits.get("max_dd_delta") is not None:
        if dd_delta is None:
            violations.append("dd exponent could not be fitted on both graphs")
        elif dd_delta > limits["max_dd_delta"]:
            violations.append(f"dd exponent delta {dd_delta:.3f} > {limits['max_dd_delta']}")
    window = limits.get("observed_dd_range")
    if window is not None:
        g_obs = _gamma(observed.fits["dd"])
        if g_obs is None or not window[0] <= g_obs <= window[1]:
            violations.append(f"observed dd exponent {g_obs} outside {window}")
    return CompareReport(
        metrics=pairs,
        fits=fits,
        mean_degree={"synthetic": synthetic.mean_degree, "observed": observed.mean_degree},
        params=params,
        seed=seed,
        violations=violations,
    )
