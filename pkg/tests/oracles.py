"""Independent reference implementations used only by the test-suite."""

from __future__ import annotations

import itertools

import numpy as np
from scipy.special import zeta


def sample_discrete_power_law(
    gamma: float, n: int, k_min: int, rng: np.random.Generator
) -> np.ndarray:
    """Exact inverse-CDF draws from ``P(k) = k^-gamma / zeta(gamma, k_min)``."""
    u = rng.random(n)
    norm = zeta(gamma, k_min)

    def ccdf(k):
        return zeta(gamma, k) / norm

    # bracket then bisect on integers: smallest k with ccdf(k + 1) <= u
    lo = np.full(n, k_min, dtype=np.int64)
    hi = np.full(n, k_min, dtype=np.int64)
    while True:
        grow = ccdf(hi + 1) > u
        if not grow.any():
            break
        hi[grow] = hi[grow] * 2 + 1
    while np.any(lo < hi):
        mid = (lo + hi) // 2
        below = ccdf(mid + 1) <= u
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid + 1)
    return lo


def rk4_log_time(rhs, y0: float, s: float, t: float, steps: int = 4000) -> float:
    """Classical fourth-order Runge-Kutta for ``dy/dt = rhs(y, t)`` from s to t.

    Integrates in ``u = ln t`` so the step size is uniform on a log scale.
    """
    if s == t:
        return y0
    h = (np.log(t) - np.log(s)) / steps
    u, y = np.log(s), y0

    def f(u_, y_):
        t_ = np.exp(u_)
        return rhs(y_, t_) * t_

    for _ in range(steps):
        k1 = f(u, y)
        k2 = f(u + h / 2, y + h * k1 / 2)
        k3 = f(u + h / 2, y + h * k2 / 2)
        k4 = f(u + h, y + h * k3)
        y += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        u += h
    return y


def brute_triangles(n: int, edges: set[frozenset]) -> list[int]:
    """Triangles through each node by enumerating every triple."""
    tri = [0] * n
    for a, b, c in itertools.combinations(range(n), 3):
        if {frozenset((a, b)), frozenset((b, c)), frozenset((a, c))} <= edges:
            tri[a] += 1
            tri[b] += 1
            tri[c] += 1
    return tri


def brute_clustering_by_degree(n: int, edges: set[frozenset]) -> dict[int, float]:
    deg = [sum(1 for e in edges if v in e) for v in range(n)]
    tri = brute_triangles(n, edges)
    groups: dict[int, list[float]] = {}
    for v in range(n):
        if deg[v] >= 2:
            groups.setdefault(deg[v], []).append(2 * tri[v] / (deg[v] * (deg[v] - 1)))
    return {k: sum(vs) / len(vs) for k, vs in groups.items()}


def brute_knn_by_degree(n: int, edges: set[frozenset]) -> dict[int, float]:
    nbrs = [[u for e in edges if v in e for u in e if u != v] for v in range(n)]
    deg = [len(x) for x in nbrs]
    groups: dict[int, list[float]] = {}
    for v in range(n):
        if deg[v]:
            groups.setdefault(deg[v], []).append(sum(deg[u] for u in nbrs[v]) / deg[v])
    return {k: sum(vs) / len(vs) for k, vs in groups.items()}
