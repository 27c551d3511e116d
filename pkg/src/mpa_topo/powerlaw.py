"""Power-law exponent estimation for discrete degree samples."""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

MIN_TAIL = 10


class InsufficientTail(ValueError):
    pass


class FitMethod(str, enum.Enum):
    DISCRETE_MLE = "DiscreteMLE"
    CCDF_REGRESSION = "CcdfRegression"


@dataclass(frozen=True)
class PowerLawFit:
    gamma_hat: float
    k_min: int
    n_tail: int
    method: FitMethod
    ks_distance: float | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["method"] = self.method.value
        return d


def approximate_mle(tail: np.ndarray, k_min: int) -> float:
    """Closed-form estimate ``1 + n / sum(ln(k / (k_min - 1/2)))``."""
    return float(1.0 + tail.size / np.sum(np.log(tail / (k_min - 0.5))))


def _mle(tail: np.ndarray, k_min: int) -> float:
    """Maximise the exact discrete likelihood, bracketed around the closed form."""
    n = tail.size
    sum_log = float(np.sum(np.log(tail)))
    guess = approximate_mle(tail, k_min)

    def neg_loglik(g: float) -> float:
        return g * sum_log + n * np.log(zeta(g, k_min))

    lo, hi = max(1.0 + 1e-9, guess - 0.5), guess + 0.5
    res = minimize_scalar(neg_loglik, bounds=(lo, hi), method="bounded", options={"xatol": 1e-9})
    if abs(res.x - lo) < 1e-6 or abs(res.x - hi) < 1e-6:
        res = minimize_scalar(
            neg_loglik, bounds=(1.0 + 1e-9, 50.0), method="bounded", options={"xatol": 1e-9}
        )
    return float(res.x)


def _ks(tail: np.ndarray, k_min: int, gamma_hat: float) -> float:
    values, counts = np.unique(tail, return_counts=True)
    empirical = np.cumsum(counts[::-1])[::-1] / tail.size
    model = zeta(gamma_hat, values) / zeta(gamma_hat, k_min)
    return float(np.max(np.abs(empirical - model)))


def _prepare(samples) -> np.ndarray:
    data = np.asarray(samples, dtype=float).ravel()
    data = data[data >= 1]
    if np.any(data != np.round(data)):
        raise ValueError("samples must be integers")
    return np.sort(data)


def _tail(data: np.ndarray, k_min: int) -> np.ndarray:
    tail = data[data >= k_min]
    if tail.size < MIN_TAIL or np.unique(tail).size < 2:
        raise InsufficientTail(
            f"need >= {MIN_TAIL} samples with at least two distinct values at k >= {k_min}"
        )
    return tail


def scan_k_min(data: np.ndarray) -> tuple[int, float, float]:
    """Pick the cutoff minimising the Kolmogorov-Smirnov distance.

    Returns ``(k_min, gamma_hat, ks_distance)``.
    """
    values = np.unique(data)
    best: tuple[int, float, float] | None = None
    n = data.size
    for k in values:
        start = int(np.searchsorted(data, k, side="left"))
        n_tail = n - start
        if n_tail < MIN_TAIL or data[-1] == k:
            break
        tail = data[start:]
        gamma_hat = _mle(tail, int(k))
        d = _ks(tail, int(k), gamma_hat)
        if best is None or d < best[2]:
            best = (int(k), float(gamma_hat), d)
    if best is None:
        raise InsufficientTail("no cutoff leaves a usable tail")
    return best


def fit_power_law(
    samples,
    k_min: int | None = None,
    method: FitMethod | str = FitMethod.DISCRETE_MLE,
) -> PowerLawFit:
    """Fit ``P(k) ~ k^-gamma`` to the tail ``k >= k_min`` of integer samples.

    Samples below 1 are ignored. Without ``k_min`` the cutoff is chosen by a
    Kolmogorov-Smirnov scan of the discrete MLE; the regression method reuses
    that cutoff and fits a least-squares line to the log-log tail CCDF.
    """
    method = FitMethod(method)
    data = _prepare(samples)
    ks = None
    if k_min is None:
        if data.size < MIN_TAIL:
            raise InsufficientTail(f"only {data.size} positive samples")
        k_min, gamma_hat, ks = scan_k_min(data)
    elif k_min < 1:
        raise ValueError("k_min must be >= 1")
    tail = _tail(data, k_min)
    if method is FitMethod.DISCRETE_MLE:
        gamma_hat = float(_mle(tail, k_min))
        if ks is None:
            ks = _ks(tail, k_min, gamma_hat)
    else:
        values, counts = np.unique(tail, return_counts=True)
        ccdf = np.cumsum(counts[::-1])[::-1] / tail.size
        slope = np.polyfit(np.log(values), np.log(ccdf), 1)[0]
        gamma_hat = float(1.0 - slope)
        ks = None
    return PowerLawFit(gamma_hat, int(k_min), int(tail.size), method, ks)
