"""Closed-form predictions of the multiclass preferential attachment model."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields


class InvalidParams(ValueError):
    pass


class InvalidTime(ValueError):
    pass


class UnsupportedRegime(ValueError):
    pass


@dataclass(frozen=True)
class MpaParams:
    """Model rates, all per unit time (one ISP arrival).

    rho: non-ISP arrivals; nu: ISP multihoming links; c: peering links;
    m: mean providers per non-ISP; mu: bankruptcy events.
    """

    rho: float = 7 / 3
    nu: float = 1.0
    c: float = 0.704
    m: float = 1.86
    mu: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise InvalidParams(f"{f.name} must be a finite number, got {value!r}")
        for name in ("rho", "nu", "c", "mu"):
            if getattr(self, name) < 0:
                raise InvalidParams(f"{name} must be >= 0")
        if self.m < 1:
            raise InvalidParams("m must be >= 1")
        if self.mu >= 1:
            raise InvalidParams("mu must be < 1")

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class Prediction:
    alpha: float
    beta: float
    gamma: float
    provider_rate: float
    mean_total_degree: float

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def _check(params: MpaParams) -> MpaParams:
    if not isinstance(params, MpaParams):
        raise InvalidParams(f"expected MpaParams, got {type(params).__name__}")
    return params


def alpha(params: MpaParams) -> float:
    """Exponent of the mean degree trajectory ``k(s, t) ~ (s/t)^-alpha``."""
    p = _check(params)
    num = 1 + 2 * p.nu + p.m * p.rho + 2 * p.c + p.m * p.mu
    den = 2 + 2 * p.nu + p.m * p.rho + 2 * p.c
    return num / den


def beta(params: MpaParams) -> float:
    """Share of attachment weight growth that comes from peering links."""
    p = _check(params)
    return 2 * p.c / (2 + 2 * p.nu + p.m * p.rho + 2 * p.c)


def gamma(params: MpaParams) -> float:
    """Degree exponent ``1/alpha + 1``.

    Equals ``2 + (1 - mu) / (1 + 2nu + m*rho + 2c + mu)`` whenever
    ``mu == 0`` or ``m == 1``; otherwise the two forms differ by the
    ``m*mu`` term in alpha and this one is kept.
    """
    return 1 / alpha(params) + 1


def two_class_exponent(rho: float) -> float:
    """Degree exponent when only ISPs and single-homed non-ISPs arrive.

    ``rho = math.inf`` gives the limit 2.
    """
    if not rho >= 0:
        raise InvalidParams("rho must be >= 0")
    return 2 + 1 / (1 + rho)


def _check_times(s: float, t: float) -> None:
    if not (s > 0 and s <= t):
        raise InvalidTime(f"need 0 < s <= t, got s={s}, t={t}")


def two_class_trajectory(s: float, t: float, rho: float) -> float:
    """Mean degree at time ``t`` of an ISP born at ``s`` (two-class model)."""
    if not rho >= 0:
        raise InvalidParams("rho must be >= 0")
    _check_times(s, t)
    return (s / t) ** (-(1 + rho) / (2 + rho))


def mean_degree_trajectory(s: float, t: float, params: MpaParams) -> float:
    _check_times(s, t)
    a = alpha(params)
    return (s / t) ** (-a) + params.mu / a


def peer_trajectory(s: float, t: float, params: MpaParams) -> float:
    """Mean number of peers at ``t`` of an ISP born at ``s``; requires mu == 0."""
    _check_times(s, t)
    if _check(params).mu != 0:
        raise UnsupportedRegime("peer trajectory is only derived for mu == 0")
    a = alpha(params)
    return beta(params) / a * (s / t) ** (-a)


def provider_ccdf(p: float, nu: float) -> float:
    """Predicted fraction of ISPs with at least ``p`` providers beyond the first."""
    if not (p >= 0 and nu > 0):
        raise InvalidParams("need p >= 0 and nu > 0")
    return math.exp(-p / nu)


def provider_mean(nu: float) -> float:
    """Mean provider count per ISP: the initial provider plus multihoming."""
    if not nu >= 0:
        raise InvalidParams("nu must be >= 0")
    return 1 + nu


def derive_peering_rate(peering_fraction: float, nu: float, m: float, rho: float) -> float:
    """Peering rate ``c`` that makes peering links a fraction ``f`` of all links.

    Solves ``c / (c + 1 + nu + m*rho) = f``.
    """
    f = peering_fraction
    if not 0 <= f < 1:
        raise InvalidParams("peering fraction must be in [0, 1)")
    if nu < 0 or m < 1 or rho < 0:
        raise InvalidParams("need nu >= 0, m >= 1, rho >= 0")
    return f * (1 + nu + m * rho) / (1 - f)


def mean_total_degree(params: MpaParams) -> float:
    """Twice the link arrival rate over the node arrival rate."""
    p = _check(params)
    return 2 * (1 + p.nu + p.c + p.m * p.rho) / (1 + p.rho)


def predict(params: MpaParams) -> Prediction:
    return Prediction(
        alpha=alpha(params),
        beta=beta(params),
        gamma=gamma(params),
        provider_rate=params.nu,
        mean_total_degree=mean_total_degree(params),
    )
