"""Event-driven growth engine for the multiclass preferential attachment model.

Every unit of time one ISP arrives; non-ISP arrivals, ISP multihoming links,
peering links and bankruptcy rewirings are emitted by deterministic rate
accumulators, so only target selection is random.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .analytic import InvalidParams, MpaParams
from .graph import AnnotatedGraph, LinkKind, NodeClass, validate
from .sampler import PreferentialSampler

log = logging.getLogger(__name__)


class ResampleExhausted(Exception):
    pass


class InvalidConfig(ValueError):
    pass


def _exact(value: float | int | Fraction) -> Fraction:
    # repr round-trips the float, so 0.704 becomes 88/125 rather than its binary expansion
    if isinstance(value, Fraction):
        return value
    return Fraction(repr(float(value)))


class RateAccumulator:
    """Emits ``floor(T * rate + residual)`` events in total after ``T`` ticks."""

    def __init__(self, rate: float | Fraction, residual: float | Fraction = 0) -> None:
        self.rate = _exact(rate)
        self.initial = _exact(residual)
        if self.rate < 0 or not 0 <= self.initial < 1:
            raise ValueError("need rate >= 0 and residual in [0, 1)")
        self.ticks = 0
        self.emitted = 0

    @property
    def residual(self) -> Fraction:
        return self.ticks * self.rate + self.initial - self.emitted

    def tick(self) -> int:
        self.ticks += 1
        due = int(self.ticks * self.rate + self.initial) - self.emitted
        self.emitted += due
        return due


@dataclass(frozen=True)
class GeneratorConfig:
    params: MpaParams = field(default_factory=MpaParams)
    target_isps: int = 7200
    target_non_isps: int = 16800
    rng_seed: int = 0
    max_resample: int = 100

    def __post_init__(self) -> None:
        if not isinstance(self.params, MpaParams):
            raise InvalidConfig("params must be MpaParams")
        if self.target_isps < 2:
            raise InvalidConfig("target_isps must be >= 2")
        if self.target_non_isps < 0:
            raise InvalidConfig("target_non_isps must be >= 0")
        if self.max_resample < 1:
            raise InvalidConfig("max_resample must be >= 1")


@dataclass
class StepLog:
    isp_arrivals: int = 0
    non_isp_arrivals: int = 0
    non_isp_links: int = 0
    multihoming: int = 0
    peering: int = 0
    rewirings: int = 0
    aborted: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class EventCounts:
    steps: int = 0
    isp_arrivals: int = 0
    non_isp_arrivals: int = 0
    non_isp_links: int = 0
    multihoming: int = 0
    peering: int = 0
    rewirings: int = 0
    aborted: dict[str, int] = field(default_factory=dict)

    def absorb(self, entry: StepLog) -> None:
        self.isp_arrivals += entry.isp_arrivals
        self.non_isp_arrivals += entry.non_isp_arrivals
        self.non_isp_links += entry.non_isp_links
        self.multihoming += entry.multihoming
        self.peering += entry.peering
        self.rewirings += entry.rewirings
        for event, _ in entry.aborted:
            self.aborted[event] = self.aborted.get(event, 0) + 1


def seed_graph() -> AnnotatedGraph:
    """Two ISPs, node 1 a customer of node 0."""
    graph = AnnotatedGraph()
    graph.add_node(NodeClass.ISP)
    graph.add_node(NodeClass.ISP)
    graph.add_link(1, 0, LinkKind.C2P, customer=1)
    return graph


def sample_target(sampler: PreferentialSampler, rng: random.Random) -> int:
    return sampler.sample(rng)


class GrowthState:
    """Mutable generator state: graph, sampler, accumulators and RNG."""

    def __init__(self, config: GeneratorConfig) -> None:
        p = config.params
        self.config = config
        self.graph = seed_graph()
        self.sampler = PreferentialSampler(config.target_isps + config.target_non_isps + 2)
        for v in range(self.graph.n_nodes):
            self.sampler.set(v, self.graph.degree(v))
        self.rng = random.Random(config.rng_seed)
        self.non_isp_acc = RateAccumulator(p.rho)
        self.extra_provider_acc = RateAccumulator(_exact(p.m) - 1)
        self.multihoming_acc = RateAccumulator(p.nu)
        self.peering_acc = RateAccumulator(p.c)
        self.bankruptcy_acc = RateAccumulator(p.mu)
        # ISP-ISP C2P link ids: the victim pool for bankruptcy
        self.isp_c2p_links: list[int] = [0]
        self.non_isps = 0
        self.counts = EventCounts()

    @property
    def n_isps(self) -> int:
        return self.graph.n_nodes - self.n_non_isps

    @property
    def n_non_isps(self) -> int:
        return self.non_isps

    def _link(self, a: int, b: int, kind: LinkKind, customer: int | None = None) -> int:
        link_id = self.graph.add_link(a, b, kind, customer)
        for v in (a, b):
            if self.graph.classes[v] is NodeClass.ISP:
                self.sampler.add(v, 1)
        return link_id

    def _isp_pair(self) -> tuple[int, int]:
        """Two independent degree-proportional draws, resampled on collisions."""
        graph, sampler, rng = self.graph, self.sampler, self.rng
        for _ in range(self.config.max_resample):
            u = sampler.sample(rng)
            v = sampler.sample(rng)
            if u != v and not graph.has_link(u, v):
                return u, v
        raise ResampleExhausted("no free ISP pair found")

    def add_isp(self) -> int:
        target = self.sampler.sample(self.rng)
        node = self.graph.add_node(NodeClass.ISP)
        link_id = self._link(node, target, LinkKind.C2P, customer=node)
        self.isp_c2p_links.append(link_id)
        return node

    def add_non_isp(self, log_entry: StepLog) -> int:
        wanted = 1 + self.extra_provider_acc.tick()
        providers: list[int] = []
        for _ in range(wanted):
            for _ in range(self.config.max_resample):
                candidate = self.sampler.sample(self.rng)
                if candidate not in providers:
                    providers.append(candidate)
                    break
            else:
                log_entry.aborted.append(("non_isp_provider", "no distinct provider left"))
        node = self.graph.add_node(NodeClass.NON_ISP)
        for provider in providers:
            self._link(node, provider, LinkKind.C2P, customer=node)
        self.non_isps += 1
        log_entry.non_isp_arrivals += 1
        log_entry.non_isp_links += len(providers)
        return node

    def add_multihoming(self) -> int:
        u, v = self._isp_pair()
        du, dv = self.graph.degree(u), self.graph.degree(v)
        # lower degree is the customer; on ties the older node provides
        if du < dv or (du == dv and u > v):
            customer, provider = u, v
        else:
            customer, provider = v, u
        link_id = self._link(customer, provider, LinkKind.C2P, customer=customer)
        self.isp_c2p_links.append(link_id)
        return link_id

    def add_peering(self) -> int:
        u, v = self._isp_pair()
        return self._link(u, v, LinkKind.P2P)

    def _guard(self, log_entry: StepLog, event: str, action) -> bool:
        try:
            action()
        except ResampleExhausted as exc:
            log.debug("step %d: %s aborted: %s", self.counts.steps, event, exc)
            log_entry.aborted.append((event, str(exc)))
            return False
        return True

    def step(self) -> StepLog:
        entry = StepLog()
        self.add_isp()
        entry.isp_arrivals = 1
        arrivals = self.non_isp_acc.tick()
        room = self.config.target_non_isps - self.n_non_isps
        for _ in range(min(arrivals, max(room, 0))):
            self.add_non_isp(entry)
        for _ in range(self.multihoming_acc.tick()):
            if self._guard(entry, "multihoming", self.add_multihoming):
                entry.multihoming += 1
        for _ in range(self.peering_acc.tick()):
            if self._guard(entry, "peering", self.add_peering):
                entry.peering += 1
        for _ in range(self.bankruptcy_acc.tick()):
            if self._guard(entry, "bankruptcy", lambda: bankruptcy_rewire(self, self.rng)):
                entry.rewirings += 1
        self.counts.steps += 1
        self.counts.absorb(entry)
        return entry


def bankruptcy_rewire(state: GrowthState, rng: random.Random) -> tuple[int, int, int]:
    """Shift the provider end of a random ISP-ISP C2P link to a preferentially
    chosen acquirer. Returns ``(link_id, old_provider, new_provider)``."""
    graph, sampler = state.graph, state.sampler
    if state.n_isps < 3 or not state.isp_c2p_links:
        raise ResampleExhausted("bankruptcy needs at least 3 ISPs")
    for _ in range(state.config.max_resample):
        link_id = rng.choice(state.isp_c2p_links)
        link = graph.links[link_id]
        acquirer = sampler.sample(rng)
        if acquirer in (link.a, link.b) or graph.has_link(link.a, acquirer):
            continue
        graph.rewire_provider(link_id, acquirer)
        sampler.add(link.b, -1)
        sampler.add(acquirer, 1)
        return link_id, link.b, acquirer
    raise ResampleExhausted("no valid acquirer found")


def step(state: GrowthState) -> StepLog:
    return state.step()


@dataclass
class RunResult:
    graph: AnnotatedGraph
    counts: EventCounts
    wall_time_s: float


def run(config: GeneratorConfig) -> RunResult:
    """Grow until the ISP target is met, then top up any missing non-ISPs."""
    started = time.perf_counter()
    state = GrowthState(config)
    while state.n_isps < config.target_isps:
        state.step()
    if state.n_non_isps < config.target_non_isps:
        entry = StepLog()
        while state.n_non_isps < config.target_non_isps:
            state.add_non_isp(entry)
        state.counts.absorb(entry)
    problem = validate(state.graph)
    if problem is not None:
        raise RuntimeError(f"generator produced an invalid graph: {problem}")
    return RunResult(state.graph, state.counts, time.perf_counter() - started)


def config_from_mapping(data: dict) -> GeneratorConfig:
    """Build a config from flat key/value pairs (``m_nonisp`` aliases ``m``)."""
    data = dict(data)
    if "m_nonisp" in data:
        if "m" in data and data["m"] != data["m_nonisp"]:
            raise InvalidConfig("m and m_nonisp disagree")
        data["m"] = data.pop("m_nonisp")
    known = {"rho", "nu", "c", "m", "mu", "target_isps", "target_non_isps", "seed", "max_resample"}
    unknown = set(data) - known
    if unknown:
        raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
    try:
        params = MpaParams(**{k: float(Fraction(str(data[k]))) for k in ("rho", "nu", "c", "m", "mu") if k in data})
    except (InvalidParams, ValueError) as exc:
        raise InvalidConfig(str(exc)) from exc
    kwargs = {k: int(data[k]) for k in ("target_isps", "target_non_isps", "max_resample") if k in data}
    if "seed" in data:
        kwargs["rng_seed"] = int(data["seed"])
    return GeneratorConfig(params=params, **kwargs)
