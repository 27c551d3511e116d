"""Annotated AS graph storage and degree bookkeeping.

Nodes are dense integers equal to their insertion order, so the arrival
index doubles as the node id. Links are either customer-to-provider (C2P,
stored with ``a`` as the customer and ``b`` as the provider) or
peer-to-peer (P2P).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator


class GraphError(Exception):
    """Base class for rejected graph mutations and lookups."""


class SelfLoop(GraphError):
    pass


class DuplicateLink(GraphError):
    pass


class KindViolation(GraphError):
    pass


class UnknownNode(GraphError, KeyError):
    pass


class NodeClass(str, enum.Enum):
    ISP = "ISP"
    NON_ISP = "NonISP"


class LinkKind(str, enum.Enum):
    C2P = "C2P"
    P2P = "P2P"


class Role(enum.IntEnum):
    """What a neighbour is to the node holding the adjacency entry."""

    CUSTOMER = 0
    PROVIDER = 1
    PEER = 2


@dataclass(frozen=True)
class NodeRecord:
    id: int
    node_class: NodeClass
    arrival_index: int
    label: int


@dataclass(frozen=True)
class LinkRecord:
    """A stored link. For C2P links ``a`` is the customer and ``b`` the provider."""

    a: int
    b: int
    kind: LinkKind

    @property
    def customer(self) -> int | None:
        return self.a if self.kind is LinkKind.C2P else None

    @property
    def provider(self) -> int | None:
        return self.b if self.kind is LinkKind.C2P else None


@dataclass(frozen=True)
class DegreeVector:
    customers: int
    providers: int
    peers: int

    @property
    def total(self) -> int:
        return self.customers + self.providers + self.peers


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class AnnotatedGraph:
    """Simple annotated graph with per-node customer/provider/peer counters.

    ``lenient`` graphs (built from real-world data) accept links that break
    the class constraints, e.g. a non-ISP with customers; ``validate`` then
    reports those as warnings rather than violations.
    """

    def __init__(self, *, lenient: bool = False) -> None:
        self.lenient = lenient
        self.classes: list[NodeClass] = []
        self.labels: list[int] = []
        self.adjacency: list[dict[int, Role]] = []
        self.customers: list[int] = []
        self.providers: list[int] = []
        self.peers: list[int] = []
        self.links: list[LinkRecord] = []
        self._link_ids: dict[tuple[int, int], int] = {}
        self._label_ids: dict[int, int] = {}

    # -- nodes -----------------------------------------------------------

    def add_node(self, node_class: NodeClass, label: int | None = None) -> int:
        node = len(self.classes)
        if label is None:
            label = node
        if label in self._label_ids:
            raise GraphError(f"duplicate node label {label}")
        self.classes.append(NodeClass(node_class))
        self.labels.append(label)
        self.adjacency.append({})
        self.customers.append(0)
        self.providers.append(0)
        self.peers.append(0)
        self._label_ids[label] = node
        return node

    def set_class(self, node: int, node_class: NodeClass) -> None:
        self._check_node(node)
        self.classes[node] = NodeClass(node_class)

    def node(self, node: int) -> NodeRecord:
        self._check_node(node)
        return NodeRecord(node, self.classes[node], node, self.labels[node])

    def nodes(self) -> Iterator[NodeRecord]:
        for i in range(len(self.classes)):
            yield NodeRecord(i, self.classes[i], i, self.labels[i])

    def node_by_label(self, label: int) -> int:
        try:
            return self._label_ids[label]
        except KeyError:
            raise UnknownNode(label) from None

    def has_label(self, label: int) -> bool:
        return label in self._label_ids

    @property
    def n_nodes(self) -> int:
        return len(self.classes)

    @property
    def n_links(self) -> int:
        return len(self.links)

    def count_class(self, node_class: NodeClass) -> int:
        return sum(1 for c in self.classes if c is node_class)

    def _check_node(self, node: int) -> None:
        if not 0 <= node < len(self.classes):
            raise UnknownNode(node)

    # -- links -----------------------------------------------------------

    def has_link(self, a: int, b: int) -> bool:
        return _pair(a, b) in self._link_ids

    def link_between(self, a: int, b: int) -> LinkRecord | None:
        link_id = self._link_ids.get(_pair(a, b))
        return None if link_id is None else self.links[link_id]

    def _check_link(self, a: int, b: int, kind: LinkKind, customer: int | None) -> None:
        self._check_node(a)
        self._check_node(b)
        if a == b:
            raise SelfLoop(f"self-loop on node {a}")
        if _pair(a, b) in self._link_ids:
            raise DuplicateLink(f"link {a}-{b} already exists")
        if kind is LinkKind.C2P:
            if customer not in (a, b):
                raise KindViolation("C2P link needs a customer endpoint among its endpoints")
            provider = b if customer == a else a
            if not self.lenient and self.classes[provider] is not NodeClass.ISP:
                raise KindViolation(f"provider {provider} is not an ISP")
        elif not self.lenient and (
            self.classes[a] is not NodeClass.ISP or self.classes[b] is not NodeClass.ISP
        ):
            raise KindViolation(f"P2P link {a}-{b} touches a non-ISP")

    def add_link(
        self, a: int, b: int, kind: LinkKind, customer: int | None = None
    ) -> int:
        """Insert a link and update both degree vectors.

        For C2P links ``customer`` names the customer endpoint and defaults
        to ``a``. Every check happens before any state changes.
        """
        kind = LinkKind(kind)
        if kind is LinkKind.C2P and customer is None:
            customer = a
        self._check_link(a, b, kind, customer)
        if kind is LinkKind.C2P:
            provider = b if customer == a else a
            record = LinkRecord(customer, provider, kind)
            self.adjacency[customer][provider] = Role.PROVIDER
            self.adjacency[provider][customer] = Role.CUSTOMER
            self.providers[customer] += 1
            self.customers[provider] += 1
        else:
            record = LinkRecord(a, b, kind)
            self.adjacency[a][b] = Role.PEER
            self.adjacency[b][a] = Role.PEER
            self.peers[a] += 1
            self.peers[b] += 1
        link_id = len(self.links)
        self.links.append(record)
        self._link_ids[_pair(a, b)] = link_id
        return link_id

    def rewire_provider(self, link_id: int, new_provider: int) -> LinkRecord:
        """Move the provider end of a C2P link to ``new_provider``."""
        old = self.links[link_id]
        if old.kind is not LinkKind.C2P:
            raise KindViolation("only C2P links can be rewired")
        customer = old.a
        self._check_link(customer, new_provider, LinkKind.C2P, customer)
        del self.adjacency[customer][old.b]
        del self.adjacency[old.b][customer]
        del self._link_ids[_pair(customer, old.b)]
        self.customers[old.b] -= 1
        record = LinkRecord(customer, new_provider, LinkKind.C2P)
        self.adjacency[customer][new_provider] = Role.PROVIDER
        self.adjacency[new_provider][customer] = Role.CUSTOMER
        self.customers[new_provider] += 1
        self.links[link_id] = record
        self._link_ids[_pair(customer, new_provider)] = link_id
        return record

    # -- degrees ---------------------------------------------------------

    def degree(self, node: int) -> int:
        self._check_node(node)
        return len(self.adjacency[node])

    def degree_vector(self, node: int) -> DegreeVector:
        self._check_node(node)
        return DegreeVector(self.customers[node], self.providers[node], self.peers[node])

    def degrees(self) -> list[int]:
        return [len(adj) for adj in self.adjacency]


def validate(graph: AnnotatedGraph) -> str | None:
    """Sweep every structural invariant; return the first violation or ``None``.

    Lenient graphs skip the class constraints on link endpoints.
    """
    n = graph.n_nodes
    if not (
        len(graph.labels) == len(graph.adjacency) == len(graph.customers) == n
        and len(graph.providers) == len(graph.peers) == n
    ):
        return "per-node arrays have inconsistent lengths"
    if len(set(graph.labels)) != n:
        return "node labels are not unique"
    seen: set[tuple[int, int]] = set()
    expected: list[dict[int, Role]] = [{} for _ in range(n)]
    for i, link in enumerate(graph.links):
        a, b = link.a, link.b
        if not (0 <= a < n and 0 <= b < n):
            return f"link {i} references an unknown node"
        if a == b:
            return f"link {i} is a self-loop"
        key = _pair(a, b)
        if key in seen:
            return f"link {i} duplicates pair {key}"
        seen.add(key)
        if graph._link_ids.get(key) != i:
            return f"link index out of sync for pair {key}"
        if link.kind is LinkKind.C2P:
            expected[a][b] = Role.PROVIDER
            expected[b][a] = Role.CUSTOMER
            if not graph.lenient and graph.classes[b] is not NodeClass.ISP:
                return f"link {i}: provider {b} is not an ISP"
        else:
            expected[a][b] = Role.PEER
            expected[b][a] = Role.PEER
            if not graph.lenient and NodeClass.NON_ISP in (graph.classes[a], graph.classes[b]):
                return f"link {i}: P2P link touches a non-ISP"
    if len(graph._link_ids) != len(graph.links):
        return "link index holds stale pairs"
    for v in range(n):
        if graph.adjacency[v] != expected[v]:
            return f"adjacency of node {v} disagrees with link records"
        roles = list(graph.adjacency[v].values())
        counts = (roles.count(Role.CUSTOMER), roles.count(Role.PROVIDER), roles.count(Role.PEER))
        if counts != (graph.customers[v], graph.providers[v], graph.peers[v]):
            return f"degree vector of node {v} disagrees with adjacency"
    return None


def class_noise(graph: AnnotatedGraph) -> list[int]:
    """Non-ISP nodes that have customers or peers (tolerated in real data)."""
    return [
        v
        for v in range(graph.n_nodes)
        if graph.classes[v] is NodeClass.NON_ISP and (graph.customers[v] or graph.peers[v])
    ]
