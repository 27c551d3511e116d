"""Readers and writers for CAIDA-style AS relationship files and AS taxonomies.

Relationship lines look like ``A|B|code`` with ``#`` comments. Which
endpoint a ``-1``/``1`` code names as the provider is configurable through
:class:`CodeMap`; the default follows the serial-1 convention
(``provider|customer|-1``, ``peer|peer|0``, ``customer|provider|1``,
``sibling|sibling|2``).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

from .graph import AnnotatedGraph, LinkKind, NodeClass, class_noise

log = logging.getLogger(__name__)

DEFAULT_ISP_LABELS = frozenset({"t1", "t2", "isp", "tier1", "tier2", "transit"})


class MalformedLine(ValueError):
    def __init__(self, lineno: int, line: str, reason: str) -> None:
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno


class ConflictingDuplicate(ValueError):
    pass


@dataclass(frozen=True)
class AsRelRecord:
    as_a: int
    as_b: int
    code: int


@dataclass(frozen=True)
class CodeMap:
    """How relationship codes translate into annotated links.

    ``provider_first`` means ``A|B|-1`` reads as "A is the provider of B"
    (and ``A|B|1`` as "A is a customer of B"). ``siblings`` is ``"p2p"`` or
    ``"drop"``.
    """

    provider_first: bool = True
    siblings: str = "p2p"

    def __post_init__(self) -> None:
        if self.siblings not in ("p2p", "drop"):
            raise ValueError("siblings must be 'p2p' or 'drop'")

    @classmethod
    def named(cls, name: str, drop_siblings: bool = False) -> "CodeMap":
        orientations = {"provider-first": True, "customer-first": False}
        if name not in orientations:
            raise ValueError(f"unknown code map {name!r}; expected one of {sorted(orientations)}")
        return cls(orientations[name], "drop" if drop_siblings else "p2p")

    def resolve(self, rec: AsRelRecord) -> tuple[LinkKind, int | None] | None:
        """Link kind and customer AS for a record, or ``None`` if dropped."""
        if rec.code == 0:
            return LinkKind.P2P, None
        if rec.code == 2:
            return None if self.siblings == "drop" else (LinkKind.P2P, None)
        a_is_provider = (rec.code == -1) == self.provider_first
        return LinkKind.C2P, (rec.as_b if a_is_provider else rec.as_a)


@dataclass
class ParseReport:
    records: int = 0
    duplicates: int = 0
    dropped_siblings: int = 0


@dataclass(frozen=True)
class TaxonomyRecord:
    as_number: int
    is_isp: bool


@dataclass
class Taxonomy:
    records: dict[int, TaxonomyRecord] = field(default_factory=dict)
    duplicates: int = 0

    def __len__(self) -> int:
        return len(self.records)

    @property
    def isp_share(self) -> float:
        if not self.records:
            return 0.0
        return sum(r.is_isp for r in self.records.values()) / len(self.records)


@dataclass
class CoverageReport:
    covered: int
    uncovered: int
    isps: int
    non_isps: int
    inconsistent: int

    @property
    def rho(self) -> float:
        """Empirical non-ISP to ISP ratio."""
        return self.non_isps / self.isps if self.isps else float("inf")

    def to_dict(self) -> dict:
        return {
            "covered": self.covered,
            "uncovered": self.uncovered,
            "isps": self.isps,
            "non_isps": self.non_isps,
            "inconsistent": self.inconsistent,
            "rho": self.rho,
        }


def _content_lines(stream: Iterable[str]):
    for lineno, line in enumerate(stream, start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield lineno, line, stripped


def iter_as_rel(stream: Iterable[str]) -> Iterable[tuple[int, AsRelRecord]]:
    for lineno, line, stripped in _content_lines(stream):
        parts = stripped.split("|")
        if len(parts) < 3:
            raise MalformedLine(lineno, line, "expected A|B|code")
        try:
            a, b, code = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise MalformedLine(lineno, line, "non-integer field") from None
        if code not in (-1, 0, 1, 2):
            raise MalformedLine(lineno, line, f"unknown relationship code {code}")
        if a == b:
            raise MalformedLine(lineno, line, "self-loop")
        yield lineno, AsRelRecord(a, b, code)


def parse_as_rel(
    stream: Iterable[str],
    code_map: CodeMap | None = None,
    graph: AnnotatedGraph | None = None,
    infer_classes: bool = True,
) -> tuple[AnnotatedGraph, ParseReport]:
    """Build a lenient annotated graph from relationship lines.

    Nodes are labelled by AS number. Repeated pairs keep the first record;
    a repeat of a different link kind raises :class:`ConflictingDuplicate`.
    With ``infer_classes`` an AS is an ISP if it has customers or peers.
    """
    code_map = code_map or CodeMap()
    if graph is None:
        graph = AnnotatedGraph(lenient=True)
    report = ParseReport()

    def node_for(asn: int) -> int:
        if graph.has_label(asn):
            return graph.node_by_label(asn)
        return graph.add_node(NodeClass.NON_ISP, label=asn)

    for lineno, rec in iter_as_rel(stream):
        report.records += 1
        resolved = code_map.resolve(rec)
        if resolved is None:
            report.dropped_siblings += 1
            continue
        kind, customer_as = resolved
        a, b = node_for(rec.as_a), node_for(rec.as_b)
        existing = graph.link_between(a, b)
        if existing is not None:
            if existing.kind is not kind:
                raise ConflictingDuplicate(
                    f"line {lineno}: {rec.as_a}|{rec.as_b} repeated as {kind.value}, "
                    f"first seen as {existing.kind.value}"
                )
            report.duplicates += 1
            continue
        customer = None if customer_as is None else graph.node_by_label(customer_as)
        graph.add_link(a, b, kind, customer)
    if report.duplicates:
        log.warning("%d duplicate relationship records ignored (first wins)", report.duplicates)
    if infer_classes:
        for v in range(graph.n_nodes):
            is_isp = graph.customers[v] > 0 or graph.peers[v] > 0
            graph.classes[v] = NodeClass.ISP if is_isp else NodeClass.NON_ISP
    return graph, report


def parse_taxonomy(
    stream: Iterable[str],
    delimiter: str | None = "|",
    isp_labels: Iterable[str] = DEFAULT_ISP_LABELS,
) -> Taxonomy:
    """Read ``AS<delim>label`` lines; ``delimiter=None`` splits on whitespace.

    Labels are matched case-insensitively; repeated AS numbers keep the last
    record.
    """
    labels = {label.lower() for label in isp_labels}
    taxonomy = Taxonomy()
    for lineno, line, stripped in _content_lines(stream):
        parts = [p.strip() for p in stripped.split(delimiter)] if delimiter else stripped.split()
        if len(parts) < 2:
            raise MalformedLine(lineno, line, "expected AS number and class label")
        asn_text = parts[0].upper().removeprefix("AS")
        try:
            asn = int(asn_text)
        except ValueError:
            raise MalformedLine(lineno, line, "AS number is not an integer") from None
        if asn in taxonomy.records:
            taxonomy.duplicates += 1
            log.warning("line %d: AS%d classified again; last record wins", lineno, asn)
        taxonomy.records[asn] = TaxonomyRecord(asn, parts[1].lower() in labels)
    return taxonomy


def apply_taxonomy(graph: AnnotatedGraph, taxonomy: Taxonomy) -> CoverageReport:
    """Overwrite node classes where the taxonomy knows the AS."""
    covered = 0
    for v, label in enumerate(graph.labels):
        rec = taxonomy.records.get(label)
        if rec is None:
            continue
        covered += 1
        graph.classes[v] = NodeClass.ISP if rec.is_isp else NodeClass.NON_ISP
    noisy = class_noise(graph)
    if noisy:
        log.warning("%d non-ISP nodes have customers or peers; kept as labelled", len(noisy))
    isps = graph.count_class(NodeClass.ISP)
    return CoverageReport(
        covered=covered,
        uncovered=graph.n_nodes - covered,
        isps=isps,
        non_isps=graph.n_nodes - isps,
        inconsistent=len(noisy),
    )


# -- canonical serialization ---------------------------------------------


def write_as_rel(graph: AnnotatedGraph, fp: TextIO) -> None:
    """Write links as ``provider|customer|-1`` and ``a|b|0`` lines."""
    fp.write("# <provider-as>|<customer-as>|-1\n# <peer-as>|<peer-as>|0\n")
    labels = graph.labels
    for link in graph.links:
        if link.kind is LinkKind.C2P:
            fp.write(f"{labels[link.b]}|{labels[link.a]}|-1\n")
        else:
            fp.write(f"{labels[link.a]}|{labels[link.b]}|0\n")


def sidecar_path(graph_path: Path) -> Path:
    name = graph_path.name
    for suffix in (".as-rel.txt", ".txt"):
        if name.endswith(suffix):
            return graph_path.with_name(name[: -len(suffix)] + ".classes.json")
    return graph_path.with_name(name + ".classes.json")


def classes_payload(graph: AnnotatedGraph) -> dict:
    return {
        "nodes": [
            {"as": graph.labels[v], "class": graph.classes[v].value, "arrival_index": v}
            for v in range(graph.n_nodes)
        ]
    }


def save_graph(graph: AnnotatedGraph, path: Path | str) -> tuple[Path, Path]:
    """Write the relationship file and its JSON class sidecar."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fp:
        write_as_rel(graph, fp)
    side = sidecar_path(path)
    side.write_text(json.dumps(classes_payload(graph), separators=(",", ":")) + "\n", encoding="utf-8")
    return path, side


def load_graph(
    path: Path | str,
    code_map: CodeMap | None = None,
    taxonomy: Taxonomy | None = None,
) -> tuple[AnnotatedGraph, ParseReport]:
    """Load a relationship file, restoring classes and order from a sidecar if present.

    Without a sidecar, classes are inferred and optionally overridden by
    ``taxonomy``.
    """
    path = Path(path)
    side = sidecar_path(path)
    graph = AnnotatedGraph(lenient=True)
    has_sidecar = side.exists()
    if has_sidecar:
        nodes = json.loads(side.read_text(encoding="utf-8"))["nodes"]
        for entry in sorted(nodes, key=lambda e: e["arrival_index"]):
            graph.add_node(NodeClass(entry["class"]), label=int(entry["as"]))
    with path.open(encoding="utf-8") as fp:
        graph, report = parse_as_rel(fp, code_map, graph=graph, infer_classes=not has_sidecar)
    if taxonomy is not None:
        apply_taxonomy(graph, taxonomy)
    graph.lenient = bool(class_noise(graph))
    return graph, report
