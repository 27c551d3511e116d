from __future__ import annotations

import pytest

from mpa_topo.graph import AnnotatedGraph, LinkKind, NodeClass


def build(n: int, edges, classes=None) -> AnnotatedGraph:
    """Graph of ``n`` ISPs; every edge ``(u, v)`` makes ``max`` the customer of ``min``."""
    g = AnnotatedGraph()
    for v in range(n):
        g.add_node(classes[v] if classes else NodeClass.ISP)
    for u, v in edges:
        lo, hi = min(u, v), max(u, v)
        g.add_link(hi, lo, LinkKind.C2P, customer=hi)
    return g


@pytest.fixture
def star():
    g = AnnotatedGraph()
    center = g.add_node(NodeClass.ISP)
    for _ in range(4):
        leaf = g.add_node(NodeClass.NON_ISP)
        g.add_link(leaf, center, LinkKind.C2P)
    return g


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line, then assert on it."""

    def record(criterion: str, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        assert ok, f"{criterion}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
