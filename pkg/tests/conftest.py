"""Shared graph fixtures and an independent isomorphism checker.

The checker deliberately avoids the package's own verification path so
soundness tests have a second opinion.
"""

from __future__ import annotations

import pytest

from seedmatch import Graph


def graph_from_edges(n: int, edges) -> Graph:
    return Graph(n, edges)


def triangle() -> Graph:
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


def path3() -> Graph:
    return Graph(3, [(0, 1), (1, 2)])


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def empty(n: int) -> Graph:
    return Graph(n, [])


def check_isomorphism(g1: Graph, g2: Graph, mapping) -> bool:
    """Pure-python edge-for-edge re-verification of a g2 -> g1 bijection."""
    n = g2.n
    m = list(mapping)
    if sorted(m) != list(range(g1.n)) or g1.n != n:
        return False
    e1 = {(min(u, v), max(u, v)) for u, v in g1.edges()}
    e2 = {(min(u, v), max(u, v)) for u, v in g2.edges()}
    mapped = {(min(m[u], m[v]), max(m[u], m[v])) for u, v in e2}
    return mapped == e1


def mapping_from_labels(sigma1_labels, sigma2_labels) -> list[int]:
    """g2 vertex -> g1 vertex with the same label."""
    by_label = {lab: v for v, lab in enumerate(sigma1_labels)}
    return [by_label[lab] for lab in sigma2_labels]


@pytest.fixture
def tiny_graphs():
    return {
        "triangle": triangle(),
        "path3": path3(),
        "star3": star(3),
        "c4": cycle(4),
        "empty4": empty(4),
    }
