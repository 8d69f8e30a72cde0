"""Undirected simple graphs, labelings, and degree machinery.

Graphs are immutable after construction and store adjacency as dense
per-vertex boolean bit rows (a numpy matrix), so degree counts, signature
extraction, and whole-graph comparisons are single vectorised operations.
Vertices are 0-indexed dense integers everywhere; labels in {1..n} appear
only inside :class:`Labeling` values.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


class Graph:
    """Frozen undirected simple graph on n vertices.

    Row v of the adjacency matrix sets bit u iff the edge {v, u} is present.
    Instances are read-only and safe to share across concurrent workers.
    """

    __slots__ = ("n", "_adj")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValidationError(f"vertex count must be >= 0, got {n}")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            _check_endpoints(n, u, v)
            if adj[u, v]:
                raise ValidationError(f"duplicate edge {{{u}, {v}}}")
            adj[u, v] = True
            adj[v, u] = True
        adj.setflags(write=False)
        self.n = n
        self._adj = adj

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "Graph":
        """Wrap a boolean adjacency matrix, checking symmetry and hollowness."""
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValidationError(f"adjacency must be square, got shape {adj.shape}")
        if not np.array_equal(adj, adj.T):
            raise ValidationError("adjacency must be symmetric")
        if adj.diagonal().any():
            raise ValidationError("self-loops are not allowed")
        return cls._wrap(adj.copy())

    @classmethod
    def _wrap(cls, adj: np.ndarray) -> "Graph":
        # Internal fast path: caller guarantees a fresh symmetric hollow matrix.
        g = object.__new__(cls)
        adj.setflags(write=False)
        g.n = adj.shape[0]
        g._adj = adj
        return g

    @property
    def adjacency(self) -> np.ndarray:
        """Read-only (n, n) boolean adjacency matrix."""
        return self._adj

    def degree(self, v: int) -> int:
        """Popcount of the bit row of v."""
        if not 0 <= v < self.n:
            raise ValidationError(f"vertex {v} out of range for n={self.n}")
        return int(self._adj[v].sum())

    def degrees(self) -> np.ndarray:
        """All vertex degrees as an int64 array."""
        return self._adj.sum(axis=1, dtype=np.int64)

    def edge_count(self) -> int:
        return int(self._adj.sum(dtype=np.int64)) // 2

    def has_edge(self, u: int, v: int) -> bool:
        _check_endpoints(self.n, u, v)
        return bool(self._adj[u, v])

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list with u < v."""
        us, vs = np.nonzero(np.triu(self._adj, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._adj, other._adj)

    def __hash__(self):
        return hash((self.n, self._adj.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count()})"


def _check_endpoints(n: int, u: int, v: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise ValidationError(f"edge ({u}, {v}) out of range for n={n}")
    if u == v:
        raise ValidationError(f"self-loop at vertex {u}")


class GraphBuilder:
    """Single-owner edge accumulator; ``build()`` freezes it into a Graph."""

    def __init__(self, n: int):
        if n < 0:
            raise ValidationError(f"vertex count must be >= 0, got {n}")
        self.n = n
        self._adj = np.zeros((n, n), dtype=bool)
        self._built = False

    def add_edge(self, u: int, v: int) -> None:
        if self._built:
            raise ValidationError("builder already frozen by build()")
        _check_endpoints(self.n, u, v)
        if self._adj[u, v]:
            raise ValidationError(f"duplicate edge {{{u}, {v}}}")
        self._adj[u, v] = True
        self._adj[v, u] = True

    def build(self) -> Graph:
        if self._built:
            raise ValidationError("builder already frozen by build()")
        self._built = True
        return Graph._wrap(self._adj)


@dataclass(frozen=True)
class Labeling:
    """Bijection from vertex indices to labels {1..n}.

    ``labels[v]`` is the label of vertex v.
    """

    labels: tuple[int, ...]

    def __post_init__(self):
        n = len(self.labels)
        if sorted(self.labels) != list(range(1, n + 1)):
            raise ValidationError("labeling must be a bijection onto {1..n}")

    @classmethod
    def identity(cls, n: int) -> "Labeling":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_array(cls, labels) -> "Labeling":
        return cls(tuple(int(x) for x in labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    def label_of(self, v: int) -> int:
        return self.labels[v]

    def vertex_of(self, label: int) -> int:
        """Inverse lookup: the vertex carrying a given label."""
        return self.as_permutation()[label - 1]

    def as_permutation(self) -> np.ndarray:
        """inv[l-1] = vertex whose label is l (0-indexed positions)."""
        return np.argsort(np.asarray(self.labels, dtype=np.int64), kind="stable")

    def inverse(self) -> "Labeling":
        """Labeling realizing the inverse permutation."""
        return Labeling(tuple(int(x) + 1 for x in self.as_permutation()))


UNASSIGNED = 0


@dataclass(frozen=True)
class PartialLabeling:
    """Array of per-vertex labels where 0 marks an unassigned vertex."""

    labels: tuple[int, ...]

    def __post_init__(self):
        n = len(self.labels)
        assigned = [x for x in self.labels if x != UNASSIGNED]
        if any(not 1 <= x <= n for x in assigned):
            raise ValidationError("assigned labels must lie in {1..n}")
        if len(set(assigned)) != len(assigned):
            raise ValidationError("assigned labels must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    def get(self, v: int) -> int | None:
        lab = self.labels[v]
        return None if lab == UNASSIGNED else lab

    def assigned_vertices(self) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab != UNASSIGNED]

    def is_complete(self) -> bool:
        return UNASSIGNED not in self.labels

    def to_labeling(self) -> Labeling:
        if not self.is_complete():
            raise ValidationError("partial labeling is not complete")
        return Labeling(self.labels)


def degree_sequence_desc(g: Graph) -> list[tuple[int, int]]:
    """(degree, multiplicity) pairs in strictly decreasing degree order."""
    values, counts = np.unique(g.degrees(), return_counts=True)
    return [(int(d), int(c)) for d, c in zip(values[::-1], counts[::-1])]


def apply_permutation(g: Graph, perm: Labeling) -> Graph:
    """Relabel vertices: the result has edge {perm(u)-1, perm(v)-1} iff g has {u, v}."""
    if perm.n != g.n:
        raise ValidationError(f"permutation length {perm.n} != graph order {g.n}")
    # target[u] = new index of old vertex u
    target = np.asarray(perm.labels, dtype=np.int64) - 1
    inv = np.argsort(target)
    return Graph._wrap(g.adjacency[np.ix_(inv, inv)].copy())


def write_edgelist(g: Graph, fp) -> None:
    """Write the text edge-list format: header ``n m``, then ``u v`` per line."""
    own = isinstance(fp, str)
    fh = open(fp, "w", encoding="utf-8") if own else fp
    try:
        fh.write(f"{g.n} {g.edge_count()}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")
    finally:
        if own:
            fh.close()


def read_edgelist(fp) -> Graph:
    """Parse the text edge-list format, rejecting self-loops and duplicates."""
    own = isinstance(fp, str)
    fh = open(fp, "r", encoding="utf-8") if own else fp
    try:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValidationError("edge-list header must be 'n m'")
        try:
            n, m = int(header[0]), int(header[1])
        except ValueError as exc:
            raise ValidationError(f"bad edge-list header: {header}") from exc
        builder = GraphBuilder(n)
        count = 0
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise ValidationError(f"bad edge line: {line.rstrip()}")
            u, v = int(parts[0]), int(parts[1])
            if not u < v:
                raise ValidationError(f"edges must be written with u < v, got {u} {v}")
            builder.add_edge(u, v)
            count += 1
        if count != m:
            raise ValidationError(f"header declares {m} edges, file has {count}")
        return builder.build()
    finally:
        if own:
            fh.close()


def edgelist_str(g: Graph) -> str:
    buf = io.StringIO()
    write_edgelist(g, buf)
    return buf.getvalue()
