"""
Graph core - simple undirected graphs, vertex sets and bipartitions.

Everything else in the project builds on the types and queries defined here:
the edge-list document format, partition and vertex-set files, the canonical
graph digest, cut sizes, k-core peeling, complements and cycle decomposition
of 2-regular graphs.

Vertices are the integers 0..n-1. Graphs are immutable once constructed.
"""

import hashlib
import logging
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Literal

import networkx as nx

log = logging.getLogger(__name__)

# Marker used on the second line of a partition file for "complement of line 1"
COMPLEMENT_MARKER = "*"

PeelOrder = Literal["bucket", "queue", "stack"]

Edge = tuple[int, int]


class GraphError(Exception):
    """Base class for every error raised by this project."""


class GraphParseError(GraphError):
    """Malformed edge-list, partition or certificate text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.detail = message
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractViolation(GraphError, ValueError):
    """A precondition or invariant of an operation does not hold."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]  # strictly ascending neighbor lists

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adjacency) != self.n:
            raise ContractViolation(
                f"adjacency has {len(self.adjacency)} rows for n={self.n}"
            )
        for v, nbrs in enumerate(self.adjacency):
            previous = -1
            for u in nbrs:
                if u == v:
                    raise ContractViolation(f"loop at vertex {v}")
                if not 0 <= u < self.n:
                    raise ContractViolation(f"neighbor {u} of {v} out of range")
                if u <= previous:
                    raise ContractViolation(
                        f"neighbor list of {v} is not strictly ascending"
                    )
                previous = u
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if v not in self.neighbor_sets[u]:
                    raise ContractViolation(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        """Build a graph from an edge iterable; loops and repeats are errors."""
        rows: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ContractViolation(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ContractViolation(f"edge {u}-{v} out of range for n={n}")
            if v in rows[u]:
                raise ContractViolation(f"duplicate edge {min(u, v)}-{max(u, v)}")
            rows[u].add(v)
            rows[v].add(u)
        return cls(n, tuple(tuple(sorted(r)) for r in rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple(() for _ in range(n)))

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    @cached_property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def edges(self) -> list[Edge]:
        """All edges as (u, v) with u < v, in lexicographic order."""
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    @property
    def valency(self) -> int | None:
        """Common degree of a regular graph, None otherwise."""
        if self.n == 0:
            return 0
        d = len(self.adjacency[0])
        if all(len(nbrs) == d for nbrs in self.adjacency):
            return d
        return None

    def is_regular(self, d: int | None = None) -> bool:
        valency = self.valency
        return valency is not None and (d is None or valency == d)

    def inside_degree(self, v: int, members: "VertexSet | frozenset[int]") -> int:
        """Number of neighbors of v inside the given set (d_U(v))."""
        return sum(1 for u in self.adjacency[v] if u in members)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph


@dataclass(frozen=True)
class VertexSet:
    """Subset of the vertices of a graph on n vertices."""

    n: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        for v in self.members:
            if not 0 <= v < self.n:
                raise ContractViolation(f"vertex {v} out of range for n={self.n}")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> "VertexSet":
        return cls(n, frozenset(int(v) for v in vertices))

    @classmethod
    def everything(cls, n: int) -> "VertexSet":
        return cls(n, frozenset(range(n)))

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __bool__(self) -> bool:
        return bool(self.members)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def complement(self) -> "VertexSet":
        return VertexSet(self.n, frozenset(range(self.n)) - self.members)

    def intersection_size(self, other: "VertexSet") -> int:
        return len(self.members & other.members)

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.members.isdisjoint(other.members)


@dataclass(frozen=True)
class Bipartition:
    """Ordered pair of disjoint classes covering all vertices."""

    a: VertexSet
    b: VertexSet
    trivial: bool = False  # allows an empty class

    def __post_init__(self) -> None:
        if self.a.n != self.b.n:
            raise ContractViolation("classes live on different vertex universes")
        if not self.a.isdisjoint(self.b):
            overlap = min(self.a.members & self.b.members)
            raise ContractViolation(f"classes overlap at vertex {overlap}")
        if len(self.a) + len(self.b) != self.a.n:
            missing = min(set(range(self.a.n)) - self.a.members - self.b.members)
            raise ContractViolation(f"vertex {missing} is in neither class")
        if not self.trivial and (not self.a or not self.b):
            raise ContractViolation("empty class in a bipartition not flagged trivial")

    @classmethod
    def from_class(
        cls, n: int, a: Iterable[int], trivial: bool = False
    ) -> "Bipartition":
        side_a = VertexSet.of(n, a)
        return cls(side_a, side_a.complement(), trivial=trivial)

    @classmethod
    def from_sides(cls, sides: list[int], trivial: bool = False) -> "Bipartition":
        """Build from a 0/1 side list (0 = class a)."""
        n = len(sides)
        return cls.from_class(n, (v for v in range(n) if sides[v] == 0), trivial)

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def is_trivial(self) -> bool:
        return not self.a or not self.b

    def sides(self) -> list[int]:
        return [0 if v in self.a else 1 for v in range(self.n)]

    def swapped(self) -> "Bipartition":
        return Bipartition(self.b, self.a, self.trivial)


# =============================================================================
# Edge-list, partition and vertex-set documents
# =============================================================================


def _parse_int_pair(line: str, lineno: int) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise GraphParseError(f"expected two integers, got {line!r}", lineno)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(f"expected two integers, got {line!r}", lineno) from None


def load_graph(text: str) -> Graph:
    """Parse an edge-list document.

    The first line is "n m", followed by exactly m lines "u v" with
    0 <= u < v < n in strictly increasing lexicographic order.

    Raises:
        GraphParseError: On any format violation, naming the line number.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise GraphParseError("empty document", 1)

    n, m = _parse_int_pair(lines[0], 1)
    if n < 0 or m < 0:
        raise GraphParseError("negative vertex or edge count", 1)
    if len(lines) - 1 != m:
        raise GraphParseError(f"header declares {m} edges, found {len(lines) - 1}", 1)

    edges: list[Edge] = []
    previous: Edge | None = None
    for lineno, line in enumerate(lines[1:], start=2):
        u, v = _parse_int_pair(line, lineno)
        if u == v:
            raise GraphParseError(f"loop at vertex {u}", lineno)
        if u > v:
            raise GraphParseError(f"endpoints not ascending: {u} {v}", lineno)
        if u < 0 or v >= n:
            raise GraphParseError(f"vertex out of range 0..{n - 1}", lineno)
        if previous is not None and (u, v) <= previous:
            if (u, v) == previous:
                raise GraphParseError(f"duplicate edge {u} {v}", lineno)
            raise GraphParseError("edges not in increasing order", lineno)
        edges.append((u, v))
        previous = (u, v)
    return Graph.from_edges(n, edges)


def save_graph(g: Graph) -> str:
    """Serialize to the canonical edge-list document."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(path: Path) -> Graph:
    return load_graph(Path(path).read_text())


def write_graph(path: Path, g: Graph) -> None:
    Path(path).write_text(save_graph(g))


def graph_digest(g: Graph) -> str:
    """SHA-256 of the canonical edge-list document."""
    return hashlib.sha256(save_graph(g).encode()).hexdigest()


def _parse_vertex_line(line: str, n: int, lineno: int) -> list[int]:
    try:
        vertices = [int(tok) for tok in line.split()]
    except ValueError:
        raise GraphParseError(f"non-integer vertex in {line!r}", lineno) from None
    for previous, v in zip(vertices, vertices[1:], strict=False):
        if v <= previous:
            raise GraphParseError("vertex list not strictly ascending", lineno)
    for v in vertices:
        if not 0 <= v < n:
            raise GraphParseError(f"vertex {v} out of range 0..{n - 1}", lineno)
    return vertices


def format_vertices(vertices: Iterable[int], offset: int = 0) -> str:
    return " ".join(str(v + offset) for v in sorted(vertices))


def _shift_line(line: str, offset: int, lineno: int) -> str:
    if not offset:
        return line
    try:
        return " ".join(str(int(tok) - offset) for tok in line.split())
    except ValueError:
        raise GraphParseError(f"non-integer vertex in {line!r}", lineno) from None


def load_vertex_set(text: str, n: int, offset: int = 0) -> VertexSet:
    """Parse a one-line vertex-set document; offset is subtracted from ids."""
    lines = text.splitlines() or [""]
    return VertexSet.of(n, _parse_vertex_line(_shift_line(lines[0], offset, 1), n, 1))


def save_vertex_set(s: VertexSet, offset: int = 0) -> str:
    return format_vertices(s, offset) + "\n"


def load_partition(text: str, n: int, offset: int = 0) -> Bipartition:
    """Parse a partition document (line 2 may be "*" for the complement)."""
    lines = text.splitlines()
    if len(lines) < 2:
        raise GraphParseError("partition needs two lines", len(lines) + 1)

    a = _parse_vertex_line(_shift_line(lines[0], offset, 1), n, 1)
    if lines[1].strip() == COMPLEMENT_MARKER:
        return Bipartition.from_class(n, a, trivial=True)
    b = _parse_vertex_line(_shift_line(lines[1], offset, 2), n, 2)
    try:
        return Bipartition(VertexSet.of(n, a), VertexSet.of(n, b), trivial=True)
    except ContractViolation as e:
        raise GraphParseError(str(e), 2) from None


def save_partition(p: Bipartition) -> str:
    return f"{format_vertices(p.a)}\n{format_vertices(p.b)}\n"


# =============================================================================
# Queries
# =============================================================================


def cut_size(g: Graph, p: Bipartition) -> int:
    """Number of edges with endpoints in different classes."""
    if p.n != g.n:
        raise ContractViolation(f"partition covers {p.n} vertices, graph has {g.n}")
    return sum(1 for u, v in g.edges() if (u in p.a) != (v in p.a))


def induced_edge_count(g: Graph, s: VertexSet | Iterable[int]) -> int:
    members = s.members if isinstance(s, VertexSet) else frozenset(s)
    return sum(1 for v in members for u in g.adjacency[v] if u in members) // 2


def induced_subgraph(g: Graph, s: VertexSet | Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph relabelled 0..|s|-1 in ascending order, plus the label map."""
    labels = tuple(sorted(s))
    index = {v: i for i, v in enumerate(labels)}
    rows = tuple(
        tuple(sorted(index[u] for u in g.adjacency[v] if u in index)) for v in labels
    )
    return Graph(len(labels), rows), labels


def remove_edges(g: Graph, edges: Iterable[Edge]) -> Graph:
    gone = {(min(u, v), max(u, v)) for u, v in edges}
    rows = tuple(
        tuple(u for u in nbrs if (min(u, v), max(u, v)) not in gone)
        for v, nbrs in enumerate(g.adjacency)
    )
    return Graph(g.n, rows)


def k_core(
    g: Graph,
    k: int,
    within: VertexSet | Iterable[int] | None = None,
    order: PeelOrder = "bucket",
) -> VertexSet:
    """Unique maximal k-cohesive set, by iterated deletion of low-degree vertices.

    The default peels from a bucket queue keyed by current degree, lowest
    bucket first; "queue" and "stack" peel pending vertices first-in-first-out
    or last-in-first-out. All three are O(n + m).

    Args:
        g: Host graph.
        k: Minimum inside degree required (k >= 1).
        within: Restrict to the subgraph induced by this set.
        order: Peeling discipline for the pending deletions; the result does
            not depend on it.
    """
    if k < 1:
        raise ContractViolation(f"k must be positive, got {k}")
    if within is None:
        alive = [True] * g.n
    else:
        alive = [False] * g.n
        for v in within:
            alive[v] = True

    degree = [
        sum(1 for u in g.adjacency[v] if alive[u]) if alive[v] else 0
        for v in range(g.n)
    ]
    if order == "bucket":
        _peel_buckets(g, k, alive, degree)
        return VertexSet.of(g.n, (v for v in range(g.n) if alive[v]))

    pending = deque(v for v in range(g.n) if alive[v] and degree[v] < k)
    queued = [False] * g.n
    for v in pending:
        queued[v] = True

    pop = pending.popleft if order == "queue" else pending.pop
    while pending:
        v = pop()
        alive[v] = False
        for u in g.adjacency[v]:
            if alive[u]:
                degree[u] -= 1
                if degree[u] < k and not queued[u]:
                    queued[u] = True
                    pending.append(u)

    return VertexSet.of(g.n, (v for v in range(g.n) if alive[v]))


def _peel_buckets(g: Graph, k: int, alive: list[bool], degree: list[int]) -> None:
    buckets: list[set[int]] = [set() for _ in range(k)]
    for v in range(g.n):
        if alive[v] and degree[v] < k:
            buckets[degree[v]].add(v)
    low = 0
    while low < k:
        if not buckets[low]:
            low += 1
            continue
        v = buckets[low].pop()
        alive[v] = False
        for u in g.adjacency[v]:
            if not alive[u]:
                continue
            if degree[u] < k:
                buckets[degree[u]].discard(u)
            degree[u] -= 1
            if degree[u] < k:
                buckets[degree[u]].add(u)
                low = min(low, degree[u])


def complement(g: Graph) -> Graph:
    rows = tuple(
        tuple(u for u in range(g.n) if u != v and u not in g.neighbor_sets[v])
        for v in range(g.n)
    )
    return Graph(g.n, rows)


def cycle_decomposition(g: Graph) -> list[int]:
    """Sorted cycle lengths of a 2-regular graph."""
    for v in range(g.n):
        if g.degree(v) != 2:
            raise ContractViolation(
                f"vertex {v} has degree {g.degree(v)}; graph is not 2-regular"
            )
    return sorted(len(c) for c in nx.connected_components(g.to_networkx()))
