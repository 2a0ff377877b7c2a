"""
Partition engine.

Verification of internal partitions and cohesive sets, bad-vertex switching
with its guarantee thresholds, the exhaustive oracle and its certificates,
the seeded hybrid search, greedy extension of a cohesive pair, the
cohesive-set search for regular graphs and the cluster-based bisection and
dense-subgraph heuristics.
"""

import heapq
import itertools
import logging
import math
from collections import deque
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Literal, TypeVar

import networkx as nx
import numpy as np

from generators import make_rng
from graphs import (
    Bipartition,
    ContractViolation,
    Graph,
    GraphError,
    GraphParseError,
    VertexSet,
    cut_size,
    format_vertices,
    graph_digest,
    induced_edge_count,
    k_core,
    load_partition,
    load_vertex_set,
)

log = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULT_NODE_CAP = 5_000_000
DEFAULT_KM_ROUNDS = 64
BAN_LINIAL_RESTARTS = 32
HYBRID_RESTARTS = 16
EXHAUSTIVE_COHESIVE_MAX_N = 20

# How many low-inside members and high-inside outsiders a swap step compares
SWAP_CANDIDATES = 4

SwitchPolicy = Literal["lowest-index", "given-order", "highest-gain"]
SwitchOutcome = Literal["internal", "trivial-end"]
CertificateKind = Literal["internal-partition", "cohesive-pair", "nonexistence"]

CERTIFICATE_KINDS: tuple[CertificateKind, ...] = (
    "internal-partition",
    "cohesive-pair",
    "nonexistence",
)


class SearchBudgetExceeded(GraphError):
    """The exhaustive search hit its node cap; the answer is unknown."""

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search budget exceeded after {nodes} nodes")


class CohesiveSetNotFound(GraphError):
    """Every restart of the cohesive-set search failed."""


# =============================================================================
# Verification
# =============================================================================


@dataclass(frozen=True)
class Violation:
    vertex: int
    inside: int
    outside: int


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification: valid iff there are no violations."""

    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def _need(degree: int) -> int:
    return (degree + 1) // 2


def verify_internal(g: Graph, p: Bipartition) -> Verdict:
    """Check d_own(v) >= d_other(v) for every vertex.

    Raises:
        ContractViolation: The partition has an empty class or the wrong size.
    """
    if p.n != g.n:
        raise ContractViolation(f"partition covers {p.n} vertices, graph has {g.n}")
    if p.is_trivial:
        raise ContractViolation("trivial partitions are never internal")
    violations = []
    for v in range(g.n):
        own_class = p.a if v in p.a else p.b
        own = g.inside_degree(v, own_class)
        other = g.degree(v) - own
        if own < other:
            violations.append(Violation(v, own, other))
    return Verdict(tuple(violations))


def verify_cohesive(g: Graph, s: VertexSet, k: int) -> Verdict:
    """Check that every member of s has at least k neighbours in s."""
    if not s:
        raise ContractViolation("cohesiveness is only defined for nonempty sets")
    violations = []
    for v in s:
        inside = g.inside_degree(v, s)
        if inside < k:
            violations.append(Violation(v, inside, g.degree(v) - inside))
    return Verdict(tuple(violations))


# =============================================================================
# Certificates
# =============================================================================


@dataclass(frozen=True)
class Certificate:
    """Machine-checkable witness tied to a graph by its digest.

    Text form: kind on line 1, digest on line 2, then the payload. A
    partition payload is the two-line partition document; a cohesive pair is
    "k=<level>" followed by one vertex-set line per set; nonexistence is
    "nodes=<count> fixed=0".
    """

    kind: CertificateKind
    graph_hash: str
    partition: Bipartition | None = None
    pair: tuple[VertexSet, VertexSet] | None = None
    level: int = 3
    nodes: int = 0
    fixed: int = 0

    @classmethod
    def internal(cls, g: Graph, p: Bipartition) -> "Certificate":
        return cls("internal-partition", graph_digest(g), partition=p)

    @classmethod
    def cohesive_pair(
        cls, g: Graph, s1: VertexSet, s2: VertexSet, level: int = 3
    ) -> "Certificate":
        return cls("cohesive-pair", graph_digest(g), pair=(s1, s2), level=level)

    @classmethod
    def nonexistence(cls, g: Graph, nodes: int) -> "Certificate":
        return cls("nonexistence", graph_digest(g), nodes=nodes)

    def to_text(self) -> str:
        lines = [self.kind, self.graph_hash]
        if self.kind == "internal-partition":
            assert self.partition is not None
            lines += [format_vertices(self.partition.a), format_vertices(self.partition.b)]
        elif self.kind == "cohesive-pair":
            assert self.pair is not None
            lines += [f"k={self.level}", *(format_vertices(s) for s in self.pair)]
        else:
            lines.append(f"nodes={self.nodes} fixed={self.fixed}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int) -> "Certificate":
        lines = text.splitlines()
        if len(lines) < 3:
            raise GraphParseError("certificate needs a kind, a digest and a payload", len(lines) + 1)
        kind = lines[0].strip()
        digest = lines[1].strip()
        if kind == "internal-partition":
            partition = _at_line(3, load_partition, "\n".join(lines[2:4]), n)
            return cls(kind, digest, partition=partition)
        if kind == "cohesive-pair":
            level = _parse_field(lines[2], "k", 3)
            if len(lines) < 5:
                raise GraphParseError("cohesive pair needs two vertex-set lines", len(lines) + 1)
            pair = (
                _at_line(4, load_vertex_set, lines[3], n),
                _at_line(5, load_vertex_set, lines[4], n),
            )
            return cls(kind, digest, pair=pair, level=level)
        if kind == "nonexistence":
            fields = dict(tok.partition("=")[::2] for tok in lines[2].split())
            try:
                return cls(kind, digest, nodes=int(fields["nodes"]), fixed=int(fields["fixed"]))
            except (KeyError, ValueError):
                raise GraphParseError(f"malformed search record {lines[2]!r}", 3) from None
        raise GraphParseError(f"unknown certificate kind {kind!r}", 1)

    def verify(self, g: Graph, node_cap: int = DEFAULT_NODE_CAP) -> bool:
        """Re-check the payload against g; nonexistence re-runs the search."""
        if self.graph_hash != graph_digest(g):
            log.warning("certificate digest does not match the graph")
            return False
        if self.kind == "internal-partition":
            assert self.partition is not None
            if self.partition.n != g.n or self.partition.is_trivial:
                return False
            return verify_internal(g, self.partition).valid
        if self.kind == "cohesive-pair":
            assert self.pair is not None
            return all(s and verify_cohesive(g, s, self.level).valid for s in self.pair)
        return exhaustive_internal(g, node_cap).kind == "nonexistence"


def _at_line(first: int, parse: Callable[..., T], *args: object) -> T:
    """Run a payload parser, renumbering its errors to file lines starting at `first`."""
    try:
        return parse(*args)
    except GraphParseError as e:
        line = None if e.line is None else e.line + first - 1
        raise GraphParseError(e.detail, line) from None


def _parse_field(line: str, name: str, lineno: int) -> int:
    key, _, value = line.strip().partition("=")
    if key != name:
        raise GraphParseError(f"expected {name}=<int>, got {line!r}", lineno)
    try:
        return int(value)
    except ValueError:
        raise GraphParseError(f"expected {name}=<int>, got {line!r}", lineno) from None


# =============================================================================
# Local switching
# =============================================================================


def switching_guarantee_threshold(valency: int, n: int) -> int:
    """Largest bisection size from which switching always ends internal."""
    if valency < 3:
        raise ContractViolation(f"valency must be at least 3, got {valency}")
    k = valency // 2
    if valency % 2:
        return n // 2 + k * (k + 1) - 1
    return n + k * (k - 1) - 1


@dataclass
class SwitchTrace:
    """Record of a switching run; moves are (vertex, class it left)."""

    initial_cut: int
    moves: list[tuple[int, int]] = field(default_factory=list)
    cut_sizes: list[int] = field(default_factory=list)
    outcome: SwitchOutcome = "internal"
    final: Bipartition | None = None


def local_switch(
    g: Graph,
    p: Bipartition,
    policy: SwitchPolicy = "lowest-index",
    order: Sequence[int] | None = None,
) -> tuple[Certificate | None, SwitchTrace]:
    """Move bad vertices to the other class until none is left.

    A vertex is bad when it has strictly fewer neighbours in its own class
    than in the other; ties never move. The policy picks the next bad vertex:
    lowest index, first in `order` ("given-order"), or largest
    d_other - d_own with ties to the lowest index ("highest-gain").

    Returns:
        The internal-partition certificate (None on a trivial end) and the
        full trace.
    """
    if p.n != g.n:
        raise ContractViolation(f"partition covers {p.n} vertices, graph has {g.n}")
    if policy == "given-order":
        if order is None or sorted(order) != list(range(g.n)):
            raise ContractViolation("given-order policy needs a permutation of all vertices")
        rank = {v: i for i, v in enumerate(order)}
    else:
        rank = {v: v for v in range(g.n)}

    side = p.sides()
    own = [sum(1 for u in g.adjacency[v] if side[u] == side[v]) for v in range(g.n)]

    def gain(v: int) -> int:
        return g.degree(v) - 2 * own[v]

    def key(v: int) -> tuple[int, int]:
        return (-gain(v), v) if policy == "highest-gain" else (rank[v], v)

    cut = cut_size(g, p)
    trace = SwitchTrace(initial_cut=cut)
    heap = [key(v) for v in range(g.n) if gain(v) > 0]
    heapq.heapify(heap)

    while heap:
        entry = heapq.heappop(heap)
        v = entry[1]
        if gain(v) <= 0 or entry != key(v):
            continue
        cut -= gain(v)
        trace.moves.append((v, side[v]))
        trace.cut_sizes.append(cut)
        origin = side[v]
        side[v] = 1 - origin
        own[v] = g.degree(v) - own[v]
        for u in g.adjacency[v]:
            own[u] += 1 if side[u] == side[v] else -1
            if gain(u) > 0:
                heapq.heappush(heap, key(u))

    final = Bipartition.from_sides(side, trivial=True)
    trace.final = final
    if final.is_trivial:
        trace.outcome = "trivial-end"
        log.debug("switching ended trivial after %d moves", len(trace.moves))
        return None, trace
    return Certificate.internal(g, Bipartition.from_sides(side)), trace


# =============================================================================
# Exhaustive search
# =============================================================================


def _bfs_order(g: Graph) -> list[int]:
    order: list[int] = []
    seen = [False] * g.n
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in g.adjacency[v]:
                if not seen[u]:
                    seen[u] = True
                    queue.append(u)
    return order


def exhaustive_internal(g: Graph, node_cap: int = DEFAULT_NODE_CAP) -> Certificate:
    """Decide internal-partition existence by complete enumeration.

    Vertex 0 is fixed in class A and vertices are assigned in BFS order. A
    branch is cut as soon as an assigned vertex can no longer reach
    ceil(d/2) neighbours in its own class.

    Raises:
        SearchBudgetExceeded: More than node_cap assignments were tried.
    """
    n = g.n
    if n < 2:
        return Certificate.nonexistence(g, 0)

    order = _bfs_order(g)
    need = [_need(g.degree(v)) for v in range(n)]
    side = [-1] * n
    own = [0] * n
    open_nbrs = [g.degree(v) for v in range(n)]
    nodes = 0
    class_b = 0

    def assign(v: int, s: int) -> bool:
        nonlocal nodes, class_b
        nodes += 1
        if nodes > node_cap:
            raise SearchBudgetExceeded(nodes)
        side[v] = s
        class_b += s
        ok = True
        for u in g.adjacency[v]:
            open_nbrs[u] -= 1
            if side[u] == s:
                own[u] += 1
                own[v] += 1
            elif side[u] >= 0 and own[u] + open_nbrs[u] < need[u]:
                ok = False
        return ok and own[v] + open_nbrs[v] >= need[v]

    def unassign(v: int) -> None:
        nonlocal class_b
        s = side[v]
        for u in g.adjacency[v]:
            open_nbrs[u] += 1
            if side[u] == s:
                own[u] -= 1
                own[v] -= 1
        side[v] = -1
        class_b -= s

    def search(depth: int) -> bool:
        if depth == n:
            return class_b > 0
        v = order[depth]
        for s in (0, 1) if depth else (0,):
            feasible = assign(v, s)
            if feasible and search(depth + 1):
                return True
            unassign(v)
        return False

    if search(0):
        partition = Bipartition.from_sides(side)
        log.debug("exhaustive search found a partition after %d nodes", nodes)
        return Certificate.internal(g, partition)
    log.debug("exhaustive search complete after %d nodes: no internal partition", nodes)
    return Certificate.nonexistence(g, nodes)


# =============================================================================
# Hybrid search
# =============================================================================


def _refine_bisection(g: Graph, a: set[int]) -> set[int]:
    """Balanced pair swaps while some swap lowers the cut."""
    side = [0 if v in a else 1 for v in range(g.n)]
    own = [sum(1 for u in g.adjacency[v] if side[u] == side[v]) for v in range(g.n)]
    for _ in range(g.m):
        gains = [g.degree(v) - 2 * own[v] for v in range(g.n)]
        best_a = heapq.nlargest(SWAP_CANDIDATES, (v for v in range(g.n) if side[v] == 0), key=gains.__getitem__)
        best_b = heapq.nlargest(SWAP_CANDIDATES, (v for v in range(g.n) if side[v] == 1), key=gains.__getitem__)
        best = max(
            ((gains[x] + gains[y] - 2 * g.has_edge(x, y), x, y) for x in best_a for y in best_b),
            default=(0, -1, -1),
        )
        if best[0] <= 0:
            break
        for v in best[1:]:
            side[v] = 1 - side[v]
            own[v] = g.degree(v) - own[v]
            for u in g.adjacency[v]:
                own[u] += 1 if side[u] == side[v] else -1
    return {v for v in range(g.n) if side[v] == 0}


def _fiedler_space(g: Graph) -> np.ndarray:
    adjacency = np.zeros((g.n, g.n))
    for u, v in g.edges():
        adjacency[u, v] = adjacency[v, u] = 1.0
    laplacian = np.diag(adjacency.sum(axis=1)) - adjacency
    values, vectors = np.linalg.eigh(laplacian)
    return vectors[:, np.abs(values - values[1]) < 1e-8]


def hybrid_internal(
    g: Graph,
    seed: int = 0,
    restarts: int = HYBRID_RESTARTS,
    node_cap: int = DEFAULT_NODE_CAP,
    exhaustive_fallback: bool = True,
) -> Certificate | None:
    """Seeded search for an internal partition.

    Restarts alternate spectral starting bisections (a random direction in
    the second Laplacian eigenspace, split at the median) with uniform
    random bisections. Each start is refined by balanced pair swaps and then
    by lowest-index switching. If no restart succeeds the exhaustive search
    decides; without the fallback the result is None.

    Raises:
        SearchBudgetExceeded: The exhaustive fallback ran out of nodes.
    """
    if g.n >= 4:
        rng = make_rng(seed)
        space = _fiedler_space(g)
        for restart in range(restarts):
            if restart % 2 == 0:
                direction = space @ rng.standard_normal(space.shape[1])
                ranked = np.argsort(direction, kind="stable")
            else:
                ranked = rng.permutation(g.n)
            start = _refine_bisection(g, {int(v) for v in ranked[: g.n // 2]})
            certificate, trace = local_switch(g, Bipartition.from_class(g.n, start))
            if certificate is not None:
                log.debug("hybrid search succeeded on restart %d (%d moves)", restart, len(trace.moves))
                return certificate
        log.debug("hybrid search: %d restarts without an internal partition", restarts)
    if not exhaustive_fallback:
        return None
    return exhaustive_internal(g, node_cap)


# =============================================================================
# Extension and special families
# =============================================================================


def extend_to_partition(g: Graph, a: VertexSet, b: VertexSet) -> Bipartition:
    """Grow a into a class of an internal partition whose other class contains b.

    Outside vertices join a one by one while they have at least ceil(d/2)
    neighbours in a; everything left over joins b.

    Raises:
        ContractViolation: a and b overlap, or a member of either set has
            fewer than ceil(d/2) neighbours inside its own set.
    """
    if not a.isdisjoint(b):
        raise ContractViolation(f"sets overlap at vertex {min(a.members & b.members)}")
    for s in (a, b):
        if not s:
            raise ContractViolation("cohesive sets must be nonempty")
        for v in s:
            if g.inside_degree(v, s) < _need(g.degree(v)):
                raise ContractViolation(
                    f"vertex {v} has {g.inside_degree(v, s)} neighbours in its set, "
                    f"needs {_need(g.degree(v))}"
                )

    grown = set(a.members)
    count = [g.inside_degree(v, a) for v in range(g.n)]
    blocked = b.members
    queue = deque(
        v for v in range(g.n) if v not in grown and v not in blocked and count[v] >= _need(g.degree(v))
    )
    while queue:
        v = queue.popleft()
        if v in grown:
            continue
        grown.add(v)
        for u in g.adjacency[v]:
            count[u] += 1
            if u not in grown and u not in blocked and count[u] == _need(g.degree(u)):
                queue.append(u)

    result = Bipartition.from_class(g.n, grown)
    verdict = verify_internal(g, result)
    if not verdict.valid:
        raise ContractViolation(f"extension is not internal at vertex {verdict.violations[0].vertex}")
    return result


def internal_bisection_near_perfect(g: Graph) -> Bipartition:
    """Internal bisection of an (n-2)-regular graph on an even number of vertices.

    Every pair of non-adjacent vertices is split across the classes, which
    leaves each vertex with n/2 - 1 neighbours on both sides.
    """
    if g.n < 2 or g.n % 2 or not g.is_regular(g.n - 2):
        raise ContractViolation("expected an (n-2)-regular graph on an even number of vertices")
    a = []
    for v in range(g.n):
        partner = next(u for u in range(g.n) if u != v and not g.has_edge(u, v))
        if v < partner:
            a.append(v)
    return Bipartition.from_class(g.n, a)


# =============================================================================
# Cohesive-set search
# =============================================================================


def _swap_search(g: Graph, members: set[int]) -> set[int]:
    """Fixed-size local search maximizing the induced edge count."""
    members = set(members)
    inside = [g.inside_degree(v, members) for v in range(g.n)]
    for _ in range(4 * g.n):
        outs = heapq.nsmallest(SWAP_CANDIDATES, members, key=lambda v: (inside[v], v))
        ins = heapq.nlargest(
            SWAP_CANDIDATES,
            (v for v in range(g.n) if v not in members),
            key=lambda v: (inside[v], -v),
        )
        best = max(
            ((inside[y] - inside[x] - g.has_edge(x, y), -x, -y) for x in outs for y in ins),
            default=(0, 0, 0),
        )
        if best[0] <= 0:
            break
        x, y = -best[1], -best[2]
        members.discard(x)
        for u in g.adjacency[x]:
            inside[u] -= 1
        members.add(y)
        for u in g.adjacency[y]:
            inside[u] += 1
    return members


def _ball(g: Graph, root: int, size: int) -> set[int]:
    ball = {root}
    queue = deque([root])
    while queue and len(ball) < size:
        for u in g.adjacency[queue.popleft()]:
            if u not in ball and len(ball) < size:
                ball.add(u)
                queue.append(u)
    return ball


def _smallest_cohesive(g: Graph, level: int, bound: int) -> VertexSet | None:
    for size in range(level + 1, bound + 1):
        for combo in itertools.combinations(range(g.n), size):
            members = frozenset(combo)
            if all(g.inside_degree(v, members) >= level for v in combo):
                return VertexSet(g.n, members)
    return None


def cohesive_size_bound(n: int, d: int) -> int:
    """Guaranteed size of a small ceil(d/2)-cohesive set: ceil(n/2), or n/2 + 1 for odd d."""
    return n // 2 + 1 if d % 2 else (n + 1) // 2


def ban_linial_cohesive(
    g: Graph, seed: int = 0, restarts: int = BAN_LINIAL_RESTARTS
) -> VertexSet:
    """Small ceil(d/2)-cohesive set of a d-regular graph.

    Each restart starts from a BFS ball or a random set of the current window
    size, runs the swap search and peels the result to its ceil(d/2)-core.
    The window starts at the size bound and shrinks after each success; the
    smallest witness wins. Graphs on at most EXHAUSTIVE_COHESIVE_MAX_N
    vertices fall back to exhaustive search if every restart fails.

    Raises:
        ContractViolation: g is not regular or has no vertices.
        CohesiveSetNotFound: No witness was found.
    """
    d = g.valency
    if d is None or g.n == 0:
        raise ContractViolation("cohesive-set search needs a nonempty regular graph")
    level = _need(d)
    if level == 0:
        return VertexSet.of(g.n, [0])
    bound = cohesive_size_bound(g.n, d)
    rng = make_rng(seed)

    best: VertexSet | None = None
    window = bound
    for restart in range(restarts):
        if restart % 2 == 0:
            start = _ball(g, int(rng.integers(g.n)), window)
        else:
            start = {int(v) for v in rng.choice(g.n, size=window, replace=False)}
        core = k_core(g, level, within=_swap_search(g, start))
        if not core or len(core) > bound:
            continue
        if best is None or (len(core), core.sorted()) < (len(best), best.sorted()):
            best = core
            window = max(level + 1, len(core) - 1)
            log.debug("restart %d: %d-cohesive set of size %d", restart, level, len(core))

    if best is None and g.n <= EXHAUSTIVE_COHESIVE_MAX_N:
        log.debug("falling back to exhaustive cohesive-set search")
        best = _smallest_cohesive(g, level, bound)
    if best is None:
        log.warning("no %d-cohesive set of size <= %d after %d restarts", level, bound, restarts)
        raise CohesiveSetNotFound(
            f"no {level}-cohesive set of size <= {bound} found in {restarts} restarts"
        )
    return best


# =============================================================================
# Cluster-based bisection and dense subgraphs
# =============================================================================


def grow_clusters(g: Graph, size: int) -> tuple[list[list[int]], list[int]]:
    """BFS clusters of exactly `size` vertices grown inside unclustered vertices.

    Returns the clusters and the sorted remainder. Clusters never cross
    components.
    """
    unclustered = set(range(g.n))
    clusters = []
    for start in range(g.n):
        if start not in unclustered:
            continue
        cluster = [start]
        seen = {start}
        queue = deque([start])
        while queue and len(cluster) < size:
            for u in g.adjacency[queue.popleft()]:
                if u in unclustered and u not in seen and len(cluster) < size:
                    seen.add(u)
                    cluster.append(u)
                    queue.append(u)
        if len(cluster) == size:
            clusters.append(cluster)
            unclustered.difference_update(cluster)
    return clusters, sorted(unclustered)


def _cluster_size(n: int) -> int:
    return math.isqrt(n - 1) + 1 if n > 1 else 1


def _warn_if_disconnected(g: Graph) -> None:
    if g.n and not nx.is_connected(g.to_networkx()):
        log.warning("graph is disconnected; clusters are grown per component")


def km_bisection(
    g: Graph, seed: int = 0, rounds: int = DEFAULT_KM_ROUNDS
) -> tuple[Bipartition, int]:
    """Cluster-based bisection: best of `rounds` random cluster assignments.

    Clusters of ceil(sqrt(n)) vertices are split evenly between the classes
    (an odd last cluster joins the remainder) and the remainder balances the
    sizes, so the classes differ by at most one vertex.
    """
    if g.n < 2:
        raise ContractViolation("bisection needs at least two vertices")
    _warn_if_disconnected(g)
    clusters, remainder = grow_clusters(g, _cluster_size(g.n))
    if len(clusters) % 2:
        remainder = sorted(remainder + clusters.pop())
    rng = make_rng(seed)
    half = len(clusters) // 2

    best: tuple[int, tuple[int, ...]] | None = None
    for _ in range(rounds):
        picked = rng.permutation(len(clusters))[:half]
        a = [v for i in picked for v in clusters[int(i)]]
        spare = [remainder[int(i)] for i in rng.permutation(len(remainder))]
        a += spare[: g.n // 2 - len(a)]
        partition = Bipartition.from_class(g.n, a)
        candidate = (cut_size(g, partition), partition.a.sorted())
        if best is None or candidate < best:
            best = candidate
    assert best is not None
    return Bipartition.from_class(g.n, best[1]), best[0]


def km_dense_subgraph(
    g: Graph, target: int, seed: int = 0, rounds: int = DEFAULT_KM_ROUNDS
) -> VertexSet:
    """Vertex set of exactly `target` vertices with many induced edges.

    Each round takes whole clusters in random order while they fit, then adds
    the vertices with most neighbours in the set. The best round wins by edge
    count, then by the lexicographically smallest vertex list.
    """
    if not 1 <= target <= g.n:
        raise ContractViolation(f"target {target} outside 1..{g.n}")
    if target == g.n:
        return VertexSet.everything(g.n)
    clusters, _ = grow_clusters(g, _cluster_size(g.n))
    rng = make_rng(seed)
    neighbours = [np.array(nbrs, dtype=np.int64) for nbrs in g.adjacency]

    best: tuple[int, tuple[int, ...]] | None = None
    for _ in range(rounds):
        chosen = np.zeros(g.n, dtype=bool)
        inside = np.zeros(g.n, dtype=np.int64)
        count = 0
        for i in rng.permutation(len(clusters)):
            cluster = clusters[int(i)]
            if count + len(cluster) > target:
                continue
            for v in cluster:
                chosen[v] = True
                inside[neighbours[v]] += 1
            count += len(cluster)
        while count < target:
            v = int(np.argmax(np.where(chosen, -1, inside)))
            chosen[v] = True
            inside[neighbours[v]] += 1
            count += 1
        members = tuple(int(v) for v in np.flatnonzero(chosen))
        candidate = (-induced_edge_count(g, members), members)
        if best is None or candidate < best:
            best = candidate
    assert best is not None
    return VertexSet.of(g.n, best[1])
