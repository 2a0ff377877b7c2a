"""
Cohesion pipeline.

Two 3-cohesive sets with a small intersection in a 5-regular graph: a small
cohesive set H, a bounded-degree edge-subgraph H' inside it, the edge set E*
that lifts H' to minimum degree 3, and the 3-core of G - E*, which avoids
every vertex of H'.
"""

import itertools
import logging
import math
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cache

import numpy as np

from generators import make_rng
from graphs import (
    ContractViolation,
    Edge,
    Graph,
    GraphError,
    VertexSet,
    induced_edge_count,
    induced_subgraph,
    k_core,
    remove_edges,
)
from partitions import (
    Certificate,
    CohesiveSetNotFound,
    ban_linial_cohesive,
    km_dense_subgraph,
    verify_cohesive,
)

log = logging.getLogger(__name__)

MAX_SUB_DEGREE = 3
EXACT_BOUNDED_MAX_N = 14
DEFAULT_SUBGRAPH_ROUNDS = 8
SUBGRAPH_KM_ROUNDS = 8
STAGE_ONE_RETRIES = 32
PIPELINE_MIN_N = 10
MU_NEWTON_STEPS = 3

# Constants of the improved choice of k
OPT_LINEAR = 3.729
OPT_CORRECTION = 1.626
OPT_DENOMINATOR = 0.271

CSV_COLUMNS = ("n", "seed", "h_size", "k", "e_star", "g_prime_size", "intersection", "bound")


class PipelineError(GraphError):
    """A pipeline stage could not produce its witness."""

    def __init__(self, message: str, stage: int, witness: object = None):
        self.stage = stage
        self.witness = witness
        super().__init__(f"stage {stage}: {message}")


class BoundedSubgraphShortfall(PipelineError):
    """The dense bounded-degree subgraph has fewer than k-1 edges."""

    def __init__(self, best: "BoundedSubgraph", k: int):
        self.best = best
        super().__init__(
            f"best subgraph on {k} vertices has {len(best.edges)} edges, needs {k - 1}",
            stage=2,
            witness=best,
        )


# =============================================================================
# The f(k) bound
# =============================================================================


@cache
def mu_root() -> float:
    """The unique root of 36x^5 - 45x^4 + 8 in (0, 1), to 1e-12.

    The companion-matrix root is polished with Newton steps; the polynomial
    is strictly decreasing on (0, 1), so the root is simple.
    """
    poly = np.poly1d([36, -45, 0, 0, 0, 8])
    (x,) = [r.real for r in poly.roots if abs(r.imag) < 1e-9 and 0 < r.real < 1]
    slope = poly.deriv()
    for _ in range(MU_NEWTON_STEPS):
        x -= poly(x) / slope(x)
    return float(x)


LAMBDA_SCHEDULE = (0.80, 0.85, mu_root(), 0.92, 0.95)


def f_lower_bound(k: float, n: int) -> float:
    """Guaranteed edge count of a Delta <= 3 subgraph on k of n vertices."""
    if n < 1 or not 0 <= k <= n:
        raise ContractViolation(f"need 0 <= k <= n and n >= 1, got k={k}, n={n}")
    if k <= mu_root() * n:
        return k + 0.1355 * k**2 / n
    return 1.875 * k**2 / n - 1.875 * k**5 / n**4 + 1.125 * k**6 / n**5


# =============================================================================
# Bounded-degree subgraphs
# =============================================================================


@dataclass(frozen=True)
class BoundedSubgraph:
    """Edge-subgraph of a host graph: k vertices, maximum degree 3."""

    vertices: VertexSet
    edges: tuple[Edge, ...]

    def degrees(self) -> Counter[int]:
        return Counter(v for e in self.edges for v in e)

    @property
    def max_degree(self) -> int:
        return max(self.degrees().values(), default=0)

    def check(self, h: Graph) -> None:
        """Raise ContractViolation unless this is a valid subgraph of h."""
        if self.vertices.n != h.n:
            raise ContractViolation("subgraph and host live on different vertex universes")
        for u, v in self.edges:
            if u not in self.vertices or v not in self.vertices:
                raise ContractViolation(f"edge {u}-{v} leaves the vertex set")
            if not h.has_edge(u, v):
                raise ContractViolation(f"edge {u}-{v} is not a host edge")
        if len(set(self.edges)) != len(self.edges):
            raise ContractViolation("repeated edge in subgraph")
        if self.max_degree > MAX_SUB_DEGREE:
            raise ContractViolation(f"maximum degree {self.max_degree} exceeds {MAX_SUB_DEGREE}")


class _Sketch:
    """Mutable vertex set with an edge set of maximum degree 3."""

    def __init__(self, h: Graph, members: Iterable[int] = ()):
        self.h = h
        self.members = set(members)
        self.adj: dict[int, set[int]] = {v: set() for v in self.members}

    def add_vertex(self, v: int) -> None:
        self.members.add(v)
        self.adj.setdefault(v, set())

    def drop_vertex(self, v: int) -> None:
        for u in self.adj.pop(v):
            self.adj[u].discard(v)
        self.members.discard(v)

    def link(self, u: int, v: int) -> None:
        self.adj[u].add(v)
        self.adj[v].add(u)

    def unlink(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def room(self, v: int) -> bool:
        return len(self.adj[v]) < MAX_SUB_DEGREE

    def complete(self) -> None:
        """Add host edges between members that both still have room."""
        for u in sorted(self.members):
            for v in self.h.adjacency[u]:
                if v in self.members and v not in self.adj[u] and self.room(u) and self.room(v):
                    self.link(u, v)

    def freeze(self) -> BoundedSubgraph:
        edges = tuple(sorted((u, v) for u in self.adj for v in self.adj[u] if u < v))
        return BoundedSubgraph(VertexSet.of(self.h.n, self.members), edges)


def _sampled(
    h: Graph, k: int, fraction: float, rng: np.random.Generator, seed: int
) -> BoundedSubgraph:
    """Random vertex sample, degree deletions down to 3, then reduction to k vertices."""
    z = min(h.n, max(k, math.ceil(fraction * h.n)))
    sample = _Sketch(h, (int(v) for v in rng.choice(h.n, size=z, replace=False)))
    for u in sample.members:
        for v in h.adjacency[u]:
            if v in sample.members:
                sample.adj[u].add(v)

    for v in sorted(sample.members, key=lambda v: (-len(sample.adj[v]), v)):
        while len(sample.adj[v]) > MAX_SUB_DEGREE:
            u = max(sample.adj[v], key=lambda u: (len(sample.adj[u]) - MAX_SUB_DEGREE, -u))
            sample.unlink(u, v)

    bounded = sample.freeze()
    if z > k:
        reduced, labels = induced_subgraph(Graph.from_edges(h.n, bounded.edges), bounded.vertices)
        keep = km_dense_subgraph(reduced, k, seed=seed, rounds=SUBGRAPH_KM_ROUNDS)
        chosen = {labels[v] for v in keep}
        for v in list(sample.members - chosen):
            sample.drop_vertex(v)

    sample.complete()
    _swap_repair(h, sample)
    return sample.freeze()


def _swap_repair(h: Graph, sketch: _Sketch) -> None:
    """Trade the weakest member for an outsider that attaches more edges."""
    for _ in range(len(sketch.members)):
        x = min(sketch.members, key=lambda v: (len(sketch.adj[v]), v))

        def attach(y: int, x: int = x) -> list[int]:
            return sorted(
                u
                for u in h.adjacency[y]
                if u in sketch.members
                and u != x
                and len(sketch.adj[u]) - (x in sketch.adj[u]) < MAX_SUB_DEGREE
            )[:MAX_SUB_DEGREE]

        outsiders = (y for y in range(h.n) if y not in sketch.members)
        best = max(((len(attach(y)), -y) for y in outsiders), default=(0, 0))
        if best[0] <= len(sketch.adj[x]):
            break
        y = -best[1]
        targets = attach(y)
        sketch.drop_vertex(x)
        sketch.add_vertex(y)
        for u in targets:
            sketch.link(u, y)
        sketch.complete()


def _grown(h: Graph, k: int, root: int) -> BoundedSubgraph:
    """Greedy growth from a root; each new vertex attaches to up to 3 members."""
    sketch = _Sketch(h, [root])
    while len(sketch.members) < k:
        frontier = {y for v in sketch.members for y in h.adjacency[v] if y not in sketch.members}
        if not frontier:
            frontier = {min(set(range(h.n)) - sketch.members)}

        def attach(y: int) -> list[int]:
            return sorted(u for u in h.adjacency[y] if u in sketch.members and sketch.room(u))[
                :MAX_SUB_DEGREE
            ]

        y = max(frontier, key=lambda y: (len(attach(y)), -y))
        targets = attach(y)
        sketch.add_vertex(y)
        for u in targets:
            sketch.link(u, y)
    sketch.complete()
    return sketch.freeze()


def _rank(sub: BoundedSubgraph) -> tuple[int, tuple[int, ...]]:
    return (-len(sub.edges), sub.vertices.sorted())


def _check_host(h: Graph) -> None:
    if h.n == 0:
        raise ContractViolation("host graph is empty")
    if min(h.degrees()) < 3:
        raise ContractViolation("host graph is not 3-cohesive")
    if max(h.degrees()) > 5:
        raise ContractViolation("host graph has a vertex of degree above 5")


def bounded_degree_dense_subgraph(
    h: Graph, k: int, seed: int = 0, rounds: int = DEFAULT_SUBGRAPH_ROUNDS
) -> BoundedSubgraph:
    """Edge-subgraph on exactly k vertices, maximum degree 3, many edges.

    Every round tries a sampled construction (sample fraction from
    LAMBDA_SCHEDULE, degree deletions towards the endpoint with the most
    surplus, reduction to k vertices by dense clustering, completion and
    swap repair) and a greedy growth from a random root. Hosts on at most
    EXACT_BOUNDED_MAX_N vertices are also solved exactly.

    Raises:
        ContractViolation: h is not 3-cohesive, has a degree above 5, or k is
            out of range.
        BoundedSubgraphShortfall: Fewer than k-1 edges were found.
    """
    _check_host(h)
    if not 1 <= k <= h.n:
        raise ContractViolation(f"k={k} outside 1..{h.n}")
    rng = make_rng(seed)

    candidates = []
    for r in range(rounds):
        fraction = LAMBDA_SCHEDULE[r % len(LAMBDA_SCHEDULE)]
        candidates.append(_sampled(h, k, fraction, rng, seed + r))
        candidates.append(_grown(h, k, int(rng.integers(h.n))))
    if h.n <= EXACT_BOUNDED_MAX_N:
        candidates.append(exact_bounded_subgraph(h, k))
    best = min(candidates, key=_rank)
    best.check(h)

    if len(best.edges) < k - 1:
        log.warning("bounded subgraph shortfall: %d edges on %d vertices", len(best.edges), k)
        raise BoundedSubgraphShortfall(best, k)
    target = f_lower_bound(k, h.n)
    if len(best.edges) < target:
        log.debug("bounded subgraph: %d edges, below f(k) = %.2f", len(best.edges), target)
    return best


def _max_capped_edges(edges: list[Edge]) -> list[Edge]:
    """Largest edge subset with every degree at most 3 (branch and bound)."""
    capacity: Counter[int] = Counter({v: MAX_SUB_DEGREE for e in edges for v in e})
    undecided: Counter[int] = Counter(v for e in edges for v in e)
    chosen: list[Edge] = []
    best: list[Edge] = []

    def search(i: int) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = chosen.copy()
        if i == len(edges):
            return
        room = sum(min(capacity[v], undecided[v]) for v in undecided) // 2
        if len(chosen) + min(len(edges) - i, room) <= len(best):
            return
        u, v = edges[i]
        undecided[u] -= 1
        undecided[v] -= 1
        if capacity[u] and capacity[v]:
            capacity[u] -= 1
            capacity[v] -= 1
            chosen.append((u, v))
            search(i + 1)
            chosen.pop()
            capacity[u] += 1
            capacity[v] += 1
        search(i + 1)
        undecided[u] += 1
        undecided[v] += 1

    search(0)
    return best


def exact_bounded_subgraph(h: Graph, k: int) -> BoundedSubgraph:
    """Optimal Delta <= 3 edge-subgraph on exactly k vertices of a small host."""
    if h.n > EXACT_BOUNDED_MAX_N:
        raise ContractViolation(f"exact search is limited to {EXACT_BOUNDED_MAX_N} vertices")
    if not 1 <= k <= h.n:
        raise ContractViolation(f"k={k} outside 1..{h.n}")
    ceiling = MAX_SUB_DEGREE * k // 2
    subsets = sorted(
        ((induced_edge_count(h, combo), combo) for combo in itertools.combinations(range(h.n), k)),
        key=lambda item: (-item[0], item[1]),
    )
    best: BoundedSubgraph | None = None
    for count, combo in subsets:
        if best is not None and (count <= len(best.edges) or len(best.edges) == ceiling):
            break
        members = set(combo)
        edges = [(u, v) for u in combo for v in h.adjacency[u] if u < v and v in members]
        picked = _max_capped_edges(edges)
        if best is None or len(picked) > len(best.edges):
            best = BoundedSubgraph(VertexSet.of(h.n, combo), tuple(sorted(picked)))
    assert best is not None
    return best


def augment_to_min_degree(sub: BoundedSubgraph, h: Graph) -> list[Edge]:
    """E*: the subgraph's edges plus host edges lifting each member to degree 3.

    Edges joining two deficient members are added first; remaining deficits
    are covered by any unused host edge at the vertex.

    Raises:
        ContractViolation: sub is not a subgraph of h, or a member has host
            degree below 3.
    """
    sub.check(h)
    for v in sub.vertices:
        if h.degree(v) < 3:
            raise ContractViolation(f"vertex {v} has host degree {h.degree(v)} < 3")
    chosen = set(sub.edges)
    degree = sub.degrees()

    def deficient(v: int) -> bool:
        return v in sub.vertices and degree[v] < 3

    def add(u: int, v: int) -> None:
        chosen.add((min(u, v), max(u, v)))
        degree[u] += 1
        degree[v] += 1

    for u in sub.vertices:
        for v in h.adjacency[u]:
            if deficient(u) and deficient(v) and (min(u, v), max(u, v)) not in chosen:
                add(u, v)
    for u in sub.vertices:
        for v in h.adjacency[u]:
            if deficient(u) and (min(u, v), max(u, v)) not in chosen:
                add(u, v)
    return sorted(chosen)


# =============================================================================
# Min-intersection pipeline
# =============================================================================


def optimized_k(n: int) -> tuple[int, int]:
    """(baseline k = ceil(n/4), improved k ~ 0.2544n)."""
    basic = math.ceil(n / 4)
    improved = math.floor((2 * n - math.sqrt(OPT_LINEAR * n**2 - OPT_CORRECTION * n)) / OPT_DENOMINATOR)
    return basic, improved


@dataclass
class PipelineAttempt:
    """One k tried by the pipeline; `error` is set when a stage failed."""

    k: int
    stage_log: list[str]
    intersection: int | None = None
    error: str | None = None


@dataclass
class IntersectionReport:
    """Two 3-cohesive sets and how they were obtained.

    `attempts` records every k that was tried, in order, including the
    failed ones; the sets come from the attempt with the smallest
    intersection.
    """

    n: int
    seed: int
    set1: VertexSet
    set2: VertexSet
    k: int
    e_star_size: int
    bound: int
    stage_log: list[str] = field(default_factory=list)
    attempts: list[PipelineAttempt] = field(default_factory=list)

    @property
    def intersection_size(self) -> int:
        return self.set1.intersection_size(self.set2)

    def csv_row(self) -> str:
        values = (
            self.n,
            self.seed,
            len(self.set1),
            self.k,
            self.e_star_size,
            len(self.set2),
            self.intersection_size,
            self.bound,
        )
        return ",".join(str(v) for v in values)

    def certificate(self, g: Graph) -> Certificate:
        return Certificate.cohesive_pair(g, self.set1, self.set2, level=3)


def _stage_one(g: Graph, seed: int) -> VertexSet:
    for attempt in range(STAGE_ONE_RETRIES):
        try:
            return ban_linial_cohesive(g, seed=seed + attempt)
        except CohesiveSetNotFound:
            log.debug("stage 1 retry %d failed", attempt)
    raise PipelineError(f"no small 3-cohesive set after {STAGE_ONE_RETRIES} seeds", stage=1)


def _attempt(
    g: Graph, cohesive: VertexSet, k: int, seed: int
) -> tuple[VertexSet, list[Edge], list[str]]:
    h, labels = induced_subgraph(g, cohesive)
    k = min(k, h.n)
    sub = bounded_degree_dense_subgraph(h, k, seed=seed)
    e_star_local = augment_to_min_degree(sub, h)
    e_star = sorted((min(labels[u], labels[v]), max(labels[u], labels[v])) for u, v in e_star_local)
    notes = [
        f"stage 2: k={k}, {len(sub.edges)} edges, max degree {sub.max_degree}",
        f"stage 3: |E*|={len(e_star)} ({len(e_star) - len(sub.edges)} added)",
    ]
    if g.m - len(e_star) < 2 * g.n - 2:
        raise PipelineError(
            f"|E| - |E*| = {g.m - len(e_star)} < 2n - 2 = {2 * g.n - 2}", stage=4, witness=e_star
        )
    core = k_core(remove_edges(g, e_star), 3)
    if not core:
        raise PipelineError("3-core of G - E* is empty", stage=4, witness=e_star)
    notes.append(f"stage 4: |G'|={len(core)}")
    return core, e_star, notes


def min_intersection_pair(g: Graph, seed: int = 0) -> IntersectionReport:
    """Two 3-cohesive sets of a 5-regular graph meeting in at most n/4 + 1 vertices.

    Both the baseline k = ceil(n/4) and the improved k are attempted; the
    attempt with the smaller intersection is kept.

    Raises:
        ContractViolation: g is not 5-regular or n < PIPELINE_MIN_N.
        PipelineError: A stage failed; `stage` names it.
    """
    if not g.is_regular(5) or g.n < PIPELINE_MIN_N:
        raise ContractViolation(f"pipeline needs a 5-regular graph on >= {PIPELINE_MIN_N} vertices")
    bound = g.n // 4 + 1
    cohesive = _stage_one(g, seed)
    log.debug("stage 1: |H| = %d", len(cohesive))

    best: IntersectionReport | None = None
    failure: PipelineError | None = None
    attempts: list[PipelineAttempt] = []
    for k in dict.fromkeys(optimized_k(g.n)):
        try:
            core, e_star, notes = _attempt(g, cohesive, k, seed)
        except PipelineError as e:
            log.debug("attempt with k=%d failed: %s", k, e)
            attempts.append(PipelineAttempt(k, [], error=str(e)))
            failure = failure or e
            continue
        report = IntersectionReport(
            n=g.n,
            seed=seed,
            set1=cohesive,
            set2=core,
            k=min(k, len(cohesive)),
            e_star_size=len(e_star),
            bound=bound,
            stage_log=[f"stage 1: |H|={len(cohesive)}", *notes],
            attempts=attempts,
        )
        attempts.append(PipelineAttempt(k, report.stage_log.copy(), report.intersection_size))
        if best is None or report.intersection_size < best.intersection_size:
            best = report

    if best is None:
        assert failure is not None
        raise failure
    for s in (best.set1, best.set2):
        if not verify_cohesive(g, s, 3).valid:
            raise PipelineError("returned set is not 3-cohesive", stage=5, witness=s)
    if best.intersection_size > bound:
        raise PipelineError(
            f"intersection {best.intersection_size} exceeds {bound}", stage=5, witness=best
        )
    best.stage_log.append(f"intersection {best.intersection_size} <= {bound}")
    return best
