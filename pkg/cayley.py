"""
Cayley lab.

Constructive internal partitions of 5-regular Cayley graphs over finite
Abelian groups: the cyclic dispatch with its explicit families and small
registry, Z_2^t, Z_2 x Z_2p, the general Abelian dispatch, near-complete
graphs and circulants, the Paley scan and the enumeration of all connected
5-regular Abelian Cayley specs up to a given order.

Every partition handed out here has passed verify_internal; every
exceptional verdict is backed by a complete exhaustive search.
"""

import itertools
import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Literal

import networkx as nx
from sympy import isprime

from generators import (
    CayleySpec,
    ConstructionError,
    InvalidSpecError,
    abelian_groups,
    element_index,
    format_element,
    gen_abelian_cayley,
    gen_circulant,
    gen_paley,
    generated_subgroup,
    group_elements,
    is_involution,
    negate_element,
    prime_power,
)
from graphs import (
    Bipartition,
    ContractViolation,
    Graph,
    GraphError,
    VertexSet,
    complement,
)
from partitions import (
    DEFAULT_NODE_CAP,
    HYBRID_RESTARTS,
    Certificate,
    SearchBudgetExceeded,
    exhaustive_internal,
    extend_to_partition,
    hybrid_internal,
    internal_bisection_near_perfect,
    verify_cohesive,
    verify_internal,
)

log = logging.getLogger(__name__)

PALEY_EXHAUSTIVE_MAX_Q = 17
PALEY_ESCALATION = (1, 2, 4)
FAMILY_MIN_K = 8

ExceptionalName = Literal["K6", "K55", "C125_10"]
PaleyStatus = Literal["verified", "incomplete", "refuted"]

# Reduced forms <1, t*, k>_2k of the graphs without an internal partition
EXCEPTIONAL: dict[tuple[int, int], ExceptionalName] = {
    (6, 2): "K6",
    (10, 3): "K55",
    (10, 2): "C125_10",
}

# (n, offsets, first set, second set), vertex labels 1..n as printed
SMALL_CIRCULANT_PAIRS: tuple[tuple[int, tuple[int, int, int], tuple[int, ...], tuple[int, ...]], ...] = (
    (8, (1, 2, 4), (1, 3, 5, 7), (2, 4, 6, 8)),
    (8, (1, 3, 4), (1, 2, 5, 6), (3, 4, 7, 8)),
    (10, (1, 4, 5), (1, 2, 6, 7), (3, 4, 8, 9)),
    (12, (1, 2, 6), (1, 2, 3, 7, 8, 9), (4, 5, 6, 10, 11, 12)),
    (12, (1, 3, 6), (1, 4, 7, 10), (2, 5, 8, 11)),
    (12, (1, 4, 6), (1, 3, 5, 7, 9, 11), (2, 4, 6, 8, 10, 12)),
    (12, (1, 5, 6), (1, 2, 7, 8), (3, 4, 9, 10)),
    (14, (1, 2, 7), (1, 2, 3, 8, 9, 10), (4, 5, 6, 11, 12, 13)),
    (14, (1, 3, 7), (1, 4, 5, 8, 11, 12), (3, 6, 7, 10, 13, 14)),
    (14, (1, 4, 7), (1, 4, 5, 8, 11, 12), (3, 6, 7, 10, 13, 14)),
    (14, (1, 5, 7), (1, 2, 3, 8, 9, 10), (4, 5, 6, 11, 12, 13)),
    (14, (1, 6, 7), (1, 2, 3, 8, 9, 10), (4, 5, 6, 11, 12, 13)),
)


class NotApplicable(GraphError):
    """The hypothesis of a construction does not hold for this input."""


# =============================================================================
# Cyclic 5-regular graphs
# =============================================================================


@dataclass(frozen=True)
class CyclicSpec5:
    """The circulant <r, t, k>_n with n = 2k."""

    n: int
    r: int
    t: int

    def __post_init__(self) -> None:
        if self.n < 6 or self.n % 2:
            raise InvalidSpecError(f"order must be even and at least 6, got {self.n}")
        k = self.n // 2
        if not (0 < self.r < k and 0 < self.t < k) or self.r == self.t:
            raise InvalidSpecError(
                f"need distinct offsets r, t in 1..{k - 1}, got r={self.r}, t={self.t}"
            )

    @classmethod
    def from_offsets(cls, n: int, offsets: Sequence[int]) -> "CyclicSpec5":
        """Accept the three offsets in any order; n/2 must be one of them."""
        k = n // 2
        rest = sorted(o for o in offsets if o != k)
        if len(offsets) != 3 or len(rest) != 2 or n % 2:
            raise InvalidSpecError(
                f"a 5-regular circulant on {n} vertices needs offsets r, t and {k}"
            )
        return cls(n, rest[0], rest[1])

    @property
    def k(self) -> int:
        return self.n // 2

    @property
    def offsets(self) -> tuple[int, int, int]:
        return (self.r, self.t, self.k)

    def graph(self) -> Graph:
        return gen_circulant(self.n, self.offsets)

    def __str__(self) -> str:
        return f"<{self.r},{self.t},{self.k}>_{self.n}"


@dataclass(frozen=True)
class ClassificationOutcome:
    """Partition or exceptional verdict for one Cayley graph.

    A verdict with neither a partition nor an exceptional name is a complete
    search that found no partition for a graph outside the known exceptions.
    """

    partition: Bipartition | None
    exceptional: ExceptionalName | None
    method: str
    verified: bool
    certificate: Certificate

    @property
    def verdict(self) -> str:
        if self.partition is not None:
            return "partition"
        return self.exceptional or "no-partition"


def reduce_rel_prime(spec: CyclicSpec5) -> tuple[int, list[int]]:
    """t* with <r, t, k> isomorphic to <1, t*, k>, plus the map g -> r*g.

    The map sends vertices of <1, t*, k>_n to vertices of spec.graph().

    Raises:
        NotApplicable: r is not coprime to n.
    """
    n, r = spec.n, spec.r
    if math.gcd(r, n) != 1:
        raise NotApplicable(f"gcd({r}, {n}) != 1")
    t_star = pow(r, -1, n) * spec.t % n
    if t_star > spec.k:
        t_star = n - t_star
    mapping = [r * g % n for g in range(n)]

    source = gen_circulant(n, (1, t_star, spec.k))
    relabelled = sorted(
        (min(mapping[u], mapping[v]), max(mapping[u], mapping[v])) for u, v in source.edges()
    )
    if relabelled != spec.graph().edges():
        raise ConstructionError(f"multiplication by {r} is not an isomorphism onto {spec}")
    return t_star, mapping


def gcd_partition(n: int, offsets: Sequence[int]) -> list[VertexSet]:
    """Residue classes mod gcd(t, k) (or gcd(r, k)); each is 3-cohesive.

    Raises:
        NotApplicable: Both gcds are 1.
    """
    spec = CyclicSpec5.from_offsets(n, offsets)
    h = math.gcd(spec.t, spec.k)
    if h == 1:
        h = math.gcd(spec.r, spec.k)
    if h == 1:
        raise NotApplicable(f"gcd(t, k) = gcd(r, k) = 1 for {spec}")
    return [VertexSet.of(n, range(c, n, h)) for c in range(h)]


def _labels(n: int, printed: Sequence[int]) -> VertexSet:
    return VertexSet.of(n, ((v - 1) % n for v in printed))


def explicit_family_pair(k: int, t_star: int, shifted: bool = False) -> tuple[VertexSet, VertexSet]:
    """Candidate disjoint 3-cohesive pair for <1, t*, k>_2k with k >= 8.

    For 4 <= t* <= k-4 this is the two-block family and its shift by 2. For
    the remaining t* it is the window family; `shifted` moves the second
    half of each window from k..k+3 to k+1..k+4.
    """
    n = 2 * k
    if k < FAMILY_MIN_K or not 2 <= t_star <= k - 1:
        raise NotApplicable(f"no explicit family for k={k}, t*={t_star}")
    if 4 <= t_star <= k - 4:
        first = [1, 2, t_star + 1, t_star + 2, k + 1, k + 2, t_star + k + 1, t_star + k + 2]
        return _labels(n, first), _labels(n, [v + 2 for v in first])
    start = k + 1 if shifted else k
    return (
        _labels(n, [1, 2, 3, 4, *range(start, start + 4)]),
        _labels(n, [5, 6, 7, 8, *range(start + 4, start + 8)]),
    )


def small_circulant_pair(n: int, offsets: Sequence[int]) -> tuple[VertexSet, VertexSet] | None:
    """Registry pair for a small circulant, 0-indexed, or None."""
    key = tuple(sorted(offsets))
    for order, row_offsets, first, second in SMALL_CIRCULANT_PAIRS:
        if order == n and row_offsets == key:
            return _labels(n, first), _labels(n, second)
    return None


def _is_cohesive_pair(g: Graph, a: VertexSet, b: VertexSet) -> bool:
    return (
        bool(a)
        and bool(b)
        and a.isdisjoint(b)
        and verify_cohesive(g, a, 3).valid
        and verify_cohesive(g, b, 3).valid
    )


def _from_partition(g: Graph, p: Bipartition, method: str) -> ClassificationOutcome:
    verified = verify_internal(g, p).valid
    return ClassificationOutcome(p, None, method, verified, Certificate.internal(g, p))


def _engine(g: Graph, seed: int = 0) -> ClassificationOutcome:
    certificate = hybrid_internal(g, seed=seed)
    assert certificate is not None
    if certificate.kind == "internal-partition":
        assert certificate.partition is not None
        return _from_partition(g, certificate.partition, "engine")
    log.warning("complete search found no internal partition")
    return ClassificationOutcome(None, None, "exhaustive", True, certificate)


def _exceptional(g: Graph, name: ExceptionalName) -> ClassificationOutcome:
    certificate = exhaustive_internal(g)
    if certificate.kind != "nonexistence":
        raise ConstructionError(f"{name} unexpectedly has an internal partition")
    return ClassificationOutcome(None, name, "exceptional", True, certificate)


def cyclic5_internal(spec: CyclicSpec5) -> ClassificationOutcome:
    """Internal partition or exceptional verdict for a 5-regular circulant.

    Residue classes when gcd(t, k) or gcd(r, k) exceeds 1, even vertices
    when r and t are both even, otherwise reduction to <1, t*, k> followed by
    the explicit families (k >= 8) or the registry and exceptions (k <= 7).
    Candidates that fail verification fall through to the hybrid search.
    """
    g = spec.graph()
    n, k = spec.n, spec.k

    if math.gcd(spec.t, k) > 1 or math.gcd(spec.r, k) > 1:
        classes = gcd_partition(n, spec.offsets)
        p = Bipartition(classes[0], VertexSet.of(n, itertools.chain.from_iterable(classes[1:])))
        return _from_partition(g, p, "gcd-classes")
    if spec.r % 2 == 0 and spec.t % 2 == 0:
        return _from_partition(g, Bipartition.from_class(n, range(0, n, 2)), "even-vertices")

    oriented = spec if math.gcd(spec.r, n) == 1 else CyclicSpec5(n, spec.t, spec.r)
    t_star, mapping = reduce_rel_prime(oriented)
    name = EXCEPTIONAL.get((n, t_star))
    if name is not None:
        return _exceptional(g, name)

    candidates: list[tuple[str, tuple[VertexSet, VertexSet]]] = []
    if k >= FAMILY_MIN_K:
        if 4 <= t_star <= k - 4:
            candidates.append(("two-block-family", explicit_family_pair(k, t_star)))
        else:
            candidates.append(("window-family", explicit_family_pair(k, t_star)))
            candidates.append(("shifted-window-family", explicit_family_pair(k, t_star, shifted=True)))
    else:
        pair = small_circulant_pair(n, (1, t_star, k))
        if pair is not None:
            candidates.append(("registry", pair))

    for method, (a, b) in candidates:
        a = VertexSet.of(n, (mapping[v] for v in a))
        b = VertexSet.of(n, (mapping[v] for v in b))
        if _is_cohesive_pair(g, a, b):
            return _from_partition(g, extend_to_partition(g, a, b), method)
        log.debug("%s candidate fails for %s (t*=%d)", method, spec, t_star)
    if candidates:
        log.warning("explicit candidates failed for %s; using engine search", spec)
    return _engine(g)


# =============================================================================
# Z_2^t and Z_2 x Z_2p
# =============================================================================


def _bits(x: int, t: int) -> tuple[int, ...]:
    return tuple((x >> (t - 1 - i)) & 1 for i in range(t))


def z2t_partition(t: int, gens: Sequence[int]) -> Bipartition:
    """Internal partition of Cay(Z_2^t, gens); elements are t-bit masks.

    t = 3: the two colour classes of the complement (each induces K4).
    t > 3: a coset of <g1, g2, g3> against the rest, with g3 and g4
    exchanged when g3 = g1 + g2.
    """
    if t < 3:
        raise InvalidSpecError(f"t must be at least 3, got {t}")
    gens = list(gens)
    if len(gens) != 5 or len(set(gens)) != 5 or any(not 0 < x < 2**t for x in gens):
        raise InvalidSpecError(f"need 5 distinct nonzero elements of Z_2^{t}, got {gens}")
    g = gen_abelian_cayley(CayleySpec((2,) * t, tuple(_bits(x, t) for x in gens)))

    if t == 3:
        try:
            colours = nx.bipartite.color(complement(g).to_networkx())
        except nx.NetworkXError as e:
            raise ConstructionError("complement of the Z_2^3 graph is not bipartite") from e
        p = Bipartition.from_class(g.n, (v for v, c in colours.items() if c == 0))
    else:
        g1, g2, g3 = gens[:3]
        if g3 == g1 ^ g2:
            g3 = gens[3]
        tile = {0, g1, g2, g3, g1 ^ g2, g1 ^ g3, g2 ^ g3, g1 ^ g2 ^ g3}
        p = Bipartition.from_class(g.n, tile)

    if not verify_internal(g, p).valid:
        raise ConstructionError(f"Z_2^{t} construction failed for {gens}")
    return p


def _lift(p: int, classes: Bipartition) -> Bipartition:
    """{(*, a) : a in A'} for a partition A' of Z_2p."""
    factors = (2, 2 * p)
    return Bipartition.from_class(
        4 * p, (element_index((e, a), factors) for e in range(2) for a in classes.a)
    )


def _z2p_construction(p: int, spec: CayleySpec, g: Graph) -> Bipartition | None:
    factors = spec.invariant_factors
    special = [(1, 0), (0, p), (1, p)]
    inside = [x for x in spec.connection_set if x in special]
    if len(inside) not in (1, 3):
        raise InvalidSpecError(f"{len(inside)} involutions in a 5-element symmetric set")

    def quad(c: int, q: int) -> VertexSet:
        return VertexSet.of(
            g.n,
            (element_index((e, b % (2 * p)), factors) for e in range(2) for b in (c, c + q)),
        )

    if len(inside) == 3:
        return Bipartition(quad(0, p), quad(0, p).complement())

    seconds = sorted({min(x[1], 2 * p - x[1]) for x in spec.connection_set if x not in special})
    g1 = inside[0]
    if len(seconds) == 1:
        if g1 != (1, 0):
            return None
        q = seconds[0]
        first = quad(0, q)
        c = next(
            c
            for c in range(2 * p)
            if not {c, (c + q) % (2 * p)} & {0, q}
        )
        second = quad(c, q)
        if not _is_cohesive_pair(g, first, second):
            return None
        return extend_to_partition(g, first, second)

    q, r = seconds
    if g1 == (1, 0):
        quotient = gen_abelian_cayley(CayleySpec.cyclic(2 * p, (q, -q, r, -r)))
        certificate = hybrid_internal(quotient)
        if certificate is None or certificate.partition is None:
            return None
        return _lift(p, certificate.partition)
    outcome = cyclic5_internal(CyclicSpec5(2 * p, q, r))
    if outcome.partition is None:
        log.debug("quotient %s has no internal partition", CyclicSpec5(2 * p, q, r))
        return None
    return _lift(p, outcome.partition)


def z2_x_z2p_partition(p: int, connection_set: Sequence[tuple[int, int]]) -> Bipartition:
    """Internal partition of a 5-regular Cayley graph on Z_2 x Z_2p.

    Three involutions: K4 tiles {(*, q), (*, q + p)}. One involution (1, 0):
    lift a partition of Cay(Z_2p, {+-q, +-r}), or K4 tiles when q = r. One
    involution (*, p): lift a partition of <q, r, p>_2p. Anything the
    constructions miss is settled by the hybrid search on the graph itself.
    """
    if p < 2:
        raise InvalidSpecError(f"p must be at least 2, got {p}")
    spec = CayleySpec((2, 2 * p), tuple(tuple(x) for x in connection_set))
    spec.validate(5)
    g = gen_abelian_cayley(spec)
    partition = _z2p_construction(p, spec, g)
    if partition is not None and verify_internal(g, partition).valid:
        return partition
    log.debug("Z_2 x Z_%d construction did not apply; searching", 2 * p)
    certificate = hybrid_internal(g)
    if certificate is None or certificate.partition is None:
        raise ConstructionError(f"no internal partition found for {spec.format_set()}")
    return certificate.partition


# =============================================================================
# General finite Abelian groups
# =============================================================================


def _subgroup_indices(spec: CayleySpec, gens: Sequence[tuple[int, ...]]) -> list[int]:
    return [
        element_index(x, spec.invariant_factors)
        for x in generated_subgroup(spec.invariant_factors, gens)
    ]


def abelian_internal_partition(spec: CayleySpec) -> ClassificationOutcome:
    """Classify a connected 5-regular Cayley graph of a finite Abelian group.

    Raises:
        InvalidSpecError: The spec is malformed, not 5-regular, or S does not
            generate the group (the message names the generated subgroup).
    """
    spec.validate(5)
    factors = spec.invariant_factors
    generated = generated_subgroup(factors, spec.connection_set)
    if len(generated) < spec.order:
        sample = " ".join(format_element(x) for x in sorted(generated)[:8])
        raise InvalidSpecError(
            f"S generates a subgroup of order {len(generated)} in {spec.describe()} "
            f"(order {spec.order}): {sample}{' ...' if len(generated) > 8 else ''}"
        )
    g = gen_abelian_cayley(spec)
    involutions = [x for x in spec.connection_set if is_involution(x, factors)]
    others = [x for x in spec.connection_set if not is_involution(x, factors)]

    if len(factors) == 1:
        n = factors[0]
        offsets = sorted({min(x[0], n - x[0]) for x in spec.connection_set})
        return cyclic5_internal(CyclicSpec5.from_offsets(n, offsets))

    outcome: ClassificationOutcome | None = None
    if all(d == 2 for d in factors):
        gens = [element_index(x, factors) for x in spec.connection_set]
        outcome = _from_partition(g, z2t_partition(len(factors), gens), "z2t")
    elif len(involutions) >= 3:
        tile = _subgroup_indices(spec, involutions[:3])
        if len(tile) < spec.order:
            outcome = _from_partition(g, Bipartition.from_class(g.n, tile), "involution-cosets")
    elif len(involutions) == 1:
        small = [x for x in others if len(generated_subgroup(factors, [x])) < spec.order // 2]
        if small:
            tile = _subgroup_indices(spec, [small[0], involutions[0]])
            outcome = _from_partition(g, Bipartition.from_class(g.n, tile), "cyclic-involution-cosets")
        elif len(factors) == 2 and factors[0] == 2:
            p = factors[1] // 2
            outcome = _from_partition(g, z2_x_z2p_partition(p, spec.connection_set), "z2-x-z2p")

    if outcome is not None and outcome.verified:
        return outcome
    if outcome is not None:
        log.warning("%s construction failed verification for %s", outcome.method, spec.format_set())
    return _engine(g)


def enumerate_abelian_cayley(max_order: int, valency: int = 5) -> Iterator[CayleySpec]:
    """Every connected Cayley spec of the given valency up to max_order.

    Groups come in invariant-factor form; connection sets are built from
    involutions plus +-pairs and listed in element order. Isomorphic specs
    are not merged.
    """

    for order in range(2, max_order + 1):
        for factors in abelian_groups(order):
            elements = [x for x in group_elements(factors) if any(x)]
            involutions = [x for x in elements if is_involution(x, factors)]
            pairs = [x for x in elements if not is_involution(x, factors) and x < negate_element(x, factors)]
            for count in range(valency % 2, valency + 1, 2):
                for chosen_inv in itertools.combinations(involutions, count):
                    for chosen_pairs in itertools.combinations(pairs, (valency - count) // 2):
                        members = list(chosen_inv)
                        for x in chosen_pairs:
                            members += [x, negate_element(x, factors)]
                        members.sort(key=lambda x: element_index(x, factors))
                        spec = CayleySpec(factors, tuple(members))
                        if spec.is_connected():
                            yield spec


# =============================================================================
# Near-complete graphs
# =============================================================================


@dataclass(frozen=True)
class NearCompleteVerdict:
    has_partition: bool
    odd_cycle_count: int
    partition: Bipartition | None = None


def _cycle_walk(comp: nx.Graph, start: int) -> list[int]:
    walk = [start]
    previous, current = None, start
    while True:
        step = min(u for u in comp[current] if u != previous)
        if step == start:
            return walk
        walk.append(step)
        previous, current = current, step


def classify_near_complete(g: Graph) -> NearCompleteVerdict:
    """Internal partition of an (n-3)- or (n-2)-regular graph, when one exists.

    An (n-3)-regular graph has one iff its 2-regular complement has at most
    one odd cycle; complement cycles are then coloured alternately, an odd
    cycle keeping its clashing pair in the larger class. (n-2)-regular graphs
    on an even number of vertices always have an internal bisection.

    Raises:
        ContractViolation: g is neither (n-3)- nor (n-2)-regular.
    """
    if g.n >= 2 and g.n % 2 == 0 and g.is_regular(g.n - 2):
        return NearCompleteVerdict(True, 0, internal_bisection_near_perfect(g))
    if g.n < 3 or not g.is_regular(g.n - 3):
        raise ContractViolation("expected an (n-3)-regular graph")

    comp = complement(g).to_networkx()
    cycles = [_cycle_walk(comp, min(c)) for c in sorted(nx.connected_components(comp), key=min)]
    odd = sum(1 for c in cycles if len(c) % 2)
    if odd >= 2:
        return NearCompleteVerdict(False, odd)

    a = [v for cycle in cycles for i, v in enumerate(cycle) if i % 2 == 0]
    p = Bipartition.from_class(g.n, a)
    verdict = verify_internal(g, p)
    if not verdict.valid:
        raise ConstructionError(f"near-bisection is not internal at vertex {verdict.violations[0].vertex}")
    return NearCompleteVerdict(True, odd, p)


@dataclass(frozen=True)
class PowerOfTwoResult:
    n: int
    exists_counterexample: bool
    witness: int | None  # s such that the complement of <s>_n has no partition
    checked: tuple[int, ...] = ()


def power_of_two_scan(n: int) -> PowerOfTwoResult:
    """Look for an (n-3)-regular circulant without an internal partition."""
    if n <= 2 or n % 2:
        raise ContractViolation(f"n must be even and greater than 2, got {n}")
    odd_part = n
    while odd_part % 2 == 0:
        odd_part //= 2
    if odd_part > 1:
        s = n // odd_part
        verdict = classify_near_complete(complement(gen_circulant(n, [s])))
        if verdict.has_partition:
            raise ConstructionError(f"complement of <{s}>_{n} unexpectedly has a partition")
        return PowerOfTwoResult(n, True, s, (s,))

    checked = []
    for s in range(1, n // 2):
        verdict = classify_near_complete(complement(gen_circulant(n, [s])))
        if not verdict.has_partition:
            raise ConstructionError(f"complement of <{s}>_{n} has no partition")
        checked.append(s)
    return PowerOfTwoResult(n, False, None, tuple(checked))


# =============================================================================
# Paley scan
# =============================================================================


@dataclass(frozen=True)
class PaleyBudget:
    restarts: int = HYBRID_RESTARTS
    node_cap: int = DEFAULT_NODE_CAP
    exhaustive_max_q: int = PALEY_EXHAUSTIVE_MAX_Q
    seed: int = 0


@dataclass(frozen=True)
class PaleyRow:
    q: int
    prime: bool
    status: PaleyStatus
    certificate: Certificate | None


def paley_orders(max_q: int) -> list[int]:
    """Prime powers q = 1 mod 4 with 5 <= q <= max_q."""

    orders = []
    for q in range(5, max_q + 1, 4):
        try:
            prime_power(q)
        except InvalidSpecError:
            continue
        orders.append(q)
    return orders


def paley_row(q: int, budget: PaleyBudget) -> PaleyRow:
    """Search and verify one Paley graph."""
    g = gen_paley(q)
    prime = bool(isprime(q))
    try:
        if q <= budget.exhaustive_max_q:
            certificate: Certificate | None = exhaustive_internal(g, budget.node_cap)
        else:
            certificate = None
            for factor in PALEY_ESCALATION:
                certificate = hybrid_internal(
                    g,
                    seed=budget.seed,
                    restarts=budget.restarts * factor,
                    node_cap=budget.node_cap,
                    exhaustive_fallback=False,
                )
                if certificate is not None:
                    break
    except SearchBudgetExceeded as e:
        log.warning("Paley(%d): %s", q, e)
        return PaleyRow(q, prime, "incomplete", None)

    if certificate is None:
        log.warning("Paley(%d): no partition within the restart budget", q)
        return PaleyRow(q, prime, "incomplete", None)
    if certificate.kind == "nonexistence":
        return PaleyRow(q, prime, "refuted", certificate)
    status: PaleyStatus = "verified" if certificate.verify(g) else "incomplete"
    return PaleyRow(q, prime, status, certificate)


def paley_scan(max_q: int, budget: PaleyBudget | None = None) -> list[PaleyRow]:
    budget = budget or PaleyBudget()
    return [paley_row(q, budget) for q in paley_orders(max_q)]
