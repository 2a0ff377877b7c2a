"""
Graph generators.

Circulants, Cayley graphs of finite Abelian groups, Paley graphs over GF(q),
complete and complete-bipartite graphs, the switching-hard families with their
Gale-Ryser completion, and seeded random regular graphs.

Group elements are tuples of residues; vertices of a Cayley graph are the
group elements in mixed-radix order (first coordinate most significant).
"""

import itertools
import logging
import math
from collections import defaultdict, deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem, gf_strip
from sympy.utilities.iterables import partitions

from graphs import Bipartition, Edge, Graph, GraphError

log = logging.getLogger(__name__)

RANDOM_REGULAR_MAX_ATTEMPTS = 1000
HARD_FIVE_MIN_HALF = 8

StandardKind = Literal["complete", "complete_bipartite"]

Element = tuple[int, ...]


class InvalidSpecError(GraphError, ValueError):
    """Generator parameters that do not describe a valid graph."""


class ConstructionError(GraphError):
    """A construction produced a graph that fails its own post-condition."""


class RealizationError(ConstructionError):
    """Deficiency sequence that no simple bipartite graph realizes."""

    def __init__(self, message: str, sequence: "DeficiencySequence"):
        self.sequence = sequence
        super().__init__(f"{message} (left={list(sequence.left)}, right={list(sequence.right)})")


class RetryExhaustedError(ConstructionError):
    """Random regular generation failed RANDOM_REGULAR_MAX_ATTEMPTS times."""


# =============================================================================
# Circulants
# =============================================================================


def gen_circulant(n: int, offsets: Iterable[int]) -> Graph:
    """Circulant graph: vertex i adjacent to (i +- o) mod n for every offset."""
    offsets = list(offsets)
    if n < 3:
        raise InvalidSpecError(f"circulant order must be at least 3, got {n}")
    if len(set(offsets)) != len(offsets):
        raise InvalidSpecError(f"repeated offset in {offsets}")
    for o in offsets:
        if not 1 <= o <= n // 2:
            raise InvalidSpecError(f"offset {o} outside 1..{n // 2}")
    rows = tuple(
        tuple(sorted({(i + o) % n for o in offsets} | {(i - o) % n for o in offsets}))
        for i in range(n)
    )
    return Graph(n, rows)


# =============================================================================
# Finite Abelian groups and Cayley graphs
# =============================================================================


def group_elements(factors: Sequence[int]) -> list[Element]:
    """All elements of Z_d1 x ... x Z_dr in mixed-radix order."""
    return list(itertools.product(*(range(d) for d in factors)))


def element_index(x: Element, factors: Sequence[int]) -> int:
    index = 0
    for xi, d in zip(x, factors, strict=True):
        index = index * d + xi
    return index


def add_elements(x: Element, y: Element, factors: Sequence[int]) -> Element:
    return tuple((a + b) % d for a, b, d in zip(x, y, factors, strict=True))


def negate_element(x: Element, factors: Sequence[int]) -> Element:
    return tuple((-a) % d for a, d in zip(x, factors, strict=True))


def element_order(x: Element, factors: Sequence[int]) -> int:
    return math.lcm(*(d // math.gcd(a, d) for a, d in zip(x, factors, strict=True)))


def is_involution(x: Element, factors: Sequence[int]) -> bool:
    return any(x) and all((2 * a) % d == 0 for a, d in zip(x, factors, strict=True))


def format_element(x: Element) -> str:
    return ":".join(str(a) for a in x)


def parse_element(text: str, factors: Sequence[int]) -> Element:
    """Parse "1:3" style residue tuples."""
    try:
        x = tuple(int(tok) for tok in text.strip().split(":"))
    except ValueError:
        raise InvalidSpecError(f"malformed group element {text!r}") from None
    if len(x) != len(factors):
        raise InvalidSpecError(
            f"element {text!r} has {len(x)} coordinates, group has {len(factors)}"
        )
    return tuple(a % d for a, d in zip(x, factors, strict=True))


def generated_subgroup(factors: Sequence[int], gens: Iterable[Element]) -> set[Element]:
    """Subgroup generated by gens (closure under addition from zero)."""
    gens = list(gens)
    zero = tuple(0 for _ in factors)
    seen = {zero}
    frontier = deque([zero])
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = add_elements(x, g, factors)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


def abelian_groups(order: int) -> list[tuple[int, ...]]:
    """Invariant-factor chains d1 | d2 | ... of every Abelian group of the order."""
    if order < 2:
        return []
    per_prime = []
    for p, e in sorted(factorint(order).items()):
        shapes = []
        for part in partitions(e):
            shapes.append(
                sorted((size for size, mult in part.items() for _ in range(mult)), reverse=True)
            )
        per_prime.append((p, shapes))

    groups = set()
    for choice in itertools.product(*(shapes for _, shapes in per_prime)):
        length = max(len(shape) for shape in choice)
        factors = []
        for i in range(length):
            f = 1
            for (p, _), shape in zip(per_prime, choice, strict=True):
                if i < len(shape):
                    f *= p ** shape[i]
            factors.append(f)
        groups.add(tuple(sorted(factors)))
    return sorted(groups, key=lambda fs: (len(fs), fs))


@dataclass(frozen=True)
class CayleySpec:
    """Finite Abelian group (invariant factors) plus a connection set."""

    invariant_factors: tuple[int, ...]
    connection_set: tuple[Element, ...]

    @classmethod
    def cyclic(cls, n: int, residues: Iterable[int]) -> "CayleySpec":
        return cls((n,), tuple((r % n,) for r in residues))

    @classmethod
    def parse(cls, factors_text: str, set_text: str) -> "CayleySpec":
        """Build from CLI text: "2,6" and "1:0,0:1,0:5"."""
        try:
            factors = tuple(int(tok) for tok in factors_text.split(","))
        except ValueError:
            raise InvalidSpecError(f"malformed invariant factors {factors_text!r}") from None
        elements = tuple(
            parse_element(tok, factors) for tok in set_text.replace(" ", ",").split(",") if tok
        )
        return cls(factors, elements)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def describe(self) -> str:
        return "x".join(f"Z{d}" for d in self.invariant_factors)

    def format_set(self) -> str:
        return " ".join(format_element(x) for x in self.connection_set)

    def validate(self, valency: int | None = None) -> None:
        factors = self.invariant_factors
        if not factors or any(d < 2 for d in factors):
            raise InvalidSpecError(f"invariant factors must be >= 2, got {list(factors)}")
        for d, e in itertools.pairwise(factors):
            if e % d:
                raise InvalidSpecError(f"invariant factors {list(factors)} do not form a divisor chain")
        seen = set()
        for x in self.connection_set:
            if len(x) != len(factors) or any(not 0 <= a < d for a, d in zip(x, factors, strict=False)):
                raise InvalidSpecError(f"element {format_element(x)} is not a reduced residue tuple")
            if not any(x):
                raise InvalidSpecError("connection set contains the identity")
            if x in seen:
                raise InvalidSpecError(f"duplicate element {format_element(x)}")
            seen.add(x)
        for x in self.connection_set:
            if negate_element(x, factors) not in seen:
                raise InvalidSpecError(
                    f"connection set is not symmetric: -{format_element(x)} missing"
                )
        if valency is not None and len(seen) != valency:
            raise InvalidSpecError(f"connection set has {len(seen)} elements, expected {valency}")

    def is_connected(self) -> bool:
        return len(generated_subgroup(self.invariant_factors, self.connection_set)) == self.order


def gen_abelian_cayley(spec: CayleySpec) -> Graph:
    """Cayley graph: x adjacent to x + s for every s in the connection set."""
    spec.validate()
    factors = spec.invariant_factors
    rows = tuple(
        tuple(sorted(element_index(add_elements(x, s, factors), factors) for s in spec.connection_set))
        for x in group_elements(factors)
    )
    return Graph(len(rows), rows)


# =============================================================================
# Paley graphs
# =============================================================================


def prime_power(q: int) -> tuple[int, int]:
    """(p, e) with q = p**e, or InvalidSpecError."""
    if q < 2:
        raise InvalidSpecError(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise InvalidSpecError(f"{q} is not a prime power")
    ((p, e),) = factors.items()
    return int(p), int(e)


def smallest_irreducible(p: int, e: int) -> list[int]:
    """Lexicographically smallest monic irreducible polynomial of degree e over GF(p)."""
    for coeffs in itertools.product(range(p), repeat=e):
        poly = [1, *coeffs]
        if gf_irreducible_p(poly, p, ZZ):
            return poly
    raise ConstructionError(f"no irreducible polynomial of degree {e} over GF({p})")


def _to_poly(x: int, p: int, e: int) -> list[int]:
    digits = []
    for _ in range(e):
        digits.append(x % p)
        x //= p
    return gf_strip(digits[::-1])


def _from_poly(poly: Sequence[int], p: int) -> int:
    value = 0
    for c in poly:
        value = value * p + int(c)
    return value


def _field_add(x: int, y: int, p: int, e: int) -> int:
    total, scale = 0, 1
    for _ in range(e):
        total += ((x % p + y % p) % p) * scale
        x //= p
        y //= p
        scale *= p
    return total


def field_squares(p: int, e: int) -> set[int]:
    """Nonzero squares of GF(p**e); elements encoded as base-p coefficient digits."""
    if e == 1:
        return {x * x % p for x in range(1, p)}
    modulus = smallest_irreducible(p, e)
    squares = set()
    for x in range(1, p**e):
        poly = _to_poly(x, p, e)
        squares.add(_from_poly(gf_rem(gf_mul(poly, poly, p, ZZ), modulus, p, ZZ), p))
    return squares


def gen_paley(q: int) -> Graph:
    """Paley graph on GF(q): x ~ y iff x - y is a nonzero square."""
    p, e = prime_power(q)
    if q % 4 != 1:
        raise InvalidSpecError(f"q={q} is not 1 mod 4; the difference set is not symmetric")
    squares = field_squares(p, e)
    rows = tuple(tuple(sorted(_field_add(x, s, p, e) for s in squares)) for x in range(q))
    return Graph(q, rows)


# =============================================================================
# Standard graphs
# =============================================================================


def gen_standard(kind: StandardKind, size: int) -> Graph:
    """K_size or K_{size,size} (sides 0..size-1 and size..2size-1)."""
    if size < 1:
        raise InvalidSpecError(f"size must be positive, got {size}")
    if kind == "complete":
        return Graph.from_edges(size, itertools.combinations(range(size), 2))
    if kind == "complete_bipartite":
        return Graph.from_edges(
            2 * size, ((u, size + v) for u in range(size) for v in range(size))
        )
    raise InvalidSpecError(f"unknown standard graph kind {kind!r}")


# =============================================================================
# Switching-hard families and Gale-Ryser completion
# =============================================================================


@dataclass(frozen=True)
class DeficiencySequence:
    """Required extra degrees on the two sides of a bipartite completion."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def is_graphic(self) -> bool:
        """Gale-Ryser dominance condition."""
        if any(x < 0 for x in self.left + self.right):
            return False
        if sum(self.left) != sum(self.right):
            return False
        if any(x > len(self.right) for x in self.left) or any(
            x > len(self.left) for x in self.right
        ):
            return False
        ordered = sorted(self.left, reverse=True)
        running = 0
        for k, a in enumerate(ordered, start=1):
            running += a
            if running > sum(min(b, k) for b in self.right):
                return False
        return True


def gale_ryser_complete(
    seq: DeficiencySequence, forbidden: frozenset[Edge] = frozenset()
) -> list[Edge]:
    """Greedy bipartite realization of a deficiency sequence.

    Left vertices are served in decreasing order of deficiency; each one is
    joined to the right vertices with the largest remaining deficiency,
    re-sorted every round. Returns (left index, right index) pairs.

    Raises:
        RealizationError: The sequence fails the dominance condition, or the
            forbidden pairs block the greedy completion.
    """
    if not seq.is_graphic():
        raise RealizationError("deficiency sequence is not bipartite-graphic", seq)
    remaining = list(seq.right)
    edges = []
    for i in sorted(range(len(seq.left)), key=lambda i: (-seq.left[i], i)):
        candidates = sorted(
            (j for j in range(len(remaining)) if remaining[j] > 0 and (i, j) not in forbidden),
            key=lambda j: (-remaining[j], j),
        )
        need = seq.left[i]
        if len(candidates) < need:
            raise RealizationError(f"left vertex {i} cannot be completed", seq)
        for j in candidates[:need]:
            remaining[j] -= 1
            edges.append((i, j))
    return sorted(edges)


def _five_regular_hard_edges(half: int) -> list[Edge]:
    """Explicit 5-regular family; u_i is vertex i-1, w_i is vertex half+i-1."""

    def u(i: int) -> int:
        return i - 1

    def w(i: int) -> int:
        return half + i - 1

    edges = []
    for i in range(1, half):
        edges += [(u(i), u(i + 1)), (w(i), w(i + 1))]
    for i in range(1, half + 1):
        edges.append((u(i), w(i)))
    for i in range(1, half - 1):
        edges += [(u(i), u(i + 2)), (w(i), w(i + 2))]
    edges += [
        (u(1), w(2)),
        (u(1), w(half)),
        (u(2), w(1)),
        (u(half - 1), w(half)),
        (u(half), w(1)),
        (u(half), w(half - 1)),
    ]
    return edges


def gen_switching_hard(valency: int, half: int) -> tuple[Graph, Bipartition]:
    """Regular graph whose (U, W) bisection defeats lowest-index switching.

    Valency 5 uses the explicit construction (half even, >= 8). Other
    valencies place path powers inside U and W (offsets 1..k for valency
    2k+1, 1..k-1 for valency 2k), add u1-wn and un-w1, and complete to
    regularity with Gale-Ryser edges between U and W.
    """
    if valency < 3:
        raise InvalidSpecError(f"valency must be at least 3, got {valency}")
    if valency == 5:
        if half < HARD_FIVE_MIN_HALF or half % 2:
            raise InvalidSpecError(f"valency 5 needs an even half >= 8, got {half}")
        edges = _five_regular_hard_edges(half)
    else:
        k = valency // 2
        span = k if valency % 2 else k - 1
        if half < 2 * k:
            raise InvalidSpecError(f"valency {valency} needs half >= {2 * k}, got {half}")
        edges = []
        for side in (0, half):
            for i in range(half):
                for o in range(1, span + 1):
                    if i + o < half:
                        edges.append((side + i, side + i + o))
        edges += [(0, 2 * half - 1), (half - 1, half)]

        degree = [0] * (2 * half)
        for a, b in edges:
            degree[a] += 1
            degree[b] += 1
        seq = DeficiencySequence(
            tuple(valency - degree[i] for i in range(half)),
            tuple(valency - degree[half + j] for j in range(half)),
        )
        try:
            completion = gale_ryser_complete(seq, frozenset({(0, half - 1), (half - 1, 0)}))
        except RealizationError as e:
            raise ConstructionError(f"cannot complete hard family: {e}") from e
        edges += [(i, half + j) for i, j in completion]

    g = Graph.from_edges(2 * half, edges)
    if not g.is_regular(valency):
        raise ConstructionError(f"hard family ({valency}, {half}) is not {valency}-regular")
    return g, Bipartition.from_class(2 * half, range(half))


def hard_family_cut_readings(valency: int, half: int) -> dict[str, int]:
    """Cut formula of the general hard family under both readings of n.

    "full_vertex" reads n as the total vertex count 2*half, "class_size" as
    the class size half.
    """
    k = valency // 2
    if valency % 2:
        return {
            "full_vertex": half + k * (k + 1),
            "class_size": half // 2 + k * (k + 1),
        }
    return {
        "full_vertex": 2 * half + k * (k - 1),
        "class_size": half + k * (k - 1),
    }


# =============================================================================
# Random regular graphs
# =============================================================================


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator; any 64-bit integer seed is accepted."""
    return np.random.default_rng(seed % 2**64)


def _suitable(edges: set[Edge], potential: dict[int, int]) -> bool:
    if not potential:
        return True
    for s1 in potential:
        for s2 in potential:
            if s1 == s2:
                break
            if (min(s1, s2), max(s1, s2)) not in edges:
                return True
    return False


def _try_pairing(n: int, d: int, rng: np.random.Generator) -> set[Edge] | None:
    edges: set[Edge] = set()
    stubs = np.repeat(np.arange(n), d)
    while stubs.size:
        potential: dict[int, int] = defaultdict(int)
        rng.shuffle(stubs)
        for s1, s2 in zip(stubs[::2].tolist(), stubs[1::2].tolist(), strict=True):
            e = (min(s1, s2), max(s1, s2))
            if s1 != s2 and e not in edges:
                edges.add(e)
            else:
                potential[s1] += 1
                potential[s2] += 1
        if not _suitable(edges, potential):
            return None
        stubs = np.array(
            [v for v, count in potential.items() for _ in range(count)], dtype=np.int64
        )
    return edges


def gen_random_regular(n: int, d: int, seed: int) -> Graph:
    """Seeded d-regular simple graph from the pairing model.

    Stubs that would form loops or repeated edges are re-paired; a pairing
    that gets stuck is discarded and restarted, at most
    RANDOM_REGULAR_MAX_ATTEMPTS times.
    """
    if (n * d) % 2:
        raise InvalidSpecError(f"n*d = {n * d} is odd")
    if not 0 <= d < n:
        raise InvalidSpecError(f"need 0 <= d < n, got n={n}, d={d}")
    rng = make_rng(seed)
    for attempt in range(1, RANDOM_REGULAR_MAX_ATTEMPTS + 1):
        edges = _try_pairing(n, d, rng)
        if edges is not None:
            log.debug("random %d-regular graph on %d vertices after %d attempts", d, n, attempt)
            return Graph.from_edges(n, sorted(edges))
    raise RetryExhaustedError(
        f"no simple {d}-regular pairing on {n} vertices in {RANDOM_REGULAR_MAX_ATTEMPTS} attempts"
    )
