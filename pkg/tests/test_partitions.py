"""Tests for verification, switching, exhaustive search and cohesive-set search."""

import sys
import time
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from generators import gen_circulant, gen_paley, gen_random_regular, gen_standard, gen_switching_hard, make_rng
from graphs import (
    Bipartition,
    ContractViolation,
    Graph,
    GraphParseError,
    VertexSet,
    cut_size,
    induced_edge_count,
    induced_subgraph,
    remove_edges,
)
from partitions import (
    Certificate,
    CohesiveSetNotFound,
    SearchBudgetExceeded,
    ban_linial_cohesive,
    cohesive_size_bound,
    exhaustive_internal,
    extend_to_partition,
    grow_clusters,
    hybrid_internal,
    internal_bisection_near_perfect,
    km_bisection,
    km_dense_subgraph,
    local_switch,
    switching_guarantee_threshold,
    verify_cohesive,
    verify_internal,
)
from tests.conftest import petersen, unpruned_internal_partitions


def planted_bisection(half: int, d: int, cross_pairs: int, seed: int) -> tuple[Graph, Bipartition]:
    """Two random d-regular halves joined by 2*cross_pairs edges, still d-regular.

    Each step removes one edge inside each half and reconnects the four
    endpoints across, so the bisection into the two halves has cut 2 * cross_pairs.
    """
    left = gen_random_regular(half, d, seed)
    right = gen_random_regular(half, d, seed + 1)
    inside = [list(left.edges()), [(u + half, v + half) for u, v in right.edges()]]
    rng = make_rng(seed)
    cross: set[tuple[int, int]] = set()
    while len(cross) < 2 * cross_pairs:
        i = int(rng.integers(len(inside[0])))
        j = int(rng.integers(len(inside[1])))
        (a1, a2), (b1, b2) = inside[0][i], inside[1][j]
        if (a1, b1) in cross or (a2, b2) in cross:
            continue
        inside[0].pop(i)
        inside[1].pop(j)
        cross |= {(a1, b1), (a2, b2)}
    g = Graph.from_edges(2 * half, inside[0] + inside[1] + sorted(cross))
    return g, Bipartition.from_class(2 * half, range(half))


class TestVerifyInternal:
    """Tests for verify_internal() function."""

    def test_circulant_odd_even(self):
        g = gen_circulant(8, [1, 2, 4])
        assert verify_internal(g, Bipartition.from_class(8, range(0, 8, 2))).valid

    def test_k6_never_internal(self):
        g = gen_standard("complete", 6)
        assert unpruned_internal_partitions(g) == []
        assert not verify_internal(g, Bipartition.from_class(6, [0, 1, 2]))

    def test_cycle_arcs(self, cycle6):
        assert verify_internal(cycle6, Bipartition.from_class(6, [0, 1, 2])).valid

    def test_violations_listed(self, k4):
        verdict = verify_internal(k4, Bipartition.from_class(4, [0]))
        assert verdict.violations[0].vertex == 0
        assert (verdict.violations[0].inside, verdict.violations[0].outside) == (0, 3)

    def test_trivial_rejected(self, k4):
        with pytest.raises(ContractViolation, match="trivial"):
            verify_internal(k4, Bipartition.from_class(4, range(4), trivial=True))


class TestVerifyCohesive:
    """Tests for verify_cohesive() function."""

    def test_half_of_c125(self, c125_10):
        assert verify_cohesive(c125_10, VertexSet.of(10, range(6)), 3).valid

    def test_k4(self, k4):
        assert verify_cohesive(k4, VertexSet.everything(4), 3).valid

    def test_singleton(self, k4):
        assert not verify_cohesive(k4, VertexSet.of(4, [2]), 1).valid

    def test_empty_rejected(self, k4):
        with pytest.raises(ContractViolation):
            verify_cohesive(k4, VertexSet.of(4, []), 1)


class TestSwitchingThreshold:
    """Tests for switching_guarantee_threshold() function."""

    @pytest.mark.parametrize(
        "valency,n,expected",
        [(5, 20, 15), (5, 200, 105), (7, 24, 23), (4, 16, 17), (3, 10, 6), (6, 20, 25)],
    )
    def test_formulas(self, valency, n, expected):
        assert switching_guarantee_threshold(valency, n) == expected

    def test_small_valency(self):
        with pytest.raises(ContractViolation):
            switching_guarantee_threshold(2, 10)


class TestLocalSwitch:
    """Tests for local_switch() function."""

    def test_hard_family_chain(self):
        g, p = gen_switching_hard(5, 8)
        certificate, trace = local_switch(g, p)
        assert certificate is None
        assert trace.outcome == "trivial-end"
        assert trace.moves[:8] == [(i, 0) for i in range(8)]
        assert trace.final is not None and trace.final.is_trivial

    def test_complete_bipartite_from_sides(self, k33):
        certificate, trace = local_switch(k33, Bipartition.from_class(6, range(3)))
        assert certificate is None
        assert trace.initial_cut == 9
        assert [v for v, _ in trace.moves] == [0, 1, 2]

    def test_cut_strictly_decreasing(self, random_quintic):
        start = Bipartition.from_class(40, range(0, 40, 2))
        _, trace = local_switch(random_quintic, start)
        cuts = [trace.initial_cut, *trace.cut_sizes]
        assert all(b < a for a, b in zip(cuts, cuts[1:], strict=False))
        assert len(trace.moves) <= trace.initial_cut

    def test_even_valency_drops_by_two(self):
        g = gen_random_regular(30, 4, 3)
        _, trace = local_switch(g, Bipartition.from_class(30, range(0, 30, 2)))
        cuts = [trace.initial_cut, *trace.cut_sizes]
        assert all(a - b >= 2 for a, b in zip(cuts, cuts[1:], strict=False))

    def test_given_order_needs_permutation(self, k4):
        with pytest.raises(ContractViolation):
            local_switch(k4, Bipartition.from_class(4, [0, 1]), policy="given-order", order=[0, 1])

    def test_given_order(self, k33):
        order = [5, 4, 3, 2, 1, 0]
        _, trace = local_switch(k33, Bipartition.from_class(6, range(3)), policy="given-order", order=order)
        assert [v for v, _ in trace.moves] == [5, 4, 3]

    def test_highest_gain_on_hard_family(self):
        g, p = gen_switching_hard(5, 8)
        _, trace = local_switch(g, p, policy="highest-gain")
        assert trace.outcome in ("internal", "trivial-end")
        assert trace.cut_sizes == sorted(trace.cut_sizes, reverse=True)

    @pytest.mark.parametrize("seed", range(40))
    def test_quintic_up_to_threshold_ends_internal(self, seed):
        half = 10 + 2 * (seed % 20)
        threshold = switching_guarantee_threshold(5, 2 * half)
        g, p = planted_bisection(half, 5, threshold // 2, seed)
        assert half < cut_size(g, p) <= threshold
        certificate, _ = local_switch(g, p)
        assert certificate is not None
        assert verify_internal(g, certificate.partition).valid

    @pytest.mark.parametrize("d,half", [(7, 20), (7, 24), (6, 14), (6, 20)])
    def test_other_valencies_up_to_threshold(self, d, half):
        threshold = switching_guarantee_threshold(d, 2 * half)
        g, p = planted_bisection(half, d, threshold // 2, seed=half)
        floor = half if d % 2 else 2 * half
        assert floor < cut_size(g, p) <= threshold
        certificate, _ = local_switch(g, p)
        assert certificate is not None
        assert verify_internal(g, certificate.partition).valid

    @pytest.mark.parametrize("half", [8, 12, 16])
    def test_quartic_at_largest_even_cut(self, half):
        # equal halves of a 4-regular graph always have an even cut, so n is the largest one below n + 1
        threshold = switching_guarantee_threshold(4, 2 * half)
        g, p = planted_bisection(half, 4, half, seed=half)
        assert cut_size(g, p) == 2 * half == threshold - 1
        certificate, _ = local_switch(g, p)
        assert certificate is not None
        assert verify_internal(g, certificate.partition).valid

    @pytest.mark.slow
    def test_thousand_quintic_instances(self):
        for seed in range(1000):
            half = 10 + (seed % 91)
            half += half % 2
            threshold = switching_guarantee_threshold(5, 2 * half)
            g, p = planted_bisection(half, 5, threshold // 2, seed)
            assert half < cut_size(g, p) <= threshold, seed
            certificate, _ = local_switch(g, p)
            assert certificate is not None, seed


class TestExhaustiveInternal:
    """Tests for exhaustive_internal() function."""

    @pytest.mark.parametrize(
        "graph",
        [
            gen_standard("complete", 4),
            gen_standard("complete_bipartite", 3),
            gen_standard("complete", 5),
            gen_standard("complete", 6),
            gen_standard("complete_bipartite", 5),
            gen_circulant(10, [1, 2, 5]),
        ],
        ids=["K4", "K33", "K5", "K6", "K55", "C125_10"],
    )
    def test_exceptional_graphs(self, graph):
        started = time.perf_counter()
        certificate = exhaustive_internal(graph)
        assert certificate.kind == "nonexistence"
        assert time.perf_counter() - started < 5
        assert unpruned_internal_partitions(graph) == []

    def test_partition_found(self):
        g = gen_circulant(10, [1, 4, 5])
        certificate = exhaustive_internal(g)
        assert certificate.kind == "internal-partition"
        assert verify_internal(g, certificate.partition).valid
        assert 0 in certificate.partition.a

    @pytest.mark.parametrize(
        "graph",
        [petersen(), gen_circulant(6, [1]), gen_circulant(8, [1, 3, 4]), gen_paley(9), gen_circulant(12, [1, 3])],
        ids=["petersen", "C6", "C134_8", "paley9", "C13_12"],
    )
    def test_agrees_with_unpruned(self, graph):
        certificate = exhaustive_internal(graph)
        brute = unpruned_internal_partitions(graph)
        assert (certificate.kind == "nonexistence") == (not brute)
        if certificate.partition is not None:
            assert certificate.partition in brute

    def test_budget(self, c125_10):
        with pytest.raises(SearchBudgetExceeded) as excinfo:
            exhaustive_internal(c125_10, node_cap=3)
        assert excinfo.value.nodes > 3


class TestCertificate:
    """Tests for Certificate text and verification."""

    def test_internal_text(self, petersen_graph):
        p = Bipartition.from_class(10, range(5))
        certificate = Certificate.internal(petersen_graph, p)
        lines = certificate.to_text().splitlines()
        assert lines[0] == "internal-partition"
        assert lines[2:] == ["0 1 2 3 4", "5 6 7 8 9"]
        assert Certificate.from_text(certificate.to_text(), 10) == certificate
        assert certificate.verify(petersen_graph)

    def test_nonexistence_reverified(self, k4):
        certificate = exhaustive_internal(k4)
        assert certificate.to_text().splitlines()[2] == f"nodes={certificate.nodes} fixed=0"
        assert Certificate.from_text(certificate.to_text(), 4).verify(k4)

    def test_cohesive_pair(self, c125_10):
        certificate = Certificate.cohesive_pair(
            c125_10, VertexSet.of(10, range(6)), VertexSet.of(10, [5, 6, 7, 8, 9, 0])
        )
        assert certificate.to_text().splitlines()[2] == "k=3"
        assert Certificate.from_text(certificate.to_text(), 10).verify(c125_10)

    def test_stale_digest(self, petersen_graph):
        certificate = Certificate.internal(petersen_graph, Bipartition.from_class(10, range(5)))
        other = remove_edges(petersen_graph, [(0, 1)])
        assert not certificate.verify(other)

    def test_unknown_kind(self):
        with pytest.raises(GraphParseError, match="line 1"):
            Certificate.from_text("bogus\nabc\n0\n", 4)

    @pytest.mark.parametrize(
        "text, line",
        [
            ("internal-partition\nabc\n0 x\n*\n", 3),
            ("internal-partition\nabc\n0 1\n2 7\n", 4),
            ("cohesive-pair\nabc\nk=3\n1 0\n2 3\n", 4),
            ("cohesive-pair\nabc\nk=3\n0 1\n2 9\n", 5),
        ],
    )
    def test_payload_errors_report_file_lines(self, text, line):
        with pytest.raises(GraphParseError, match=f"^line {line}: ") as excinfo:
            Certificate.from_text(text, 4)
        assert excinfo.value.line == line


class TestHybridInternal:
    """Tests for hybrid_internal() function."""

    def test_petersen(self, petersen_graph):
        certificate = hybrid_internal(petersen_graph, seed=1)
        assert certificate.kind == "internal-partition"
        assert verify_internal(petersen_graph, certificate.partition).valid

    def test_falls_back_to_exhaustive(self, k4):
        assert hybrid_internal(k4).kind == "nonexistence"

    def test_without_fallback(self, c125_10):
        assert hybrid_internal(c125_10, restarts=2, exhaustive_fallback=False) is None

    def test_seeded(self, random_quintic):
        first = hybrid_internal(random_quintic, seed=5)
        assert first == hybrid_internal(random_quintic, seed=5)
        assert first.kind == "internal-partition"


class TestExtendToPartition:
    """Tests for extend_to_partition() function."""

    def test_registry_pair(self):
        g = gen_circulant(12, [1, 3, 6])
        a = VertexSet.of(12, [0, 3, 6, 9])
        b = VertexSet.of(12, [1, 4, 7, 10])
        p = extend_to_partition(g, a, b)
        assert set(a) <= set(p.a) and set(b) <= set(p.b)
        assert verify_internal(g, p).valid

    def test_already_covering(self, cycle6):
        a, b = VertexSet.of(6, [0, 1, 2]), VertexSet.of(6, [3, 4, 5])
        p = extend_to_partition(cycle6, a, b)
        assert p.a == a and p.b == b

    def test_overlap(self, cycle6):
        with pytest.raises(ContractViolation, match="overlap"):
            extend_to_partition(cycle6, VertexSet.of(6, [0, 1]), VertexSet.of(6, [1, 2]))

    def test_not_cohesive(self, c125_10):
        with pytest.raises(ContractViolation, match="vertex"):
            extend_to_partition(c125_10, VertexSet.of(10, [0, 1]), VertexSet.of(10, range(4, 10)))


class TestNearPerfect:
    """Tests for internal_bisection_near_perfect() function."""

    @pytest.mark.parametrize("n", [4, 6, 8, 12])
    def test_cocktail_party(self, n):
        g = gen_circulant(n, range(1, n // 2))
        p = internal_bisection_near_perfect(g)
        assert len(p.a) == len(p.b) == n // 2
        assert verify_internal(g, p).valid

    def test_wrong_valency(self, k4):
        with pytest.raises(ContractViolation):
            internal_bisection_near_perfect(k4)


class TestBanLinial:
    """Tests for ban_linial_cohesive() function."""

    def test_c125(self, c125_10):
        s = ban_linial_cohesive(c125_10)
        assert len(s) <= 6
        assert verify_cohesive(c125_10, s, 3).valid

    def test_k6(self):
        s = ban_linial_cohesive(gen_standard("complete", 6))
        assert len(s) == 4

    def test_paley13(self):
        g = gen_paley(13)
        s = ban_linial_cohesive(g, seed=2)
        assert len(s) <= 7
        assert verify_cohesive(g, s, 3).valid

    @pytest.mark.parametrize("seed", range(5))
    def test_size_bound_on_random_graphs(self, seed):
        g = gen_random_regular(60, 5, seed)
        s = ban_linial_cohesive(g, seed=seed)
        assert len(s) <= cohesive_size_bound(60, 5) == 31
        assert verify_cohesive(g, s, 3).valid

    def test_not_regular(self):
        with pytest.raises(ContractViolation):
            ban_linial_cohesive(Graph.from_edges(3, [(0, 1)]))

    def test_failure_reported(self, mocker, random_quintic):
        mocker.patch("partitions.k_core", return_value=VertexSet.of(40, []))
        with pytest.raises(CohesiveSetNotFound):
            ban_linial_cohesive(random_quintic, restarts=2)


class TestKostochkaMelnikov:
    """Tests for km_bisection() and km_dense_subgraph()."""

    def test_cycle(self):
        g = gen_circulant(16, [1])
        p, cut = km_bisection(g, seed=0)
        assert cut == cut_size(g, p) == 2

    def test_k6(self):
        _, cut = km_bisection(gen_standard("complete", 6))
        assert cut == 9

    def test_odd_n_near_bisection(self):
        g = gen_circulant(15, [1, 2])
        p, _ = km_bisection(g)
        assert abs(len(p.a) - len(p.b)) == 1

    def test_clusters(self, random_quintic):
        clusters, remainder = grow_clusters(random_quintic, 7)
        assert clusters and all(len(c) == 7 for c in clusters)
        members = [v for c in clusters for v in c] + remainder
        assert sorted(members) == list(range(40))
        for c in clusters:
            sub, _ = induced_subgraph(random_quintic, c)
            assert nx.is_connected(sub.to_networkx())

    def test_disconnected_warns(self, caplog):
        g = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7), (4, 7)])
        km_bisection(g)
        assert "disconnected" in caplog.text

    def test_dense_whole_graph(self, random_quintic):
        assert len(km_dense_subgraph(random_quintic, 40)) == 40

    def test_dense_single_vertex(self, random_quintic):
        s = km_dense_subgraph(random_quintic, 1)
        assert len(s) == 1 and induced_edge_count(random_quintic, s) == 0

    def test_dense_half(self):
        g = gen_random_regular(200, 5, 11)
        s = km_dense_subgraph(g, 100, seed=11)
        assert len(s) == 100
        assert induced_edge_count(g, s) >= g.m // 4

    def test_dense_target_range(self, k4):
        with pytest.raises(ContractViolation):
            km_dense_subgraph(k4, 0)

    @pytest.mark.parametrize("seed", range(20))
    def test_envelope(self, seed):
        g = gen_random_regular(200, 5, seed)
        _, cut = km_bisection(g, seed=seed)
        assert cut <= 0.9 * 5 * 200 / 4

    @pytest.mark.slow
    def test_envelope_hundred_seeds(self):
        within = 0
        for seed in range(100):
            g = gen_random_regular(200, 5, seed)
            _, cut = km_bisection(g, seed=seed)
            within += cut <= 0.9 * 5 * 200 / 4
        assert within >= 95
