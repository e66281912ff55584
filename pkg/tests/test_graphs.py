from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossipsim.errors import (
    DegreeError,
    EmptyOrFullSet,
    ParityError,
    RangeError,
    SizeGuardExceeded,
)
from gossipsim.graphs import (
    CyclicGraphs,
    MatchingSequence,
    ResampledRegular,
    StaticGraph,
    _matching_snapshot,
    _resampled_snapshot,
    complete_graph,
    conductance,
    conductance_lower_bound,
    cycle_graph,
    edges_between,
    generate_random_regular,
    is_connected,
    load_graph,
    matching_graph,
    mixing_lemma_check,
    ordered_pairs_between,
    parse_graph_spec,
    phi_k,
    save_graph,
    spectral_lambda,
)

from conftest import mask_from_bits, mask_of


def assert_valid_regular(g):
    """Structural invariants checked independently of constructor validation."""
    degrees = np.zeros(g.n, dtype=int)
    seen = set()
    for u, v in g.edges():
        assert u != v
        assert (u, v) not in seen
        seen.add((u, v))
        degrees[u] += 1
        degrees[v] += 1
    assert np.all(degrees == g.d)
    for v in range(g.n):
        nbrs = g.neighbors(v)
        assert len(set(int(x) for x in nbrs)) == g.d
        for w in nbrs:
            assert v in set(int(x) for x in g.neighbors(int(w)))


class TestGenerator:
    def test_n2_d1_is_the_single_edge(self):
        g = generate_random_regular(2, 1, seed=0)
        assert list(g.edges()) == [(0, 1)]

    def test_n4_d3_is_complete(self):
        g = generate_random_regular(4, 3, seed=123)
        assert sorted(g.edges()) == sorted(itertools.combinations(range(4), 2))

    def test_structural_invariants_on_midsize_graph(self):
        g = generate_random_regular(100, 3, seed=7)
        assert_valid_regular(g)

    def test_deterministic_given_seed(self):
        a = generate_random_regular(60, 4, seed=42)
        b = generate_random_regular(60, 4, seed=42)
        assert np.array_equal(a.adj, b.adj)
        c = generate_random_regular(60, 4, seed=43)
        assert not np.array_equal(a.adj, c.adj)

    def test_parity_and_degree_errors(self):
        with pytest.raises(ParityError):
            generate_random_regular(5, 3, seed=0)
        with pytest.raises(DegreeError):
            generate_random_regular(4, 4, seed=0)
        with pytest.raises(DegreeError):
            generate_random_regular(4, 0, seed=0)

    def test_dense_degrees_still_generate(self):
        # Stub re-pairing must cope with degrees where a fresh pairing is
        # almost never simple on the first try.
        g = generate_random_regular(128, 16, seed=5)
        assert_valid_regular(g)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(4, 24), st.integers(1, 5), st.integers(0, 10_000))
    def test_generated_graphs_are_valid(self, n, d, seed):
        if d >= n:
            d = n - 1
        if (n * d) % 2:
            n += 1
        g = generate_random_regular(n, d, seed=seed)
        assert_valid_regular(g)


class TestConductance:
    def test_k2_singleton(self):
        assert conductance(complete_graph(2), [0]) == 1.0

    def test_c4_adjacent_pair(self):
        assert conductance(cycle_graph(4), [0, 1]) == pytest.approx(0.5)

    def test_k4_singleton(self):
        assert conductance(complete_graph(4), [0]) == 1.0

    def test_empty_and_full_rejected(self):
        g = complete_graph(4)
        with pytest.raises(EmptyOrFullSet):
            conductance(g, [])
        with pytest.raises(EmptyOrFullSet):
            conductance(g, range(4))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**12 - 2), st.integers(0, 500))
    def test_symmetric_and_unit_range(self, bits, seed):
        g = generate_random_regular(12, 3, seed=seed % 5)
        bits = bits or 1
        s = mask_from_bits(12, bits)
        phi = conductance(g, s)
        assert 0.0 <= phi <= 1.0
        assert phi == pytest.approx(conductance(g, ~s))

    def test_edges_between_overlapping_sets(self):
        g = complete_graph(4)
        # A = {0,1}, B = {1,2}: qualifying edges 01, 02, 12, each once.
        assert edges_between(g, [0, 1], [1, 2]) == 3

    def test_pair_counts_match_brute_force(self):
        rng = np.random.default_rng(5)
        for seed in range(5):
            g = generate_random_regular(10, 3, seed=seed)
            edge_list = list(g.edges())
            for _ in range(20):
                a = mask_from_bits(10, int(rng.integers(1, 2**10 - 1)))
                b = mask_from_bits(10, int(rng.integers(1, 2**10 - 1)))
                expected = sum(
                    1 for u, v in edge_list if (a[u] and b[v]) or (a[v] and b[u])
                )
                assert edges_between(g, a, b) == expected
                expected_ordered = sum(
                    int(a[u] and b[v]) + int(a[v] and b[u]) for u, v in edge_list
                )
                assert ordered_pairs_between(g, a, b) == expected_ordered


class TestSpectral:
    @pytest.mark.parametrize("n", [3, 8, 17, 33, 64])
    def test_complete_graph_lambda(self, n):
        assert spectral_lambda(complete_graph(n)).lam == pytest.approx(1 / (n - 1), abs=1e-9)

    def test_matching_lambda_is_one(self):
        assert spectral_lambda(matching_graph([(0, 1), (2, 3)])).lam == pytest.approx(1.0, abs=1e-9)

    def test_c4_lambda_is_one(self):
        assert spectral_lambda(cycle_graph(4)).lam == pytest.approx(1.0, abs=1e-9)

    def test_top_eigenvalue_is_one(self):
        rep = spectral_lambda(generate_random_regular(30, 4, seed=2))
        assert rep.eigenvalues[-1] == pytest.approx(1.0, abs=1e-9)
        assert np.all(np.diff(rep.eigenvalues) >= -1e-12)

    def test_size_guard(self):
        with pytest.raises(SizeGuardExceeded):
            spectral_lambda(complete_graph(8193))


class TestPhiK:
    def test_k4_k2(self):
        # Singletons give 1; a pair has 4 cut edges over volume 6.
        pair_phi = conductance(complete_graph(4), [0, 1])
        assert pair_phi == pytest.approx(2 / 3)
        assert phi_k(complete_graph(4), 2) == pytest.approx(pair_phi)

    def test_c6_k3(self):
        assert phi_k(cycle_graph(6), 3) == pytest.approx(1 / 3)

    @pytest.mark.parametrize("g", [complete_graph(5), cycle_graph(5)])
    def test_k1_is_one(self, g):
        assert phi_k(g, 1) == pytest.approx(1.0)

    def test_subset_count_guard(self):
        with pytest.raises(SizeGuardExceeded):
            phi_k(complete_graph(40), 20)

    def test_matches_exhaustive_conductance(self):
        g = generate_random_regular(8, 3, seed=9)
        best = min(
            conductance(g, combo)
            for size in (1, 2, 3)
            for combo in itertools.combinations(range(8), size)
        )
        assert phi_k(g, 3) == pytest.approx(best)


class TestMixingLemma:
    def test_k4_split(self):
        rep = mixing_lemma_check(complete_graph(4), [0], [1, 2, 3])
        assert rep.pairs_st == 3
        assert rep.weak_ok and rep.strong_ok and rep.corollary_ok
        assert rep.strong_slack == pytest.approx(0.0, abs=1e-9)

    def test_matching_trivial_at_lambda_one(self):
        g = matching_graph([(0, 1), (2, 3)])
        rep = mixing_lemma_check(g, [0, 2], [1, 3])
        assert rep.weak_ok and rep.strong_ok

    def test_c6_opposite_paths(self):
        rep = mixing_lemma_check(cycle_graph(6), [0, 1, 2], [3, 4, 5])
        assert rep.pairs_st == 2
        assert rep.weak_ok and rep.strong_ok and rep.corollary_ok

    def test_sampled_pairs_hold(self):
        g = generate_random_regular(12, 4, seed=4)
        rng = np.random.default_rng(0)
        for disjoint in (True, False):
            for _ in range(50):
                s = mask_from_bits(12, int(rng.integers(1, 2**12 - 1)))
                t = mask_from_bits(12, int(rng.integers(1, 2**12 - 1)))
                if disjoint:
                    t &= ~s
                if not t.any():
                    continue
                rep = mixing_lemma_check(g, s, t)
                assert rep.weak_ok and rep.strong_ok and rep.corollary_ok


class TestConductanceLowerBound:
    def test_formula_points(self):
        assert conductance_lower_bound(0.0, 1, 100) == pytest.approx(0.99)
        assert conductance_lower_bound(1.0, 3, 10) == 0.0

    def test_certified_on_k4_pairs(self):
        g = complete_graph(4)
        lam = spectral_lambda(g).lam
        bound = conductance_lower_bound(lam, 2, 4)
        assert bound == pytest.approx(1 / 3)
        for pair in itertools.combinations(range(4), 2):
            assert conductance(g, pair) >= bound - 1e-9

    def test_certified_on_small_graphs(self):
        for seed in range(3):
            g = generate_random_regular(12, 4, seed=seed)
            lam = spectral_lambda(g).lam
            for bits in range(1, 2**12 - 1, 97):
                s = mask_from_bits(12, bits)
                size = int(s.sum())
                if size > 6:
                    continue
                assert conductance(g, s) >= conductance_lower_bound(lam, size, 12) - 1e-9

    def test_range_errors(self):
        with pytest.raises(RangeError):
            conductance_lower_bound(0.5, 60, 100)
        with pytest.raises(RangeError):
            conductance_lower_bound(1.5, 1, 100)


class TestDynamicSpecs:
    def test_static_and_cyclic(self):
        a, b = cycle_graph(6), complete_graph(6)
        assert StaticGraph(a).snapshot(5) is a
        cyc = CyclicGraphs((a, b))
        assert cyc.snapshot(0) is a and cyc.snapshot(1) is b and cyc.snapshot(2) is a

    def test_cyclic_rejects_mixed_sizes(self):
        with pytest.raises(RangeError):
            CyclicGraphs((cycle_graph(6), complete_graph(4)))

    def test_resampled_deterministic_across_cache_resets(self):
        spec = ResampledRegular(n=16, d=3, seed=5)
        first = spec.snapshot(7).adj.copy()
        _resampled_snapshot.cache_clear()
        assert np.array_equal(spec.snapshot(7).adj, first)
        assert not np.array_equal(spec.snapshot(8).adj, first)

    def test_matching_sequence_deterministic(self):
        spec = MatchingSequence(n=10, seed=3)
        first = spec.snapshot(2).adj.copy()
        _matching_snapshot.cache_clear()
        assert np.array_equal(spec.snapshot(2).adj, first)
        assert spec.snapshot(2).d == 1

    def test_matching_sequence_needs_even_n(self):
        with pytest.raises(ParityError):
            MatchingSequence(n=7, seed=0)

    def test_connectivity_probe(self):
        assert is_connected(cycle_graph(8))
        assert not is_connected(matching_graph([(0, 1), (2, 3)]))


class TestGraphFile:
    def test_roundtrip(self, tmp_path):
        g = generate_random_regular(20, 3, seed=1)
        path = tmp_path / "g.txt"
        save_graph(g, path)
        loaded = load_graph(path)
        assert np.array_equal(loaded.adj, g.adj)

    def test_roundtrip_of_implicit_complete_graph(self, tmp_path):
        g = complete_graph(6)
        path = tmp_path / "k6.txt"
        save_graph(g, path)
        loaded = load_graph(path)
        assert loaded.d == 5
        assert sorted(loaded.edges()) == sorted(g.edges())

    def test_loader_rejects_non_regular(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 1\n0 1\n")
        with pytest.raises(DegreeError):
            load_graph(path)

    def test_loader_rejects_unordered_edge(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 1\n1 0\n")
        with pytest.raises(RangeError):
            load_graph(path)

    def test_loader_rejects_wrong_header_degree(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 2\n0 1\n")
        with pytest.raises(DegreeError):
            load_graph(path)


class TestGraphSpecParsing:
    def test_forms(self):
        assert parse_graph_spec("complete:16").graph.is_complete
        assert parse_graph_spec("cycle:9").graph.d == 2
        assert parse_graph_spec("regular:16,3,seed=4").graph.d == 3
        assert parse_graph_spec("dynamic-regular:16,3,seed=4") == ResampledRegular(16, 3, 4)
        assert parse_graph_spec("matching:8") == MatchingSequence(8, 0)

    def test_file_form(self, tmp_path):
        path = tmp_path / "g.txt"
        save_graph(cycle_graph(5), path)
        assert parse_graph_spec(f"file:{path}").graph.n == 5

    def test_bad_specs(self):
        for text in ("complete", "ring:5", "regular:10", "complete:x"):
            with pytest.raises(RangeError):
                parse_graph_spec(text)


def test_vertex_mask_validation():
    with pytest.raises(RangeError):
        mask = mask_of(4, [0])
        conductance(complete_graph(5), mask)
    with pytest.raises(RangeError):
        conductance(complete_graph(5), [7])
