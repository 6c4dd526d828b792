from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_mass, brute_trees, random_weights, weight_vectors
from forestlab.errors import EmptyOrFullSet, MalformedInput, NotATree, TieWeightUnsupported
from forestlab.graph import Forest, LabelledGraph, WeightVector
from forestlab.prufer import (
    AliasTable,
    PrueferCode,
    code_frequencies,
    decode,
    encode,
    enumerate_trees,
    expected_census,
    expected_census_enumerated,
    has_pendant,
    pendant_census,
    pendant_probability,
    pendant_probability_enumerated,
    sample_codes,
    sample_summary,
    sample_tree,
    subsets_with_weight,
)

PATH3 = Forest(3, [(1, 2), (2, 3)])
STAR4 = Forest(4, [(1, 2), (1, 3), (1, 4)])


class TestCodec:
    def test_encode_path(self):
        assert encode(PATH3).seq == (2,)

    def test_encode_star(self):
        assert encode(STAR4).seq == (1, 1)

    def test_decode_examples(self):
        assert decode(PrueferCode((2,), 3)) == PATH3
        assert decode(PrueferCode((1, 1), 4)) == STAR4
        assert decode(PrueferCode((), 2)).edges == ((1, 2),)

    def test_all_trees_on_four(self):
        codes = {encode(Forest(4, t)).seq for t in brute_trees(4)}
        assert len(codes) == 16
        assert codes == set(product(range(1, 5), repeat=2))

    @pytest.mark.parametrize("n", range(2, 7))
    def test_bijection(self, n):
        trees = set()
        for seq in product(range(1, n + 1), repeat=n - 2):
            t = decode(PrueferCode(seq, n))
            assert encode(t).seq == seq
            trees.add(t.edges)
        assert trees == {tuple(sorted(t)) for t in brute_trees(n)}

    @pytest.mark.parametrize("n", range(2, 7))
    def test_degree_law(self, n):
        for seq in product(range(1, n + 1), repeat=n - 2):
            t = decode(PrueferCode(seq, n))
            counts = PrueferCode(seq, n).counts()
            assert [d - 1 for d in t.degrees] == counts

    def test_encode_rejects_non_tree(self):
        with pytest.raises(NotATree):
            encode(LabelledGraph(4, [(1, 2), (3, 4)]))
        with pytest.raises(NotATree):
            encode(LabelledGraph(1))
        with pytest.raises(NotATree):
            encode(LabelledGraph(3, [(1, 2), (2, 3), (1, 3)]))

    @pytest.mark.parametrize("seq, n", [((4,), 3), ((1, 1), 3), ((), 1)])
    def test_bad_codes(self, seq, n):
        with pytest.raises(MalformedInput):
            PrueferCode(seq, n)

    def test_enumerate_trees_single_vertex(self):
        assert [t.edges for t in enumerate_trees(1)] == [()]


class TestAliasTable:
    @given(st.lists(st.integers(1, 20), min_size=1, max_size=9))
    def test_exact_probabilities(self, weights):
        table = AliasTable(weights)
        total = sum(weights)
        for i, x in enumerate(weights):
            assert table.probability(i) == Fraction(x, total)

    def test_draw_range(self):
        table = AliasTable([3, 1, 2])
        draws = table.draw(np.random.default_rng(1), 1000)
        assert set(draws.tolist()) <= {0, 1, 2}


class TestSampler:
    def test_two_vertices_always_edge(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            assert sample_tree(WeightVector((1, 1)), rng).edges == ((1, 2),)

    def test_single_vertex(self):
        assert sample_tree(WeightVector((4,)), 0).edges == ()

    def test_deterministic_given_seed(self):
        w = WeightVector((2, 1, 3, 1, 1))
        assert sample_tree(w, 42) == sample_tree(w, 42)
        assert np.array_equal(sample_codes(w, 5000, 9), sample_codes(w, 5000, 9))

    def test_thread_count_does_not_change_stream(self):
        w = WeightVector((2, 1, 1, 3))
        a = sample_codes(w, 200_000, 5, threads=1)
        b = sample_codes(w, 200_000, 5, threads=4)
        assert np.array_equal(a, b)

    def test_codes_shape_and_range(self):
        codes = sample_codes(WeightVector((1, 2, 3, 4)), 1000, 0)
        assert codes.shape == (1000, 2)
        assert codes.min() >= 1 and codes.max() <= 4

    def test_frequencies_n2(self):
        codes = sample_codes(WeightVector((1, 1)), 10, 0)
        assert code_frequencies(codes) == {(): 10}

    def test_star_probability_21_1(self):
        # K' = 2 * 4 = 8, the star at vertex 1 has mass 2^2 = 4
        s = sample_summary(WeightVector((2, 1, 1)), 200_000, seed=11)
        n = s.samples
        p = 0.5
        assert abs(s.tree_freq[(1,)] - n * p) <= 5 * (n * p * (1 - p)) ** 0.5

    @pytest.mark.parametrize("w", [(1, 1, 1, 1), (2, 1, 1), (3, 1, 2, 1, 1)])
    def test_goodness_of_fit(self, w):
        s = sample_summary(WeightVector(w), 200_000, seed=2024)
        assert s.max_sigma <= 5
        assert 0.001 <= s.p_value <= 0.999

    def test_summary_json(self):
        js = sample_summary(WeightVector((1, 1, 1)), 300, seed=1).to_json()
        assert js["seed"] == 1 and js["samples"] == 300
        assert set(js["tree_freq"]) == {"1", "2", "3"}
        assert sum(js["tree_freq"].values()) == 300


class TestPendantCensus:
    def test_single_edge_tie(self):
        c = pendant_census(Forest(2, [(1, 2)]), WeightVector((1, 1)))
        assert c.records[0].side == {1}
        assert c.c(1) == 1

    def test_path_unit(self):
        c = pendant_census(PATH3, WeightVector.unit(3))
        assert c.c(1) == 2
        assert sorted(sorted(r.side) for r in c.records) == [[1], [3]]

    def test_contracted_two_triangles(self):
        c = pendant_census(Forest(2, [(1, 2)]), WeightVector((3, 3)))
        assert c.records[0].side == {1}
        assert c.c(3) == 1

    @given(weight_vectors(min_n=2, max_n=6, max_w=5), st.data())
    @settings(max_examples=80)
    def test_invariants(self, w, data):
        seq = tuple(data.draw(st.lists(st.integers(1, w.n), min_size=w.n - 2, max_size=w.n - 2)))
        t = decode(PrueferCode(seq, w.n))
        c = pendant_census(t, w)
        assert sum(c.histogram.values()) == w.n - 1
        assert set(c.histogram) == set(range(1, w.W // 2 + 1))
        for r in c.records:
            assert 2 * r.weight < w.W or (2 * r.weight == w.W and 1 in r.side)
            assert has_pendant(t, r.side)

    def test_rejects_forest(self):
        with pytest.raises(NotATree):
            pendant_census(Forest(3, [(1, 2)]), WeightVector.unit(3))


def _brute_pendant_probability(vertices, w):
    """Sum of mass over trees where some edge cuts off exactly ``vertices``."""
    n = len(w)
    s = set(vertices)
    hit = total = 0
    for t in brute_trees(n):
        m = brute_mass(n, t, w)
        total += m
        for e in t:
            rest = [f for f in t if f != e]
            # component of e[0] in t - e
            comp = {e[0]}
            grew = True
            while grew:
                grew = False
                for a, b in rest:
                    if (a in comp) != (b in comp):
                        comp |= {a, b}
                        grew = True
            if comp == s or set(range(1, n + 1)) - comp == s:
                hit += m
                break
    return Fraction(hit, total)


class TestPendantProbability:
    @pytest.mark.parametrize("w", [(7,) * 2, (1, 5)])
    def test_n2(self, w):
        assert pendant_probability({1}, WeightVector(w)) == 1

    def test_n3_unit(self):
        w = WeightVector.unit(3)
        assert pendant_probability({1}, w) == Fraction(2, 3)
        assert _brute_pendant_probability({1}, w.w) == Fraction(2, 3)

    def test_n4_pair(self):
        w = WeightVector.unit(4)
        assert pendant_probability({1, 2}, w) == Fraction(1, 4)
        assert _brute_pendant_probability({1, 2}, w.w) == Fraction(1, 4)

    @pytest.mark.parametrize("vs", [set(), {1, 2, 3}])
    def test_empty_or_full(self, vs):
        with pytest.raises(EmptyOrFullSet):
            pendant_probability(vs, WeightVector.unit(3))

    def test_formula_matches_enumeration(self, rng):
        for _ in range(12):
            n = int(rng.integers(2, 6))
            w = random_weights(rng, n, 12)
            for size in range(1, n):
                for vs in combinations(range(1, n + 1), size):
                    closed = pendant_probability(vs, w)
                    assert closed == pendant_probability_enumerated(vs, w)
                    if n <= 4:
                        assert closed == _brute_pendant_probability(vs, w.w)


class TestExpectedCensus:
    def test_n2_rejected(self):
        with pytest.raises(TieWeightUnsupported):
            expected_census(WeightVector((1, 1)), 1)
        with pytest.raises(ValueError):
            expected_census(WeightVector((1, 1)), 0)

    def test_three_unit(self):
        w = WeightVector.unit(3)
        assert expected_census(w, 1) == 2
        assert all(pendant_census(t, w).c(1) == 2 for t in enumerate_trees(3))

    def test_four_unit(self):
        w = WeightVector.unit(4)
        assert expected_census(w, 1) == Fraction(9, 4)
        brute = sum(pendant_census(Forest(4, t), w).c(1) for t in brute_trees(4))
        assert Fraction(brute, 16) == Fraction(9, 4)

    @given(weight_vectors(min_n=2, max_n=6, max_w=3), st.data())
    @settings(max_examples=40, deadline=None)
    def test_sum_identity(self, w, data):
        ks = [k for k in range(1, w.W) if 2 * k < w.W]
        if not ks:
            return
        k = data.draw(st.sampled_from(ks))
        assert expected_census(w, k) == expected_census_enumerated(w, k)

    @given(weight_vectors(min_n=1, max_n=10, max_w=6), st.integers(0, 30))
    def test_subset_sum_matches_brute(self, w, k):
        got = sorted(subsets_with_weight(w, k))
        want = sorted(
            c for r in range(1, w.n + 1) for c in combinations(range(1, w.n + 1), r) if w.weight_of(c) == k
        )
        assert got == want
