from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from conftest import bridges_by_recount, count_components
from forestlab.classes import (
    GraphClass,
    bridge_addable_closure,
    conjecture_check,
    decompose,
    forest_baseline,
    implications_hold,
    is_bridge_addable,
    is_bridge_alterable,
    is_monotone,
    predicate_flags,
    random_closure_class,
    scan,
    universe,
)
from forestlab.errors import MalformedInput, NotBridgeAddable, NotBridgeAlterable, SizeLimitExceeded
from forestlab.forests import mass_distribution
from forestlab.graph import LabelledGraph, WeightVector

TRIANGLE = ((1, 2), (1, 3), (2, 3))


def _edge_sets(n):
    pairs = list(combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield frozenset(pairs[j] for j in range(len(pairs)) if mask >> j & 1)


def _component_of(n, edges):
    label = {v: v for v in range(1, n + 1)}
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            lo = min(label[a], label[b])
            if label[a] != lo or label[b] != lo:
                label[a] = label[b] = lo
                changed = True
    return label


def _oracle_flags(n, members):
    """The three predicates straight from their definitions, over frozensets of edges."""
    pairs = list(combinations(range(1, n + 1), 2))
    addable = all(
        (m | {p}) in members
        for m in members
        for p in pairs
        if _component_of(n, m)[p[0]] != _component_of(n, m)[p[1]]
    )
    monotone = all((m - {e}) in members for m in members for e in m)
    alterable = all(
        (g in members) == ((g - {e}) in members)
        for g in _edge_sets(n)
        for e in bridges_by_recount(n, sorted(g))
    )
    return {"bridge_addable": addable, "monotone": monotone, "bridge_alterable": alterable}


def _as_sets(c):
    return {frozenset(g.edges) for g in c.graphs()}


class TestGraphClass:
    def test_all_graphs_size(self):
        assert len(GraphClass.all_graphs(4)) == 64

    def test_forests_size(self):
        assert len(GraphClass.forests(4)) == 38

    def test_triangle_free_n4(self):
        # 64 graphs minus those containing one of 4 triangles
        brute = sum(
            1
            for g in _edge_sets(4)
            if not any(
                {(a, b), (a, c), (b, c)} <= g for a, b, c in combinations(range(1, 5), 3)
            )
        )
        assert len(GraphClass.triangle_free(4)) == brute == 41

    def test_contains_and_members_are_read_only(self):
        c = GraphClass.forests(3)
        assert LabelledGraph(3, [(1, 2)]) in c
        assert LabelledGraph(3, TRIANGLE) not in c
        with pytest.raises(ValueError):
            c.members[0] = False

    def test_equality_and_hash(self):
        a = GraphClass.forests(3)
        b = GraphClass.from_graphs(a.graphs())
        assert a == b and hash(a) == hash(b)

    def test_p_connected(self):
        assert GraphClass.all_graphs(3).p_connected() == Fraction(1, 2)
        assert GraphClass.forests(4).p_connected() == Fraction(16, 38)

    def test_empty_class(self):
        with pytest.raises(ValueError):
            GraphClass.from_masks(3, []).p_connected()
        with pytest.raises(MalformedInput):
            GraphClass.from_graphs([])

    def test_mixed_vertex_sets(self):
        with pytest.raises(MalformedInput):
            GraphClass.from_graphs([LabelledGraph(2), LabelledGraph(3)])

    def test_universe_cap(self):
        with pytest.raises(SizeLimitExceeded):
            universe(7)

    def test_universe_matches_oracles(self):
        u = universe(4)
        for mask, edges in enumerate(_edge_sets(4)):
            es = sorted(edges)
            assert bool(u.connected[mask]) == (count_components(4, es) == 1)
            want = bridges_by_recount(4, es)
            got = {u.pairs[j] for j in range(len(u.pairs)) if u.bridges[mask] >> j & 1}
            assert got == want


class TestPredicates:
    def test_forests(self):
        c = GraphClass.forests(4)
        assert is_bridge_addable(c) and is_monotone(c) and is_bridge_alterable(c)

    def test_all_graphs(self):
        c = GraphClass.all_graphs(4)
        assert predicate_flags(c) == {"bridge_addable": True, "monotone": True, "bridge_alterable": True}

    def test_edgeless_alone(self):
        v = is_bridge_addable(GraphClass.from_graphs([LabelledGraph(3)]))
        assert not v
        assert v.witness == (LabelledGraph(3), 1, 2)

    def test_triangle_alone_not_monotone(self):
        v = is_monotone(GraphClass.from_graphs([LabelledGraph(3, TRIANGLE)]))
        assert not v
        g, e = v.witness
        assert g.edges == TRIANGLE and e in TRIANGLE

    def test_addable_but_not_alterable(self):
        # the path 1-2-3 alone: no cross-component pairs, but deleting a bridge leaves the class
        c = GraphClass.from_graphs([LabelledGraph(3, [(1, 2), (2, 3)])])
        assert is_bridge_addable(c)
        v = is_bridge_alterable(c)
        assert not v
        g, e = v.witness
        assert e in g.edges and (g in c) != (LabelledGraph(3, [p for p in g.edges if p != e]) in c)

    def test_closure_generated_addable_not_alterable_on_four(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            c = random_closure_class(4, rng)
            f = predicate_flags(c)
            if f["bridge_addable"] and not f["monotone"] and not f["bridge_alterable"]:
                assert is_bridge_alterable(c).witness is not None
                return
        pytest.fail("no addable, non-alterable class among 200 closures")

    @pytest.mark.parametrize("n", [2, 3])
    def test_flags_match_definitions(self, n):
        rng = np.random.default_rng(n)
        size = 1 << (n * (n - 1) // 2)
        for _ in range(60):
            members = rng.random(size) < rng.uniform(0.2, 0.9)
            c = GraphClass(n, members)
            assert predicate_flags(c) == _oracle_flags(n, _as_sets(c))

    def test_flags_match_definitions_on_closures(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            c = random_closure_class(4, rng, alterable=bool(rng.integers(2)))
            assert predicate_flags(c) == _oracle_flags(4, _as_sets(c))

    def test_implications_on_random_classes(self):
        rng = np.random.default_rng(5)
        for n in (2, 3, 4, 5):
            for _ in range(40):
                c = random_closure_class(n, rng, alterable=bool(rng.integers(2)))
                assert implications_hold(predicate_flags(c))

    def test_implications_logic(self):
        bad = {"bridge_addable": False, "monotone": False, "bridge_alterable": True}
        assert not implications_hold(bad)
        bad = {"bridge_addable": True, "monotone": True, "bridge_alterable": False}
        assert not implications_hold(bad)
        assert implications_hold({"bridge_addable": True, "monotone": False, "bridge_alterable": False})


class TestClosure:
    def test_edgeless_two(self):
        c = bridge_addable_closure([LabelledGraph(2)])
        assert _as_sets(c) == {frozenset(), frozenset({(1, 2)})}

    def test_edgeless_three_gives_forests(self):
        assert bridge_addable_closure([LabelledGraph(3)]) == GraphClass.forests(3)

    def test_edgeless_gives_forests_generally(self):
        for n in range(1, 6):
            assert bridge_addable_closure([LabelledGraph(n)]) == GraphClass.forests(n)

    def test_triangle_plus_isolated(self):
        g = LabelledGraph(4, TRIANGLE)
        c = bridge_addable_closure([g])
        want = {frozenset(TRIANGLE)} | {frozenset(TRIANGLE + ((v, 4),)) for v in (1, 2, 3)}
        assert _as_sets(c) == want

    def test_alterable_closure(self):
        c = bridge_addable_closure([LabelledGraph(3, [(1, 2), (2, 3)])], alterable=True)
        assert is_bridge_alterable(c)
        assert c == GraphClass.forests(3)

    def test_is_smallest(self):
        # every member of the closure is forced: removing any non-seed member breaks addability
        seed = LabelledGraph(4, [(1, 2)])
        c = bridge_addable_closure([seed])
        assert is_bridge_addable(c)
        for m in c.masks():
            if m == seed.edge_mask():
                continue
            smaller = c.members.copy()
            smaller[m] = False
            assert not is_bridge_addable(GraphClass(4, smaller))

    def test_seed_errors(self):
        with pytest.raises(MalformedInput):
            bridge_addable_closure([LabelledGraph(2), LabelledGraph(3)])
        with pytest.raises(MalformedInput):
            bridge_addable_closure([0])


class TestDecompose:
    def test_forests_four(self):
        rep = decompose(GraphClass.forests(4))
        assert len(rep.blocks) == 1
        b = rep.blocks[0]
        assert b.core.edges == () and b.size == 38
        assert b.p_connected == b.p_forest == Fraction(16, 38)
        assert rep.blocks_match_forest and rep.partition_ok

    def test_all_graphs_three(self):
        rep = decompose(GraphClass.all_graphs(3))
        assert rep.p_connected == Fraction(1, 2)
        assert [(b.core.edges, b.size) for b in rep.blocks] == [((), 7), (TRIANGLE, 1)]
        assert rep.blocks[0].p_connected == Fraction(3, 7)
        assert rep.blocks[1].p_connected == 1
        assert rep.blocks_match_forest

    def test_triangle_plus_isolated(self):
        rep = decompose(bridge_addable_closure([LabelledGraph(4, TRIANGLE)]))
        (b,) = rep.blocks
        assert b.core_weights.w == (3, 1)
        assert b.p_connected == b.p_forest == Fraction(3, 4)
        assert b.forest_partition_function == 4 == b.size
        assert not rep.flags["monotone"]

    def test_rejects_non_alterable(self):
        with pytest.raises(NotBridgeAlterable):
            decompose(GraphClass.from_graphs([LabelledGraph(3, [(1, 2), (2, 3)])]))

    def test_random_alterable_classes(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            n = int(rng.integers(2, 6))
            c = random_closure_class(n, rng, alterable=True)
            rep = decompose(c)
            assert rep.partition_ok and rep.blocks_match_forest
            for b in rep.blocks:
                assert b.above_exp_bound
                # independent: connected fraction of the block vs the forest law of its core weights
                d = mass_distribution(b.core_weights)
                assert b.p_connected == Fraction(d.M[0], d.K)


class TestConjecture:
    def test_all_graphs_three(self):
        r = conjecture_check(GraphClass.all_graphs(3))
        assert (r.p_class, r.p_forest, r.holds) == (Fraction(1, 2), Fraction(3, 7), True)

    def test_forests_equality(self):
        r = conjecture_check(GraphClass.forests(3))
        assert r.p_class == r.p_forest == Fraction(3, 7) and r.holds

    def test_triangle_free_four(self):
        r = conjecture_check(GraphClass.triangle_free(4))
        assert r.p_class == Fraction(19, 41)
        assert r.holds

    def test_baseline(self):
        assert [forest_baseline(n) for n in (1, 2, 3, 4)] == [1, Fraction(1, 2), Fraction(3, 7), Fraction(16, 38)]

    def test_errors(self):
        with pytest.raises(NotBridgeAddable):
            conjecture_check(GraphClass.from_graphs([LabelledGraph(3)]))
        with pytest.raises(ValueError):
            conjecture_check(GraphClass.from_masks(3, []))


class TestScan:
    def test_reproducible(self):
        a = [r.to_json() for r in scan(4, 15, seed=3)]
        b = [r.to_json() for r in scan(4, 15, seed=3)]
        assert a == b

    def test_records(self):
        for r in scan(3, 20, mode="alterable", seed=1):
            js = r.to_json()
            assert js["bridge_alterable"] and js["bridge_addable"]
            assert js["holds"] and "members" not in js
            assert js["p_forest"] == "3/7"

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            next(scan(3, 1, mode="monotone"))

    def test_weight_vector_roundtrip_for_blocks(self):
        rep = decompose(GraphClass.all_graphs(4))
        assert sum(b.size for b in rep.blocks) == 64
        assert all(isinstance(b.core_weights, WeightVector) for b in rep.blocks)
