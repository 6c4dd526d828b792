"""Brute-force oracles shared by the test modules.

These deliberately avoid the library's own traversal and enumeration code:
they work from raw edge lists with a tiny union-find.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import strategies as st

from forestlab.graph import LabelledGraph, WeightVector


def count_components(n, edges):
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    comps = n
    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            comps -= 1
    return comps


def is_forest(n, edges):
    return count_components(n, edges) == n - len(edges)


def bridges_by_recount(n, edges):
    """Edges whose removal increases the component count, by direct recount."""
    base = count_components(n, edges)
    return {e for e in edges if count_components(n, [f for f in edges if f != e]) > base}


def brute_forest_edge_sets(n):
    """Every subset of the edges of K_n, kept when acyclic (no pruning)."""
    pairs = list(combinations(range(1, n + 1), 2))
    out = []
    for mask in range(1 << len(pairs)):
        edges = [pairs[j] for j in range(len(pairs)) if mask >> j & 1]
        if is_forest(n, edges):
            out.append(tuple(edges))
    return out


def brute_mass(n, edges, w):
    deg = [0] * (n + 1)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    out = 1
    for i in range(1, n + 1):
        out *= w[i - 1] ** deg[i]
    return out


def brute_distribution(w):
    """(K, [M_1..M_n]) by summing mass over the unpruned edge-subset list."""
    n = len(w)
    M = [0] * n
    for edges in brute_forest_edge_sets(n):
        M[n - len(edges) - 1] += brute_mass(n, edges, w)
    return sum(M), M


def brute_trees(n):
    return [e for e in brute_forest_edge_sets(n) if len(e) == n - 1]


def random_weights(rng, n, w_max):
    """Random positive weights with total <= w_max (requires w_max >= n)."""
    while True:
        w = tuple(int(x) for x in rng.integers(1, w_max - n + 2, size=n))
        if sum(w) <= w_max:
            return WeightVector(w)


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return LabelledGraph(n, tuple(chosen))


@st.composite
def weight_vectors(draw, min_n=1, max_n=6, max_w=4):
    n = draw(st.integers(min_n, max_n))
    return WeightVector(tuple(draw(st.lists(st.integers(1, max_w), min_size=n, max_size=n))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


def frac(p, q=1):
    return Fraction(p, q)


# PASS/FAIL lines from the acceptance module, repeated at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
