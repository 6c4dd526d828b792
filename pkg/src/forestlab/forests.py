"""The degree-weighted measure on labelled forests.

A forest F on {1..n} has mass prod_i w_i ** deg_F(i). Everything here is
exact: masses and partition functions are Python ints, probabilities are
``Fraction``s.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

import mpmath
from mpmath import iv
from mpmath.libmp import to_rational

from .errors import SizeLimitExceeded
from .graph import Edge, Forest, WeightVector, all_pairs, check_lengths
from .prufer import trees_on

DEFAULT_MAX_N = 9


def max_n() -> int:
    """Enumeration cap; FORESTLAB_MAX_N overrides the default of 9."""
    raw = os.environ.get("FORESTLAB_MAX_N")
    return int(raw) if raw else DEFAULT_MAX_N


def _guard(n: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    cap = max_n()
    if n > cap:
        raise SizeLimitExceeded(f"exhaustive enumeration refused for n={n} > {cap}")


def mass(f: Forest, w: WeightVector) -> int:
    check_lengths(f, w)
    out = 1
    for wi, d in zip(w.w, f.degrees):
        if d:
            out *= wi**d
    return out


# -- enumeration ------------------------------------------------------------


def set_partitions(items: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    """Set partitions of ``items``; each block sorted, blocks ordered by first element."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest) + 1):
        for others in combinations(rest, k):
            taken = set(others)
            remaining = [x for x in rest if x not in taken]
            for tail in set_partitions(remaining):
                yield [(first, *others), *tail]


def enumerate_forests(n: int) -> Iterator[Forest]:
    """Every forest on {1..n} exactly once.

    Each forest is a set partition of the vertices (its components) together
    with a tree on every block; trees come from decoding all Prüfer codes.
    """
    _guard(n)
    cache: dict[tuple[int, ...], list[tuple[Edge, ...]]] = {}

    def block_trees(block):
        if len(block) > 6:
            return trees_on(block)
        got = cache.get(block)
        if got is None:
            got = cache[block] = trees_on(block)
        return got

    for partition in set_partitions(tuple(range(1, n + 1))):
        choices = [block_trees(b) for b in partition]
        for combo in product(*choices):
            edges = tuple(sorted(e for tree in combo for e in tree))
            yield Forest._trusted(n, edges)


def forest_edge_sets_bruteforce(n: int) -> Iterator[tuple[Edge, ...]]:
    """Acyclic subsets of the edges of K_n, by include/exclude search over edges.

    A branch is cut as soon as the chosen edges contain a cycle, since every
    superset of a cyclic set is cyclic. Independent of the Prüfer route.
    """
    pairs = all_pairs(n)
    label = list(range(n + 1))
    chosen: list[Edge] = []

    def rec(i: int):
        if i == len(pairs):
            yield tuple(chosen)
            return
        yield from rec(i + 1)
        u, v = pairs[i]
        a, b = label[u], label[v]
        if a != b:
            moved = [x for x in range(1, n + 1) if label[x] == b]
            for x in moved:
                label[x] = a
            chosen.append((u, v))
            yield from rec(i + 1)
            chosen.pop()
            for x in moved:
                label[x] = b

    yield from rec(0)


@lru_cache(maxsize=8)
def forest_list(n: int) -> tuple[Forest, ...]:
    """Cached tuple of all forests on {1..n}; meant for n <= 7."""
    return tuple(enumerate_forests(n))


# -- the measure --------------------------------------------------------------


@dataclass(frozen=True)
class MassDistribution:
    """Partition function ``K`` and per-component-count masses.

    ``M[i - 1]`` is the total mass of forests with exactly ``i`` components.
    """

    weights: WeightVector
    K: int
    M: tuple[int, ...]

    def mass_of(self, i: int) -> int:
        return self.M[i - 1] if 1 <= i <= len(self.M) else 0

    def probability(self, i: int) -> Fraction:
        return Fraction(self.mass_of(i), self.K)

    @property
    def p_connected(self) -> Fraction:
        return Fraction(self.M[0], self.K)

    def to_json(self) -> dict:
        return {
            "n": self.weights.n,
            "W": self.weights.W,
            "K": str(self.K),
            "M": [str(m) for m in self.M],
            "p_connected": f"{self.M[0]}/{self.K}",
        }


def _block_tree_mass(args) -> tuple[tuple[int, ...], int]:
    block, weights = args
    total = 0
    for tree in trees_on(block):
        deg: dict[int, int] = {}
        for u, v in tree:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        m = 1
        for v, d in deg.items():
            m *= weights[v - 1] ** d
        total += m
    return block, total


def mass_distribution(w: WeightVector, workers: int = 1) -> MassDistribution:
    """Exact K and M_1..M_n.

    Mass is multiplicative over components, so the sum over all forests is
    taken as a sum over set partitions of products of per-block tree masses;
    each per-block total is itself a sum over every enumerated tree on the
    block.
    """
    n = w.n
    _guard(n)
    blocks = [
        (b, w.w)
        for size in range(1, n + 1)
        for b in combinations(range(1, n + 1), size)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            tree_mass = dict(pool.map(_block_tree_mass, blocks, chunksize=16))
    else:
        tree_mass = dict(map(_block_tree_mass, blocks))
    M = [0] * n
    for partition in set_partitions(tuple(range(1, n + 1))):
        m = 1
        for b in partition:
            m *= tree_mass[b]
        M[len(partition) - 1] += m
    return MassDistribution(w, sum(M), tuple(M))


def mass_distribution_naive(w: WeightVector) -> MassDistribution:
    """Same as :func:`mass_distribution`, summing mass forest by forest."""
    n = w.n
    M = [0] * n
    for f in enumerate_forests(n):
        M[f.kappa - 1] += mass(f, w)
    return MassDistribution(w, sum(M), tuple(M))


def tree_partition_closed_form(w: WeightVector) -> int:
    """K' = (prod_j w_j) * W ** (n - 2), the total mass of all trees."""
    if w.n < 2:
        raise ValueError("closed form needs n >= 2")
    return w.product() * w.W ** (w.n - 2)


# -- the e^{-n/W} bound -------------------------------------------------------


def exp_enclosure(x: Fraction, prec: int = 128) -> tuple[Fraction, Fraction]:
    """Rationals lo <= exp(x) <= hi from interval arithmetic at ``prec`` bits."""
    old = iv.prec
    iv.prec = prec
    try:
        box = iv.exp(iv.mpf(x.numerator) / x.denominator)
        lo, hi = box._mpi_
    finally:
        iv.prec = old
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


def exceeds_exp(p: Fraction, x: Fraction) -> bool:
    """Decide ``p > exp(x)`` exactly, refining precision until the enclosure separates."""
    prec = 64
    while prec <= 1 << 16:
        lo, hi = exp_enclosure(x, prec)
        if p > hi:
            return True
        if p <= lo:
            return False
        prec *= 4
    # exp of a nonzero rational is irrational, so this is unreachable in practice
    raise ArithmeticError("could not separate p from exp(x)")


@dataclass(frozen=True)
class LowerBoundCheck:
    weights: WeightVector
    p_connected: Fraction
    exponent: Fraction  # the bound is exp(exponent) = exp(-n/W)
    holds: bool

    @property
    def bound(self) -> mpmath.mpf:
        with mpmath.workprec(128):
            return mpmath.exp(mpmath.mpf(self.exponent.numerator) / self.exponent.denominator)


def connectivity_lower_bound_check(w: WeightVector, dist: MassDistribution | None = None) -> LowerBoundCheck:
    """Compare P(F connected) with exp(-n/W) exactly."""
    if dist is None:
        dist = mass_distribution(w)
    x = Fraction(-w.n, w.W)
    p = dist.p_connected
    return LowerBoundCheck(w, p, x, exceeds_exp(p, x))
