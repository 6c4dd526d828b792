"""Prüfer codes, the weighted random-tree sampler and pendant-subtree statistics.

Trees are encoded by repeatedly deleting the smallest-labelled leaf and
recording its neighbour, so vertex ``i`` appears ``deg(i) - 1`` times in the
code. Drawing the code entries iid with ``P(Z = i) = w_i / W`` therefore
yields a tree ``T`` with probability ``mass(T) / K'``.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EmptyOrFullSet, MalformedInput, NotATree, SizeLimitExceeded, TieWeightUnsupported
from .graph import Edge, Forest, LabelledGraph, WeightVector, check_lengths

#: samples per random substream; fixed so output never depends on the thread count
CHUNK_SIZE = 1 << 16


@dataclass(frozen=True)
class PrueferCode:
    seq: tuple[int, ...]
    n: int

    def __post_init__(self):
        seq = tuple(int(x) for x in self.seq)
        if self.n < 2:
            raise MalformedInput("Prüfer codes need n >= 2")
        if len(seq) != self.n - 2:
            raise MalformedInput(f"code for n={self.n} must have length {self.n - 2}, got {len(seq)}")
        if any(not 1 <= x <= self.n for x in seq):
            raise MalformedInput(f"code entries must lie in 1..{self.n}")
        object.__setattr__(self, "seq", seq)

    def counts(self) -> list[int]:
        """``counts[i - 1]`` is the number of occurrences of ``i``."""
        out = [0] * self.n
        for x in self.seq:
            out[x - 1] += 1
        return out

    def __str__(self) -> str:
        return ",".join(map(str, self.seq))


def encode(t: LabelledGraph) -> PrueferCode:
    n = t.n
    if n < 2 or len(t.edges) != n - 1 or not t.is_connected():
        raise NotATree("encode needs a tree on at least 2 vertices")
    nbrs = [set() for _ in range(n + 1)]
    for u, v in t.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    leaves = [v for v in range(1, n + 1) if len(nbrs[v]) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        (parent,) = nbrs[leaf]
        seq.append(parent)
        nbrs[parent].discard(leaf)
        if len(nbrs[parent]) == 1:
            heapq.heappush(leaves, parent)
    return PrueferCode(tuple(seq), n)


def _decode_edges(seq: Sequence[int], n: int) -> list[Edge]:
    deg = [1] * (n + 1)
    for x in seq:
        deg[x] += 1
    leaves = [v for v in range(1, n + 1) if deg[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x) if leaf < x else (x, leaf))
        deg[x] -= 1
        if deg[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    edges.sort()
    return edges


def decode(z: PrueferCode | Sequence[int], n: int | None = None) -> Forest:
    if not isinstance(z, PrueferCode):
        z = PrueferCode(tuple(z), len(z) + 2 if n is None else n)
    return Forest._trusted(z.n, tuple(_decode_edges(z.seq, z.n)))


def all_codes(n: int) -> Iterator[tuple[int, ...]]:
    return product(range(1, n + 1), repeat=n - 2)


def enumerate_trees(n: int) -> Iterator[Forest]:
    """All n^(n-2) labelled trees, in lexicographic order of their codes."""
    if n == 1:
        yield Forest._trusted(1, ())
        return
    for seq in all_codes(n):
        yield Forest._trusted(n, tuple(_decode_edges(seq, n)))


def trees_on(block: Sequence[int]) -> list[tuple[Edge, ...]]:
    """Edge sets of all trees on the (sorted) vertex labels in ``block``."""
    m = len(block)
    if m == 1:
        return [()]
    if m == 2:
        return [((block[0], block[1]),)]
    out = []
    for seq in all_codes(m):
        out.append(tuple((block[u - 1], block[v - 1]) for u, v in _decode_edges(seq, m)))
    return out


# -- sampling ---------------------------------------------------------------


class AliasTable:
    """Walker alias table with integer thresholds.

    Column ``j`` is picked uniformly, then an integer ``u`` uniform in
    ``[0, W)``; the draw is ``j`` if ``u < threshold[j]`` else ``alias[j]``.
    All arithmetic is exact, so ``P(i) = w_i / W`` with no rounding.
    """

    def __init__(self, weights: Sequence[int]):
        n = len(weights)
        total = sum(weights)
        scaled = [n * x for x in weights]  # each column has capacity `total`
        threshold = [total] * n
        alias = list(range(n))
        small = [i for i, s in enumerate(scaled) if s < total]
        large = [i for i, s in enumerate(scaled) if s > total]
        while small and large:
            s, l = small.pop(), large.pop()
            threshold[s] = scaled[s]
            alias[s] = l
            scaled[l] -= total - scaled[s]
            if scaled[l] < total:
                small.append(l)
            elif scaled[l] > total:
                large.append(l)
        self.n = n
        self.total = total
        self.threshold = np.asarray(threshold, dtype=np.int64)
        self.alias = np.asarray(alias, dtype=np.int64)

    def probability(self, i: int) -> Fraction:
        """Exact probability of drawing index ``i`` (0-based)."""
        num = int(self.threshold[i]) + sum(
            self.total - int(self.threshold[j]) for j in range(self.n) if self.alias[j] == i and j != i
        )
        return Fraction(num, self.n * self.total)

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        col = rng.integers(0, self.n, size=size)
        u = rng.integers(0, self.total, size=size)
        return np.where(u < self.threshold[col], col, self.alias[col])


def sample_tree(w: WeightVector, rng: np.random.Generator | int | None = None) -> Forest:
    """One tree drawn with probability mass(T) / K'."""
    if w.n == 1:
        return Forest._trusted(1, ())
    rng = np.random.default_rng(rng)
    seq = AliasTable(w.w).draw(rng, w.n - 2) + 1
    return decode(PrueferCode(tuple(seq.tolist()), w.n))


def sample_codes(w: WeightVector, samples: int, seed: int, threads: int = 1) -> np.ndarray:
    """``samples`` iid codes as an int array of shape (samples, n - 2), 1-based.

    The stream is split into fixed chunks of CHUNK_SIZE codes; chunk ``j``
    uses the ``j``-th child of ``SeedSequence(seed)``. The result is the same
    for every ``threads`` value.
    """
    if w.n < 2:
        raise MalformedInput("sampling codes needs n >= 2")
    table = AliasTable(w.w)
    width = w.n - 2
    n_chunks = -(-samples // CHUNK_SIZE)
    children = np.random.SeedSequence(seed).spawn(n_chunks)

    def run(j):
        size = min(CHUNK_SIZE, samples - j * CHUNK_SIZE)
        rng = np.random.Generator(np.random.PCG64(children[j]))
        return table.draw(rng, (size, width)) + 1

    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(n_chunks)))
    else:
        parts = [run(j) for j in range(n_chunks)]
    if not parts:
        return np.zeros((0, width), dtype=np.int64)
    return np.concatenate(parts, axis=0)


def code_frequencies(codes: np.ndarray) -> dict[tuple[int, ...], int]:
    """Count identical rows; keys are sorted code tuples."""
    if codes.shape[1] == 0:
        return {(): int(codes.shape[0])}
    rows, counts = np.unique(codes, axis=0, return_counts=True)
    return {tuple(int(x) for x in r): int(c) for r, c in zip(rows, counts)}


@dataclass(frozen=True)
class SampleSummary:
    seed: int
    samples: int
    tree_freq: dict[tuple[int, ...], int]
    chi2: float | None = None
    dof: int | None = None
    p_value: float | None = None
    max_sigma: float | None = None  # largest |count - N p| / sd over all trees

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "tree_freq": {",".join(map(str, k)): v for k, v in self.tree_freq.items()},
            "chi2": self.chi2,
            "dof": self.dof,
            "p_value": self.p_value,
            "max_sigma": self.max_sigma,
        }


def exact_code_law(w: WeightVector) -> dict[tuple[int, ...], Fraction]:
    """P(code) = prod (w_z / W); equals mass(decode(code)) / K' by the degree law."""
    out = {}
    denom = w.W ** (w.n - 2)
    for seq in all_codes(w.n):
        num = 1
        for x in seq:
            num *= w[x]
        out[seq] = Fraction(num, denom)
    return out


def sample_summary(
    w: WeightVector, samples: int, seed: int, threads: int = 1, law: dict | None = None
) -> SampleSummary:
    """Sample trees and compare their frequencies with an exact law.

    ``law`` maps code tuples to exact probabilities; when omitted and there
    are at most 10^5 trees, it is computed as mass(T)/K' by tree enumeration.
    """
    from scipy.stats import chi2 as chi2_dist

    freq = code_frequencies(sample_codes(w, samples, seed, threads))
    if law is None and w.n ** (w.n - 2) <= 100_000:
        law = tree_law_by_code(w)
    if law is None:
        return SampleSummary(seed, samples, freq)
    stat = 0.0
    worst = 0.0
    for code, p in law.items():
        expected = samples * float(p)
        observed = freq.get(code, 0)
        stat += (observed - expected) ** 2 / expected
        sd = (samples * float(p) * (1 - float(p))) ** 0.5
        if sd > 0:
            worst = max(worst, abs(observed - expected) / sd)
    dof = len(law) - 1
    p_value = float(chi2_dist.sf(stat, dof)) if dof > 0 else 1.0
    return SampleSummary(seed, samples, freq, stat, dof, p_value, worst)


def tree_law_by_code(w: WeightVector) -> dict[tuple[int, ...], Fraction]:
    """mass(T)/K' for every tree, keyed by the tree's code, via decoded degrees."""
    from .forests import mass

    masses = {}
    for seq in all_codes(w.n):
        masses[seq] = mass(decode(PrueferCode(seq, w.n)), w)
    total = sum(masses.values())
    return {k: Fraction(m, total) for k, m in masses.items()}


# -- pendant subtrees -------------------------------------------------------


@dataclass(frozen=True)
class PendantRecord:
    edge: Edge
    side: frozenset[int]
    weight: int


@dataclass(frozen=True)
class PendantCensus:
    tree: Forest
    records: tuple[PendantRecord, ...]
    histogram: dict[int, int] = field(default_factory=dict)

    def c(self, k: int) -> int:
        return self.histogram.get(k, 0)


def _side_of(t: LabelledGraph, edge: Edge) -> frozenset[int]:
    """Vertices reachable from edge[0] in t - edge."""
    u, v = edge
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in t.neighbours(x):
            if (x == u and y == v) or y in seen:
                continue
            seen.add(y)
            stack.append(y)
    return frozenset(seen)


def pendant_census(t: LabelledGraph, w: WeightVector) -> PendantCensus:
    """The lighter side s(t, e) of every edge, ties going to vertex 1's side."""
    check_lengths(t, w)
    if len(t.edges) != t.n - 1 or not t.is_connected():
        raise NotATree("pendant census needs a tree")
    everything = frozenset(range(1, t.n + 1))
    total = w.W
    records = []
    hist = {k: 0 for k in range(1, total // 2 + 1)}
    for e in t.edges:
        a = _side_of(t, e)
        wa = w.weight_of(a)
        if 2 * wa < total:
            side, ws = a, wa
        elif 2 * wa > total:
            side, ws = everything - a, total - wa
        else:
            side = a if 1 in a else everything - a
            ws = wa
        records.append(PendantRecord(e, side, ws))
        hist[ws] += 1
    return PendantCensus(t, tuple(records), hist)


def has_pendant(t: LabelledGraph, vertices: Iterable[int]) -> bool:
    """True if some component of t - e, for an edge e of t, has exactly this vertex set."""
    s = set(vertices)
    crossing = inside = 0
    for u, v in t.edges:
        if (u in s) != (v in s):
            crossing += 1
        elif u in s:
            inside += 1
    return crossing == 1 and inside == len(s) - 1


def _check_subset(vertices: Iterable[int], n: int) -> frozenset[int]:
    s = frozenset(vertices)
    if any(not 1 <= v <= n for v in s):
        raise MalformedInput(f"vertex set {sorted(s)} not inside 1..{n}")
    if not s or len(s) == n:
        raise EmptyOrFullSet("pendant vertex sets must be nonempty proper subsets")
    return s


def pendant_probability(vertices: Iterable[int], w: WeightVector) -> Fraction:
    """P(the random tree has a pendant subtree with exactly this vertex set)."""
    s = _check_subset(vertices, w.n)
    wi, total, size = w.weight_of(s), w.W, len(s)
    return Fraction(wi ** (size - 1) * (total - wi) ** (w.n - size - 1), total ** (w.n - 2))


def pendant_probability_enumerated(vertices: Iterable[int], w: WeightVector) -> Fraction:
    """Same probability as :func:`pendant_probability`, by summing over all trees."""
    from .forests import mass

    s = _check_subset(vertices, w.n)
    hit = total = 0
    for t in enumerate_trees(w.n):
        m = mass(t, w)
        total += m
        if has_pendant(t, s):
            hit += m
    return Fraction(hit, total)


def subsets_with_weight(w: WeightVector, k: int) -> Iterator[tuple[int, ...]]:
    """Vertex sets I with w(I) = k, found by depth-first subset-sum with pruning."""
    n = w.n
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + w.w[i]
    chosen: list[int] = []

    def rec(i: int, remaining: int):
        if remaining == 0:
            yield tuple(chosen)
            return
        if i == n or suffix[i] < remaining:
            return
        if w.w[i] <= remaining:
            chosen.append(i + 1)
            yield from rec(i + 1, remaining - w.w[i])
            chosen.pop()
        yield from rec(i + 1, remaining)

    if k > 0:
        yield from rec(0, k)


def expected_census(w: WeightVector, k: int) -> Fraction:
    """E[c(T, k)] as the sum of P(P_I) over vertex sets of weight k (k < W/2)."""
    if w.n > 20:
        raise SizeLimitExceeded("expected_census supports n <= 20")
    if 2 * k == w.W:
        raise TieWeightUnsupported("k = W/2 needs expected_census_enumerated")
    if not 1 <= k or 2 * k > w.W:
        raise ValueError(f"k must satisfy 1 <= k < W/2, got k={k}, W={w.W}")
    return sum((pendant_probability(s, w) for s in subsets_with_weight(w, k)), Fraction(0))


def expected_census_enumerated(w: WeightVector, k: int) -> Fraction:
    """E[c(T, k)] = sum over trees of P(T) c(T, k); any 1 <= k <= W/2."""
    from .forests import mass

    num = den = 0
    for t in enumerate_trees(w.n):
        m = mass(t, w)
        den += m
        num += m * pendant_census(t, w).c(k)
    return Fraction(num, den)
