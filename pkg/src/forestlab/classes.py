"""Explicit classes of labelled graphs on {1..n} for small n.

A class is a boolean membership array indexed by edge bitmask (bit ``j`` is
the ``j``-th pair of ``all_pairs(n)``), so every predicate can quantify over
all members and all non-members.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import MalformedInput, NotBridgeAddable, NotBridgeAlterable, SizeLimitExceeded
from .forests import exceeds_exp, mass_distribution
from .graph import LabelledGraph, WeightVector, all_pairs, find_bridges, pair_index

MAX_CLASS_N = 6


@dataclass(frozen=True)
class _Universe:
    n: int
    pairs: tuple
    comp: tuple  # comp[mask] = component index of each vertex
    connected: np.ndarray
    bridges: tuple  # bridges[mask] = bitmask of the bridges
    core: np.ndarray  # core[mask] = mask of the bridge core


@lru_cache(maxsize=None)
def universe(n: int) -> _Universe:
    if not 1 <= n <= MAX_CLASS_N:
        raise SizeLimitExceeded(f"explicit graph classes support 1 <= n <= {MAX_CLASS_N}")
    pairs = all_pairs(n)
    size = 1 << len(pairs)
    comp, bridges = [], []
    connected = np.zeros(size, dtype=bool)
    core = np.zeros(size, dtype=np.int64)
    for mask in range(size):
        g = LabelledGraph.from_mask(n, mask)
        comp.append(g.partition.index)
        connected[mask] = g.is_connected()
        b = 0
        for u, v in find_bridges(g):
            b |= 1 << pair_index(n, u, v)
        bridges.append(b)
        core[mask] = mask & ~b
    connected.flags.writeable = False
    core.flags.writeable = False
    return _Universe(n, pairs, tuple(comp), connected, tuple(bridges), core)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GraphClass:
    """A set of labelled graphs on {1..n}, stored as a membership array."""

    def __init__(self, n: int, members: np.ndarray):
        u = universe(n)
        members = np.asarray(members, dtype=bool)
        if members.shape != (1 << len(u.pairs),):
            raise MalformedInput("membership array has the wrong length")
        members = members.copy()
        members.flags.writeable = False
        self.n = n
        self.members = members

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "GraphClass":
        arr = np.zeros(1 << (n * (n - 1) // 2), dtype=bool)
        for m in masks:
            arr[m] = True
        return cls(n, arr)

    @classmethod
    def from_graphs(cls, graphs: Iterable[LabelledGraph], n: int | None = None) -> "GraphClass":
        graphs = list(graphs)
        if n is None:
            if not graphs:
                raise MalformedInput("need n for an empty class")
            n = graphs[0].n
        if any(g.n != n for g in graphs):
            raise MalformedInput("all graphs in a class must share the vertex set")
        return cls.from_masks(n, (g.edge_mask() for g in graphs))

    @classmethod
    def from_predicate(cls, n: int, pred: Callable[[LabelledGraph], bool]) -> "GraphClass":
        size = 1 << (n * (n - 1) // 2)
        return cls.from_masks(n, (m for m in range(size) if pred(LabelledGraph.from_mask(n, m))))

    @classmethod
    def all_graphs(cls, n: int) -> "GraphClass":
        return cls(n, np.ones(1 << (n * (n - 1) // 2), dtype=bool))

    @classmethod
    def forests(cls, n: int) -> "GraphClass":
        return cls.from_predicate(n, LabelledGraph.is_acyclic)

    @classmethod
    def triangle_free(cls, n: int) -> "GraphClass":
        def ok(g):
            return not any(
                g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)
                for a in range(1, n + 1)
                for b in range(a + 1, n + 1)
                for c in range(b + 1, n + 1)
            )

        return cls.from_predicate(n, ok)

    def __len__(self) -> int:
        return int(self.members.sum())

    def __contains__(self, g) -> bool:
        mask = g.edge_mask() if isinstance(g, LabelledGraph) else int(g)
        return bool(self.members[mask])

    def __eq__(self, other) -> bool:
        return isinstance(other, GraphClass) and self.n == other.n and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((self.n, self.members.tobytes()))

    def __repr__(self) -> str:
        return f"GraphClass(n={self.n}, size={len(self)})"

    def masks(self) -> list[int]:
        return np.flatnonzero(self.members).tolist()

    def graphs(self) -> list[LabelledGraph]:
        return [LabelledGraph.from_mask(self.n, m) for m in self.masks()]

    def p_connected(self) -> Fraction:
        if not len(self):
            raise ValueError("connectivity probability of an empty class")
        u = universe(self.n)
        return Fraction(int((self.members & u.connected).sum()), len(self))


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_bridge_addable(c: GraphClass) -> Verdict:
    """Adding any edge between two components of a member gives a member."""
    u = universe(c.n)
    for mask in c.masks():
        idx = u.comp[mask]
        for j, (a, b) in enumerate(u.pairs):
            if idx[a - 1] != idx[b - 1] and not c.members[mask | (1 << j)]:
                return Verdict(False, (LabelledGraph.from_mask(c.n, mask), a, b))
    return Verdict(True)


def is_monotone(c: GraphClass) -> Verdict:
    """Closed under deleting edges (single deletions suffice by induction)."""
    u = universe(c.n)
    for mask in c.masks():
        for j in _bits(mask):
            if not c.members[mask ^ (1 << j)]:
                return Verdict(False, (LabelledGraph.from_mask(c.n, mask), u.pairs[j]))
    return Verdict(True)


def is_bridge_alterable(c: GraphClass) -> Verdict:
    """For every graph G and bridge e of G: G in c iff G - e in c."""
    u = universe(c.n)
    members = c.members
    for mask in range(len(members)):
        for j in _bits(u.bridges[mask]):
            if members[mask] != members[mask ^ (1 << j)]:
                return Verdict(False, (LabelledGraph.from_mask(c.n, mask), u.pairs[j]))
    return Verdict(True)


def predicate_flags(c: GraphClass) -> dict[str, bool]:
    return {
        "bridge_addable": is_bridge_addable(c).holds,
        "monotone": is_monotone(c).holds,
        "bridge_alterable": is_bridge_alterable(c).holds,
    }


def implications_hold(flags: dict[str, bool]) -> bool:
    """alterable => addable, and addable and monotone => alterable."""
    if flags["bridge_alterable"] and not flags["bridge_addable"]:
        return False
    if flags["bridge_addable"] and flags["monotone"] and not flags["bridge_alterable"]:
        return False
    return True


def bridge_addable_closure(
    seeds: Iterable[LabelledGraph | int], n: int | None = None, alterable: bool = False
) -> GraphClass:
    """Smallest bridge-addable class containing the seeds.

    With ``alterable=True`` the class is also closed under deleting bridges,
    which makes it bridge-alterable.
    """
    masks = []
    for s in seeds:
        if isinstance(s, LabelledGraph):
            if n is None:
                n = s.n
            elif s.n != n:
                raise MalformedInput("seeds must share the vertex set")
            masks.append(s.edge_mask())
        else:
            masks.append(int(s))
    if n is None:
        raise MalformedInput("need n when seeds are given as masks")
    u = universe(n)
    members = np.zeros(1 << len(u.pairs), dtype=bool)
    queue = deque()
    for m in masks:
        if not members[m]:
            members[m] = True
            queue.append(m)
    while queue:
        mask = queue.popleft()
        idx = u.comp[mask]
        nxt = [
            mask | (1 << j)
            for j, (a, b) in enumerate(u.pairs)
            if idx[a - 1] != idx[b - 1]
        ]
        if alterable:
            nxt.extend(mask ^ (1 << j) for j in _bits(u.bridges[mask]))
        for m in nxt:
            if not members[m]:
                members[m] = True
                queue.append(m)
    return GraphClass(n, members)


# -- decomposition by bridge core ------------------------------------------------


@dataclass(frozen=True)
class Block:
    core: LabelledGraph
    size: int
    p_connected: Fraction
    core_weights: WeightVector
    p_forest: Fraction  # P(F_w connected) for the core's component sizes
    forest_partition_function: int  # K for the same weights

    @property
    def matches_forest(self) -> bool:
        return self.p_connected == self.p_forest

    @property
    def is_full_class(self) -> bool:
        # |[G]| is the total forest mass K
        return self.size == self.forest_partition_function

    @property
    def above_exp_bound(self) -> bool:
        w = self.core_weights
        return exceeds_exp(self.p_connected, Fraction(-w.n, w.W))


@dataclass(frozen=True)
class ClassReport:
    n: int
    size: int
    flags: dict[str, bool]
    p_connected: Fraction
    blocks: tuple[Block, ...] = field(default_factory=tuple)

    @property
    def blocks_match_forest(self) -> bool:
        return all(b.matches_forest and b.is_full_class for b in self.blocks)

    @property
    def partition_ok(self) -> bool:
        return sum(b.size for b in self.blocks) == self.size


@lru_cache(maxsize=None)
def _forest_law(w: WeightVector):
    d = mass_distribution(w)
    return d.p_connected, d.K


def decompose(c: GraphClass) -> ClassReport:
    """Split a bridge-alterable class into blocks [G] sharing a bridge core."""
    verdict = is_bridge_alterable(c)
    if not verdict:
        raise NotBridgeAlterable(f"class is not bridge-alterable; witness {verdict.witness}")
    u = universe(c.n)
    groups: dict[int, list[int]] = {}
    for mask in c.masks():
        groups.setdefault(int(u.core[mask]), []).append(mask)
    blocks = []
    for core_mask in sorted(groups):
        members = groups[core_mask]
        core = LabelledGraph.from_mask(c.n, core_mask)
        w = WeightVector(core.partition.sizes())
        p_forest, K = _forest_law(w)
        conn = sum(1 for m in members if u.connected[m])
        blocks.append(Block(core, len(members), Fraction(conn, len(members)), w, p_forest, K))
    flags = {"bridge_addable": is_bridge_addable(c).holds, "monotone": is_monotone(c).holds, "bridge_alterable": True}
    return ClassReport(c.n, len(c), flags, c.p_connected(), tuple(blocks))


# -- the forest-baseline conjecture ------------------------------------------------


@dataclass(frozen=True)
class ConjectureResult:
    p_class: Fraction
    p_forest: Fraction
    holds: bool


def forest_baseline(n: int) -> Fraction:
    """|trees_n| / |forests_n|: connectivity of a uniform random forest."""
    return mass_distribution(WeightVector.unit(n)).p_connected


def conjecture_check(c: GraphClass) -> ConjectureResult:
    """Is P(uniform member connected) >= P(uniform forest connected)?"""
    if not len(c):
        raise ValueError("conjecture check needs a nonempty class")
    verdict = is_bridge_addable(c)
    if not verdict:
        raise NotBridgeAddable(f"class is not bridge-addable; witness {verdict.witness}")
    p = c.p_connected()
    base = forest_baseline(c.n)
    return ConjectureResult(p, base, p >= base)


# -- random closure-generated classes ----------------------------------------------


def random_closure_class(
    n: int, rng: np.random.Generator, seeds: int = 2, alterable: bool = False, max_density: float = 0.9
) -> GraphClass:
    """Closure of ``seeds`` random graphs, each with its own edge density in [0, max_density]."""
    m = n * (n - 1) // 2
    masks = []
    for _ in range(seeds):
        p = rng.uniform(0.0, max_density)
        bits = rng.random(m) < p
        masks.append(sum(1 << j for j in range(m) if bits[j]))
    return bridge_addable_closure(masks, n=n, alterable=alterable)


@dataclass(frozen=True)
class ScanRecord:
    index: int
    graph_class: GraphClass
    flags: dict[str, bool]
    result: ConjectureResult

    def to_json(self) -> dict:
        out = {
            "n": self.graph_class.n,
            "class_index": self.index,
            "size": len(self.graph_class),
            **self.flags,
            "p_class": f"{self.result.p_class.numerator}/{self.result.p_class.denominator}",
            "p_forest": f"{self.result.p_forest.numerator}/{self.result.p_forest.denominator}",
            "holds": self.result.holds,
        }
        if not self.result.holds:
            out["members"] = self.graph_class.masks()
        return out


def scan(n: int, count: int, seeds: int = 2, mode: str = "addable", seed: int = 0) -> Iterator[ScanRecord]:
    """Check the forest-baseline conjecture on ``count`` random closure-generated classes.

    Violations are yielded like every other record (``result.holds`` is
    False); callers decide how to report them.
    """
    if mode not in ("addable", "alterable"):
        raise ValueError("mode must be 'addable' or 'alterable'")
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    for index in range(count):
        c = random_closure_class(n, rng, seeds=seeds, alterable=mode == "alterable")
        yield ScanRecord(index, c, predicate_flags(c), conjecture_check(c))
