"""Labelled graphs on {1..n}: components, bridges, bridge cores and contraction.

Vertices are the integers ``1..n``. Edges are stored as a sorted tuple of
pairs ``(u, v)`` with ``u < v``; adjacency is kept as one integer bitset per
vertex (bit ``v - 1`` set when ``v`` is a neighbour).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterable, Iterator, Sequence

from .errors import LengthMismatch, MalformedInput

Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components, ordered by their smallest vertex.

    ``index[v - 1]`` is the position in ``blocks`` of the component holding ``v``.
    """

    blocks: tuple[tuple[int, ...], ...]
    index: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.blocks)

    def block_of(self, v: int) -> tuple[int, ...]:
        return self.blocks[self.index[v - 1]]

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


@dataclass(frozen=True)
class LabelledGraph:
    """A simple graph on the vertex set {1..n}."""

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise MalformedInput(f"vertex count must be a positive integer, got {self.n!r}")
        seen = set()
        for e in self.edges:
            try:
                u, v = (int(x) for x in e)
            except (TypeError, ValueError):
                raise MalformedInput(f"bad edge {e!r}") from None
            if u == v:
                raise MalformedInput(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise MalformedInput(f"edge {e!r} has an endpoint outside 1..{self.n}")
            key = _norm_edge(u, v)
            if key in seen:
                raise MalformedInput(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def _trusted(cls, n: int, edges: tuple[Edge, ...]):
        # Skips validation: edges must already be normalized, sorted and valid.
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "edges", edges)
        return obj

    @classmethod
    def empty(cls, n: int):
        return cls(n, ())

    # -- structure ---------------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u - 1] |= 1 << (v - 1)
            adj[v - 1] |= 1 << (u - 1)
        return tuple(adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u - 1] += 1
            deg[v - 1] += 1
        return tuple(deg)

    def degree(self, v: int) -> int:
        return self.degrees[v - 1]

    def neighbours(self, v: int) -> list[int]:
        bits = self.adjacency[v - 1]
        out = []
        while bits:
            low = bits & -bits
            out.append(low.bit_length())
            bits ^= low
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adjacency[u - 1] >> (v - 1)) & 1)

    @cached_property
    def partition(self) -> ComponentPartition:
        n = self.n
        adj = self.adjacency
        index = [-1] * n
        blocks = []
        for start in range(n):
            if index[start] >= 0:
                continue
            reached = 1 << start
            frontier = reached
            while frontier:
                nxt = 0
                bits = frontier
                while bits:
                    low = bits & -bits
                    nxt |= adj[low.bit_length() - 1]
                    bits ^= low
                frontier = nxt & ~reached
                reached |= frontier
            block = []
            bits = reached
            while bits:
                low = bits & -bits
                v = low.bit_length()
                index[v - 1] = len(blocks)
                block.append(v)
                bits ^= low
            blocks.append(tuple(block))
        return ComponentPartition(tuple(blocks), tuple(index))

    @property
    def num_components(self) -> int:
        return len(self.partition)

    def is_connected(self) -> bool:
        return self.num_components == 1

    def is_acyclic(self) -> bool:
        return len(self.edges) == self.n - self.num_components

    # -- edits -------------------------------------------------------------

    def add_edge(self, u: int, v: int):
        if u == v or self.has_edge(u, v):
            raise MalformedInput(f"cannot add edge {(u, v)}")
        return LabelledGraph(self.n, self.edges + (_norm_edge(u, v),))

    def remove_edges(self, drop: Iterable[Edge]) -> "LabelledGraph":
        drop = {_norm_edge(*e) for e in drop}
        return LabelledGraph._trusted(self.n, tuple(e for e in self.edges if e not in drop))

    def remove_edge(self, u: int, v: int) -> "LabelledGraph":
        return self.remove_edges([(u, v)])

    # -- bitmask view (used by class-lab) ----------------------------------

    def edge_mask(self) -> int:
        """Bit index of the pair (u, v) in the lexicographic list of all pairs."""
        mask = 0
        for u, v in self.edges:
            mask |= 1 << pair_index(self.n, u, v)
        return mask

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "LabelledGraph":
        edges = tuple(p for i, p in enumerate(all_pairs(n)) if (mask >> i) & 1)
        return cls._trusted(n, edges)


def all_pairs(n: int) -> tuple[Edge, ...]:
    return tuple((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1))


def pair_index(n: int, u: int, v: int) -> int:
    """Position of (u, v), u < v, in ``all_pairs(n)``."""
    u, v = _norm_edge(u, v)
    # pairs (a, *) for a < u come first: (n-1) + (n-2) + ... + (n-u+1)
    return (u - 1) * n - (u - 1) * u // 2 + (v - u - 1)


@dataclass(frozen=True)
class WeightVector:
    """Positive integer vertex weights (w_1, ..., w_n)."""

    w: tuple[int, ...]

    def __post_init__(self):
        w = tuple(self.w)
        if not w:
            raise MalformedInput("weight vector must have at least one entry")
        for x in w:
            if isinstance(x, bool) or not isinstance(x, int) or x < 1:
                raise MalformedInput(f"weights must be positive integers, got {x!r}")
        object.__setattr__(self, "w", w)

    @classmethod
    def unit(cls, n: int) -> "WeightVector":
        return cls((1,) * n)

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        try:
            return cls(tuple(int(tok) for tok in text.split(",")))
        except ValueError:
            raise MalformedInput(f"cannot parse weight vector {text!r}") from None

    @property
    def n(self) -> int:
        return len(self.w)

    @cached_property
    def W(self) -> int:
        return sum(self.w)

    def __getitem__(self, v: int) -> int:
        """Weight of vertex ``v`` (1-based)."""
        return self.w[v - 1]

    def __len__(self) -> int:
        return len(self.w)

    def weight_of(self, vertices: Iterable[int]) -> int:
        return sum(self.w[v - 1] for v in vertices)

    def restrict(self, vertices: Sequence[int]) -> "WeightVector":
        return WeightVector(tuple(self.w[v - 1] for v in vertices))

    def product(self) -> int:
        return prod(self.w)

    def __str__(self) -> str:
        return ",".join(map(str, self.w))


@dataclass(frozen=True)
class Forest(LabelledGraph):
    """An acyclic labelled graph."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_acyclic():
            raise MalformedInput("edge set contains a cycle")

    @classmethod
    def from_graph(cls, g: LabelledGraph) -> "Forest":
        return cls(g.n, g.edges)

    @property
    def kappa(self) -> int:
        """Number of connected components."""
        return self.n - len(self.edges)

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1

    def component_weights(self, w: WeightVector) -> list[int]:
        return [w.weight_of(block) for block in self.partition]

    def add_edge(self, u: int, v: int) -> "Forest":
        idx = self.partition.index
        if idx[u - 1] == idx[v - 1]:
            raise MalformedInput(f"edge {(u, v)} would close a cycle")
        return Forest._trusted(self.n, tuple(sorted(self.edges + (_norm_edge(u, v),))))

    def remove_edges(self, drop: Iterable[Edge]) -> "Forest":
        drop = {_norm_edge(*e) for e in drop}
        return Forest._trusted(self.n, tuple(e for e in self.edges if e not in drop))


# -- components and bridges -------------------------------------------------


def components(g: LabelledGraph) -> ComponentPartition:
    return g.partition


def find_bridges(g: LabelledGraph) -> frozenset[Edge]:
    """Edges whose removal increases the number of components.

    Iterative low-link DFS; linear in the size of the graph.
    """
    n = g.n
    adj = [g.neighbours(v) for v in range(1, n + 1)]
    disc = [0] * (n + 1)
    low = [0] * (n + 1)
    clock = 0
    bridges = set()
    for root in range(1, n + 1):
        if disc[root]:
            continue
        clock += 1
        disc[root] = low[root] = clock
        # frames: (vertex, parent, iterator position)
        stack = [(root, 0, 0)]
        while stack:
            v, parent, pos = stack[-1]
            nbrs = adj[v - 1]
            if pos < len(nbrs):
                stack[-1] = (v, parent, pos + 1)
                u = nbrs[pos]
                if u == parent:
                    continue
                if disc[u]:
                    low[v] = min(low[v], disc[u])
                else:
                    clock += 1
                    disc[u] = low[u] = clock
                    stack.append((u, v, 0))
            else:
                stack.pop()
                if parent:
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        bridges.add(_norm_edge(v, parent))
    return frozenset(bridges)


def bridge_core(g: LabelledGraph) -> LabelledGraph:
    """The graph b(g) left after deleting every bridge of g."""
    bridges = find_bridges(g)
    if not bridges:
        return g
    return LabelledGraph._trusted(g.n, tuple(e for e in g.edges if e not in bridges))


def contract(g: LabelledGraph, bridges: Iterable[Edge] | None = None) -> tuple[Forest, WeightVector]:
    """Contract each component of the bridge core to a single vertex.

    Vertex ``i`` of the returned forest stands for the ``i``-th core component
    (canonical order), with weight equal to its number of vertices; each bridge
    of ``g`` becomes one forest edge. ``bridges`` may be supplied explicitly, in
    which case the core is ``g`` minus those edges and they are validated.
    """
    if bridges is None:
        bridge_set = find_bridges(g)
    else:
        bridge_set = {_norm_edge(*e) for e in bridges}
        missing = [e for e in bridge_set if not g.has_edge(*e)]
        if missing:
            raise MalformedInput(f"alleged bridges {sorted(missing)} are not edges of the graph")
    core = LabelledGraph._trusted(g.n, tuple(e for e in g.edges if e not in bridge_set))
    part = core.partition
    contracted = []
    for u, v in sorted(bridge_set):
        a, b = part.index[u - 1] + 1, part.index[v - 1] + 1
        if a == b:
            raise MalformedInput(f"edge {(u, v)} joins two vertices of the same core component")
        contracted.append((a, b))
    try:
        forest = Forest(len(part), tuple(contracted))
    except MalformedInput as exc:
        raise MalformedInput(f"alleged bridges do not contract to a forest: {exc}") from None
    return forest, WeightVector(part.sizes())


# -- text format ------------------------------------------------------------


def parse_graph(text: str) -> LabelledGraph:
    """Parse ``n <n>`` followed by one ``u v`` line per edge."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if n is None:
            if len(toks) != 2 or toks[0] != "n":
                raise MalformedInput(f"line {lineno}: expected 'n <count>'")
            try:
                n = int(toks[1])
            except ValueError:
                raise MalformedInput(f"line {lineno}: bad vertex count {toks[1]!r}") from None
            continue
        if len(toks) != 2:
            raise MalformedInput(f"line {lineno}: expected 'u v'")
        try:
            edges.append((int(toks[0]), int(toks[1])))
        except ValueError:
            raise MalformedInput(f"line {lineno}: non-integer vertex") from None
    if n is None:
        raise MalformedInput("missing 'n <count>' header")
    return LabelledGraph(n, tuple(edges))


def format_graph(g: LabelledGraph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path: str | os.PathLike) -> LabelledGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def check_lengths(f: LabelledGraph, w: WeightVector) -> None:
    if f.n != w.n:
        raise LengthMismatch(f"graph has {f.n} vertices but weight vector has {w.n} entries")
