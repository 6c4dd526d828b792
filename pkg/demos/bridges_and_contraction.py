"""Find the bridges of a graph, strip them, and read off the weighted forest left behind.

Two triangles joined by one edge contract to a single edge between two
vertices of weight 3. A lone triangle next to a path keeps the path's
shape, with the triangle squashed into one heavy vertex.
"""

from forestlab import LabelledGraph, bridge_core, contract, find_bridges, parse_graph

TWO_TRIANGLES = """
# two triangles and the bridge 3-4 between them
n 6
1 2
1 3
2 3
4 5
4 6
5 6
3 4
"""


def show(name, g):
    f, w = contract(g)
    print(f"{name}: {g.n} vertices, {len(g.edges)} edges")
    print(f"  bridges      {sorted(find_bridges(g))}")
    print(f"  bridge core  {list(bridge_core(g).edges)}")
    print(f"  contracted   {f.n} vertices, edges {list(f.edges)}, weights ({w})")
    print()


if __name__ == "__main__":
    show("two triangles", parse_graph(TWO_TRIANGLES))
    show("triangle with a tail", LabelledGraph(6, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6)]))
    # a tree is all bridges; nothing collapses and every weight is 1
    show("star", LabelledGraph(5, [(1, 2), (1, 3), (1, 4), (1, 5)]))
