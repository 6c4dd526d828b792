"""Bridge-addable classes of small labelled graphs, and how connected they are.

Classes are built as closures of a few random seed graphs. For each one we
record the three structural predicates and compare the fraction of
connected members with the fraction of labelled forests that are trees.
Bridge-alterable classes split into blocks with a common bridge core, and
each block behaves exactly like a weighted random forest.
"""

from forestlab import LabelledGraph
from forestlab.classes import (
    GraphClass,
    bridge_addable_closure,
    conjecture_check,
    decompose,
    forest_baseline,
    predicate_flags,
    scan,
)

if __name__ == "__main__":
    for name, c in [
        ("all graphs, n=4", GraphClass.all_graphs(4)),
        ("forests, n=4", GraphClass.forests(4)),
        ("triangle-free, n=4", GraphClass.triangle_free(4)),
        ("closure of a triangle + isolated vertex", bridge_addable_closure([LabelledGraph(4, [(1, 2), (1, 3), (2, 3)])])),
    ]:
        r = conjecture_check(c)
        print(f"{name}: {len(c)} members, flags {predicate_flags(c)}")
        print(f"  P(connected) = {r.p_class} vs forests {r.p_forest}: {r.holds}")

    blocks = decompose(GraphClass.all_graphs(4)).blocks
    print(f"\nall graphs on 4 vertices fall into {len(blocks)} blocks; the ones with more than one member:")
    for b in (b for b in blocks if b.size > 1):
        print(f"  core {list(b.core.edges)}: {b.size} graphs, weights ({b.core_weights}),"
              f" P(connected) = {b.p_connected} = forest law {b.p_forest}")

    print()
    for n in (3, 4, 5):
        recs = list(scan(n, 100, seed=1))
        worst = min(recs, key=lambda r: r.result.p_class)
        print(f"n={n}: 100 random closures, {sum(not r.result.holds for r in recs)} violations,"
              f" least connected {worst.result.p_class} ({float(worst.result.p_class):.4f})"
              f" against baseline {float(forest_baseline(n)):.4f}")
