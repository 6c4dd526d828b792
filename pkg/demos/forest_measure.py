"""Exact component-count law of a degree-weighted random forest.

Each forest F on {1..n} gets mass prod_i w_i^deg(i). We enumerate all of
them, split the total by number of components, and compare the tree part
against the weighted Cayley formula. The last column checks the
non-asymptotic bound P(connected) > exp(-n/W) with interval arithmetic.
"""

import math

from forestlab import WeightVector, connectivity_lower_bound_check, mass_distribution, tree_partition_closed_form

VECTORS = [(1, 1), (2, 1), (1, 1, 1), (3, 3), (1, 1, 1, 1), (2, 1, 3, 1), (1,) * 6]

if __name__ == "__main__":
    print(f"{'w':>16} {'K':>8} {'M_1':>7} {'Cayley':>7} {'P(conn)':>9} {'exp(-n/W)':>10}  holds")
    for raw in VECTORS:
        w = WeightVector(raw)
        d = mass_distribution(w)
        closed = tree_partition_closed_form(w)
        chk = connectivity_lower_bound_check(w, d)
        print(
            f"{str(w):>16} {d.K:>8} {d.M[0]:>7} {closed:>7} {float(d.p_connected):>9.5f}"
            f" {math.exp(-w.n / w.W):>10.5f}  {chk.holds}"
        )

    # unit weights: the fraction of labelled forests that are trees drifts toward e^{-1/2}
    print()
    for n in range(2, 9):
        p = mass_distribution(WeightVector.unit(n)).p_connected
        print(f"n={n}: trees/forests = {p.numerator}/{p.denominator} = {float(p):.5f}")
    print(f"e^(-1/2) = {math.exp(-0.5):.5f}")
