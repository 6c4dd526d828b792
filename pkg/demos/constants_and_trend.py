"""The constant 1/2 and the unit-weight ratio r_1(n) = M_2 / M_1 as n grows.

The series sum_i i^(i-2) / (i! e^i) creeps up to 1/2 with a tail of order
N^(-3/2). The ratio r_1(n) starts at 1 for n = 2, 3 and falls toward 1/2;
small n are exact rationals from enumeration, large n come from a 256-bit
evaluation of the pendant sum.
"""

from forestlab import WeightVector, mass_distribution
from forestlab.identities import envelope_max, half_constant, ratio_trend, unit_ratio_exact

if __name__ == "__main__":
    for terms in (1, 2, 10, 100, 10_000, 1_000_000):
        v = half_constant(terms)
        print(f"N={terms:>9}: {v:.12f}  (1/2 - sum = {0.5 - v:.3e})")

    print()
    for n in range(2, 8):
        d = mass_distribution(WeightVector.unit(n))
        print(f"n={n}: r_1 = {unit_ratio_exact(n)} (enumerated {d.mass_of(2)}/{d.mass_of(1)})")
    for n, r in ratio_trend(1000, ns=[10, 50, 100, 250, 500, 1000]):
        print(f"n={n:>4}: r_1 = {float(r):.6f}")

    print()
    for i in (1, 2, 5):
        print(f"max_x x^{i} e^(-x) = {float(envelope_max(i, 1)):.6f}")
