"""Pendant subtrees, the flow argument, and the ratio of two components to one.

For one weight vector this walks through every exact identity the library
checks: the closed-form pendant probabilities, the mass flow between
adjacent component counts, the bound on successive ratios, and the
expression of M_2 / M_1 as a weighted sum of expected pendant counts.
"""

from itertools import combinations

from forestlab import WeightVector
from forestlab.identities import (
    verify_cascade,
    verify_component_ratio_bound,
    verify_mass_flow,
    verify_two_component_identity,
)
from forestlab.prufer import pendant_probability, pendant_probability_enumerated

if __name__ == "__main__":
    w = WeightVector((2, 1, 1, 3))
    print(f"w = ({w}), W = {w.W}")

    print("\npendant probabilities, closed form against enumeration")
    for size in (1, 2):
        for vs in combinations(range(1, w.n + 1), size):
            a, b = pendant_probability(vs, w), pendant_probability_enumerated(vs, w)
            print(f"  I = {set(vs)}: {a} {'==' if a == b else '!='} {b}")

    print("\nmass flow from i to i+1 components")
    for i in range(1, w.n):
        led = verify_mass_flow(w, i)
        print(f"  i={i}: total flow {led.total_flow}, M_{i + 1} = {led.reference_mass},"
              f" {led.forests_absorbing} forests absorb exactly their mass: {not led.absorption_failures}")

    r = verify_component_ratio_bound(w)
    print("\nsuccessive ratios P_{i+1}/P_i against (n/W)/i")
    for i in r.ratios:
        print(f"  i={i}: {r.ratios[i]} <= {r.bounds[i]}")
    print(f"  pairwise-product minimum held on {r.partition_checks} splits: {r.partition_min_holds}")

    two = verify_two_component_identity(w)
    print(f"\nP_2 = {two.lhs}; from expected pendant counts: {two.rhs}")
    for k, term in two.terms.items():
        print(f"  k={k}: E[c(T,k)] = {two.expected_census[k]}, term {term}")

    casc = verify_cascade(w, 1, 1, w.n - 1)
    print(f"\ncascade with gamma=1: premise {casc.hypothesis_holds}, steps {[(k, ok) for k, _, _, ok in casc.steps]}")
