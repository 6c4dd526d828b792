"""Draw weighted random trees through Prüfer codes and test them against the exact law.

A code whose entries are i.i.d. with P(i) = w_i / W decodes to a tree T with
probability mass(T) / K'. With a million draws the chi-square statistic
over all trees should look like an ordinary draw from its null law.
"""

import sys

from forestlab import WeightVector
from forestlab.prufer import decode, PrueferCode, exact_code_law, sample_summary

if __name__ == "__main__":
    samples = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    for raw in [(1, 1, 1, 1), (2, 1, 1), (3, 1, 2, 1, 1)]:
        w = WeightVector(raw)
        s = sample_summary(w, samples, seed=7)
        print(f"w = ({w}): {len(s.tree_freq)} trees seen, chi2 = {s.chi2:.1f} on {s.dof} dof,"
              f" p = {s.p_value:.3f}, worst cell {s.max_sigma:.2f} sigma")

    # the three most likely trees for (2,1,1,3), with their exact probabilities
    w = WeightVector((2, 1, 1, 3))
    law = exact_code_law(w)
    top = sorted(law.items(), key=lambda kv: -kv[1])[:3]
    for code, p in top:
        t = decode(PrueferCode(code, w.n))
        print(f"  code {code}: edges {list(t.edges)}, probability {p}")
