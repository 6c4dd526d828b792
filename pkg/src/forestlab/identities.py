"""Exact checks of the ratio identities and bounds for the weighted forest measure.

Enumeration-backed checks (``verify_*``) compare two independently computed
exact rationals. The analytic helpers at the bottom (``half_constant``,
``envelope_max``, ``ratio_trend``) work in floating point and are validated
against the exact routes at small sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import mpmath

from .errors import HypothesisFailed, SizeLimitExceeded
from .forests import MassDistribution, forest_list, mass, mass_distribution
from .graph import Forest, WeightVector
from .prufer import enumerate_trees, pendant_census, subsets_with_weight

FLOW_MAX_N = 7


def _pair_sum(weights: list[int]) -> int:
    """sum over unordered pairs of distinct parts a_j * a_k."""
    total = sum(weights)
    return (total * total - sum(x * x for x in weights)) // 2


def flow(fprime: Forest, f: Forest, w: WeightVector) -> Fraction:
    """mass(fprime) / sum_{T != T'} w(T) w(T') over components of ``f``.

    Zero unless ``fprime`` is ``f`` plus exactly one edge.
    """
    if fprime.n != f.n or len(fprime.edges) != len(f.edges) + 1:
        return Fraction(0)
    if not set(f.edges) <= set(fprime.edges):
        return Fraction(0)
    return Fraction(mass(fprime, w), _pair_sum(f.component_weights(w)))


def _enum_guard(w: WeightVector, limit: int = FLOW_MAX_N) -> None:
    if w.n > limit:
        raise SizeLimitExceeded(f"enumeration check supports n <= {limit}, got n={w.n}")


# -- mass flow ------------------------------------------------------------------


@dataclass(frozen=True)
class FlowLedger:
    weights: WeightVector
    i: int
    total_flow: Fraction
    reference_mass: int  # M_{i+1}
    absorption_failures: tuple[Forest, ...] = ()
    forests_absorbing: int = 0

    @property
    def holds(self) -> bool:
        return self.total_flow == self.reference_mass and not self.absorption_failures


def verify_mass_flow(w: WeightVector, i: int, dist: MassDistribution | None = None) -> FlowLedger:
    """Total flow from F_{n,i} into F_{n,i+1} against M_{i+1}.

    The total is summed from the F' side (deleting each edge of every forest
    with ``i`` components); separately every F with ``i + 1`` components is
    checked to absorb exactly mass(F) (adding each cross-component edge).
    """
    _enum_guard(w)
    n = w.n
    if not 1 <= i <= n - 1:
        raise ValueError(f"need 1 <= i <= n-1, got i={i}, n={n}")
    dist = dist or mass_distribution(w)
    forests = forest_list(n)
    total = Fraction(0)
    for fp in forests:
        if fp.kappa != i:
            continue
        for e in fp.edges:
            total += flow(fp, fp.remove_edges([e]), w)
    failures = []
    absorbing = 0
    for f in forests:
        if f.kappa != i + 1:
            continue
        absorbing += 1
        idx = f.partition.index
        inflow = Fraction(0)
        for u, v in combinations(range(1, n + 1), 2):
            if idx[u - 1] != idx[v - 1]:
                inflow += flow(f.add_edge(u, v), f, w)
        if inflow != mass(f, w):
            failures.append(f)
    return FlowLedger(w, i, total, dist.mass_of(i + 1), tuple(failures), absorbing)


# -- component-count ratios ----------------------------------------------------


@dataclass
class RatioReport:
    weights: WeightVector
    ratios: dict[int, Fraction] = field(default_factory=dict)  # P(k=i+1) / P(k=i)
    bounds: dict[int, Fraction] = field(default_factory=dict)  # (n/W)/i
    partition_min_holds: bool | None = None
    partition_checks: int = 0
    partition_witness: tuple | None = None
    terms: dict[int, Fraction] = field(default_factory=dict)  # E[c(T,k)] / (k(W-k))
    expected_census: dict[int, Fraction] = field(default_factory=dict)
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def ratio_holds(self, i: int) -> bool:
        return self.ratios[i] <= self.bounds[i]

    @property
    def bound_holds(self) -> bool:
        return all(self.ratio_holds(i) for i in self.ratios)

    @property
    def identity_holds(self) -> bool | None:
        if self.lhs is None:
            return None
        return self.lhs == self.rhs

    @property
    def holds(self) -> bool:
        checks = [self.bound_holds]
        if self.partition_min_holds is not None:
            checks.append(self.partition_min_holds)
        if self.lhs is not None:
            checks.append(self.identity_holds)
        return all(checks)


def partition_minimum(parts: int, total: int) -> int:
    """Lower bound i(W-i) + C(i,2) on the pairwise product sum of i+1 positive parts."""
    i = parts - 1
    return i * (total - i) + i * (i - 1) // 2


def verify_component_ratio_bound(w: WeightVector, dist: MassDistribution | None = None) -> RatioReport:
    """P(k+1 components) <= P(k components) * (n/W) / k for every k, exactly.

    Also checks the pairwise-product minimum on the component weights of
    F' - e for every enumerated forest F' and edge e.
    """
    _enum_guard(w)
    n, W = w.n, w.W
    dist = dist or mass_distribution(w)
    report = RatioReport(w)
    for i in range(1, n):
        report.ratios[i] = Fraction(dist.mass_of(i + 1), dist.mass_of(i))
        report.bounds[i] = Fraction(n, W * i)
    ok = True
    checks = 0
    seen: set[tuple[int, ...]] = set()
    for fp in forest_list(n):
        for e in fp.edges:
            parts = tuple(sorted(fp.remove_edges([e]).component_weights(w)))
            checks += 1
            if parts in seen:
                continue
            seen.add(parts)
            if _pair_sum(list(parts)) < partition_minimum(len(parts), W):
                ok = False
                report.partition_witness = (fp, e, parts)
    report.partition_min_holds = ok
    report.partition_checks = checks
    return report


def tree_census_expectations(w: WeightVector) -> dict[int, Fraction]:
    """E[c(T, k)] for k = 1..floor(W/2), by enumerating every tree."""
    half = w.W // 2
    acc = {k: 0 for k in range(1, half + 1)}
    total = 0
    for t in enumerate_trees(w.n):
        m = mass(t, w)
        total += m
        for k, c in pendant_census(t, w).histogram.items():
            if c:
                acc[k] += m * c
    return {k: Fraction(v, total) for k, v in acc.items()}


def verify_two_component_identity(w: WeightVector, dist: MassDistribution | None = None) -> RatioReport:
    """M_2/K == (M_1/K) * sum_k E[c(T,k)] / (k (W - k)), exactly."""
    _enum_guard(w)
    if w.n < 2:
        raise ValueError("two-component identity needs n >= 2")
    W = w.W
    dist = dist or mass_distribution(w)
    report = RatioReport(w)
    report.expected_census = tree_census_expectations(w)
    report.terms = {k: e / (k * (W - k)) for k, e in report.expected_census.items()}
    report.lhs = dist.probability(2)
    report.rhs = dist.probability(1) * sum(report.terms.values(), Fraction(0))
    report.ratios[1] = Fraction(dist.mass_of(2), dist.mass_of(1))
    report.bounds[1] = Fraction(w.n, W)
    return report


@dataclass(frozen=True)
class TailSplit:
    k0: int
    tail: Fraction  # sum_{k >= k0} E[c(T,k)] / (k(W-k))
    first_bound: Fraction  # (n-1) / (k0 (W - k0))
    second_bound: Fraction  # 2 / k0

    @property
    def holds(self) -> bool:
        return self.tail <= self.first_bound <= self.second_bound


def verify_tail_split(w: WeightVector, k0: int) -> TailSplit:
    """Tail of the two-component sum from k0 on, against (n-1)/(k0(W-k0)) <= 2/k0."""
    _enum_guard(w)
    W = w.W
    if not (k0 >= 1 and W >= 2 * k0):
        raise ValueError("need k0 >= 1 and W >= 2 k0")
    exp_c = tree_census_expectations(w)
    tail = sum((exp_c[k] / (k * (W - k)) for k in exp_c if k >= k0), Fraction(0))
    return TailSplit(k0, tail, Fraction(w.n - 1, k0 * (W - k0)), Fraction(2, k0))


# -- cascade over component counts ---------------------------------------------


@dataclass
class CascadeReport:
    weights: WeightVector
    gamma: Fraction
    m0: int
    j: int
    hypothesis_holds: bool = True
    witness: tuple[int, ...] | None = None  # vertex subset violating the premise
    steps: list[tuple[int, Fraction, Fraction, bool]] = field(default_factory=list)  # (k, P_{k+1}, gamma/k P_k, ok)
    skipped: list[int] = field(default_factory=list)  # k with n < k * m0

    @property
    def first_break(self) -> int | None:
        for k, _, _, ok in self.steps:
            if not ok:
                return k
        return None

    @property
    def holds(self) -> bool:
        return self.hypothesis_holds and self.first_break is None


def verify_cascade(
    w: WeightVector, gamma: Fraction | int, m0: int, j: int, strict: bool = False
) -> CascadeReport:
    """Check the premise P(2 comps) <= gamma P(1 comp) on every sub-weight-vector
    of total >= m0, then M_{k+1} <= (gamma / k) M_k for each k <= j with n >= k m0.

    A failed premise is recorded in the report (with the offending vertex
    set); with ``strict=True`` it raises :class:`HypothesisFailed` instead.
    """
    _enum_guard(w)
    gamma = Fraction(gamma)
    n = w.n
    report = CascadeReport(w, gamma, m0, j)
    for size in range(1, n + 1):
        for vs in combinations(range(1, n + 1), size):
            sub = w.restrict(vs)
            if sub.W < m0:
                continue
            d = mass_distribution(sub)
            if d.mass_of(2) > gamma * d.mass_of(1):
                report.hypothesis_holds = False
                report.witness = vs
                break
        if not report.hypothesis_holds:
            break
    if not report.hypothesis_holds and strict:
        raise HypothesisFailed(f"premise fails on vertex set {report.witness}", report.witness)
    dist = mass_distribution(w)
    for k in range(1, j + 1):
        if n < k * m0:
            report.skipped.append(k)
            continue
        lhs = dist.probability(k + 1)
        rhs = gamma / k * dist.probability(k)
        report.steps.append((k, lhs, rhs, lhs <= rhs))
    return report


# -- generating functions -------------------------------------------------------


class ConvolutionTable:
    """p_i(k) = P(Y_1 + ... + Y_i = k) where Y = w_X for X uniform on 1..n."""

    def __init__(self, w: WeightVector, i_max: int, k_max: int, _unchecked: bool = False):
        if not _unchecked and (i_max > 64 or k_max > 64):
            raise SizeLimitExceeded("convolution tables are limited to i_max, k_max <= 64")
        self.weights = w
        self.i_max = i_max
        self.k_max = k_max
        hist: dict[int, int] = {}
        for x in w.w:
            hist[x] = hist.get(x, 0) + 1
        base = {k: Fraction(c, w.n) for k, c in hist.items()}
        self._dists: list[dict[int, Fraction]] = []
        cur = {0: Fraction(1)}
        for _ in range(i_max):
            nxt: dict[int, Fraction] = {}
            for a, pa in cur.items():
                for b, pb in base.items():
                    nxt[a + b] = nxt.get(a + b, Fraction(0)) + pa * pb
            cur = nxt
            self._dists.append(cur)

    def p(self, i: int, k: int) -> Fraction:
        if i == 0:
            return Fraction(int(k == 0))
        return self._dists[i - 1].get(k, Fraction(0))

    def total(self, i: int) -> Fraction:
        return sum(self._dists[i - 1].values(), Fraction(0))

    def rows(self) -> list[list[Fraction]]:
        """``rows()[i-1][k]`` for k = 0..k_max."""
        return [[self.p(i, k) for k in range(self.k_max + 1)] for i in range(1, self.i_max + 1)]


def convolution_table(w: WeightVector, i_max: int, k_max: int) -> ConvolutionTable:
    return ConvolutionTable(w, i_max, k_max)


@dataclass(frozen=True)
class GFBound:
    k: int
    x: Fraction
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def verify_gf_bound(w: WeightVector, k: int, x: Fraction | int) -> GFBound:
    """sum_{I : w(I) = k} x^|I|  <=  sum_{i=1..k} (n x)^i / i! * p_i(k)."""
    if w.n > 20:
        raise SizeLimitExceeded("generating-function check supports n <= 20")
    if not 1 <= k <= w.W:
        raise ValueError(f"need 1 <= k <= W, got k={k}")
    x = Fraction(x)
    lhs = sum((x ** len(s) for s in subsets_with_weight(w, k)), Fraction(0))
    table = ConvolutionTable(w, k, k, _unchecked=True)
    nx = w.n * x
    rhs = sum((nx**i / math.factorial(i) * table.p(i, k) for i in range(1, k + 1)), Fraction(0))
    return GFBound(k, x, lhs, rhs)


# -- analytic constants -----------------------------------------------------------


def half_constant(terms: int) -> float:
    """Partial sum of i^(i-2) / (i! e^i) for i = 1..terms; the full series is 1/2.

    Each term is formed from its logarithm so nothing overflows; the sum uses
    ``math.fsum``. The float64 result is accurate to about 1e-15.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    return math.fsum(
        math.exp((i - 2) * math.log(i) - math.lgamma(i + 1) - i) for i in range(1, terms + 1)
    )


def envelope_max(i: int, alpha, prec: int = 256) -> mpmath.mpf:
    """max over x > 0 of x^i e^(-alpha x), attained at x = i / alpha."""
    if i < 1:
        raise ValueError("i must be >= 1")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    with mpmath.workprec(prec):
        a = mpmath.mpf(alpha.numerator) / alpha.denominator
        return (i / (a * mpmath.e)) ** i


def unit_expected_census(n: int, k: int) -> Fraction:
    """E[c(T, k)] for a uniform tree on n vertices, 1 <= k <= n/2.

    Each vertex set of size k is pendant with probability
    k^(k-1) (n-k)^(n-k-1) / n^(n-2); at k = n/2 both sides of an edge have
    size k, so each edge is hit twice and the count is halved.
    """
    num = math.comb(n, k) * k ** (k - 1) * (n - k) ** (n - k - 1)
    out = Fraction(num, n ** (n - 2))
    return out / 2 if 2 * k == n else out


def unit_ratio_exact(n: int) -> Fraction:
    """r_1 = P(2 components) / P(1 component) for unit weights, from the pendant sum."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return sum(
        (unit_expected_census(n, k) / (k * (n - k)) for k in range(1, n // 2 + 1)), Fraction(0)
    )


def unit_ratio(n: int, prec: int = 256) -> mpmath.mpf:
    """Same quantity as :func:`unit_ratio_exact`, summed from log-terms at ``prec`` bits."""
    if n < 2:
        raise ValueError("n must be >= 2")
    with mpmath.workprec(prec):
        log_n = mpmath.log(n)
        lg_n1 = mpmath.loggamma(n + 1)
        total = mpmath.mpf(0)
        for k in range(1, n // 2 + 1):
            log_term = (
                lg_n1
                - mpmath.loggamma(k + 1)
                - mpmath.loggamma(n - k + 1)
                + (k - 1) * mpmath.log(k)
                + (n - k - 1) * mpmath.log(n - k)
                - (n - 2) * log_n
                - mpmath.log(k)
                - mpmath.log(n - k)
            )
            if 2 * k == n:
                log_term -= mpmath.log(2)
            total += mpmath.exp(log_term)
        return +total


def ratio_trend(n_max: int, ns=None, prec: int = 256) -> list[tuple[int, mpmath.mpf]]:
    """(n, r_1(n)) for unit weights, n = 2..n_max (or the given ``ns``)."""
    if n_max > 1000:
        raise SizeLimitExceeded("ratio_trend supports n_max <= 1000")
    ns = range(2, n_max + 1) if ns is None else [n for n in ns if 2 <= n <= n_max]
    return [(n, unit_ratio(n, prec)) for n in ns]
