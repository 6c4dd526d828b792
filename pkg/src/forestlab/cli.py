"""Command-line front end: ``forestlab <subcommand> ...`` (or ``python -m forestlab``).

Every subcommand writes JSON lines to stdout (or ``--out``) and a short human
summary to stderr. Exit status is 0 when every embedded check passes, 1 when
some check fails, and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import nullcontext
from fractions import Fraction
from itertools import combinations

from . import classes, forests, identities, prufer
from .errors import ForestlabError, MalformedInput
from .graph import WeightVector, contract, read_graph


def rat(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Reporter:
    def __init__(self, stream):
        self.stream = stream
        self.failures = 0

    def emit(self, record: dict, holds: bool | None = None) -> None:
        if holds is None:
            holds = record.get("holds", True)
        if not holds:
            self.failures += 1
        self.stream.write(json.dumps(record) + "\n")


def _weights(args) -> WeightVector:
    if getattr(args, "graph", None):
        _, w = contract(read_graph(args.graph))
        return w
    if getattr(args, "w", None):
        return WeightVector.parse(args.w)
    if getattr(args, "n", None):
        return WeightVector.unit(args.n)
    raise MalformedInput("give one of --w, --n or --graph")


# -- subcommands ---------------------------------------------------------------


def cmd_enumerate(args, out: Reporter) -> None:
    w = _weights(args)
    n = w.n
    dist = forests.mass_distribution(w, workers=args.threads)
    unit = forests.mass_distribution(WeightVector.unit(n), workers=args.threads) if set(w.w) != {1} else dist
    record = dist.to_json()
    record["w"] = list(w.w)
    record["forests"] = unit.K
    record["trees"] = unit.M[0]
    holds = True
    if n >= 2:
        closed = forests.tree_partition_closed_form(w)
        record["tree_mass_closed_form"] = str(closed)
        holds &= closed == dist.M[0]
    if n <= 8 and not args.no_oracle:
        oracle = sum(1 for _ in forests.forest_edge_sets_bruteforce(n))
        record["oracle_forests"] = oracle
        holds &= oracle == unit.K
    record["holds"] = holds
    out.emit(record)
    lb = forests.connectivity_lower_bound_check(w, dist)
    with_bound = float(lb.bound)
    out.emit(
        {
            "lemma": "exp_lower_bound",
            "w": list(w.w),
            "lhs": rat(lb.p_connected),
            "rhs": repr(with_bound),
            "rhs_expr": f"exp(-{n}/{w.W})",
            "rhs_prec_bits": 53,
            "holds": lb.holds,
        }
    )
    print(f"n={n} W={w.W}: {unit.K} forests, {unit.M[0]} trees, P(connected) = {dist.p_connected}", file=sys.stderr)


def cmd_sample(args, out: Reporter) -> None:
    w = _weights(args)
    summary = prufer.sample_summary(w, args.samples, args.seed, threads=args.threads)
    record = summary.to_json()
    record["w"] = list(w.w)
    holds = True
    if summary.p_value is not None:
        holds = 0.001 <= summary.p_value <= 0.999 and summary.max_sigma <= 5
    record["holds"] = holds
    out.emit(record)
    print(f"{args.samples} samples, {len(summary.tree_freq)} distinct trees, p={summary.p_value}", file=sys.stderr)


def cmd_pendant(args, out: Reporter) -> None:
    w = _weights(args)
    n = w.n
    if n > identities.FLOW_MAX_N:
        raise MalformedInput(f"pendant enumeration supports n <= {identities.FLOW_MAX_N}")
    for size in range(1, n):
        for vs in combinations(range(1, n + 1), size):
            closed = prufer.pendant_probability(vs, w)
            enum = prufer.pendant_probability_enumerated(vs, w)
            out.emit({"lemma": "pendant", "w": list(w.w), "I": list(vs), "lhs": rat(closed), "rhs": rat(enum), "holds": closed == enum})
    for k in range(1, (w.W + 1) // 2):
        if 2 * k == w.W:
            continue
        a = prufer.expected_census(w, k)
        b = prufer.expected_census_enumerated(w, k)
        out.emit({"lemma": "census_sum", "w": list(w.w), "k": k, "lhs": rat(a), "rhs": rat(b), "holds": a == b})
    print(f"pendant checks for w={w}: {out.failures} failures", file=sys.stderr)


def cmd_verify(args, out: Reporter) -> None:
    w = _weights(args)
    n, W = w.n, w.W
    base = {"w": list(w.w)}
    dist = forests.mass_distribution(w)
    if n >= 2:
        closed = forests.tree_partition_closed_form(w)
        out.emit({"lemma": "cayley", **base, "lhs": rat(dist.M[0]), "rhs": rat(closed), "holds": dist.M[0] == closed})
    for i in range(1, n):
        led = identities.verify_mass_flow(w, i, dist)
        out.emit({"lemma": "mass_flow", **base, "i": i, "lhs": rat(led.total_flow), "rhs": rat(led.reference_mass), "holds": led.total_flow == led.reference_mass})
        out.emit({"lemma": "flow_absorption", **base, "i": i, "forests": led.forests_absorbing, "failures": len(led.absorption_failures), "holds": not led.absorption_failures})
    report = identities.verify_component_ratio_bound(w, dist)
    for i in report.ratios:
        out.emit({"lemma": "ratio_bound", **base, "i": i, "lhs": rat(report.ratios[i]), "rhs": rat(report.bounds[i]), "holds": report.ratio_holds(i)})
    out.emit({"lemma": "partition_minimum", **base, "checks": report.partition_checks, "holds": bool(report.partition_min_holds)})
    if n >= 2:
        two = identities.verify_two_component_identity(w, dist)
        out.emit({"lemma": "two_component", **base, "lhs": rat(two.lhs), "rhs": rat(two.rhs), "holds": two.identity_holds})
        for k in range(1, (W + 1) // 2):
            if 2 * k == W:
                continue
            a = prufer.expected_census(w, k)
            b = two.expected_census[k]
            out.emit({"lemma": "census_sum", **base, "k": k, "lhs": rat(a), "rhs": rat(b), "holds": a == b})
    lb = forests.connectivity_lower_bound_check(w, dist)
    out.emit({"lemma": "exp_lower_bound", **base, "lhs": rat(lb.p_connected), "rhs": repr(float(lb.bound)), "rhs_prec_bits": 53, "holds": lb.holds})
    j = n - 1 if args.j is None else args.j
    casc = identities.verify_cascade(w, Fraction(args.gamma), args.m0, j)
    out.emit(
        {
            "lemma": "cascade",
            **base,
            "gamma": rat(casc.gamma),
            "m0": args.m0,
            "j": j,
            "hypothesis_holds": casc.hypothesis_holds,
            "witness": list(casc.witness) if casc.witness else None,
            "first_break": casc.first_break,
            "holds": casc.holds,
        }
    )
    for k in range(1, min(W, args.gf_kmax) + 1):
        for x in (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(k, W)):
            gf = identities.verify_gf_bound(w, k, x)
            out.emit({"lemma": "gf_bound", **base, "k": k, "x": rat(x), "lhs": rat(gf.lhs), "rhs": rat(gf.rhs), "holds": gf.holds})
    print(f"verify w={w}: {out.failures} failed checks", file=sys.stderr)


def cmd_trend(args, out: Reporter) -> None:
    for n, r in identities.ratio_trend(args.n_max, prec=args.prec):
        rec = {"n": n, "r1": repr(float(r)), "r1_prec_bits": args.prec}
        if n <= 60:
            rec["r1_exact"] = rat(identities.unit_ratio_exact(n))
        if n <= args.enum_max:
            d = forests.mass_distribution(WeightVector.unit(n))
            enum = Fraction(d.M[1], d.M[0])
            rec["r1_enumerated"] = rat(enum)
            rec["holds"] = enum == identities.unit_ratio_exact(n)
        out.emit(rec)
    print(f"ratio trend up to n={args.n_max} (limit 1/2)", file=sys.stderr)


def cmd_constants(args, out: Reporter) -> None:
    value = identities.half_constant(args.terms)
    out.emit(
        {
            "constant": "half",
            "terms": args.terms,
            "value": repr(value),
            "prec_bits": 53,
            "target": "1/2",
            "abs_error": repr(abs(value - 0.5)),
            "holds": value <= 0.5 + 1e-12,
        }
    )
    out.emit({"constant": "exp_minus_half", "value": repr(math.exp(-0.5)), "prec_bits": 53})
    print(f"sum_(i<={args.terms}) i^(i-2)/(i! e^i) = {value!r}", file=sys.stderr)


def cmd_scan(args, out: Reporter) -> None:
    violations = 0
    for rec in classes.scan(args.n, args.count, seeds=args.seeds, mode=args.mode, seed=args.seed):
        data = rec.to_json()
        data["implications_hold"] = classes.implications_hold(rec.flags)
        data["holds"] = rec.result.holds and data["implications_hold"]
        out.emit(data)
        if not rec.result.holds:
            violations += 1
            print(f"COUNTEREXAMPLE class {rec.index}: members {rec.graph_class.masks()}", file=sys.stderr)
    print(f"scanned {args.count} classes on n={args.n}: {violations} violations", file=sys.stderr)


COMMANDS = {
    "enumerate": cmd_enumerate,
    "sample": cmd_sample,
    "pendant": cmd_pendant,
    "verify": cmd_verify,
    "trend": cmd_trend,
    "constants": cmd_constants,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write JSON lines here instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="parallelism; never changes the output")

    def add_weights(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--w", help="comma-separated positive integer weights, e.g. 2,1,3")
        g.add_argument("--n", type=int, help="unit weights on n vertices")
        g.add_argument("--graph", help="graph file; weights are its bridge-core component sizes")

    parser = argparse.ArgumentParser(prog="forestlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="exact forest masses by component count")
    add_weights(p)
    p.add_argument("--no-oracle", action="store_true", help="skip the edge-subset recount")

    p = sub.add_parser("sample", parents=[common], help="sample weighted random trees via Prüfer codes")
    add_weights(p)
    p.add_argument("--samples", type=int, default=1_000_000)

    p = sub.add_parser("pendant", parents=[common], help="pendant-subtree probabilities, closed form vs enumeration")
    add_weights(p)

    p = sub.add_parser("verify", parents=[common], help="run every exact identity and bound for one weight vector")
    add_weights(p)
    p.add_argument("--gamma", default="1", help="cascade premise ratio (rational)")
    p.add_argument("--m0", type=int, default=1)
    p.add_argument("--j", type=int, default=None, help="cascade depth (default n-1)")
    p.add_argument("--gf-kmax", type=int, default=8)

    p = sub.add_parser("trend", parents=[common], help="r_1(n) for unit weights")
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--prec", type=int, default=256)
    p.add_argument("--enum-max", type=int, default=7)

    p = sub.add_parser("constants", parents=[common], help="partial sums of sum i^(i-2)/(i! e^i)")
    p.add_argument("--terms", type=int, default=1_000_000)

    p = sub.add_parser("scan", parents=[common], help="check the forest-baseline conjecture on random classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seeds", type=int, default=2, help="seed graphs per class")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--mode", choices=["addable", "alterable"], default="addable")
    return parser


def run(args: argparse.Namespace) -> int:
    ctx = open(args.out, "w", encoding="utf-8") if args.out else nullcontext(sys.stdout)
    with ctx as stream:
        out = Reporter(stream)
        try:
            COMMANDS[args.command](args, out)
        except (ForestlabError, ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    return 1 if out.failures else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
