"""Command line entry point.

    semistream gen half_trap --n 100 -o trap.txt
    semistream gen random_bipartite --n-a 50 --n-b 60 --m 400 --seed 7 -o g.txt
    semistream gen perfect_plus_noise --n 1000 --d 3 --seed 1 -o pn.txt
    semistream run -c spec.json -o out.csv
    semistream verify -g trap.txt -a two_pass_det --lambda 3
    semistream oracle -g trap.txt

Exit status: 0 ok, 1 usage, 2 IO/parse, 3 invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .generators import gen_half_trap, gen_perfect_plus_noise, gen_random_bipartite, uniform_order
from .graph import ArrivalOrder, GraphFormatError, load_graph, save_graph
from .oracle import max_matching

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semistream", description="semi-streaming bipartite matching experiments")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate an instance file")
    fam = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    ht = fam.add_parser("half_trap")
    ht.add_argument("--n", type=int, required=True)
    rb = fam.add_parser("random_bipartite")
    rb.add_argument("--n-a", type=int, required=True)
    rb.add_argument("--n-b", type=int, required=True)
    rb.add_argument("--m", type=int, required=True)
    rb.add_argument("--seed", type=int, required=True)
    pn = fam.add_parser("perfect_plus_noise")
    pn.add_argument("--n", type=int, required=True)
    pn.add_argument("--d", type=int, required=True)
    pn.add_argument("--seed", type=int, required=True)
    for f in (ht, rb, pn):
        f.add_argument("-o", "--output", required=True)

    r = sub.add_parser("run", help="run an experiment spec and write CSV")
    r.add_argument("-c", "--config", required=True)
    r.add_argument("-o", "--output")

    v = sub.add_parser("verify", help="run one algorithm under audit")
    v.add_argument("-g", "--graph", required=True)
    src = v.add_mutually_exclusive_group()
    src.add_argument("--order-seed", type=int)
    src.add_argument("--order-file")
    v.add_argument("-a", "--algorithm", required=True, choices=sorted(harness.ALGORITHMS))
    v.add_argument("--alpha", type=float, default=0.4312)
    v.add_argument("--beta", type=float, default=0.7595)
    v.add_argument("--p", type=float, default=harness.alg.SQRT2_MINUS_1)
    v.add_argument("--lambda", dest="lam", type=int, default=3)
    v.add_argument("--sample-seed", type=int, default=0)

    o = sub.add_parser("oracle", help="print the maximum matching size")
    o.add_argument("-g", "--graph", required=True)
    return p


def read_order_file(path, m: int) -> ArrivalOrder:
    """Whitespace-separated edge indices, one permutation of ``0..m-1``."""
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    try:
        perm = [int(t) for t in tokens]
    except ValueError:
        raise GraphFormatError(f"{path}: order file must contain integers") from None
    if len(perm) != m:
        raise GraphFormatError(f"{path}: {len(perm)} indices for {m} edges")
    try:
        return ArrivalOrder(tuple(perm))
    except ValueError as exc:
        raise GraphFormatError(f"{path}: {exc}") from None


def _cmd_gen(args) -> int:
    if args.family == "half_trap":
        g, order = gen_half_trap(args.n)
    elif args.family == "random_bipartite":
        g = gen_random_bipartite(args.n_a, args.n_b, args.m, args.seed)
        order = None
    else:
        g = gen_perfect_plus_noise(args.n, args.d, args.seed)
        order = None
    save_graph(args.output, g, order)
    return EXIT_OK


def _cmd_run(args) -> int:
    spec = harness.load_spec(args.config)
    out = args.output or spec.output
    if out is None:
        raise UsageError("run: no output path (-o or 'output' in the spec)")
    records, agg = harness.run(spec)
    harness.write_text(out, harness.to_csv(records, agg))
    print(
        f"{spec.algorithm} on {agg.graph}: {agg.trials} trials, mean ratio {agg.mean_ratio:.6f} "
        f"(sd {agg.sd_ratio:.6f}, min {agg.min_ratio:.6f}, max {agg.max_ratio:.6f})"
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    g, order = load_graph(args.graph)
    if args.order_seed is not None:
        order = uniform_order(g.m, args.order_seed)
    elif args.order_file is not None:
        order = read_order_file(args.order_file, g.m)
    params = {"alpha": args.alpha, "beta": args.beta, "p": args.p, "lambda": args.lam,
              "sample_seed": args.sample_seed}
    report, checks = harness.verify(g, order, args.algorithm, params)
    if report is not None:
        print(f"passes_used={report.passes_used} peak_retained_edges={report.peak_retained_edges} "
              f"per_edge_work_bound_ok={report.per_edge_work_bound_ok}")
    for c in checks:
        print(c.line())
    return EXIT_OK if all(c.ok for c in checks) else EXIT_INVARIANT


def _cmd_oracle(args) -> int:
    g, _ = load_graph(args.graph)
    print(len(max_matching(g)))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    handler = {"gen": _cmd_gen, "run": _cmd_run, "verify": _cmd_verify, "oracle": _cmd_oracle}[args.command]
    try:
        return handler(args)
    except (UsageError, harness.SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GraphFormatError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except harness.AuditViolation as exc:
        print(f"audit failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
