"""Command-line entry point: ``rainbowlab <subcommand> ...``.

Exit codes: ``arrow`` returns 0 (arrowed), 1 (not arrowed) or 2
(indeterminate); every other subcommand returns 0 on success.  All
subcommands use 64 for usage errors, 65 for bad input data and 70 for
internal failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import constructions as con
from .coloring import ProperColoring, rainbow_census, read_coloring, write_coloring
from .densities import density_report, janson_bounds, janson_quantities
from .errors import RainbowLabError, SpecSyntaxError
from .graph import Graph, format_graph, load_graph, write_graph
from .simulate import (
    ExperimentRecord,
    estimate_arrow_probability,
    parse_seed,
    sweep_csv,
    threshold_sweep,
    write_jsonl,
)
from .solver import Budget, Status, decide_arrow

EX_OK = 0
EX_USAGE = 64
EX_DATAERR = 65
EX_SOFTWARE = 70

log = logging.getLogger("rainbowlab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EX_USAGE)


def _emit(payload: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    elif fmt == "csv":
        keys = list(payload)
        out.write(",".join(keys) + "\n")
        out.write(",".join(str(payload[k]) for k in keys) + "\n")
    else:
        for k, v in payload.items():
            out.write(f"{k}={v}\n")


def _rat(x: Fraction | None) -> str:
    return "undefined" if x is None else f"{x.numerator}/{x.denominator}"


def _budget(args) -> Budget:
    return Budget(nodes=args.budget_nodes, seconds=args.budget_secs)


def _config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# subcommands


def cmd_gadget(args) -> int:
    g = load_graph(args.spec)
    if args.out:
        write_graph(g, args.out)
        log.info("wrote %s (%d vertices, %d edges)", args.out, g.n, g.m)
    if args.format == "text" and not args.out:
        sys.stdout.write(format_graph(g))
    elif args.format != "text":
        _emit({"name": g.name, "n": g.n, "m": g.m}, args.format)
    return EX_OK


def cmd_density(args) -> int:
    g = load_graph(args.graph)
    rep = density_report(g, bipartition=not args.no_bipartition)
    if args.format == "text":
        sys.stdout.write("\n".join(rep.as_lines()) + "\n")
    else:
        _emit(dict(line.split("=", 1) for line in rep.as_lines()), args.format)
    return EX_OK


def cmd_arrow(args) -> int:
    g = load_graph(args.graph)
    h = load_graph(args.pattern)
    verdict = decide_arrow(g, h, _budget(args))
    if verdict.witness is not None and args.witness:
        write_coloring(verdict.witness, args.witness)
    _emit(verdict.as_dict(), args.format)
    return {Status.ARROWED: 0, Status.NOT_ARROWED: 1, Status.INDETERMINATE: 2}[verdict.status]


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    coloring = read_coloring(g, args.coloring)
    payload = {"proper": "true", "colors": coloring.num_colors}
    if args.pattern:
        rep = rainbow_census(coloring, load_graph(args.pattern), witness_cap=args.witnesses)
        payload.update(total_copies=rep.total_copies, rainbow_copies=rep.rainbow_copies,
                       non_rainbow_copies=rep.non_rainbow_copies)
    _emit(payload, args.format)
    return EX_OK


def _write_pair(g: Graph, coloring: ProperColoring, out: str | None) -> None:
    if not out:
        sys.stdout.write(format_graph(g))
        sys.stdout.write("coloring\n")
        for u, v in g.edge_list:
            sys.stdout.write(f"{u} {v} {coloring.assignment[(u, v)]}\n")
        return
    write_graph(g, out + ".graph")
    write_coloring(coloring, out + ".coloring")
    log.info("wrote %s.graph and %s.coloring", out, out)


def cmd_construct(args) -> int:
    what = args.what
    if what == "appendixB":
        if not (args.left and args.right):
            raise UsageError("appendixB needs --left and --right shapes")
        coloring = con.appendix_b_coloring(args.left, args.right)
        _write_pair(coloring.host, coloring, args.out)
        return EX_OK
    if what == "zero-statement":
        if not args.input:
            raise UsageError("zero-statement needs --in with a side-labeled graph")
        g = load_graph(args.input)
        if g.sides is None:
            raise RainbowLabError("input graph carries no side labels")
        left = [v for v in g.vertices() if g.sides[v] == 0]
        right = [v for v in g.vertices() if g.sides[v] == 1]
        seed = Graph.from_edges(g.n, [(u, v) for u in left for v in right], g.sides)
        coloring = con.zero_statement_coloring(seed, con.structure_from_graph(seed, g))
        if coloring.host != g.union(seed):
            raise RainbowLabError("input has cross edges outside the seed")
        _write_pair(coloring.host, coloring, args.out)
        return EX_OK
    if what == "k5-extract":
        if not (args.input and args.coloring):
            raise UsageError("k5-extract needs --in and --coloring")
        g = load_graph(args.input)
        coloring = read_coloring(g, args.coloring)
        copy = con.extract_rainbow_k5(g, coloring)
        _emit({"k5": ",".join(map(str, copy.vertex_map))}, args.format)
        return EX_OK
    if what == "k7-assemble":
        inst = con.build_k7_instance(args.k, args.t)
        coloring = con.random_k7_coloring(inst, np.random.default_rng(args.rng_seed))
        copy = con.assemble_rainbow_k7(inst, coloring)
        if args.out:
            _write_pair(inst.graph, coloring, args.out)
        _emit({"k7": ",".join(map(str, copy.vertex_map))}, args.format)
        return EX_OK
    raise UsageError(f"unknown construction {what!r}")


def cmd_simulate(args) -> int:
    rec = estimate_arrow_probability(parse_seed(args.seed_graph), args.p, load_graph(args.pattern),
                                     args.trials, args.rng_seed, _budget(args), workers=args.threads)
    _report_records([rec], args)
    return EX_OK


def cmd_sweep(args) -> int:
    try:
        grid = [float(x) for x in args.p_grid.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --p-grid {args.p_grid!r}") from None
    recs = threshold_sweep(parse_seed(args.seed_graph), load_graph(args.pattern), grid, args.trials,
                           args.rng_seed, _budget(args), crn=not args.independent, workers=args.threads)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(sweep_csv(recs))
    _report_records(recs, args)
    return EX_OK


def _report_records(recs: list[ExperimentRecord], args) -> None:
    config = _config(args)
    recs = [replace(r, config=config) for r in recs]
    if args.out:
        with open(args.out, "w") as fh:
            write_jsonl(recs, fh)
    log.info("config %s", json.dumps(config, sort_keys=True))
    if args.format == "json":
        write_jsonl(recs, sys.stdout)
    elif args.format == "csv":
        sys.stdout.write(sweep_csv(recs))
    else:
        for r in recs:
            sys.stdout.write(f"p={r.p} trials={r.trials} successes={r.successes} "
                             f"indeterminates={r.indeterminates} estimate={r.estimate:.6f} "
                             f"ci=[{r.ci_low:.6f},{r.ci_high:.6f}]\n")


def cmd_janson(args) -> int:
    q = janson_quantities(load_graph(args.pattern), args.n)
    payload = {"copies": q.copies, "lambda": str(q.lam), "delta_bar": str(q.delta_bar), "delta": str(q.delta)}
    if args.p is not None:
        p = Fraction(args.p)
        lam = q.lam(p)
        payload.update(lambda_at_p=_rat(lam), delta_bar_at_p=_rat(q.delta_bar(p)), delta_at_p=_rat(q.delta(p)))
        t = Fraction(args.t) if args.t is not None else lam
        b = janson_bounds(q, p, t) if lam else janson_bounds(q, p, 1)
        payload.update(lower_tail=b.lower_tail, nonexistence_1=b.nonexistence_1, nonexistence_2=b.nonexistence_2)
    _emit(payload, args.format)
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rainbowlab", description="Rainbow subgraphs of randomly perturbed graphs.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--threads", type=int, default=1, help="worker cap for simulations")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(p):
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    def budget(p):
        p.add_argument("--budget-nodes", type=int, default=10_000_000)
        p.add_argument("--budget-secs", type=float, default=None)

    p = sub.add_parser("gadget", help="build a graph from a spec and print or save it")
    p.add_argument("spec")
    p.add_argument("--out")
    fmt(p)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("density", help="exact density functionals")
    p.add_argument("graph")
    p.add_argument("--no-bipartition", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("arrow", help="decide whether every proper coloring has a rainbow copy")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--witness", help="write the witness coloring here")
    budget(p)
    fmt(p)
    p.set_defaults(func=cmd_arrow)

    p = sub.add_parser("verify-coloring", help="check properness and count rainbow copies")
    p.add_argument("--graph", required=True)
    p.add_argument("--coloring", required=True)
    p.add_argument("--pattern")
    p.add_argument("--witnesses", type=int, default=16)
    fmt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="explicit colorings and extraction procedures")
    p.add_argument("--what", required=True, choices=("appendixB", "zero-statement", "k5-extract", "k7-assemble"))
    p.add_argument("--in", dest="input")
    p.add_argument("--coloring")
    p.add_argument("--out", help="output prefix for .graph and .coloring files")
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--k", type=int, default=25)
    p.add_argument("--t", type=int, default=49)
    p.add_argument("--rng-seed", type=int, default=0)
    fmt(p)
    p.set_defaults(func=cmd_construct)

    for name, func in (("simulate", cmd_simulate), ("sweep", cmd_sweep)):
        p = sub.add_parser(name, help="Monte Carlo arrow probability" if name == "simulate" else "threshold sweep")
        p.add_argument("--seed-graph", required=True, help="half(n), dense(n,d), file(path) or a graph spec")
        p.add_argument("--pattern", required=True)
        if name == "simulate":
            p.add_argument("--p", type=float, required=True)
        else:
            p.add_argument("--p-grid", required=True, help="comma separated, ascending")
            p.add_argument("--independent", action="store_true", help="fresh randomness per grid point")
            p.add_argument("--csv", help="write the CSV summary here")
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--rng-seed", type=int, default=0)
        p.add_argument("--out", help="JSONL record file")
        budget(p)
        fmt(p)
        p.set_defaults(func=func)

    p = sub.add_parser("janson", help="exact Janson quantities in K_n")
    p.add_argument("--pattern", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", help="evaluate at this probability (fractions allowed)")
    p.add_argument("--t", help="deviation for the lower-tail bound; defaults to lambda")
    fmt(p)
    p.set_defaults(func=cmd_janson)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, SpecSyntaxError) as exc:
        print(f"rainbowlab: {exc}", file=sys.stderr)
        return EX_USAGE
    except (RainbowLabError, ValueError, OSError) as exc:
        print(f"rainbowlab: {exc}", file=sys.stderr)
        return EX_DATAERR
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"rainbowlab: internal error: {exc}", file=sys.stderr)
        return EX_SOFTWARE


def main() -> None:
    sys.exit(run())
