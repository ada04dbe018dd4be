"""Command-line front end.

Exit codes: 0 success, 1 graph is not Moore (verify), 2 usage or parse error,
3 parameters not Bosák-feasible, 4 no groups available at the order.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings

from . import catalog, feasibility, graph, search
from .groups import index2_subgroups, is_abelian, automorphism_group

ENV_GROUP_DIR = "MIXEDMOORE_GROUP_DIR"
ENV_JOBS = "MIXEDMOORE_JOBS"

EXIT_OK, EXIT_NOT_MOORE, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NO_GROUPS = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_float(text):
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def cmd_feasible(args, out) -> int:
    out.write("# n r z c s\n")
    for p in feasibility.enumerate_feasible(args.max_order):
        s = ",".join(str(x) for x in sorted(p.splits)) or "-"
        out.write(f"{p.n} {p.r} {p.z} {p.c} {s}\n")
    return EXIT_OK


def _resolve_params(args) -> list[feasibility.FeasibleParams] | None:
    if args.order is not None:
        return feasibility.params_for_order(args.order) or None
    p = feasibility.feasible_params(args.r, args.z)
    return [p] if p is not None else None


def cmd_search(args, out) -> int:
    if args.order is None and (args.r is None or args.z is None):
        sys.stderr.write("search: give --order N or both --r and --z\n")
        return EXIT_USAGE
    plist = _resolve_params(args)
    if plist is None:
        what = f"order {args.order}" if args.order is not None else f"(r, z) = ({args.r}, {args.z})"
        sys.stderr.write(f"search: {what} is not Bosák-feasible\n")
        return EXIT_INFEASIBLE
    group_dir = args.groups or os.environ.get(ENV_GROUP_DIR)
    try:
        jobs = args.jobs or _positive(os.environ.get(ENV_JOBS, "1"))
    except (ValueError, argparse.ArgumentTypeError):
        sys.stderr.write(f"search: bad {ENV_JOBS} value {os.environ.get(ENV_JOBS)!r}\n")
        return EXIT_USAGE
    opts = search.SearchOptions(jobs=jobs, budget=args.budget)
    n = plist[0].n
    cat = catalog.catalog_for_order(n, group_dir)
    if not len(cat):
        sys.stderr.write(f"search: no groups available at order {n}\n")
        return EXIT_NO_GROUPS
    chunks, summaries = [], []
    for p in plist:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", search.IncompleteGroupList)
            outcome = search.search(p, cat.groups, opts, catalog_complete=cat.complete)
        if not cat.complete:
            sys.stderr.write(f"search: group list at order {n} is possibly incomplete "
                             f"({len(cat)} groups)\n")
        chunks.append(search.format_results(outcome, args.format))
        summaries.append(outcome.summary_line())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("".join(chunks))
        for line in summaries:
            out.write(line + "\n")
    else:
        out.write("".join(chunks))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        g = graph.read_graph(args.graph_file)
    except graph.GraphParseError as exc:
        sys.stderr.write(f"verify: {args.graph_file}: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"verify: {exc}\n")
        return EXIT_USAGE
    report = graph.verify_moore(g)
    for line in report.lines():
        out.write(line + "\n")
    return EXIT_OK if report.verdict else EXIT_NOT_MOORE


def cmd_kautz(args, out) -> int:
    if args.d < 2:
        sys.stderr.write("kautz: --d must be >= 2\n")
        return EXIT_USAGE
    g = graph.kautz(args.d)
    if args.out:
        graph.write_graph(g, args.out)
    else:
        out.write(graph.format_graph(g))
    return EXIT_OK


def cmd_catalog(args, out) -> int:
    group_dir = args.groups or os.environ.get(ENV_GROUP_DIR)
    cat = catalog.catalog_for_order(args.order, group_dir)
    out.write("# name abelian index2 aut status\n")
    for G in cat:
        out.write(f"{G.name} {'yes' if is_abelian(G) else 'no'} "
                  f"{len(index2_subgroups(G))} {len(automorphism_group(G))} {cat.status}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mixedmoore", description="Search for mixed Moore Cayley graphs.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("feasible", help="list Bosák-feasible (r, z) up to an order")
    p.add_argument("--max-order", type=int, required=True)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("search", help="search one order for Moore Cayley graphs")
    p.add_argument("--order", type=_positive)
    p.add_argument("--r", type=_positive)
    p.add_argument("--z", type=_positive)
    p.add_argument("--groups", help="directory of *.gtab / *.gperm group files")
    p.add_argument("--jobs", type=_positive, default=None)
    p.add_argument("--budget", type=_nonneg_float, default=0.0,
                   help="seconds per group, 0 for unlimited")
    p.add_argument("--format", choices=("plain", "records"), default="plain")
    p.add_argument("--out", help="write the result file here (summary still printed)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="check a graph file for the mixed Moore properties")
    p.add_argument("graph_file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kautz", help="write the Kautz graph Ka(d, 2)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kautz)

    p = sub.add_parser("catalog", help="list the groups available at an order")
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--groups")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except catalog.ParseError as exc:
        sys.stderr.write(f"{args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
