"""Run the Cayley search over every feasible order up to a bound and print a table.

Rows whose group list is incomplete (or whose search hit the time budget) are
marked, so the printed count is a lower bound there. Published counts are
shown alongside for comparison.

    python3 scripts/run_search.py --max-order 60 --budget 120
    python3 scripts/run_search.py --max-order 40 --groups tests/data/groups40
"""

import argparse
import logging
import time
import warnings

from mixedmoore import catalog
from mixedmoore.feasibility import enumerate_feasible
from mixedmoore.search import IncompleteGroupList, SearchOptions, search

# graph counts from the published search tables (None: search not finished there)
PUBLISHED = {
    6: 1, 12: 1, 18: 1, 20: 1, 30: 0, 40: 0, 42: 1, 54: 0, 56: 1, 72: 1, 84: 0, 88: 0,
    90: 0, 108: 2, 110: 1, 132: 0, 150: 0, 154: 0, 156: 1, 180: 0, 182: 0, 204: 0,
    210: 0, 238: 0, 240: 1, 270: 0, 272: 1, 294: 0, 300: 0, 306: 0, 340: 0, 342: 1,
    368: 0, 374: 0, 378: 0, 380: 0, 420: 0, 460: 0, 462: 0, 486: None,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=30)
    ap.add_argument("--min-order", type=int, default=1)
    ap.add_argument("--groups", help="directory of ingested group files")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--budget", type=float, default=0.0, help="seconds per group")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    warnings.simplefilter("ignore", IncompleteGroupList)

    opts = SearchOptions(jobs=args.jobs, budget=args.budget)
    print(f"{'n':>4} {'r':>3} {'z':>3} {'groups':>6} {'graphs':>6} {'status':>10} "
          f"{'published':>9} {'secs':>7}")
    for p in enumerate_feasible(args.max_order):
        if p.n < args.min_order:
            continue
        cat = catalog.catalog_for_order(p.n, args.groups)
        if not len(cat):
            print(f"{p.n:>4} {p.r:>3} {p.z:>3} {0:>6} {'-':>6} {'no-groups':>10}")
            continue
        t0 = time.time()
        out = search(p, cat.groups, opts, catalog_complete=cat.complete)
        pub = PUBLISHED.get(p.n, "-")
        status = "complete" if out.complete else "incomplete"
        print(f"{p.n:>4} {p.r:>3} {p.z:>3} {len(cat):>6} {out.graph_count:>6} {status:>10} "
              f"{'?' if pub is None else pub:>9} {time.time() - t0:>7.1f}", flush=True)


if __name__ == "__main__":
    main()
