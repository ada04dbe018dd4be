"""Pruned search for mixed Moore Cayley graphs of diameter 2.

For each group of the target order:

1. drop it if it has an abelian index-2 subgroup and the degrees are large
   enough that such a subgroup would force commuting generators;
2. collect Aut(G)-orbit representatives of inverse-closed undirected sets
   ``S1`` of size r whose products are all distinct;
3. keep those compatible with the forced split of generators across every
   index-2 subgroup;
4. extend each ``S1`` by directed components (order-3 elements and triples
   ``{a, b, (ab)^-1}``) until z directed generators have been added, pruning
   on the product-count condition after every step.

Every hit is rebuilt as a graph and checked by :func:`graph.verify_moore`
before it is reported.
"""

from __future__ import annotations

import logging
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import graph as mg
from .feasibility import FeasibleParams, abelian_index2_excluded, moore_bound_mixed
from .groups import (Group, automorphism_array, automorphism_group, canonical_pair,
                     canonical_set, index2_subgroups, subgroup_is_abelian)

log = logging.getLogger(__name__)


class IncompleteGroupList(UserWarning):
    pass


class SearchInconsistency(RuntimeError):
    """A generating set passed every filter but the graph is not Moore."""


@dataclass(frozen=True, order=True)
class GeneratorSet:
    S1: tuple[int, ...]
    S2: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "S1", tuple(sorted(self.S1)))
        object.__setattr__(self, "S2", tuple(sorted(self.S2)))


@dataclass(frozen=True, order=True)
class DirectedComponent:
    kind: str  # "single" or "triple"
    elements: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)


@dataclass
class SearchResult:
    group: str
    group_index: int
    set: GeneratorSet
    verified: bool
    iso_class: int = 0
    transpose_of: int | None = None
    flagged: bool = False  # iso class assigned per orbit (graph beyond size cap)


@dataclass
class GroupStatus:
    group: str
    group_index: int
    status: str  # "searched", "rejected-abelian-index2", "incomplete-budget"
    undirected_candidates: int = 0
    hits: int = 0
    seconds: float = 0.0


@dataclass
class SearchOutcome:
    params: FeasibleParams
    results: list[SearchResult] = field(default_factory=list)
    groups: list[GroupStatus] = field(default_factory=list)
    catalog_complete: bool = True

    @property
    def graph_count(self) -> int:
        return len({r.iso_class for r in self.results})

    @property
    def complete(self) -> bool:
        return self.catalog_complete and all(g.status != "incomplete-budget" for g in self.groups)

    def summary_line(self) -> str:
        p = self.params
        status = "complete" if self.complete else "incomplete"
        return f"{p.n} {p.r} {p.z} {self.graph_count} {status}"


@dataclass
class SearchOptions:
    jobs: int = 1
    budget: float = 0.0  # seconds per group; 0 = unlimited
    stabilizer_dedupe: bool = False
    iso_cap: int = mg.ISO_SIZE_CAP


# --- set arithmetic ------------------------------------------------------------

def p_value(G: Group, T: Iterable[int]) -> int:
    """|{1} ∪ T ∪ TT|."""
    T = list(set(int(t) for t in T))
    rows = G.rows
    out = {0, *T}
    for a in T:
        row = rows[a]
        out.update(row[b] for b in T)
    return len(out)


def is_feasible_subset(G: Group, T1: Iterable[int], T2: Iterable[int]) -> bool:
    T1, T2 = set(T1), set(T2)
    return p_value(G, T1 | T2) == moore_bound_mixed(len(T1), len(T2))


def _partition_directed(G: Group, T2: Sequence[int]) -> bool:
    """Can T2 be split into order-3 singletons and triples {a, b, c} with abc = 1?"""
    orders = G.element_orders
    rest = sorted(t for t in T2 if orders[t] != 3)
    if any(orders[t] < 4 for t in rest):
        return False
    rows, inv = G.rows, G.inverses

    def cover(left: tuple) -> bool:
        if not left:
            return True
        a, others = left[0], left[1:]
        for b in others:
            c = int(inv[rows[a][b]])
            if c in others and c != b:
                if cover(tuple(x for x in others if x not in (b, c))):
                    return True
        return False

    return cover(tuple(rest))


def prop2_filter(G: Group, T1: Iterable[int], T2: Iterable[int]) -> str | None:
    """Return the first violated generating-set constraint ("i".."vii"), or None."""
    T1 = sorted(set(int(t) for t in T1))
    T2 = sorted(set(int(t) for t in T2))
    orders, rows, inv = G.element_orders, G.rows, G.inverses
    S = T1 + T2
    set1 = set(T1)
    if any(orders[s] in (3, 4) for s in T1):
        return "i"
    if any(orders[s] == 2 for s in T2):
        return "ii"
    if any(orders[rows[x][y]] == 2 for x in T1 for y in T1 if x != y):
        return "iii"
    for x, y in combinations(S, 2):
        if rows[x][y] == rows[y][x] and not (x in set1 and y in set1 and inv[x] == y):
            return "iv"
    Sset = set(S)
    if any(rows[x][y] in Sset for x in S for y in S):
        return "v"
    prods = [rows[x][y] for x in S for y in S]
    nonid = [p for p in prods if p != 0]
    if len(nonid) != len(set(nonid)):
        return "vi"
    if not _partition_directed(G, T2):
        return "vii"
    return None


# --- per-group precomputation ---------------------------------------------------

@dataclass
class GroupData:
    G: Group
    auts: np.ndarray
    index2: list[np.ndarray]  # membership masks
    index2_abelian: list[bool]

    @classmethod
    def build(cls, G: Group) -> "GroupData":
        subs = index2_subgroups(G)
        masks = []
        for H in subs:
            m = np.zeros(G.order, dtype=bool)
            m[list(H.elements)] = True
            masks.append(m)
        return cls(G=G, auts=automorphism_array(automorphism_group(G)),
                   index2=masks, index2_abelian=[subgroup_is_abelian(G, H) for H in subs])


def _split_ok(data: GroupData, T: Sequence[int], r: int, z: int, splits, final: bool,
              undirected_left: int = 0, directed_left: int = 0) -> bool:
    """Index-2 split constraint for a partial (or, if ``final``, complete) generating set.

    ``splits=None`` disables the constraint.
    """
    if splits is None or not data.index2:
        return True
    T = list(T)
    total = r + z
    left = undirected_left + directed_left
    for mask in data.index2:
        inside = int(mask[T].sum()) if T else 0
        outside = len(T) - inside
        ok = False
        for s in splits:
            if final:
                ok = inside == s and outside == total - s
            else:
                ok = (inside <= s and outside <= total - s
                      and s - inside <= left and (total - s) - outside <= left)
            if ok:
                break
        if not ok:
            return False
    return True


def group_rejected(data: GroupData, r: int, z: int) -> bool:
    return abelian_index2_excluded(r, z) and any(data.index2_abelian)


def index2_prefilter(G: Group, A: Iterable[int], r: int, z: int, splits,
                     data: GroupData | None = None) -> bool:
    """Can the inverse-closed set ``A`` (a full or partial S1) satisfy the index-2 split?

    Partial sets (fewer than r elements) are checked with room left for the
    remaining undirected and directed generators; a full S1 must leave
    between 0 and z directed generators for each side of every index-2
    subgroup.
    """
    data = data or GroupData.build(G)
    if group_rejected(data, r, z):
        return False
    A = sorted(set(A))
    return _split_ok(data, A, r, z, splits, final=False,
                     undirected_left=r - len(A), directed_left=z)


# --- undirected part --------------------------------------------------------------

def undirected_components(G: Group) -> list[tuple[int, ...]]:
    """Involutions and inverse pairs whose orders are allowed in S1."""
    out = []
    for g in range(1, G.order):
        o = int(G.element_orders[g])
        gi = int(G.inverses[g])
        if o == 2:
            out.append((g,))
        elif o >= 5 and g < gi:
            out.append((g, gi))
    return out


def _undirected_ok(G: Group, A: Sequence[int]) -> bool:
    if prop2_filter(G, A, ()) in ("i", "iii", "iv"):
        return False
    return p_value(G, A) == len(A) ** 2 + 1


def undirected_candidates(G: Group, r: int, z: int, splits=None,
                          data: GroupData | None = None,
                          deadline: float | None = None) -> list[tuple[int, ...]]:
    """Canonical Aut(G)-orbit representatives of admissible undirected sets of size r.

    Grown one component at a time; every level is reduced to canonical forms,
    which is complete because every admissible set minus one component is
    admissible again.
    """
    data = data or GroupData.build(G)
    if group_rejected(data, r, z):
        return []
    comps = undirected_components(G)
    frontier = {()}
    found = set()
    if r == 0:
        found.add(())
    while frontier:
        nxt = set()
        for A in sorted(frontier):
            if deadline is not None and time.time() > deadline:
                raise TimeoutError
            Aset = set(A)
            for c in comps:
                if Aset.intersection(c) or len(A) + len(c) > r:
                    continue
                B = tuple(sorted(A + c))
                if not _undirected_ok(G, B):
                    continue
                if not _split_ok(data, B, r, z, splits, final=False,
                                 undirected_left=r - len(B), directed_left=z):
                    continue
                key = canonical_set(G, B, data.auts)
                (found if len(B) == r else nxt).add(key)
        frontier = nxt
    return sorted(found)


# --- directed part ------------------------------------------------------------------

def directed_components(G: Group) -> tuple[list[int], list[DirectedComponent]]:
    orders, rows, inv = G.element_orders, G.rows, G.inverses
    singles = [g for g in range(G.order) if orders[g] == 3]
    big = [g for g in range(G.order) if orders[g] >= 4]
    triples = set()
    for a in big:
        for b in big:
            if b == a:
                continue
            c = int(inv[rows[a][b]])
            if c in (a, b) or orders[c] < 4:
                continue
            B = (a, b, c)
            if any(int(inv[x]) in B for x in B):
                continue
            if p_value(G, B) != 13:
                continue
            triples.add(tuple(sorted(B)))
    return singles, [DirectedComponent("triple", t) for t in sorted(triples)]


def compositions(z: int, n_singles: int, n_triples: int) -> list[tuple[int, int]]:
    """(singles, triples) with singles + 3 * triples = z, within availability."""
    return [(z - 3 * t, t) for t in range(z // 3 + 1)
            if z - 3 * t <= n_singles and t <= n_triples]


class _Budget:
    __slots__ = ("deadline", "ticks")

    def __init__(self, deadline):
        self.deadline = deadline
        self.ticks = 0

    def check(self):
        if self.deadline is None:
            return
        self.ticks += 1
        if self.ticks % 256 == 0 and time.time() > self.deadline:
            raise TimeoutError


def extend_directed(G: Group, S1: Sequence[int], components, z: int, splits=None,
                    data: GroupData | None = None, deadline: float | None = None,
                    r: int | None = None) -> list[tuple[int, ...]]:
    """All directed sets S2 of size z completing S1 to a Moore generating set."""
    data = data or GroupData.build(G)
    singles, triples = components
    S1 = tuple(sorted(S1))
    r = len(S1) if r is None else r
    n_target = moore_bound_mixed(r, z)
    rows, inv = G.rows, G.inverses
    budget = _Budget(deadline)
    base = set(S1)
    base_products = {0, *S1}
    for a in S1:
        base_products.update(rows[a][b] for b in S1)
    if len(base_products) != len(S1) ** 2 + 1:
        return []

    def usable(elems):
        return all(e not in base and int(inv[e]) not in base for e in elems)

    singles = [s for s in singles if usable((s,))]
    triples = [t for t in triples if usable(t.elements)]
    out = []

    def add(T, P, X):
        # extend product set P of T by the new directed elements X; None on collision
        new = list(X)
        for x in X:
            rx = rows[x]
            for t in T:
                new.append(rx[t])
                new.append(rows[t][x])
            for y in X:
                new.append(rx[y])
        fresh = set(new)
        if len(fresh) != len(new) or not fresh.isdisjoint(P):
            return None
        return P | fresh

    def step_ok(T, S2, left):
        if prop2_filter(G, S1, S2) is not None:
            return False
        return _split_ok(data, T, r, z, splits, final=False, directed_left=left)

    def rec_triples(T, P, S2, start, need):
        budget.check()
        if need == 0:
            finish(T, P, S2)
            return
        for i in range(start, len(triples)):
            X = triples[i].elements
            if any(int(inv[x]) in P and int(inv[x]) in T for x in X) or not P.isdisjoint(X):
                continue
            P2 = add(T, P, X)
            if P2 is None:
                continue
            T2, S22 = T + X, S2 + X
            if not step_ok(T2, S22, z - len(S22)):
                continue
            rec_triples(T2, P2, S22, i + 1, need - 1)

    def rec_singles(T, P, S2, start, need, n_triples):
        budget.check()
        if need == 0:
            rec_triples(T, P, S2, 0, n_triples)
            return
        for i in range(start, len(singles)):
            x = singles[i]
            if x in P or int(inv[x]) in T:
                continue
            P2 = add(T, P, (x,))
            if P2 is None:
                continue
            T2, S22 = T + (x,), S2 + (x,)
            if not step_ok(T2, S22, z - len(S22)):
                continue
            rec_singles(T2, P2, S22, i + 1, need - 1, n_triples)

    def finish(T, P, S2):
        if len(S2) != z or len(P) != n_target:
            return
        if not _split_ok(data, T, r, z, splits, final=True):
            return
        if not is_feasible_subset(G, S1, S2) or prop2_filter(G, S1, S2) is not None:
            return
        out.append(tuple(sorted(S2)))

    for n_single, n_triple in compositions(z, len(singles), len(triples)):
        rec_singles(S1, base_products, (), 0, n_single, n_triple)
    return sorted(set(out))


def accepts(G: Group, S1: Iterable[int], S2: Iterable[int], r: int, z: int,
            splits=None, data: GroupData | None = None) -> bool:
    """Would the search accept this complete generating set (ignoring orbit reduction)?"""
    data = data or GroupData.build(G)
    S1, S2 = sorted(set(S1)), sorted(set(S2))
    if len(S1) != r or len(S2) != z or group_rejected(data, r, z):
        return False
    if any(int(G.inverses[s]) not in S1 for s in S1) or any(int(G.inverses[s]) in S2 for s in S2):
        return False
    if set(S1) & set(S2) or 0 in S1 or 0 in S2:
        return False
    if not _undirected_ok(G, S1):
        return False
    if not _split_ok(data, S1 + S2, r, z, splits, final=True):
        return False
    return prop2_filter(G, S1, S2) is None and is_feasible_subset(G, S1, S2)


# --- driver ------------------------------------------------------------------------

_WORKER_STATE: dict = {}


def _init_worker(data, components, r, z, splits):
    _WORKER_STATE.update(data=data, components=components, r=r, z=z, splits=splits)


def _work_item(S1, deadline):
    st = _WORKER_STATE
    try:
        hits = extend_directed(st["data"].G, S1, st["components"], st["z"], st["splits"],
                               data=st["data"], deadline=deadline, r=st["r"])
        return S1, hits, False
    except TimeoutError:
        return S1, [], True


def _stabilizer(auts: np.ndarray, S1: Sequence[int]) -> np.ndarray:
    target = np.sort(np.asarray(S1))
    if len(S1) == 0:
        return auts
    keep = (np.sort(auts[:, list(S1)], axis=1) == target).all(axis=1)
    return auts[keep]


def search_group(G: Group, params: FeasibleParams, index: int = 0,
                 options: SearchOptions | None = None,
                 data: GroupData | None = None) -> tuple[list[GeneratorSet], GroupStatus]:
    options = options or SearchOptions()
    t0 = time.time()
    deadline = t0 + options.budget if options.budget > 0 else None
    r, z, splits = params.r, params.z, params.splits
    data = data or GroupData.build(G)
    status = GroupStatus(G.name, index, "searched")
    if group_rejected(data, r, z):
        status.status = "rejected-abelian-index2"
        status.seconds = time.time() - t0
        return [], status
    try:
        cands = undirected_candidates(G, r, z, splits, data=data, deadline=deadline)
    except TimeoutError:
        status.status = "incomplete-budget"
        status.seconds = time.time() - t0
        return [], status
    cands = [A for A in cands
             if _split_ok(data, A, r, z, splits, final=False, undirected_left=0, directed_left=z)]
    status.undirected_candidates = len(cands)
    comps = directed_components(G)
    raw = []
    timed_out = False
    if options.jobs > 1 and len(cands) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs, initializer=_init_worker,
                                 initargs=(data, comps, r, z, splits)) as pool:
            for S1, hits, to in pool.map(_work_item, cands, [deadline] * len(cands)):
                timed_out |= to
                raw += [(S1, S2) for S2 in hits]
    else:
        _init_worker(data, comps, r, z, splits)
        for S1 in cands:
            S1_, hits, to = _work_item(S1, deadline)
            timed_out |= to
            raw += [(S1, S2) for S2 in hits]
            if to:
                break
    reps = set()
    for S1, S2 in raw:
        auts = _stabilizer(data.auts, S1) if options.stabilizer_dedupe else data.auts
        reps.add(canonical_pair(G, S1, S2, auts))
    found = sorted(GeneratorSet(a, b) for a, b in reps)
    status.hits = len(found)
    if timed_out:
        status.status = "incomplete-budget"
    status.seconds = time.time() - t0
    return found, status


def search(params: FeasibleParams, groups, options: SearchOptions | None = None,
           catalog_complete: bool | None = None) -> SearchOutcome:
    """Run the pruned search over ``groups`` (a list or a ``GroupCatalog``).

    A plain list is taken to be complete unless ``catalog_complete`` says
    otherwise; a catalog carries its own flag.
    """
    options = options or SearchOptions()
    if catalog_complete is None:
        catalog_complete = getattr(groups, "complete", True)
    groups = list(groups)
    if not catalog_complete:
        warnings.warn(f"group list for order {params.n} is possibly incomplete",
                      IncompleteGroupList, stacklevel=2)
    outcome = SearchOutcome(params=params, catalog_complete=catalog_complete)
    for index, G in enumerate(groups):
        if G.order != params.n:
            raise ValueError(f"{G.name} has order {G.order}, expected {params.n}")
        sets, status = search_group(G, params, index, options)
        outcome.groups.append(status)
        log.info("%s: %s, %d undirected candidates, %d hits, %.2fs", G.name, status.status,
                 status.undirected_candidates, status.hits, status.seconds)
        for gs in sets:
            report = mg.verify_moore(mg.from_cayley(G, gs.S1, gs.S2))
            if not report.verdict:
                raise SearchInconsistency(f"{G.name} {gs} passed the filters but is not Moore")
            outcome.results.append(SearchResult(G.name, index, gs, verified=True))
    assign_iso_classes(outcome, groups, options.iso_cap)
    return outcome


def assign_iso_classes(outcome: SearchOutcome, groups: Sequence[Group], cap: int) -> None:
    reps: list[mg.MixedGraph] = []
    graphs = []
    for res in outcome.results:
        g = mg.from_cayley(groups[res.group_index], res.set.S1, res.set.S2)
        graphs.append(g)
        if g.n > cap:
            reps.append(g)
            res.iso_class = len(reps)
            res.flagged = True
            continue
        for k, h in enumerate(reps, start=1):
            if h.n <= cap and mg.isomorphic(g, h, cap):
                res.iso_class = k
                break
        else:
            reps.append(g)
            res.iso_class = len(reps)
    for res, g in zip(outcome.results, graphs):
        if res.flagged:
            continue
        t = mg.transpose(g)
        for k, h in enumerate(reps, start=1):
            if h.n <= cap and mg.isomorphic(t, h, cap):
                if k != res.iso_class:
                    res.transpose_of = k
                break


# --- result files ----------------------------------------------------------------------

def _fmt_set(s) -> str:
    return ",".join(str(x) for x in s) if s else "-"


def format_results(outcome: SearchOutcome, style: str = "plain") -> str:
    p = outcome.params
    status = "complete" if outcome.complete else "incomplete"
    if style == "records":
        recs = []
        for res in outcome.results:
            recs.append("\n".join([
                f"group={res.group}",
                f"group_index={res.group_index}",
                f"s1={_fmt_set(res.set.S1)}",
                f"s2={_fmt_set(res.set.S2)}",
                f"iso_class={res.iso_class}",
                f"transpose_of={'' if res.transpose_of is None else res.transpose_of}",
                f"verified={'true' if res.verified else 'false'}",
            ]))
        recs.append("\n".join([
            "summary=1", f"n={p.n}", f"r={p.r}", f"z={p.z}",
            f"graphs={outcome.graph_count}", f"status={status}",
        ]))
        return "\n\n".join(recs) + "\n"
    lines = ["# group s1 s2 iso_class"]
    for res in outcome.results:
        lines.append(f"{res.group} {_fmt_set(res.set.S1)} {_fmt_set(res.set.S2)} {res.iso_class}")
    lines.append("# n r z graphs status")
    lines.append(outcome.summary_line())
    return "\n".join(lines) + "\n"
