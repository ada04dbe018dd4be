"""Mixed graphs: construction, Moore verification, transpose and isomorphism.

A mixed graph holds undirected edges (unordered pairs) and directed arcs
(ordered pairs). A pair of opposite arcs is always stored as an edge.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .feasibility import moore_bound_mixed
from .groups import Group

ISO_SIZE_CAP = 200


class GraphError(ValueError):
    pass


class InvalidGeneratorSet(GraphError):
    pass


class SizeCapExceeded(GraphError):
    pass


class GraphParseError(GraphError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True, eq=False)
class MixedGraph:
    n: int
    edges: frozenset
    arcs: frozenset
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        edges = frozenset((min(u, v), max(u, v)) for u, v in self.edges)
        arcs = frozenset((u, v) for u, v in self.arcs)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "arcs", arcs)
        for u, v in edges | arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"pair ({u}, {v}) outside 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
        for u, v in arcs:
            if (v, u) in arcs:
                raise GraphError(f"arcs ({u}, {v}) and ({v}, {u}) form an edge")
            if (min(u, v), max(u, v)) in edges:
                raise GraphError(f"arc ({u}, {v}) duplicates an edge")

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (self.n, self.edges, self.arcs) == (other.n, other.edges, other.arcs)

    def __hash__(self):
        return hash((self.n, self.edges, self.arcs))

    @cached_property
    def undirected_neighbors(self) -> list[list[int]]:
        nb = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            nb[u].append(v)
            nb[v].append(u)
        return nb

    @cached_property
    def out_neighbors(self) -> list[list[int]]:
        nb = [[] for _ in range(self.n)]
        for u, v in sorted(self.arcs):
            nb[u].append(v)
        return nb

    @cached_property
    def in_neighbors(self) -> list[list[int]]:
        nb = [[] for _ in range(self.n)]
        for u, v in sorted(self.arcs):
            nb[v].append(u)
        return nb

    def edge_matrix(self) -> np.ndarray:
        E = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            E[u, v] = E[v, u] = 1
        return E

    def arc_matrix(self) -> np.ndarray:
        D = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.arcs:
            D[u, v] = 1
        return D

    def adjacency(self) -> np.ndarray:
        """0/1 matrix with an edge counted in both directions."""
        return self.edge_matrix() + self.arc_matrix()

    def relabel(self, perm: Sequence[int]) -> "MixedGraph":
        """Vertex v becomes perm[v]."""
        return MixedGraph(self.n,
                          frozenset((perm[u], perm[v]) for u, v in self.edges),
                          frozenset((perm[u], perm[v]) for u, v in self.arcs))


@dataclass(frozen=True)
class MooreReport:
    degree_ok: bool
    degree_profile: tuple | None  # (r, z_out, z_in) when uniform
    order_ok: bool
    unique_path_ok: bool
    girth_ok: bool
    triangle_ok: bool
    diameter: float
    verdict: bool

    def lines(self) -> list[str]:
        ok = lambda b: "pass" if b else "FAIL"  # noqa: E731
        prof = "non-uniform" if self.degree_profile is None else \
            "r=%d z_out=%d z_in=%d" % self.degree_profile
        diam = "inf" if math.isinf(self.diameter) else str(int(self.diameter))
        return [
            f"degrees      {ok(self.degree_ok)}  {prof}",
            f"order        {ok(self.order_ok)}",
            f"unique-path  {ok(self.unique_path_ok)}",
            f"girth        {ok(self.girth_ok)}",
            f"triangles    {ok(self.triangle_ok)}",
            f"diameter     {ok(self.diameter == 2)}  {diam}",
            f"verdict      {'MOORE' if self.verdict else 'NOT MOORE'}",
        ]


def _check_generator_set(G: Group, S1: set, S2: set) -> None:
    inv = G.inverses
    if 0 in S1 or 0 in S2:
        raise InvalidGeneratorSet("identity in generating set")
    if any(not 0 <= s < G.order for s in S1 | S2):
        raise InvalidGeneratorSet("element index out of range")
    if S1 & S2:
        raise InvalidGeneratorSet(f"S1 and S2 overlap in {sorted(S1 & S2)}")
    if any(int(inv[s]) not in S1 for s in S1):
        raise InvalidGeneratorSet("S1 is not inverse-closed")
    if any(int(inv[s]) in S2 for s in S2):
        raise InvalidGeneratorSet("S2 is not inverse-free")


def from_cayley(G: Group, S1: Iterable[int], S2: Iterable[int]) -> MixedGraph:
    S1, S2 = set(int(s) for s in S1), set(int(s) for s in S2)
    _check_generator_set(G, S1, S2)
    rows = G.rows
    edges = {(g, rows[g][s]) for g in range(G.order) for s in S1}
    arcs = {(g, rows[g][s]) for g in range(G.order) for s in S2}
    return MixedGraph(G.order, frozenset(edges), frozenset(arcs))


def _letter(a: int, d: int) -> str:
    return chr(ord("a") + a) if d < 26 else f"{a}."


def kautz(d: int) -> MixedGraph:
    """Kautz graph Ka(d, 2): words ab over d+1 letters with a != b, arcs ab -> bc."""
    if d < 2:
        raise GraphError(f"Kautz construction needs d >= 2, got {d}")
    words = [(a, b) for a in range(d + 1) for b in range(d + 1) if a != b]
    index = {w: k for k, w in enumerate(words)}
    edges, arcs = set(), set()
    for a, b in words:
        for c in range(d + 1):
            if c == b:
                continue
            u, v = index[a, b], index[b, c]
            if c == a:
                edges.add((min(u, v), max(u, v)))
            else:
                arcs.add((u, v))
    labels = tuple(_letter(a, d) + _letter(b, d) for a, b in words)
    return MixedGraph(len(words), frozenset(edges), frozenset(arcs), labels)


def transpose(g: MixedGraph) -> MixedGraph:
    return MixedGraph(g.n, g.edges, frozenset((v, u) for u, v in g.arcs), g.labels)


def bfs_distances(g: MixedGraph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    q = deque([source])
    und, out = g.undirected_neighbors, g.out_neighbors
    while q:
        u = q.popleft()
        for v in und[u] + out[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def diameter(g: MixedGraph) -> float:
    """Largest mixed-path distance over ordered pairs; ``math.inf`` if not strongly connected."""
    best = 0
    for s in range(g.n):
        dist = bfs_distances(g, s)
        if min(dist, default=0) < 0:
            return math.inf
        best = max(best, max(dist, default=0))
    return best


def walk_count_ok(g: MixedGraph, r: int) -> bool:
    """Exactly one walk of length 1 or 2 between distinct vertices, r closed 2-walks."""
    A = g.adjacency()
    W = A + A @ A
    off = W[~np.eye(g.n, dtype=bool)]
    return bool((off == 1).all() and (np.diagonal(W) == r).all())


def verify_moore(g: MixedGraph) -> MooreReport:
    n = g.n
    und = [len(x) for x in g.undirected_neighbors]
    zout = [len(x) for x in g.out_neighbors]
    zin = [len(x) for x in g.in_neighbors]
    uniform = n > 0 and len(set(und)) == 1 and len(set(zout)) == 1 and zin == zout
    profile = (und[0], zout[0], zin[0]) if uniform else None
    # a mixed Moore graph needs at least one edge and one arc per vertex
    degree_ok = uniform and und[0] >= 1 and zout[0] >= 1
    r = und[0] if uniform else -1
    z = zout[0] if uniform else -1
    order_ok = uniform and n == moore_bound_mixed(r, z)

    unique_path_ok = uniform and n > 0 and walk_count_ok(g, r)

    E = g.edge_matrix()
    E2 = E @ E
    off = ~np.eye(n, dtype=bool)
    girth_ok = bool(((E2 * E) == 0).all() and (E2[off] <= 1).all()) if n else True

    D = g.arc_matrix()
    D2 = D @ D
    # arc u->v lies on one directed triangle per path v->w->u
    triangle_ok = all(D2[v, u] == 1 for u, v in g.arcs)

    diam = diameter(g) if n else 0
    verdict = bool(degree_ok and order_ok and unique_path_ok and girth_ok
                   and triangle_ok and diam == 2)
    return MooreReport(degree_ok=bool(degree_ok), degree_profile=profile,
                       order_ok=bool(order_ok), unique_path_ok=bool(unique_path_ok),
                       girth_ok=girth_ok, triangle_ok=bool(triangle_ok),
                       diameter=diam, verdict=verdict)


# --- isomorphism --------------------------------------------------------------

def _initial_colours(g: MixedGraph) -> list:
    D = g.arc_matrix()
    tri = np.diagonal(D @ D @ D) if g.n else []
    und, out, inn = g.undirected_neighbors, g.out_neighbors, g.in_neighbors
    return [(len(und[v]), len(out[v]), len(inn[v]), int(tri[v])) for v in range(g.n)]


def _refine(graphs: Sequence[MixedGraph], colours: list[list]) -> list[list[int]]:
    """Joint colour refinement; colour ids are comparable across ``graphs``."""
    def relabel(cols):
        keys = sorted({c for cs in cols for c in cs})
        ids = {k: i for i, k in enumerate(keys)}
        return [[ids[c] for c in cs] for cs in cols], len(keys)

    cols, count = relabel(colours)
    while True:
        sigs = []
        for g, cs in zip(graphs, cols):
            und, out, inn = g.undirected_neighbors, g.out_neighbors, g.in_neighbors
            sigs.append([(cs[v],
                          tuple(sorted(cs[w] for w in und[v])),
                          tuple(sorted(cs[w] for w in out[v])),
                          tuple(sorted(cs[w] for w in inn[v])))
                         for v in range(g.n)])
        new, new_count = relabel(sigs)
        if new_count == count:
            return new
        cols, count = new, new_count


def _histogram(cs: list[int]) -> list[int]:
    h = [0] * (max(cs, default=-1) + 1)
    for c in cs:
        h[c] += 1
    return h


def isomorphic(g1: MixedGraph, g2: MixedGraph, cap: int = ISO_SIZE_CAP) -> bool:
    """Edge- and arc-preserving isomorphism test by individualisation and refinement."""
    if max(g1.n, g2.n) > cap:
        raise SizeCapExceeded(f"graphs larger than {cap} vertices")
    if (g1.n, len(g1.edges), len(g1.arcs)) != (g2.n, len(g2.edges), len(g2.arcs)):
        return False
    if g1.n == 0:
        return True
    graphs = (g1, g2)

    def check(c1, c2) -> bool:
        where = {c: v for v, c in enumerate(c2)}
        perm = [where[c] for c in c1]
        return g1.relabel(perm) == g2

    def search(c1, c2) -> bool:
        c1, c2 = _refine(graphs, [c1, c2])
        h1, h2 = _histogram(c1), _histogram(c2)
        if h1 != h2:
            return False
        if all(x <= 1 for x in h1):
            return check(c1, c2)
        # branch on the smallest non-singleton cell
        target = min((size, c) for c, size in enumerate(h1) if size > 1)[1]
        v = c1.index(target)
        fresh = len(h1)
        a = c1[:]
        a[v] = fresh
        for w in (u for u, c in enumerate(c2) if c == target):
            b = c2[:]
            b[w] = fresh
            if search(a, b):
                return True
        return False

    return search(_initial_colours(g1), _initial_colours(g2))


# --- graph files --------------------------------------------------------------

def degrees_header(g: MixedGraph) -> tuple[int, int]:
    if g.n == 0:
        return 0, 0
    return len(g.undirected_neighbors[0]), len(g.out_neighbors[0])


def format_graph(g: MixedGraph) -> str:
    r, z = degrees_header(g)
    lines = [f"{g.n} {r} {z}"]
    lines += [f"E {u} {v}" for u, v in sorted(g.edges)]
    lines += [f"A {u} {v}" for u, v in sorted(g.arcs)]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> MixedGraph:
    header = None
    edges, arcs = [], []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3:
                raise GraphParseError("header must be 'n r z'", lineno)
            try:
                header = tuple(int(x) for x in parts)
            except ValueError:
                raise GraphParseError("header must be three integers", lineno) from None
            continue
        if len(parts) != 3 or parts[0] not in ("E", "A"):
            raise GraphParseError(f"expected 'E u v' or 'A u v', got {line!r}", lineno)
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphParseError(f"non-integer vertex in {line!r}", lineno) from None
        if not (0 <= u < header[0] and 0 <= v < header[0]):
            raise GraphParseError(f"vertex out of range in {line!r}", lineno)
        (edges if parts[0] == "E" else arcs).append((u, v))
    if header is None:
        raise GraphParseError("missing header", max(last, 1))
    try:
        return MixedGraph(header[0], frozenset(edges), frozenset(arcs))
    except GraphError as exc:
        raise GraphParseError(str(exc), last) from exc


def read_graph(path) -> MixedGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(g: MixedGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g))
