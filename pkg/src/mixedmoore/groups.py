"""Finite groups stored as multiplication tables over dense element indices.

Element 0 is always the identity. Everything here is a pure function of its
inputs; a :class:`Group` is never mutated after :func:`build_group`.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)

ORDER_CAP = 512


class GroupError(ValueError):
    pass


class NotLatinSquare(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class CapExceeded(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class Group:
    order: int
    table: np.ndarray
    name: str
    inverses: np.ndarray
    element_orders: np.ndarray
    rows: list = field(repr=False)  # table as nested lists, for scalar hot loops

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"Group({self.name!r}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    elements: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)


@dataclass(frozen=True)
class Automorphism:
    map: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.map[g]

    def image(self, elements: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.map[g] for g in elements))


def _find_identity(t: np.ndarray) -> int:
    n = t.shape[0]
    ident = np.arange(n)
    for e in range(n):
        if np.array_equal(t[e], ident) and np.array_equal(t[:, e], ident):
            return e
    raise NoIdentity("no element e with e*x = x*e = x for all x")


def _check_latin(t: np.ndarray) -> None:
    n = t.shape[0]
    full = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(t[i]), full):
            vals, counts = np.unique(t[i], return_counts=True)
            j = int(np.flatnonzero(t[i] == vals[counts > 1][0])[1])
            raise NotLatinSquare(f"row {i} repeats a value (cell ({i}, {j}))")
        if not np.array_equal(np.sort(t[:, i]), full):
            vals, counts = np.unique(t[:, i], return_counts=True)
            j = int(np.flatnonzero(t[:, i] == vals[counts > 1][0])[1])
            raise NotLatinSquare(f"column {i} repeats a value (cell ({j}, {i}))")


def _check_associative(t: np.ndarray) -> None:
    # (ij)k against i(jk), one slab of fixed i at a time
    for i in range(t.shape[0]):
        left = t[t[i]]          # left[j, k] = (i*j)*k
        right = t[i][t]         # right[j, k] = i*(j*k)
        bad = np.argwhere(left != right)
        if len(bad):
            j, k = (int(x) for x in bad[0])
            raise NotAssociative(f"({i}*{j})*{k} != {i}*({j}*{k})")


def _relabel(t: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Relabel so that new index perm_inv[x] holds old element x; perm[new] = old."""
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return inv[t[np.ix_(perm, perm)]]


def build_group(table, name: str = "G", check_associative: bool = True) -> Group:
    """Validate a multiplication table and wrap it as a :class:`Group`.

    If the identity is not at index 0 it is swapped there (with a warning).
    """
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotLatinSquare(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        i, j = (int(x) for x in np.argwhere((t < 0) | (t >= n))[0])
        raise NotLatinSquare(f"cell ({i}, {j}) = {t[i, j]} outside [0, {n})")
    _check_latin(t)
    e = _find_identity(t)
    if e != 0:
        log.warning("%s: identity found at index %d, relabelling it to 0", name, e)
        perm = np.arange(n)
        perm[0], perm[e] = e, 0
        t = _relabel(t, perm)
    if check_associative:
        _check_associative(t)
    return _wrap(t, name)


def _wrap(t: np.ndarray, name: str) -> Group:
    n = t.shape[0]
    t = np.ascontiguousarray(t, dtype=np.int32)
    t.setflags(write=False)
    inverses = np.argmax(t == 0, axis=1).astype(np.int32)
    orders = np.zeros(n, dtype=np.int32)
    rows = t.tolist()
    for g in range(n):
        x, m = g, 1
        while x != 0:
            x = rows[x][g]
            m += 1
        orders[g] = m
    inverses.setflags(write=False)
    orders.setflags(write=False)
    return Group(order=n, table=t, name=name, inverses=inverses,
                 element_orders=orders, rows=rows)


def relabel_group(G: Group, perm: Sequence[int], name: str | None = None) -> Group:
    """Return an isomorphic copy whose element ``k`` is ``G``'s element ``perm[k]``.

    ``perm[0]`` must be 0.
    """
    perm = np.asarray(perm)
    if perm[0] != 0:
        raise ValueError("relabelling must fix the identity")
    return _wrap(_relabel(np.asarray(G.table, dtype=np.int64), perm), name or G.name)


def element_order(G: Group, g: int) -> int:
    return int(G.element_orders[g])


def is_abelian(G: Group) -> bool:
    return bool(np.array_equal(G.table, G.table.T))


def closure(G: Group, gens: Iterable[int]) -> Subgroup:
    gens = sorted(set(int(g) for g in gens) - {0})
    rows = G.rows
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            row = rows[x]
            for s in gens:
                y = row[s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(tuple(sorted(seen)))


def subgroup_is_abelian(G: Group, H: Subgroup) -> bool:
    idx = np.asarray(H.elements)
    block = G.table[np.ix_(idx, idx)]
    return bool(np.array_equal(block, block.T))


def index2_subgroups(G: Group) -> list[Subgroup]:
    """All subgroups of index 2.

    They are the kernels of the nonzero maps G -> C2, which all factor through
    G/N with N generated by squares and commutators.
    """
    n = G.order
    if n % 2:
        return []
    t, inv = G.table, G.inverses
    squares = set(int(x) for x in np.diagonal(t))
    a = np.arange(n)
    # commutator g^-1 h^-1 g h
    comm = t[t[inv[a][:, None], inv[a][None, :]], t[a[:, None], a[None, :]]]
    N = closure(G, squares | set(int(x) for x in np.unique(comm)))
    if len(N) == n:
        return []
    label = np.full(n, -1, dtype=np.int64)
    label[list(N.elements)] = 0
    rows = G.rows
    bits = 0
    while (label < 0).any():
        x = int(np.flatnonzero(label < 0)[0])
        known = np.flatnonzero(label >= 0)
        for y in known:
            label[rows[int(y)][x]] = label[y] | (1 << bits)
        bits += 1
    out = []
    for f in range(1, 1 << bits):
        parity = np.array([bin(int(v) & f).count("1") % 2 for v in label])
        out.append(Subgroup(tuple(int(x) for x in np.flatnonzero(parity == 0))))
    out.sort(key=lambda H: H.elements)
    return out


def generating_sequence(G: Group) -> list[int]:
    """Greedy short generating sequence, preferring elements of large order."""
    by_order = sorted(range(1, G.order), key=lambda g: (-int(G.element_orders[g]), g))
    gens: list[int] = []
    span = {0}
    for g in by_order:
        if len(span) == G.order:
            break
        if g not in span:
            gens.append(g)
            span = set(closure(G, gens).elements)
    return gens


def _order_classes(G: Group) -> dict[int, list[int]]:
    classes: dict[int, list[int]] = {}
    for g in range(G.order):
        classes.setdefault(int(G.element_orders[g]), []).append(g)
    return classes


def _hom_backtrack(G: Group, H: Group, find_all: bool) -> list[tuple[int, ...]]:
    """Isomorphisms G -> H found by choosing images of a generating sequence of G."""
    n = G.order
    gens = generating_sequence(G)
    grows, hrows = G.rows, H.rows
    candidates = _order_classes(H)
    found: list[tuple[int, ...]] = []

    def extend(phi, used, k, img):
        # set phi(gens[k]) = img, then close the partial map under right
        # multiplication by gens[0..k]; False on any inconsistency
        phi = phi[:]
        used = used[:]
        mapped = [x for x in range(n) if phi[x] >= 0]
        images = [0] * (k + 1)
        for j in range(k):
            images[j] = phi[gens[j]]
        images[k] = img
        queue = mapped
        while queue:
            nxt = []
            for x in queue:
                gx, hx = grows[x], hrows[phi[x]]
                for j in range(k + 1):
                    y = gx[gens[j]]
                    v = hx[images[j]]
                    if phi[y] < 0:
                        if used[v]:
                            return None
                        phi[y] = v
                        used[v] = True
                        nxt.append(y)
                    elif phi[y] != v:
                        return None
            queue = nxt
        return phi, used

    def rec(phi, used, k):
        if k == len(gens):
            found.append(tuple(phi))
            return not find_all
        g = gens[k]
        for img in candidates.get(int(G.element_orders[g]), []):
            if used[img]:
                continue
            res = extend(phi, used, k, img)
            if res is None:
                continue
            if rec(res[0], res[1], k + 1):
                return True
        return False

    phi0 = [-1] * n
    phi0[0] = 0
    used0 = [False] * n
    used0[0] = True
    rec(phi0, used0, 0)
    return found


def automorphism_group(G: Group, cap: int = ORDER_CAP) -> list[Automorphism]:
    if G.order > cap:
        raise CapExceeded(f"{G.name}: order {G.order} exceeds cap {cap}")
    maps = _hom_backtrack(G, G, find_all=True)
    return [Automorphism(m) for m in sorted(maps)]


def _order_profile(G: Group):
    return (G.order, tuple(sorted(Counter(G.element_orders.tolist()).items())),
            is_abelian(G), len(index2_subgroups(G)))


def groups_isomorphic(G1: Group, G2: Group, cap: int = ORDER_CAP) -> bool:
    if max(G1.order, G2.order) > cap:
        raise CapExceeded(f"order exceeds cap {cap}")
    if _order_profile(G1) != _order_profile(G2):
        return False
    return bool(_hom_backtrack(G1, G2, find_all=False))


def automorphism_array(auts: Sequence[Automorphism] | np.ndarray) -> np.ndarray:
    if isinstance(auts, np.ndarray):
        return auts
    return np.asarray([a.map for a in auts], dtype=np.int32)


def canonical_set(G: Group, T: Iterable[int], auts) -> tuple[int, ...]:
    """Lexicographically least sorted image of ``T`` over all automorphisms."""
    T = sorted(set(int(x) for x in T))
    if not T:
        return ()
    A = automorphism_array(auts)
    imgs = np.sort(A[:, T], axis=1)
    best = np.lexsort(imgs.T[::-1])[0]
    return tuple(int(x) for x in imgs[best])


def canonical_pair(G: Group, T1: Iterable[int], T2: Iterable[int], auts) -> tuple:
    """Canonical form of an ordered pair of sets under simultaneous automorphisms."""
    T1 = sorted(set(int(x) for x in T1))
    T2 = sorted(set(int(x) for x in T2))
    A = automorphism_array(auts)
    i1 = np.sort(A[:, T1], axis=1) if T1 else np.zeros((len(A), 0), dtype=A.dtype)
    i2 = np.sort(A[:, T2], axis=1) if T2 else np.zeros((len(A), 0), dtype=A.dtype)
    # both parts have fixed length, so comparing the concatenation is enough
    keys = np.hstack([i1, i2])
    best = np.lexsort(keys.T[::-1])[0] if keys.shape[1] else 0
    return tuple(int(x) for x in i1[best]), tuple(int(x) for x in i2[best])
