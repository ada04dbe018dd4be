"""Constructors for standard group families and ingestion of group files.

Built-in catalogs are complete (up to isomorphism) only at orders 6, 12, 18,
20, 30 and at prime orders. Anything else is assembled from generic
constructors plus ``*.gtab`` / ``*.gperm`` files found in a group directory,
and is labelled complete only when the number of pairwise non-isomorphic
groups reaches the known group count for that order.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .groups import (ORDER_CAP, CapExceeded, Group, GroupError, build_group,
                     groups_isomorphic, is_abelian)

log = logging.getLogger(__name__)

FAMILIES = ("cyclic", "dihedral", "dicyclic", "symmetric", "alternating",
            "direct_product", "semidirect_cyclic", "generalized_dihedral",
            "table_file", "permutation_file")

COMPLETE_ORDERS = (6, 12, 18, 20, 30)

# Number of groups of order n up to isomorphism, for orders where we may
# claim completeness from ingested data.
KNOWN_GROUP_COUNTS = {
    1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2,
    11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14, 17: 1, 18: 5, 19: 1, 20: 5,
    21: 2, 22: 2, 23: 1, 24: 15, 25: 2, 26: 2, 27: 5, 28: 4, 29: 1, 30: 4,
    31: 1, 32: 51, 33: 1, 34: 2, 35: 1, 36: 14, 37: 1, 38: 2, 39: 2, 40: 14,
    41: 1, 42: 6, 43: 1, 44: 4, 45: 2, 46: 2, 47: 1, 48: 52, 49: 2, 50: 5,
    51: 1, 52: 5, 53: 1, 54: 15, 55: 2, 56: 13, 57: 2, 58: 2, 59: 1, 60: 13,
    72: 50, 84: 15, 88: 12, 90: 10, 108: 45, 110: 6, 132: 10,
}


class InvalidParameters(GroupError):
    pass


class ParseError(GroupError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class OrderCapExceeded(CapExceeded):
    pass


@dataclass(frozen=True)
class GroupSpec:
    family: str
    parameters: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameters(f"unknown family {self.family!r}")


@dataclass
class GroupCatalog:
    order: int
    groups: list[Group] = field(default_factory=list)
    complete: bool = False

    def __iter__(self) -> Iterator[Group]:
        return iter(self.groups)

    def __len__(self) -> int:
        return len(self.groups)

    def __getitem__(self, i: int) -> Group:
        return self.groups[i]

    @property
    def status(self) -> str:
        return "complete" if self.complete else "possibly-incomplete"


# --- constructors -----------------------------------------------------------

def cyclic(m: int) -> Group:
    if m < 1:
        raise InvalidParameters(f"cyclic order must be positive, got {m}")
    a = np.arange(m)
    return build_group((a[:, None] + a[None, :]) % m, f"C{m}", check_associative=False)


def dihedral(order: int) -> Group:
    """Dihedral group of the given order (2m); element k + m*f is r^k s^f."""
    if order < 2 or order % 2:
        raise InvalidParameters(f"dihedral order must be even and >= 2, got {order}")
    m = order // 2
    t = np.empty((order, order), dtype=np.int64)
    for x in range(order):
        a, f = x % m, x // m
        for y in range(order):
            b, g = y % m, y // m
            t[x, y] = (a + (-b if f else b)) % m + m * (f ^ g)
    return build_group(t, f"D{order}", check_associative=False)


def dicyclic(order: int) -> Group:
    """Dicyclic group of order 4m: <a, x | a^2m = 1, x^2 = a^m, x a x^-1 = a^-1>."""
    if order < 4 or order % 4:
        raise InvalidParameters(f"dicyclic order must be a multiple of 4, got {order}")
    m = order // 4
    h = 2 * m
    t = np.empty((order, order), dtype=np.int64)
    for x in range(order):
        i, f = x % h, x // h
        for y in range(order):
            j, g = y % h, y // h
            if not f:
                t[x, y] = (i + j) % h + h * g
            elif not g:
                t[x, y] = (i - j) % h + h
            else:
                t[x, y] = (i - j + m) % h
    return build_group(t, f"Dic{order}", check_associative=False)


def _perm_group(perms: Sequence[tuple], name: str) -> Group:
    idx = {p: k for k, p in enumerate(perms)}
    n = len(perms)
    t = np.empty((n, n), dtype=np.int64)
    for a, p in enumerate(perms):
        for b, q in enumerate(perms):
            # apply p first, then q
            t[a, b] = idx[tuple(q[i] for i in p)]
    return build_group(t, name, check_associative=False)


def symmetric(m: int) -> Group:
    if not 1 <= m <= 6:
        raise InvalidParameters(f"symmetric degree must be in 1..6, got {m}")
    return _perm_group(list(itertools.permutations(range(m))), f"S{m}")


def _parity(p: tuple) -> int:
    seen, sign = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        sign ^= (length - 1) & 1
    return sign


def alternating(m: int) -> Group:
    if not 1 <= m <= 6:
        raise InvalidParameters(f"alternating degree must be in 1..6, got {m}")
    perms = [p for p in itertools.permutations(range(m)) if _parity(p) == 0]
    return _perm_group(perms, f"A{m}")


def direct_product(G: Group, H: Group) -> Group:
    a, b = G.table.astype(np.int64), H.table.astype(np.int64)
    m = H.order
    t = (a[:, None, :, None] * m + b[None, :, None, :]).reshape(G.order * m, G.order * m)
    return build_group(t, f"{G.name}x{H.name}", check_associative=False)


def semidirect_cyclic(m: int, n: int, k: int) -> Group:
    """C_m ⋊ C_n where the generator of C_n acts by a -> a^k; element i + m*j is a^i b^j."""
    if m < 1 or n < 1:
        raise InvalidParameters("orders must be positive")
    if math.gcd(k, m) != 1 or pow(k, n, m) != 1 % m:
        raise InvalidParameters(f"a -> a^{k} is not an automorphism of C{m} of order dividing {n}")
    kp = [pow(k, j, m) for j in range(n)]
    order = m * n
    t = np.empty((order, order), dtype=np.int64)
    for x in range(order):
        i, j = x % m, x // m
        for y in range(order):
            i2, j2 = y % m, y // m
            t[x, y] = (i + kp[j] * i2) % m + m * ((j + j2) % n)
    return build_group(t, f"C{m}:C{n}[{k}]", check_associative=False)


def cyclic_extension(m: int, K: Group, units: Sequence[int], name: str | None = None) -> Group:
    """C_m ⋊ K where element x of K acts on C_m by a -> a^units[x].

    ``units`` must be a homomorphism from K into the unit group mod m; the
    result is validated in full.
    """
    if len(units) != K.order:
        raise InvalidParameters("need one unit per element of K")
    order = m * K.order
    t = np.empty((order, order), dtype=np.int64)
    kr = K.rows
    for x in range(order):
        i, p = x % m, x // m
        u = units[p]
        for y in range(order):
            j, q = y % m, y // m
            t[x, y] = (i + u * j) % m + m * kr[p][q]
    try:
        return build_group(t, name or f"C{m}:{K.name}")
    except GroupError as exc:
        raise InvalidParameters(f"units do not define an action: {exc}") from exc


def generalized_dihedral(A: Group) -> Group:
    """A ⋊ C2 with the involution acting by inversion; requires A abelian."""
    if not is_abelian(A):
        raise InvalidParameters(f"{A.name} is not abelian")
    n = A.order
    inv = A.inverses
    t = np.empty((2 * n, 2 * n), dtype=np.int64)
    for x in range(2 * n):
        a, f = x % n, x // n
        for y in range(2 * n):
            b, g = y % n, y // n
            t[x, y] = A.rows[a][int(inv[b]) if f else b] + n * (f ^ g)
    return build_group(t, f"Dih({A.name})", check_associative=False)


def construct(spec: GroupSpec) -> Group:
    p = spec.parameters
    f = spec.family
    if f == "cyclic":
        return cyclic(*p)
    if f == "dihedral":
        return dihedral(*p)
    if f == "dicyclic":
        return dicyclic(*p)
    if f == "symmetric":
        return symmetric(*p)
    if f == "alternating":
        return alternating(*p)
    if f == "semidirect_cyclic":
        return semidirect_cyclic(*p)
    if f == "direct_product":
        G, H = (construct(q) if isinstance(q, GroupSpec) else q for q in p)
        return direct_product(G, H)
    if f == "generalized_dihedral":
        (A,) = p
        return generalized_dihedral(construct(A) if isinstance(A, GroupSpec) else A)
    if f == "table_file":
        return ingest_table(*p)
    if f == "permutation_file":
        return ingest_permutations(*p)
    raise InvalidParameters(f"unknown family {f!r}")


def _named(G: Group, name: str) -> Group:
    return dataclasses.replace(G, name=name)


def _complete_catalog(n: int) -> list[Group]:
    C, D, Dic, X = cyclic, dihedral, dicyclic, direct_product
    if n == 6:
        return [C(6), _named(symmetric(3), "S3")]
    if n == 12:
        return [C(12), X(C(6), C(2)), D(12), alternating(4), Dic(12)]
    if n == 18:
        return [C(18), X(C(3), C(6)), D(18), X(C(3), symmetric(3)),
                _named(generalized_dihedral(X(C(3), C(3))), "Dih(C3xC3)")]
    if n == 20:
        return [C(20), X(C(10), C(2)), D(20), Dic(20),
                _named(semidirect_cyclic(5, 4, 2), "C5:C4")]
    if n == 30:
        return [C(30), D(30), X(C(3), D(10)), X(C(5), symmetric(3))]
    raise KeyError(n)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def _generic_builtins(n: int) -> list[Group]:
    out = [cyclic(n)]
    if n % 2 == 0 and n >= 6:
        out.append(dihedral(n))
    if n % 4 == 0 and n >= 8:
        out.append(dicyclic(n))
        out.append(direct_product(cyclic(n // 2), cyclic(2)))
    out += _metacyclic(n)
    return dedupe_isomorphic(out)


def _unit_of_order(p: int, d: int) -> int:
    return next(k for k in range(2, p)
                if pow(k, d, p) == 1 and all(pow(k, e, p) != 1 for e in range(1, d)))


def _metacyclic(n: int) -> list[Group]:
    """C_p ⋊ C_m (n = pm, p prime), one per nontrivial cyclic image in (Z/p)*.

    Units of the same order generate the same subgroup, and the resulting
    groups are isomorphic, so one unit per order suffices.
    """
    out = []
    for p in range(3, n + 1):
        if n % p or not _is_prime(p):
            continue
        m = n // p
        for d in range(2, math.gcd(m, p - 1) + 1):
            if m % d == 0 and (p - 1) % d == 0:
                out.append(semidirect_cyclic(p, m, _unit_of_order(p, d)))
    return out


def scan_group_dir(path: str | Path) -> list[Group]:
    path = Path(path)
    groups = []
    for f in sorted(path.glob("*.gtab")):
        groups.append(ingest_table(f))
    for f in sorted(path.glob("*.gperm")):
        groups.append(ingest_permutations(f))
    return groups


def dedupe_isomorphic(groups: Sequence[Group]) -> list[Group]:
    kept: list[Group] = []
    for G in groups:
        if not any(H.order == G.order and groups_isomorphic(G, H) for H in kept):
            kept.append(G)
    return kept


def catalog_for_order(n: int, group_dir: str | Path | None = None) -> GroupCatalog:
    """Groups of order ``n`` known to this package, with a completeness flag."""
    if n in COMPLETE_ORDERS:
        builtins = _complete_catalog(n)
    elif n > ORDER_CAP:
        builtins = []
    else:
        builtins = _generic_builtins(n)
    extra = []
    if group_dir is not None and Path(group_dir).is_dir():
        extra = [G for G in scan_group_dir(group_dir) if G.order == n]
    groups = dedupe_isomorphic(builtins + extra) if extra else builtins
    complete = (n in COMPLETE_ORDERS or n == 1 or _is_prime(n)
                or KNOWN_GROUP_COUNTS.get(n, -1) == len(groups))
    return GroupCatalog(order=n, groups=groups, complete=complete)


# --- file formats -----------------------------------------------------------

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_table(text: str, name: str = "G") -> Group:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty group file", 1)
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise ParseError(f"expected order, got {head!r}", lineno) from None
    if n < 1:
        raise ParseError(f"order must be positive, got {n}", lineno)
    if n > ORDER_CAP:
        raise OrderCapExceeded(f"order {n} exceeds cap {ORDER_CAP}")
    rows = lines[1:]
    if len(rows) != n:
        last = rows[-1][0] if rows else lineno
        raise ParseError(f"expected {n} table rows, found {len(rows)}", last)
    table = []
    for r, (lineno, line) in enumerate(rows):
        parts = line.split()
        if len(parts) != n:
            raise ParseError(f"row {r} has {len(parts)} entries, expected {n}", lineno)
        try:
            table.append([int(x) for x in parts])
        except ValueError:
            raise ParseError(f"row {r} has a non-integer entry", lineno) from None
    return build_group(table, name)


def ingest_table(path: str | Path) -> Group:
    path = Path(path)
    return parse_table(path.read_text(), name=path.stem)


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutations(text: str, name: str = "G") -> Group:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty permutation file", 1)
    lineno, head = lines[0]
    try:
        points = int(head)
    except ValueError:
        raise ParseError(f"expected number of points, got {head!r}", lineno) from None
    cycles_per_gen = []
    for lineno, line in lines[1:]:
        if _CYCLE.sub("", line).strip():
            raise ParseError(f"not in cycle notation: {line!r}", lineno)
        gen = []
        for body in _CYCLE.findall(line):
            try:
                cyc = [int(x) for x in body.replace(",", " ").split()]
            except ValueError:
                raise ParseError(f"bad cycle ({body})", lineno) from None
            gen.append((lineno, cyc))
        cycles_per_gen.append(gen)
    used = [x for gen in cycles_per_gen for _, c in gen for x in c]
    # accept 1-based files: points 1..p with no 0
    offset = 1 if used and min(used) >= 1 and max(used) == points else 0
    gens = []
    for gen in cycles_per_gen:
        perm = list(range(points))
        for lineno, cyc in gen:
            cyc = [x - offset for x in cyc]
            if any(not 0 <= x < points for x in cyc) or len(set(cyc)) != len(cyc):
                raise ParseError(f"invalid cycle {cyc} on {points} points", lineno)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                perm[a] = b
        gens.append(tuple(perm))
    ident = tuple(range(points))
    elements = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    elements.append(q)
                    nxt.append(q)
                    if len(elements) > ORDER_CAP:
                        raise OrderCapExceeded(
                            f"permutation group exceeds order cap {ORDER_CAP}")
        frontier = nxt
    return _perm_group(elements, name)


def ingest_permutations(path: str | Path) -> Group:
    path = Path(path)
    return parse_permutations(path.read_text(), name=path.stem)


def format_table(G: Group) -> str:
    lines = [f"# {G.name}", str(G.order)]
    lines += [" ".join(str(int(x)) for x in row) for row in G.table]
    return "\n".join(lines) + "\n"


def write_table(G: Group, path: str | Path) -> None:
    Path(path).write_text(format_table(G))
