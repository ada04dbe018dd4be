"""Closed-form arithmetic for diameter-2 mixed Moore graphs.

All comparisons are exact integer arithmetic; square roots are only taken
with :func:`math.isqrt` and checked by squaring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FeasibleParams:
    n: int
    r: int
    z: int
    c: int
    splits: frozenset = frozenset()

    @property
    def s(self) -> int | None:
        """The index-2 split when it is unique (it always has been in practice)."""
        return next(iter(self.splits)) if len(self.splits) == 1 else None


def moore_bound_mixed(r: int, z: int) -> int:
    return (z + r) ** 2 + z + 1


def moore_bound_undirected(d: int, k: int) -> int:
    if d <= 2:
        raise DomainError(f"undirected Moore bound formula needs d > 2, got {d}")
    if k <= 1:
        raise DomainError(f"diameter must exceed 1, got {k}")
    return 1 + d * ((d - 1) ** k - 1) // (d - 2)


def moore_bound_directed(d: int, k: int) -> int:
    if d <= 1 or k <= 1:
        raise DomainError(f"directed Moore bound needs d > 1 and k > 1, got ({d}, {k})")
    return (d ** (k + 1) - 1) // (d - 1)


def _exact_sqrt(x: int) -> int | None:
    if x < 0:
        return None
    y = math.isqrt(x)
    return y if y * y == x else None


def bosak_feasible(r: int, z: int) -> int | None:
    """Return the odd c with r = (c^2 + 3)/4 dividing (4z-3)(4z+5), or None."""
    if r < 1 or z < 1:
        return None
    c = _exact_sqrt(4 * r - 3)
    if c is None or c % 2 == 0:
        return None
    return c if ((4 * z - 3) * (4 * z + 5)) % c == 0 else None


def index2_split(r: int, z: int) -> frozenset[int]:
    """Admissible values of |S ∩ H| for an index-2 subgroup H."""
    c = _exact_sqrt(4 * r - 3)
    if c is None:
        return frozenset()
    out = set()
    for num in (2 * (z + r) - 1 + c, 2 * (z + r) - 1 - c):
        if num % 4 == 0 and 0 <= num // 4 <= r + z:
            out.add(num // 4)
    return frozenset(out)


def abelian_index2_excluded(r: int, z: int) -> bool:
    """True iff 2(z+r) - sqrt(4r-3) > 9, decided without floating point."""
    if r < 1:
        return False
    a = 2 * (z + r) - 9  # compare a > sqrt(4r - 3)
    return a > 0 and a * a > 4 * r - 3


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def kautz_is_cayley(z: int) -> bool:
    return is_prime_power(z + 2)


def feasible_params(r: int, z: int) -> FeasibleParams | None:
    c = bosak_feasible(r, z)
    if c is None:
        return None
    return FeasibleParams(n=moore_bound_mixed(r, z), r=r, z=z, c=c,
                          splits=index2_split(r, z))


def enumerate_feasible(max_n: int) -> list[FeasibleParams]:
    """All Bosák-feasible (r, z) with Moore order at most ``max_n``, by order then r."""
    out = []
    r = 1
    while moore_bound_mixed(r, 1) <= max_n:
        z = 1
        while moore_bound_mixed(r, z) <= max_n:
            p = feasible_params(r, z)
            if p is not None:
                out.append(p)
            z += 1
        r += 1
    out.sort(key=lambda p: (p.n, p.r, p.z))
    return out


def params_for_order(n: int) -> list[FeasibleParams]:
    return [p for p in enumerate_feasible(n) if p.n == n]
