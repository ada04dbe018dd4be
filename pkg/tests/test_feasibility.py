import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mixedmoore.feasibility import (DomainError, abelian_index2_excluded, bosak_feasible,
                                    enumerate_feasible, index2_split, is_prime_power,
                                    kautz_is_cayley, moore_bound_directed, moore_bound_mixed,
                                    moore_bound_undirected)


@pytest.mark.parametrize("r,z,n", [(3, 1, 18), (1, 1, 6), (21, 1, 486), (3, 7, 108), (13, 6, 368)])
def test_moore_bound_mixed(r, z, n):
    assert moore_bound_mixed(r, z) == n


@pytest.mark.parametrize("d,k,n", [(3, 2, 10), (7, 2, 50), (57, 2, 3250), (3, 3, 22)])
def test_moore_bound_undirected(d, k, n):
    # 1 + d + d(d-1) + ... summed directly
    assert 1 + sum(d * (d - 1) ** i for i in range(k)) == n
    assert moore_bound_undirected(d, k) == n


def test_moore_bound_undirected_domain():
    with pytest.raises(DomainError):
        moore_bound_undirected(2, 3)


@pytest.mark.parametrize("d,k,n", [(2, 2, 7), (2, 3, 15), (3, 2, 13)])
def test_moore_bound_directed(d, k, n):
    assert sum(d ** i for i in range(k + 1)) == n
    assert moore_bound_directed(d, k) == n


def test_bosak_examples():
    assert bosak_feasible(3, 1) == 3
    assert 65 % 3 != 0
    assert bosak_feasible(3, 2) is None
    assert all(bosak_feasible(5, z) is None for z in range(1, 200))
    assert all(bosak_feasible(1, z) == 1 for z in range(1, 200))


def test_enumerate_small():
    got = [(p.r, p.z, p.n) for p in enumerate_feasible(20)]
    assert got == [(1, 1, 6), (1, 2, 12), (3, 1, 18), (1, 3, 20)]
    assert enumerate_feasible(5) == []
    rows = {(p.r, p.z, p.n) for p in enumerate_feasible(110)}
    assert {(7, 2, 84), (3, 6, 88), (3, 7, 108)} <= rows


def test_enumerate_inclusive_bound():
    # Bosák's condition admits (7, 15) at exactly n = 500
    assert bosak_feasible(7, 15) == 5 and moore_bound_mixed(7, 15) == 500
    assert (500, 7, 15) in {(p.n, p.r, p.z) for p in enumerate_feasible(500)}
    assert (500, 7, 15) not in {(p.n, p.r, p.z) for p in enumerate_feasible(499)}


def brute_feasible(max_n):
    out = set()
    for r in range(1, max_n):
        for z in range(1, max_n):
            if moore_bound_mixed(r, z) > max_n:
                break
            for c in range(1, 2 * max_n, 2):
                if c * c + 3 == 4 * r and (4 * z - 3) * (4 * z + 5) % c == 0:
                    out.add((moore_bound_mixed(r, z), r, z))
    return out


def test_enumerate_matches_brute_force():
    assert {(p.n, p.r, p.z) for p in enumerate_feasible(600)} == brute_feasible(600)


def test_r1_rows():
    ps = enumerate_feasible(1000)
    assert sorted(p.z for p in ps if p.r == 1) == [z for z in range(1, 40) if (z + 1) * (z + 2) <= 1000]


@given(st.integers(1, 500))
def test_kautz_vertex_count(z):
    assert moore_bound_mixed(1, z) == (z + 1) * (z + 2)


@pytest.mark.parametrize("r,z,expected", [(3, 1, {1}), (3, 7, {4}), (7, 2, {3})])
def test_index2_split_examples(r, z, expected):
    c = math.isqrt(4 * r - 3)
    vals = {Fraction(2 * (z + r) - 1 + c, 4), Fraction(2 * (z + r) - 1 - c, 4)}
    assert {int(v) for v in vals if v.denominator == 1} == expected
    assert index2_split(r, z) == expected


def test_split_and_even_order_up_to_10000():
    ps = enumerate_feasible(10000)
    assert len(ps) > 100
    for p in ps:
        assert p.n % 2 == 0, p
        assert len(p.splits) == 1, p


@pytest.mark.parametrize("r,z,expected", [(3, 1, False), (3, 7, True), (7, 2, True),
                                          (1, 4, False), (3, 3, False), (1, 5, True)])
def test_abelian_exclusion(r, z, expected):
    assert abelian_index2_excluded(r, z) is expected


@given(st.integers(1, 3000), st.integers(1, 3000))
def test_abelian_exclusion_exact(r, z):
    # compare against exact rational reasoning: x > sqrt(y) iff x > 0 and x^2 > y
    lhs = 2 * (z + r) - 9
    assert abelian_index2_excluded(r, z) == (lhs > 0 and lhs * lhs > 4 * r - 3)
    c = math.isqrt(4 * r - 3)
    if c * c == 4 * r - 3:
        assert abelian_index2_excluded(r, z) == (2 * (z + r) - c > 9)


# Whether the Kautz graph of out-degree z is a Cayley graph, for z up to 20
KAUTZ_CAYLEY = {1: 1, 2: 1, 3: 1, 4: 0, 5: 1, 6: 1, 7: 1, 8: 0, 9: 1, 10: 0, 11: 1, 12: 0,
                13: 0, 14: 1, 15: 1, 16: 0, 17: 1, 18: 0, 19: 0, 20: 0}


@pytest.mark.parametrize("z", sorted(KAUTZ_CAYLEY))
def test_kautz_is_cayley_table(z):
    assert kautz_is_cayley(z) is bool(KAUTZ_CAYLEY[z])


def test_prime_power():
    pp = [q for q in range(2, 70) if is_prime_power(q)]
    assert pp == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41,
                  43, 47, 49, 53, 59, 61, 64, 67]
