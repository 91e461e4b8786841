from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from cartan_spectra.rootsys import (
    RootSystemError,
    SimpleType,
    all_types,
    bicolor,
    build_root_system,
    cartan_matrix,
    height,
    reflect,
    standard_exponents,
)

from conftest import ALL_TYPES


def test_type_parsing_and_rank_limits():
    assert SimpleType.parse("E8") == SimpleType("E", 8)
    assert SimpleType.parse("d_5") == SimpleType("D", 5)
    for bad in ("Q9", "E9", "C2", "D3", "G3", "F5", "A0", ""):
        with pytest.raises(RootSystemError):
            SimpleType.parse(bad)


def test_type_count_rank_le_8():
    # A1..A8, B2..B8, C3..C8, D4..D8, E6..E8, F4, G2
    assert len(all_types(8)) == 8 + 7 + 6 + 5 + 3 + 1 + 1


def test_a2_roots_and_marks():
    rs = build_root_system("A2")
    assert len(rs.roots) == 6
    assert rs.coxeter_number == 3
    assert rs.marks == (1, 1)
    assert np.array_equal(cartan_matrix(rs), [[2, -1], [-1, 2]])


@pytest.mark.parametrize("n", range(2, 13))
def test_sl_n_counts(n):
    rs = build_root_system(f"A{n - 1}")
    assert rs.coxeter_number == n
    assert len(rs.roots) + rs.rank == n * n - 1


def test_e8_exponents():
    rs = build_root_system("E8")
    assert rs.coxeter_number == 30
    assert rs.exponents == (1, 7, 11, 13, 17, 19, 23, 29)


def test_g2_cartan():
    A = cartan_matrix(build_root_system("G2"))
    assert sorted([A[0, 1], A[1, 0]]) == [-3, -1]
    assert np.all(np.diag(A) == 2)


def test_heights():
    rs = build_root_system("A2")
    assert height(rs, (1, 0)) == 1
    assert height(rs, rs.highest_root) == 2
    assert height(rs, tuple(-x for x in rs.highest_root)) == 1 - rs.coxeter_number
    with pytest.raises(RootSystemError):
        height(rs, (2, 0))


def test_bicolorings():
    assert bicolor(build_root_system("A3")).color == (1, -1, 1)
    b = bicolor(build_root_system("A2"))
    assert b.black_count == 1 and b.color == (1, -1)
    rs = build_root_system("D4")
    col = bicolor(rs).color
    center = next(i for i in range(4) if len(rs.neighbors[i]) == 3)
    assert all(col[j] == -col[center] for j in rs.neighbors[center])


@pytest.mark.parametrize("t", ALL_TYPES)
def test_root_system_invariants(t):
    rs = build_root_system(t)
    r, h = rs.rank, rs.coxeter_number
    assert len(rs.roots) == h * r
    assert sum(rs.marks) + 1 == h
    k = rs.exponents
    assert all(k[i] + k[r - 1 - i] == h for i in range(r))
    assert all(c in k for c in range(1, h) if gcd(c, h) == 1)
    assert k == standard_exponents(rs.type)
    roots = set(rs.roots)
    assert roots == {tuple(-x for x in a) for a in roots}
    A = cartan_matrix(rs)
    for a in rs.roots:
        for i in range(r):
            assert reflect(A, i, a) in roots
        assert int(np.dot(a, rs.rho_check())) == height(rs, a)
    col = bicolor(rs).color
    for i in range(r):
        for j in range(r):
            if i != j and A[i, j]:
                assert col[i] * col[j] == -1
    # Cartan entries from the exact form, short roots of squared length 2
    for i in range(r):
        for j in range(r):
            assert Fraction(A[i, j]) == 2 * rs.bilinear[i][j] / rs.bilinear[j][j]
    assert min(rs.lengths) == 2


def test_roots_sorted_by_height_then_lex():
    rs = build_root_system("B3")
    keys = [(sum(a), a) for a in rs.roots]
    assert keys == sorted(keys)
    assert rs.roots[-1] == rs.highest_root
