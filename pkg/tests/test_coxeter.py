import numpy as np
import pytest

from cartan_spectra.coxeter import (
    cartan_eigenpair,
    cartan_eigenvalue,
    colored_simple_orbits,
    coxeter_element,
    duality_twist,
    exponents_of,
    orbit_decomposition,
    pairing_check,
    pairing_prediction,
    split_parts,
)
from cartan_spectra.rootsys import bicolor, build_root_system, cartan_matrix

from conftest import ALL_TYPES


def _setup(t):
    rs = build_root_system(t)
    return rs, coxeter_element(rs)


def test_a2_coxeter_element():
    rs, cd = _setup("A2")
    assert cd.order() == 3
    assert np.trace(cd.c) == -1
    assert exponents_of(cd, rs) == [1, 2]


def test_a1_degenerate():
    rs, cd = _setup("A1")
    assert np.array_equal(cd.c, cd.c_b)
    assert np.array_equal(cd.c, cd.s[0])
    assert cd.order() == 2


def test_exponents_e8_d4():
    rs, cd = _setup("E8")
    assert exponents_of(cd, rs) == [1, 7, 11, 13, 17, 19, 23, 29]
    rs, cd = _setup("D4")
    assert exponents_of(cd, rs) == [1, 3, 3, 5]


@pytest.mark.parametrize("t", ALL_TYPES)
def test_exact_identities(t):
    rs, cd = _setup(t)
    r = rs.rank
    I = np.eye(r, dtype=np.int64)
    assert cd.c_b.dtype == np.int64
    assert np.array_equal(cd.c_b @ cd.c_b, I)
    assert np.array_equal(cd.c_w @ cd.c_w, I)
    B = 2 * I - cd.A_hat
    assert np.array_equal(cd.c_b + cd.c_w, B)
    assert np.array_equal(B @ B, cd.c + cd.c_inv + 2 * I)
    assert cd.order() == rs.coxeter_number


def test_a2_eigenpairs():
    rs, cd = _setup("A2")
    p1 = cartan_eigenpair(rs, cd, 1)
    p2 = cartan_eigenpair(rs, cd, 2)
    assert p1.lam == pytest.approx(1.0)
    assert p2.lam == pytest.approx(3.0)
    assert np.allclose(p1.x, np.array([1, 1]) / np.sqrt(2))
    assert abs(p2.x @ np.array([1, 1])) < 1e-12


def test_a11_pf_is_sine_vector():
    rs, cd = _setup("A11")
    x = cartan_eigenpair(rs, cd, 1).x
    s = np.sin(np.arange(1, 12) * np.pi / 12)
    assert np.allclose(x, s / np.linalg.norm(s), atol=1e-12)


@pytest.mark.parametrize("t", ALL_TYPES)
def test_eigenpairs_and_twist(t):
    rs, cd = _setup(t)
    A = cartan_matrix(rs).astype(float)
    col = cd.coloring
    r = rs.rank
    for i in range(1, r + 1):
        p = cartan_eigenpair(rs, cd, i)
        assert np.linalg.norm(A.T @ p.x - p.lam * p.x) <= 1e-9
        assert np.linalg.norm(A @ p.x_tilde - p.lam * p.x_tilde) <= 1e-9 * np.linalg.norm(p.x_tilde)
        assert np.linalg.norm(cd.c @ p.y - np.exp(2j * p.theta) * p.y) <= 1e-9
        tw = duality_twist(rs, col, p)
        assert tw.lam == pytest.approx(cartan_eigenvalue(rs, r + 1 - i), abs=1e-12)
        assert np.linalg.norm(A.T @ tw.x - tw.lam * tw.x) <= 1e-9 * np.linalg.norm(tw.x)
        assert np.allclose(np.abs(tw.x), np.abs(p.x))
        assert np.allclose(duality_twist(rs, col, tw).x, p.x)
        for j in range(r):
            assert abs(pairing_check(rs, p, j) - pairing_prediction(rs, col, p, j)) <= 1e-9
            assert abs(abs(pairing_check(rs, p, j)) - np.sin(p.theta) * rs.lengths[j] * abs(p.x[j])) <= 1e-9


@pytest.mark.parametrize("t", ALL_TYPES)
def test_split_parts_relations(t):
    rs, cd = _setup(t)
    for i in range(1, rs.rank + 1):
        p = cartan_eigenpair(rs, cd, i)
        xb, xw = split_parts(p, cd.coloring)
        assert np.allclose(xb + xw, p.x)
        c = 2 * np.cos(p.theta)
        assert np.allclose(cd.c_b @ xb, -xb, atol=1e-12)
        assert np.allclose(cd.c_w @ xw, -xw, atol=1e-12)
        # the relations hold with the roles of x_b and x_w on the right exchanged
        assert np.allclose(cd.c_w @ xb, xb + c * xw, atol=1e-9)
        assert np.allclose(cd.c_b @ xw, xw + c * xb, atol=1e-9)


def test_a2_split():
    rs, cd = _setup("A2")
    p = cartan_eigenpair(rs, cd, 1)
    xb, xw = split_parts(p, cd.coloring)
    assert np.allclose(xb / p.x[0], [1, 0]) and np.allclose(xw / p.x[1], [0, 1])


@pytest.mark.parametrize("t", ALL_TYPES)
def test_orbits(t):
    rs, cd = _setup(t)
    orbits = orbit_decomposition(rs, cd)
    assert len(orbits) == rs.rank
    assert all(len(o) == rs.coxeter_number for o in orbits)
    assert sorted(a for o in orbits for a in o) == sorted(rs.roots)
    assert len(set(colored_simple_orbits(rs, cd, orbits))) == rs.rank


def test_g2_orbits_split_by_length():
    rs, cd = _setup("G2")
    lens = [{rs.norm2(a) for a in o} for o in orbit_decomposition(rs, cd)]
    assert sorted(len(s) for s in lens) == [1, 1]
    assert {next(iter(s)) for s in lens} == {2, 6}


def test_bicoloring_choice_does_not_change_spectrum():
    rs = build_root_system("E6")
    col = bicolor(rs)
    from cartan_spectra.rootsys import Bicoloring

    flipped = Bicoloring(tuple(-c for c in col.color))
    cd = coxeter_element(rs, flipped)
    assert exponents_of(cd, rs) == list(rs.exponents)
