import numpy as np
import pytest

from cartan_spectra.apposition import (
    AppositionError,
    automorphism_residual,
    centralizer,
    cyclic_element,
    mass_operator,
    principal_angle,
    principal_grading,
    spectra,
    verify_apposition,
    verify_mass_spectra,
)
from cartan_spectra.chevalley import star
from cartan_spectra.patterns import sine_pf

from conftest import ALL_TYPES


def test_principal_grading_a2(algebra):
    la = algebra("A2")
    pg = principal_grading(la)
    g1 = pg.component(1)
    assert len(g1) == 3
    theta = la.rs.highest_root
    assert la.root_index(tuple(-x for x in theta)) in g1
    e0 = la.e(tuple(-x for x in theta))
    assert np.allclose(pg.AdP(e0), pg.zeta * e0)
    assert np.allclose(pg.AdP(la.h(1)), la.h(1))
    assert np.allclose(pg.diag ** pg.h, 1)
    assert set(pg.component(0)) == set(range(la.nroot, la.dim))
    assert automorphism_residual(la, pg) < 1e-12


def test_cyclic_element_examples(algebra):
    la = algebra("A1")
    e, es = cyclic_element(la)
    assert np.allclose(e, es)
    la = algebra("A2")
    e, _ = cyclic_element(la)
    assert np.allclose(e[la.root_index((1, 0))], 1) and np.allclose(e[la.root_index((0, 1))], 1)
    la = algebra("G2")
    e, _ = cyclic_element(la)
    coeffs = sorted(abs(v) ** 2 for v in e if abs(v) > 0)
    assert np.allclose(coeffs, [1, 2, 3])


@pytest.mark.parametrize("t", ALL_TYPES)
def test_cyclic_element_commutes_with_its_star(t, algebra):
    la = algebra(t)
    e, es = cyclic_element(la)
    pg = principal_grading(la)
    assert set(np.flatnonzero(e)) <= set(pg.component(1))
    assert set(np.flatnonzero(es)) <= set(pg.component(-1))
    assert np.linalg.norm(la.bracket(e, es)) < 1e-10


def test_centralizer_a2(algebra, appo):
    la = algebra("A2")
    ap = appo("A2")
    Z = centralizer(la, ap.e)
    assert Z.shape[1] == 2
    coef = np.linalg.lstsq(Z, ap.e, rcond=None)[0]
    assert np.linalg.norm(Z @ coef - ap.e) < 1e-10  # e lies in Z(e)
    assert np.linalg.norm(la.bracket(ap.e, ap.e)) == 0
    assert sorted(ap.line_grades) == [1, 2]


def test_centralizer_rejects_non_regular(algebra):
    la = algebra("A2")
    with pytest.raises(AppositionError):
        centralizer(la, la.e((1, 0)))


def test_lines(appo):
    ap = appo("D4")
    assert ap.line_space(2).shape[1] == 2
    assert ap.line_grades.count(3) == 2
    ap = appo("E6")
    h = ap.pg.h
    top = ap.line(ap.rank)
    assert set(np.flatnonzero(np.abs(top) > 1e-12)) <= set(ap.pg.component(h - 1))
    bottom = ap.st.apply(top)
    assert set(np.flatnonzero(np.abs(bottom) > 1e-12)) <= set(ap.pg.component(1))
    assert principal_angle(ap.line(1)[:, None], ap.e[:, None]) < 1e-10
    assert ap.st.H(ap.line(2), ap.line(2)) == pytest.approx(1.0)


def test_orbits_and_kostant_basis(appo):
    ap = appo("B3")
    O = ap.orbit_vectors
    r, h = ap.rank, ap.pg.h
    assert O.shape[:2] == (r, h)
    for i in range(r):
        assert np.allclose(ap.pg.AdP(O[i, -1]), O[i, 0])
    a = ap.kostant_basis
    assert np.linalg.matrix_rank(a[:, ap.la.cartan_slice]) == r


def test_mass_operator_a1_a2(algebra, appo):
    ms = mass_operator(algebra("A1"), appo("A1"), 1)
    assert ms.eigenvalues.shape == (1,) and ms.eigenvalues[0] > 0
    assert ms.signed_roots[0] > 0
    ms = mass_operator(algebra("A2"), appo("A2"), 1)
    assert np.allclose(ms.singular_values / ms.singular_values[0], [1, 1])


def test_a11_second_spectrum(algebra, appo):
    ms = mass_operator(algebra("A11"), appo("A11"), 2)
    v6 = sine_pf(6)
    target = np.concatenate([v6, [0], v6])
    mu = ms.signed_roots
    assert abs(mu[5]) < 1e-8 * np.abs(mu).max()
    s = np.abs(mu) @ target / (target @ target)
    assert np.allclose(np.abs(mu), s * target, atol=1e-9)


@pytest.mark.parametrize("t", ALL_TYPES)
def test_mass_spectra_report(t, algebra, appo):
    rep = verify_mass_spectra(algebra(t), appo(t))
    assert rep.passed, [c.line() for c in rep.failures()]
    if t.startswith("D") and int(t[1:]) % 2 == 0:
        assert any("eigenspace-level" in c.name for c in rep.checks)


@pytest.mark.parametrize("t", ALL_TYPES)
def test_apposition_report(t, algebra, appo):
    rep = verify_apposition(algebra(t), appo(t))
    assert rep.passed, [c.line() for c in rep.failures()]


def test_mass_operators_hermitian_in_h(algebra, appo):
    la, ap = algebra("F4"), appo("F4")
    G = la.cartan_gram
    for ms in spectra(ap):
        GM = G @ ms.M_tilde
        assert np.allclose(GM, GM.conj().T, atol=1e-10 * np.abs(GM).max())


def test_star_of_e_is_hermitian_adjoint(algebra, appo):
    la, ap = algebra("C3"), appo("C3")
    st = star(la)
    rng = np.random.default_rng(2)
    u, v = rng.normal(size=(2, la.dim)) + 1j * rng.normal(size=(2, la.dim))
    lhs = st.H(la.bracket(ap.e, u), v)
    rhs = st.H(u, la.bracket(ap.e_star, v))
    assert lhs == pytest.approx(rhs, rel=1e-10)
