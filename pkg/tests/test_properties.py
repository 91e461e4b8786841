"""Property-based checks of the algebraic invariants."""
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cartan_spectra import toda
from cartan_spectra.apposition import apposition_data
from cartan_spectra.chevalley import build_lie_algebra, star
from cartan_spectra.coxeter import cartan_eigenpair, coxeter_element, duality_twist
from cartan_spectra.patterns import apply_perm, canonical_permutation, compose, from_cycles, to_cycles
from cartan_spectra.rootsys import bicolor, build_root_system, cartan_matrix

from conftest import ALL_TYPES, SMALL_TYPES

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

types = st.sampled_from(ALL_TYPES)
small_types = st.sampled_from(SMALL_TYPES)


def _cvec(draw, n):
    re = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=n, max_size=n))
    im = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=n, max_size=n))
    return np.array(re) + 1j * np.array(im)


@st.composite
def type_and_vectors(draw, k=2, pool=small_types):
    t = draw(pool)
    la = build_lie_algebra(t)
    return la, [_cvec(draw, la.dim) for _ in range(k)]


@SETTINGS
@given(types, st.data())
def test_reflections_preserve_roots_and_form(t, data):
    rs = build_root_system(t)
    A = cartan_matrix(rs)
    a = data.draw(st.sampled_from(rs.roots))
    i = data.draw(st.integers(0, rs.rank - 1))
    from cartan_spectra.rootsys import reflect

    b = reflect(A, i, a)
    assert rs.is_root(b)
    assert rs.norm2(b) == rs.norm2(a)
    assert reflect(A, i, b) == tuple(a)


@SETTINGS
@given(types, st.data())
def test_twist_is_an_involution_swapping_eigenvalues(t, data):
    rs = build_root_system(t)
    cd = coxeter_element(rs)
    i = data.draw(st.integers(1, rs.rank))
    p = cartan_eigenpair(rs, cd, i)
    tw = duality_twist(rs, bicolor(rs), p)
    A = cartan_matrix(rs).astype(float)
    assert np.linalg.norm(A.T @ tw.x - tw.lam * tw.x) <= 1e-9
    assert abs(p.lam + tw.lam - 4) <= 1e-12
    assert np.allclose(duality_twist(rs, bicolor(rs), tw).x, p.x)


@SETTINGS
@given(type_and_vectors(3))
def test_jacobi_and_antisymmetry(args):
    la, (x, y, z) = args
    b = la.bracket
    jac = b(b(x, y), z) + b(b(y, z), x) + b(b(z, x), y)
    assert np.linalg.norm(jac) <= 1e-10 * max(1.0, np.linalg.norm(x) * np.linalg.norm(y) * np.linalg.norm(z)) * la.dim
    assert np.allclose(b(x, y), -b(y, x))


@SETTINGS
@given(type_and_vectors(3))
def test_star_and_adjoint(args):
    la, (x, u, v) = args
    s = star(la)
    assert np.allclose(s.apply(s.apply(x)), x)
    lhs = s.H(la.bracket(x, u), v)
    rhs = s.H(u, la.bracket(s.apply(x), v))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))
    assert s.H(u, u).real >= 0 and abs(s.H(u, u).imag) <= 1e-12 * max(1.0, abs(s.H(u, u)))


@SETTINGS
@given(type_and_vectors(2))
def test_principal_automorphism(args):
    la, (x, y) = args
    pg = apposition_data(la).pg
    lhs = pg.AdP(la.bracket(x, y))
    rhs = la.bracket(pg.AdP(x), pg.AdP(y))
    assert np.linalg.norm(lhs - rhs) <= 1e-10 * max(1.0, np.linalg.norm(lhs))
    assert np.allclose(pg.AdP(x, pg.h), x)


@SETTINGS
@given(type_and_vectors(1))
def test_h_prime_elements_commute_with_cyclic_pair(args):
    la, (c,) = args
    ap = apposition_data(la)
    x = ap.hprime @ c[: la.rs.rank]
    assert np.linalg.norm(la.bracket(x, ap.e)) <= 1e-9 * max(1.0, np.linalg.norm(x))
    assert np.linalg.norm(la.bracket(x, ap.e_star)) <= 1e-9 * max(1.0, np.linalg.norm(x))


@SETTINGS
@given(st.permutations(list(range(7))))
def test_cycles_roundtrip(perm):
    sigma = tuple(perm)
    assert from_cycles(to_cycles(sigma), 7) == sigma
    inv = tuple(np.argsort(sigma))
    assert compose(sigma, inv) == tuple(range(7))


@SETTINGS
@given(st.permutations(list(range(8))), st.lists(st.integers(1, 10_000), min_size=8, max_size=8, unique=True))
def test_canonical_permutation_recovers_distinct(perm, vals):
    # values must be separated by more than the tie tolerance
    v = np.array(vals) / 1000.0
    sigma = tuple(perm)
    target = apply_perm(v, sigma)
    got, count = canonical_permutation(target, v, tol=1e-9)
    assert count == 1 and got == sigma


@SETTINGS
@given(st.sampled_from(["A2", "A3", "B2", "G2", "D4", "E6"]), st.data())
def test_dispersion_on_shell(t, data):
    la, ap = build_lie_algebra(t), apposition_data(build_lie_algebra(t))
    m = data.draw(st.floats(0.1, 5))
    modes = toda.normal_modes(la, ap, m)
    md = data.draw(st.sampled_from(modes))
    frac = data.draw(st.floats(-1, 1))
    boosted = md.with_momentum(frac * m * md.mu, m)
    assert boosted.shell_residual(m) <= 1e-12 * max(1.0, (m * md.mu) ** 2)
    assert toda.analytic_kg_residual(la, ap, boosted, m) <= 1e-10 * max(1.0, m * m)


@SETTINGS
@given(st.sampled_from(["A2", "C3", "E6"]), st.floats(-3, 3), st.floats(-3, 3))
def test_linear_operator_is_linear(t, a, b):
    la = build_lie_algebra(t)
    ap = apposition_data(la)
    rng = np.random.default_rng(0)
    p, q = rng.normal(size=(2, 6, 6, la.rs.rank))
    L = lambda f: toda.linear_operator(la, ap.e, toda.FieldConfig(f))  # noqa: E731
    assert np.allclose(L(a * p + b * q), a * L(p) + b * L(q))
