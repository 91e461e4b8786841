import math

import numpy as np
import pytest

from cartan_spectra.patterns import (
    apply_perm,
    canonical_permutation,
    cluster_report,
    compose,
    cycle_string,
    e8_closed_form,
    eigen_table,
    euler_phi,
    from_cycles,
    pf_type_analysis,
    pf_vector,
    sine_pf,
    to_cycles,
    twist_residual,
)
from cartan_spectra.rootsys import build_root_system

from conftest import ALL_TYPES


def _unit(v):
    return np.asarray(v) / np.linalg.norm(v)


def test_a2_table():
    t = eigen_table("A2")
    assert np.allclose(t.eigenvalues, [1, 3])
    assert np.allclose(pf_vector(build_root_system("A2")), _unit([1, 1]))


def test_sl12_first_eigenvalue():
    t = eigen_table("A11")
    assert t.eigenvalues[0] == pytest.approx(2 - 2 * math.cos(math.pi / 12), abs=1e-12)


@pytest.mark.parametrize("m", range(2, 13))
def test_a_series_pf_is_sine(m):
    v = pf_vector(build_root_system(f"A{m - 1}"))
    assert np.allclose(v, _unit(sine_pf(m)), atol=1e-10)


def test_a3_pf():
    v = pf_vector(build_root_system("A3"))
    assert np.allclose(v, _unit([math.sqrt(2) / 2, 1, math.sqrt(2) / 2]), atol=1e-12)


def test_e8_closed_form():
    v = pf_vector(build_root_system("E8"))
    assert np.max(np.abs(v - _unit(e8_closed_form()))) <= 1e-10


@pytest.mark.parametrize("t", ALL_TYPES)
def test_table_invariants(t):
    rs = build_root_system(t)
    tab = eigen_table(rs)
    r = rs.rank
    for i in range(1, r + 1):
        if len(tab.block(i)) == 1:
            assert np.allclose(tab.abs_vector(i), tab.abs_vector(r + 1 - i), atol=1e-9)
    assert twist_residual(rs, tab) <= 1e-9
    assert np.all(pf_vector(rs) > 0)
    rep = cluster_report(rs, tab, 1)
    assert rep.zero_indices == [] and len(rep.clusters) == 1
    assert rep.clusters[0].match == t


SL12_CLUSTERS = {
    2: ([6], [[1, 2, 3, 4, 5], [7, 8, 9, 10, 11]], "A5"),
    3: ([4, 8], [[1, 2, 3], [5, 6, 7], [9, 10, 11]], "A3"),
    4: ([3, 6, 9], [[1, 2], [4, 5], [7, 8], [10, 11]], "A2"),
    6: ([2, 4, 6, 8, 10], [[1], [3], [5], [7], [9], [11]], "A1"),
}


@pytest.mark.parametrize("i", sorted(SL12_CLUSTERS))
def test_sl12_clusters(i):
    rs = build_root_system("A11")
    rep = cluster_report(rs, eigen_table(rs), i)
    zeros, clusters, match = SL12_CLUSTERS[i]
    assert rep.zero_indices == zeros
    assert [c.indices for c in rep.clusters] == clusters
    assert all(c.match == match and c.residual <= 1e-8 for c in rep.clusters)
    assert rep.p == len(clusters) and rep.p * rep.q == 12


def test_sl12_fifth_vector_is_permuted_pf():
    rs = build_root_system("A11")
    tab = eigen_table(rs)
    sigma = from_cycles([(1, 5), (7, 11)], 11)
    assert np.allclose(tab.abs_vector(5), apply_perm(tab.abs_vector(1), sigma), atol=1e-8)
    got, count = canonical_permutation(tab.abs_vector(5), tab.abs_vector(1), tol=1e-6)
    assert got == sigma and count > 1


@pytest.mark.parametrize("n", range(3, 13))
def test_a_series_zero_positions(n):
    rs = build_root_system(f"A{n - 1}")
    tab = eigen_table(rs)
    for i in range(1, n):
        rep = cluster_report(rs, tab, i)
        assert len(rep.zero_indices) == rep.p - 1
        assert rep.zero_indices == [j for j in range(1, n) if j % rep.q == 0]


def test_e8_permutations():
    rs = build_root_system("E8")
    rep = pf_type_analysis(rs)
    sigma = from_cycles([(1, 7, 4, 2), (3, 6, 5, 8)], 8)
    by_k = {e["exponent"]: e for e in rep.entries}
    assert by_k[7]["sigma"] == cycle_string(sigma) == "(1 7 4 2)(3 6 5 8)"
    s2 = compose(sigma, sigma)
    s3 = compose(s2, sigma)
    assert by_k[11]["sigma"] == cycle_string(s2)
    assert by_k[13]["sigma"] == cycle_string(s3)
    tab = eigen_table(rs)
    v1 = tab.abs_vector(1)
    for k, s in ((7, sigma), (11, s2), (13, s3)):
        i = rs.exponents.index(k) + 1
        assert np.max(np.abs(tab.abs_vector(i) - apply_perm(v1, s))) <= 1e-10
    assert rep.closed and len(rep.group) == 4 == euler_phi(30) // 2
    assert not rep.ambiguous


def test_identity_permutation_for_first_exponent():
    for t in ("E6", "E7", "D5", "A6"):
        rep = pf_type_analysis(build_root_system(t))
        assert rep.entries[0]["sigma"] == "()"


def test_non_simply_laced_is_flagged():
    rs = build_root_system("G2")
    assert cluster_report(rs, None, 1).conjectural
    assert pf_type_analysis(rs).conjectural


def test_permutation_helpers():
    s = from_cycles([(1, 3, 2)], 4)
    assert to_cycles(s) == [(1, 3, 2)]
    assert cycle_string(tuple(range(4))) == "()"
    v = np.array([10.0, 20.0, 30.0, 40.0])
    assert np.allclose(apply_perm(v, s), [30, 10, 20, 40])
    assert compose(s, compose(s, s)) == tuple(range(4))


def test_d4_eigenspace_ambiguity():
    rs = build_root_system("D4")
    rep = cluster_report(rs, eigen_table(rs), 2)
    assert rep.eigenspace_ambiguous
    d = eigen_table(rs).projector_diagonal(2)
    assert d.sum() == pytest.approx(2.0)
