"""Principal gradation, cyclic element and the Cartan subalgebra in apposition.

Everything is computed in the normalized Chevalley basis of ``chevalley``.
The principal element is never exponentiated: its adjoint action is the
diagonal operator ``zeta ** height`` on root vectors and the identity on
the Cartan.  Mass operators are built from ``ad`` matrices and compared
against Cartan-matrix eigenvectors from ``coxeter``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
import scipy.linalg as sla

from .chevalley import LieAlgebra, StarStructure, build_lie_algebra, star
from .coxeter import (
    cartan_eigenpair,
    cartan_eigenvalue,
    coxeter_element,
    exponent_block,
)
from .report import VerificationReport
from .rootsys import cartan_matrix

KERNEL_RTOL = 1e-9
ANGLE_TOL = 1e-8


class AppositionError(RuntimeError):
    pass


# ---------------------------------------------------------------- grading


@dataclass(frozen=True)
class PrincipalGrading:
    h: int
    zeta: complex
    grade: np.ndarray  # height mod h of every basis element
    diag: np.ndarray  # eigenvalue of Ad_P on every basis element

    def AdP(self, x: np.ndarray, power: int = 1) -> np.ndarray:
        """Ad_P^power applied to a vector, or to each column of a matrix."""
        d = self.diag ** power
        return d[:, None] * x if np.ndim(x) == 2 else d * x

    def component(self, k: int) -> np.ndarray:
        """Basis indices spanning g_k."""
        return np.flatnonzero(self.grade == k % self.h)


def principal_grading(la: LieAlgebra) -> PrincipalGrading:
    h = la.rs.coxeter_number
    grade = np.mod(la.grades, h)
    zeta = np.exp(2j * np.pi / h)
    return PrincipalGrading(h=h, zeta=zeta, grade=grade, diag=zeta ** grade)


def automorphism_residual(la: LieAlgebra, pg: PrincipalGrading) -> float:
    """max over structure constants of |d_k - d_i d_j|: Ad_P[x,y] = [Ad_P x, Ad_P y]."""
    d = pg.diag
    return float(np.max(np.abs(d[la.K] - d[la.I] * d[la.J])))


# ---------------------------------------------------------------- cyclic element


def cyclic_element(la: LieAlgebra, st: StarStructure | None = None) -> tuple[np.ndarray, np.ndarray]:
    """e = sum sqrt(n_i) e_{alpha_i} + e_{-theta} and its image under *."""
    st = st or star(la)
    rs = la.rs
    e = np.zeros(la.dim, dtype=complex)
    for i, (a, n) in enumerate(zip(rs.simple_roots, rs.marks)):
        e[la.root_index(a)] = np.sqrt(n)
    e[la.root_index(tuple(-x for x in rs.highest_root))] = 1.0
    return e, st.apply(e)


def _null_space(M: np.ndarray, scale: float | None = None) -> np.ndarray:
    if M.shape[1] == 0:
        return np.zeros((0, 0), dtype=complex)
    _, sv, Vh = np.linalg.svd(M)
    scale = scale if scale is not None else (sv[0] if len(sv) else 1.0)
    rank = int(np.sum(sv > KERNEL_RTOL * max(scale, 1e-300)))
    return Vh[rank:].conj().T


def principal_angle(U: np.ndarray, V: np.ndarray, G: np.ndarray | None = None) -> float:
    """Largest principal angle between column spaces (optionally in the metric G)."""
    if G is not None:
        L = np.linalg.cholesky(G)
        U, V = L.conj().T @ U, L.conj().T @ V
    if U.shape[1] != V.shape[1]:
        return np.pi / 2
    if U.shape[1] == 0:
        return 0.0
    return float(np.max(sla.subspace_angles(U, V)))


def centralizer(la: LieAlgebra, e: np.ndarray) -> np.ndarray:
    """Numerical kernel of ad_e (columns), relative SVD cutoff KERNEL_RTOL."""
    K = _null_space(la.ad(e))
    if K.shape[1] != la.rs.rank:
        raise AppositionError(f"dim Z(e) = {K.shape[1]}, expected rank {la.rs.rank}")
    return K


# ---------------------------------------------------------------- the apposition data


def _fix_phase(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-9 * np.abs(v).max())
    c = v[nz[0]]
    return v * (abs(c) / c)


@dataclass
class AppositionData:
    la: LieAlgebra
    st: StarStructure
    pg: PrincipalGrading
    e: np.ndarray
    e_star: np.ndarray
    hprime: np.ndarray  # dim x r, columns are the graded line vectors
    line_grades: list[int]  # grade k_i of column i

    @property
    def rank(self) -> int:
        return self.la.rs.rank

    def line(self, i: int) -> np.ndarray:
        """Unit vector e^(i) of the graded line for 1-based exponent index i."""
        return self.hprime[:, i - 1]

    def line_space(self, i: int) -> np.ndarray:
        """All of h' cap g_{k_i} (two columns for the middle exponent of D_2n)."""
        cols = [j - 1 for j in exponent_block(self.la.rs, i)]
        return self.hprime[:, cols]

    @cached_property
    def _orbits(self):
        return _orbit_root_vectors(self)

    @property
    def orbit_vectors(self) -> np.ndarray:
        """Array (r, h, dim): orbit_vectors[i, k] = Ad_P^k e_{gamma_i}."""
        return self._orbits[0]

    @property
    def hermitian_metric(self) -> np.ndarray:
        return self.st.hermitian_gram

    @cached_property
    def kostant_basis(self) -> np.ndarray:
        """Rows a_i = sum over the orbit Omega_i of its root vectors."""
        return self.orbit_vectors.sum(axis=1)

    def gamma(self, i: int, x: np.ndarray) -> complex:
        """<gamma_i, x> for x in h', read off from [x, e_gamma_i]."""
        v = self.orbit_vectors[i, 0]
        w = self.la.bracket(x, v)
        return complex(self.st.H(w, v) / self.st.H(v, v))


def graded_lines(la: LieAlgebra, e: np.ndarray, pg: PrincipalGrading) -> tuple[np.ndarray, list[int]]:
    """Kernel of ad_e on each graded piece g_k; unit vectors with fixed phase."""
    ade = la.ad(e)
    scale = np.linalg.norm(ade, 2)
    cols, grades = [], []
    for k in range(pg.h):
        idx = pg.component(k)
        N = _null_space(ade[:, idx], scale)
        if N.shape[1] == 0:
            continue
        if k == 0:
            raise AppositionError("Z(e) meets the Cartan subalgebra")
        # root vectors are H-orthonormal, so the SVD basis already is
        for q in range(N.shape[1]):
            v = np.zeros(la.dim, dtype=complex)
            v[idx] = N[:, q]
            cols.append(_fix_phase(v))
            grades.append(k)
    if grades != sorted(la.rs.exponents):
        raise AppositionError(f"graded kernel sits in grades {grades}, exponents {la.rs.exponents}")
    return np.array(cols).T, grades


@lru_cache(maxsize=None)
def apposition_data(la: LieAlgebra) -> AppositionData:
    st = star(la)
    pg = principal_grading(la)
    e, es = cyclic_element(la, st)
    hp, grades = graded_lines(la, e, pg)
    return AppositionData(la=la, st=st, pg=pg, e=e, e_star=es, hprime=hp, line_grades=grades)


def build(type_or_rs) -> AppositionData:
    return apposition_data(build_lie_algebra(type_or_rs))


# ---------------------------------------------------------------- root vectors of h'


def _orthonormalizer(la: LieAlgebra) -> tuple[np.ndarray, np.ndarray]:
    """W, W^{-1} taking coefficient vectors to H-orthonormal coordinates."""
    G = la.cartan_gram
    L = np.linalg.cholesky(G)
    W = np.eye(la.dim, dtype=complex)
    Winv = np.eye(la.dim, dtype=complex)
    s = la.cartan_slice
    W[s, s] = L.T
    Winv[s, s] = np.linalg.inv(L.T)
    return W, Winv


def _orbit_root_vectors(ap: AppositionData, seed: int = 12345):
    """Joint eigenvectors of ad(h') grouped into Ad_P-orbits, e_c^k = Ad_P^k e_c^0."""
    la, pg = ap.la, ap.pg
    rs = la.rs
    h, r = pg.h, rs.rank
    rng = np.random.default_rng(seed)
    coef = rng.normal(size=r) + 1j * rng.normal(size=r)
    x = ap.hprime @ coef
    W, Winv = _orthonormalizer(la)
    adx = W @ la.ad(x) @ Winv  # normal in these coordinates
    T, Z = sla.schur(adx, output="complex")
    ev = np.diag(T)
    off = np.linalg.norm(np.triu(T, 1)) / np.linalg.norm(T)
    if off > 1e-8:
        raise AppositionError(f"ad_x is not normal (off-diagonal Schur mass {off:.2e})")
    scale = np.abs(ev).max()
    roots_mask = np.abs(ev) > 1e-8 * scale
    if int(np.sum(~roots_mask)) != r:
        raise AppositionError("kernel of a generic element of h' has wrong dimension")
    vals = ev[roots_mask]
    gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(len(vals)) * scale
    if gaps.min() < 1e-6 * scale:
        raise AppositionError("degenerate joint eigenspaces for a generic element of h'")
    Zr = Z[:, roots_mask]
    unassigned = list(range(Zr.shape[1]))
    orbits = []
    while unassigned:
        start = unassigned[0]
        v0 = Winv @ Zr[:, start]
        orbit = [v0]
        members = []
        v = v0
        for k in range(h):
            u = W @ v
            overlaps = np.abs(Zr.conj().T @ u)
            j = int(np.argmax(overlaps))
            if abs(overlaps[j] - 1.0) > 1e-8:
                raise AppositionError("Ad_P does not permute root lines of h'")
            if j in members:
                break
            members.append(j)
            v = pg.AdP(v)
            orbit.append(v)
        if len(members) != h:
            raise AppositionError(f"orbit of size {len(members)}, expected h = {h}")
        for j in members:
            unassigned.remove(j)
        orbits.append(np.array(orbit[:h]))
    if len(orbits) != r:
        raise AppositionError(f"{len(orbits)} orbits, expected r = {r}")
    return np.array(orbits), x


def orbit_root_vectors(la: LieAlgebra, ap: AppositionData | None = None) -> np.ndarray:
    ap = ap or apposition_data(la)
    return ap.orbit_vectors


def kostant_basis(ap: AppositionData) -> np.ndarray:
    return ap.kostant_basis


# ---------------------------------------------------------------- mass operators


@dataclass
class MassSpectrum:
    exponent_index: int
    exponent: int
    M_tilde: np.ndarray
    gram: np.ndarray
    eigenvalues: np.ndarray  # ascending, from the H-orthonormalized Hermitian problem
    singular_values: np.ndarray  # square roots of the eigenvalues, computed directly
    leakage: float  # relative part of M_tilde(h) outside h
    selfadjoint_residual: float
    signed_roots: np.ndarray | None = None
    matched_vector: np.ndarray | None = None
    scale: float | None = None
    multiset_residual: float | None = None
    cartan_residual: float | None = None
    eigenspace_level: bool = False


def _cartan_block_of(ap: AppositionData, x: np.ndarray, grade: int) -> np.ndarray:
    """Matrix of ad_x : h -> g_grade in H-orthonormal coordinates on h."""
    la = ap.la
    rows = ap.pg.component(grade)
    L = np.linalg.cholesky(la.cartan_gram)
    S = la.ad(x)[np.ix_(rows, np.arange(la.nroot, la.dim))]
    return S @ np.linalg.inv(L.T)


def mass_operator_matrix(ap: AppositionData, x: np.ndarray) -> tuple[np.ndarray, float]:
    """ad_x ad_{x*} restricted to h (coroot basis) and the leakage out of h."""
    la = ap.la
    xs = ap.st.apply(x)
    full = la.ad(x) @ la.ad(xs)
    s = la.cartan_slice
    cols = full[:, s]
    leak = np.linalg.norm(np.delete(cols, np.arange(la.nroot, la.dim), axis=0))
    return cols[s, :], float(leak / max(np.linalg.norm(cols), 1e-300))


def _sorted_fit(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Least-squares scale s with sort(a) ~ s sort(b); relative residual."""
    a, b = np.sort(np.abs(a)), np.sort(np.abs(b))
    s = float(a @ b / (b @ b))
    return s, float(np.linalg.norm(a - s * b) / np.linalg.norm(a))


def signed_roots_from(sigma: np.ndarray, xt: np.ndarray) -> np.ndarray:
    """Pair sorted |x~| with sorted sigma (stable ties) and inherit the signs of x~."""
    order = np.argsort(np.abs(xt), kind="stable")
    out = np.zeros(len(xt))
    out[order] = np.sort(sigma)
    return np.sign(xt) * out


def mass_operator(la: LieAlgebra, ap: AppositionData, i: int) -> MassSpectrum:
    rs = la.rs
    k = rs.exponents[i - 1]
    x = ap.line(i)
    M, leak = mass_operator_matrix(ap, x)
    G = la.cartan_gram
    GM = G @ M
    sa = float(np.linalg.norm(GM - GM.conj().T) / max(np.linalg.norm(GM), 1e-300))
    ev = sla.eigh(0.5 * (GM + GM.conj().T), G, eigvals_only=True)
    if ev.min() < -1e-8 * max(ev.max(), 1.0):
        raise AppositionError(f"negative mass eigenvalue {ev.min():.2e}")
    # M~ = S^* S with S = ad_{x*}: h -> g_{-k}; singular values avoid sqrt round-off near 0
    sigma = np.sort(sla.svdvals(_cartan_block_of(ap, ap.st.apply(x), -k)))
    ms = MassSpectrum(i, k, M, G, ev, sigma, leak, sa)
    if len(exponent_block(rs, i)) == 1:
        cd = coxeter_element(rs)
        pair = cartan_eigenpair(rs, cd, i)
        xt = pair.x_tilde
        s, res = _sorted_fit(sigma, xt)
        mu = signed_roots_from(sigma, xt)
        A = cartan_matrix(rs).astype(float)
        lam = cartan_eigenvalue(rs, i)
        ms.signed_roots = mu
        ms.matched_vector = xt
        ms.scale = s
        ms.multiset_residual = res
        ms.cartan_residual = float(np.linalg.norm(A @ mu - lam * mu) / np.linalg.norm(mu))
    else:
        ms.eigenspace_level = True
    return ms


def eigenspace_singular_values(ap: AppositionData, i: int) -> np.ndarray:
    """Square roots of the spectrum of sum_k ad_{e_k} ad_{e_k*} over an H-orthonormal basis of the line."""
    k = ap.la.rs.exponents[i - 1]
    X = ap.line_space(i)
    blocks = [_cartan_block_of(ap, ap.st.apply(X[:, q]), -k) for q in range(X.shape[1])]
    return np.sort(sla.svdvals(np.vstack(blocks)))


def cartan_projector_diagonal(rs, i: int) -> np.ndarray:
    """diag of the orthogonal projector onto the lambda_i eigenspace of the symmetrized A."""
    from .patterns import eigen_table  # local import: patterns is the independent oracle

    table = eigen_table(rs)
    return table.projector_diagonal(i)


# ---------------------------------------------------------------- verification


TOL = {
    "commutator": 1e-10,
    "leakage": 1e-10,
    "selfadjoint": 1e-10,
    "multiset": 1e-8,
    "cartan": 1e-8,
    "apposition": 1e-8,
    "identity": 1e-8,
}


def spectra(ap: AppositionData) -> list[MassSpectrum]:
    return [mass_operator(ap.la, ap, i) for i in range(1, ap.rank + 1)]


def commutator_norm(ap: AppositionData, specs: list[MassSpectrum] | None = None) -> float:
    specs = specs or spectra(ap)
    worst = 0.0
    for a, b in itertools.combinations(specs, 2):
        C = a.M_tilde @ b.M_tilde - b.M_tilde @ a.M_tilde
        d = np.linalg.norm(a.M_tilde) * np.linalg.norm(b.M_tilde)
        if d > 0:
            worst = max(worst, float(np.linalg.norm(C) / d))
    return worst


def verify_mass_spectra(la: LieAlgebra, ap: AppositionData | None = None, tol: dict | None = None) -> VerificationReport:
    ap = ap or apposition_data(la)
    tol = {**TOL, **(tol or {})}
    rs = la.rs
    rep = VerificationReport(str(rs.type))
    specs = spectra(ap)
    done_blocks = set()
    for ms in specs:
        i = ms.exponent_index
        tag = f"i={i} (k={ms.exponent})"
        rep.add(f"mass {tag}: M~ preserves h", ms.leakage, tol["leakage"])
        rep.add(f"mass {tag}: H-selfadjoint", ms.selfadjoint_residual, tol["selfadjoint"])
        rep.add(f"mass {tag}: nonnegative", max(0.0, -ms.eigenvalues.min()), tol["multiset"])
        if not ms.eigenspace_level:
            rep.add(f"mass {tag}: sqrt spectrum ~ |x~| multiset", ms.multiset_residual, tol["multiset"])
            rep.add(f"mass {tag}: signed roots are an A-eigenvector", ms.cartan_residual, tol["cartan"])
        else:
            block = tuple(exponent_block(rs, i))
            if block in done_blocks:
                continue
            done_blocks.add(block)
            sv = eigenspace_singular_values(ap, i)
            target = np.sqrt(np.clip(cartan_projector_diagonal(rs, i), 0, None))
            _, res = _sorted_fit(sv, target)
            rep.add(f"mass {tag}: eigenspace-level sqrt spectrum ~ sqrt diag(projector)", res, tol["multiset"],
                    detail="doubled exponent")
    pf = specs[0].signed_roots
    rep.add("mass i=1: Perron-Frobenius signs positive", 0.0 if np.all(pf > 0) else 1.0, 0.0)
    rep.add("mass operators commute", commutator_norm(ap, specs), tol["commutator"])
    return rep


def verify_apposition(la: LieAlgebra, ap: AppositionData | None = None, tol: dict | None = None,
                      samples: int = 20, seed: int = 0) -> VerificationReport:
    """[e,e*] = 0, Z(e) = Z(e*) abelian of dim r, Ad_P spectrum on h', root-vector and Kostant-basis identities."""
    ap = ap or apposition_data(la)
    tol = {**TOL, **(tol or {})}
    rs = la.rs
    pg, st = ap.pg, ap.st
    rep = VerificationReport(str(rs.type))
    rng = np.random.default_rng(seed)
    h, r = pg.h, rs.rank

    rep.add("Ad_P is an automorphism", automorphism_residual(la, pg), 1e-10)
    comm = np.linalg.norm(la.bracket(ap.e, ap.e_star)) / np.linalg.norm(ap.e) ** 2
    rep.add("[e, e*] = 0", comm, tol["apposition"])
    Ze = centralizer(la, ap.e)
    Zs = centralizer(la, ap.e_star)
    rep.add("dim Z(e) = r", abs(Ze.shape[1] - r), 0)
    rep.add("Z(e) = Z(e*)", principal_angle(Ze, Zs), tol["apposition"])
    rep.add("graded lines span Z(e)", principal_angle(Ze, ap.hprime), tol["apposition"])
    worst = 0.0
    for a, b in itertools.combinations(range(r), 2):
        worst = max(worst, np.linalg.norm(la.bracket(ap.hprime[:, a], ap.hprime[:, b])))
    rep.add("Z(e) abelian", worst, tol["apposition"])
    rep.add("e^(1) proportional to e", principal_angle(ap.line(1)[:, None], ap.e[:, None]), tol["apposition"])

    # Ad_P restricted to h' has eigenvalues zeta^{k_i}
    Q = ap.hprime
    R = np.linalg.lstsq(Q, pg.AdP(Q), rcond=None)[0]
    stable = np.linalg.norm(Q @ R - pg.AdP(Q))
    rep.add("Ad_P(h') in h'", stable, tol["apposition"])
    ev = np.linalg.eigvals(R)
    target = pg.zeta ** np.array(rs.exponents)
    used = np.zeros(len(target), bool)
    spec_res = 0.0
    for z in ev:
        d = np.abs(target - z) + used * 10
        j = int(np.argmin(d))
        used[j] = True
        spec_res = max(spec_res, float(d[j]))
    rep.add("spectrum of Ad_P on h' = {zeta^k_i}", spec_res, tol["apposition"])
    order_ok = np.allclose(np.linalg.matrix_power(R, h), np.eye(r), atol=1e-8) and all(
        not np.allclose(np.linalg.matrix_power(R, d), np.eye(r), atol=1e-8) for d in range(1, h)
    )
    rep.add("Ad_P|h' has order h", 0.0 if order_ok else 1.0, 0.0)

    # star exchanges the lines of k_i and h - k_i
    worst = 0.0
    for i in range(1, r + 1):
        j = r + 1 - i
        worst = max(worst, principal_angle(st.apply(ap.line_space(i)), ap.line_space(j)))
    rep.add("(h'^(i))* = h'^(r+1-i)", worst, tol["apposition"])

    # orbit root vectors and the Kostant basis
    O = ap.orbit_vectors
    rep.add("r orbits of size h", abs(O.shape[0] - r) + abs(O.shape[1] - h), 0)
    worst = 0.0
    for _ in range(samples):
        n = int(rng.integers(r))
        m = ap.line_grades[n]
        x = ap.hprime[:, n] * (rng.normal() + 1j * rng.normal())
        i = int(rng.integers(r))
        k = int(rng.integers(h))
        g = ap.gamma(i, x)
        lhs = la.bracket(x, O[i, k])
        rhs = pg.zeta ** (-k * m) * g * O[i, k]
        worst = max(worst, np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), np.linalg.norm(x)))
    rep.add("[x, e_c^k(gamma)] = zeta^-km <gamma,x> e_c^k(gamma)", worst, tol["identity"])

    a = ap.kostant_basis
    off_h = np.linalg.norm(a[:, : la.nroot]) / np.linalg.norm(a)
    rep.add("Kostant a_i lie in h", off_h, tol["identity"])
    fix = max(np.linalg.norm(pg.AdP(a[i]) - a[i]) / np.linalg.norm(a[i]) for i in range(r))
    rep.add("Ad_P(a_i) = a_i", fix, tol["identity"])
    sv = np.linalg.svd(a[:, la.cartan_slice], compute_uv=False)
    rep.add("a_1..a_r is a basis of h", 0.0 if sv[-1] > 1e-8 * sv[0] else 1.0, 0.0)

    worst = 0.0
    grades = ap.line_grades
    for nx, mx in enumerate(grades):
        for ny, my in enumerate(grades):
            if (mx + my) % h:
                continue
            x, y = ap.hprime[:, nx], ap.hprime[:, ny]
            for i in range(r):
                lhs = la.bracket(y, la.bracket(x, a[i]))
                rhs = ap.gamma(i, y) * ap.gamma(i, x) * a[i]
                worst = max(worst, np.linalg.norm(lhs - rhs) / np.linalg.norm(a[i]))
    rep.add("[y,[x,a_i]] = <gamma,y><gamma,x> a_i", worst, tol["identity"])

    worst = 0.0
    for n in range(r):
        x = ap.hprime[:, n]
        M, _ = mass_operator_matrix(ap, x)
        for i in range(r):
            ai = a[i, la.cartan_slice]
            lam = abs(ap.gamma(i, x)) ** 2
            worst = max(worst, np.linalg.norm(M @ ai - lam * ai) / np.linalg.norm(ai))
    rep.add("a_i eigenvector of M~ with eigenvalue |gamma_i(e^(j))|^2", worst, tol["identity"])
    return rep
