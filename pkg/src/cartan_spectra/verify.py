"""Full verification run for one simple type, layer by layer."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .apposition import (
    TOL,
    AppositionData,
    apposition_data,
    eigenspace_singular_values,
    spectra,
    verify_apposition,
    verify_mass_spectra,
)
from .chevalley import LieAlgebra, build_lie_algebra, jacobi_violations, random_triples, star
from .coxeter import (
    coxeter_element,
    cartan_eigenpair,
    colored_simple_orbits,
    exponent_block,
    exponent_residual,
    exponents_of,
    orbit_decomposition,
    pairing_check,
    pairing_prediction,
)
from .patterns import eigen_table, pf_type_analysis, pf_vector, scale_fit, twist_residual
from .report import VerificationReport
from .rootsys import RootSystem, SimpleType, build_root_system, standard_exponents

DEFAULT_TOL = {
    **TOL,
    "exponent": 1e-10,
    "pairing": 1e-9,
    "jacobi": 1e-10,
    "killing": 1e-10,
    "adjoint": 1e-10,
    "positivity": 1e-8,
    "cross_oracle": 1e-7,
    "twist": 1e-9,
    "permutation": 1e-8,
}


def verify_coxeter(rs: RootSystem, tol: dict | None = None) -> VerificationReport:
    tol = {**DEFAULT_TOL, **(tol or {})}
    rep = VerificationReport(str(rs.type))
    cd = coxeter_element(rs)
    r, h = rs.rank, rs.coxeter_number
    I = np.eye(r, dtype=np.int64)
    two_minus = 2 * I - cd.A_hat
    rep.add("c_b + c_w = 2I - A^ (exact)", np.abs(cd.c_b + cd.c_w - two_minus).max(), 0)
    rep.add("(2I - A^)^2 = c + c^-1 + 2I (exact)", np.abs(two_minus @ two_minus - cd.c - cd.c_inv - 2 * I).max(), 0)
    rep.add("c c^-1 = I (exact)", np.abs(cd.c @ cd.c_inv - I).max(), 0)
    rep.add("order of c = h", abs(cd.order() - h), 0)
    rep.add("arg eigenvalues of c = 2 pi k_i / h", exponent_residual(cd, rs), tol["exponent"])
    got = exponents_of(cd)
    rep.add("exponents match table", 0 if tuple(got) == standard_exponents(rs.type) else 1, 0,
            detail=" ".join(map(str, got)))
    rep.add("|R| = h r", abs(len(rs.roots) - h * r), 0)
    orbits = orbit_decomposition(rs, cd)
    rep.add("r orbits of size h on R", abs(len(orbits) - r) + sum(abs(len(o) - h) for o in orbits), 0)
    hit = colored_simple_orbits(rs, cd, orbits)
    rep.add("eps(i) alpha_i lie in distinct orbits", r - len(set(hit)), 0)
    worst = 0.0
    for i in range(1, r + 1):
        if len(exponent_block(rs, i)) > 1:
            continue
        pair = cartan_eigenpair(rs, cd, i)
        for j in range(r):
            got_ = pairing_check(rs, pair, j)
            want = pairing_prediction(rs, cd.coloring, pair, j)
            worst = max(worst, abs(got_ - want) / max(1.0, np.linalg.norm(pair.x)))
    rep.add("(y, alpha_j) pairing formula", worst, tol["pairing"])
    return rep


def _float_jacobi(la: LieAlgebra, triples) -> float:
    worst = 0.0
    for a, b, c in triples:
        x, y, z = la.basis_vector(a), la.basis_vector(b), la.basis_vector(c)
        s = (la.bracket(la.bracket(x, y), z) + la.bracket(la.bracket(y, z), x)
             + la.bracket(la.bracket(z, x), y))
        worst = max(worst, float(np.abs(s).max()))
    return worst


def verify_lie_algebra(la: LieAlgebra, tol: dict | None = None, samples: int = 200, seed: int = 0) -> VerificationReport:
    tol = {**DEFAULT_TOL, **(tol or {})}
    rep = VerificationReport(str(la.rs.type))
    d = la.dim
    if d <= 40:
        triples = list(itertools.product(range(d), repeat=3))
    else:
        triples = random_triples(d, 1000, seed)
    bad = jacobi_violations(la.int_entries, d, triples)
    rep.add("Jacobi identity, integer constants (exact)", bad, 0, detail=f"{len(triples)} basis triples")
    sample = random_triples(d, samples, seed + 1)
    rep.add("Jacobi identity, normalized constants", _float_jacobi(la, sample), tol["jacobi"])
    K = la.killing
    neg = la.negation
    n = np.arange(la.nroot)
    rep.add("kappa(e_a, e_-a) = 1", np.abs(K[n, neg[n]] - 1).max(), tol["killing"])
    st = star(la)
    mn = float(np.linalg.eigvalsh(st.hermitian_gram).min())
    rep.add("H positive definite", -mn, -tol["positivity"], detail=f"min eigenvalue {mn:.3e}")
    worst = 0.0
    for a, b, c in random_triples(d, samples, seed + 2):
        x, y, z = la.basis_vector(a), la.basis_vector(b), la.basis_vector(c)
        lhs = st.H(la.bracket(x, y), z)
        rhs = st.H(y, la.bracket(st.apply(x), z))
        worst = max(worst, abs(lhs - rhs))
    rep.add("(ad_x)* = ad_(x*) w.r.t. H", worst, tol["adjoint"], detail=f"{samples} basis triples")
    return rep


def verify_cross_oracle(la: LieAlgebra, ap: AppositionData, tol: dict | None = None) -> VerificationReport:
    """Mass-operator spectra against the direct Cartan-matrix eigenvectors."""
    tol = {**DEFAULT_TOL, **(tol or {})}
    rs = la.rs
    rep = VerificationReport(str(rs.type))
    table = eigen_table(rs)
    worst, seen = 0.0, set()
    for ms in spectra(ap):
        i = ms.exponent_index
        block = tuple(table.block(i))
        if len(block) == 1:
            worst = max(worst, scale_fit(ms.singular_values, table.abs_vector(i)))
        elif block not in seen:
            seen.add(block)
            sv = eigenspace_singular_values(ap, i)
            worst = max(worst, scale_fit(sv, np.sqrt(table.projector_diagonal(i))))
    rep.add("mass spectra ~ |Cartan eigenvectors| (independent solvers)", worst, tol["cross_oracle"])
    return rep


def verify_patterns(rs: RootSystem, tol: dict | None = None) -> VerificationReport:
    tol = {**DEFAULT_TOL, **(tol or {})}
    rep = VerificationReport(str(rs.type))
    table = eigen_table(rs)
    v = pf_vector(rs)
    rep.add("PF vector positive", 0.0 if np.all(v > 0) else 1.0, 0.0)
    rep.add("mu^(r+1-i) = +-eps mu^(i)", twist_residual(rs, table), tol["twist"])
    perm = pf_type_analysis(rs, table)
    if perm.entries:
        worst = max(e["multiset_residual"] for e in perm.entries)
        detail = "conjectural (non-simply-laced)" if perm.conjectural else ""
        if rs.type.simply_laced:
            rep.add("|mu^(i)| is a permutation of the PF vector when gcd(k_i,h)=1", worst, tol["permutation"])
        else:
            # reported, not enforced
            rep.add("|mu^(i)| permutation of PF (informational)", 0.0, 0.0, detail=f"{detail}, residual {worst:.2e}")
    return rep


@dataclass
class TypeVerification:
    type: str
    sections: dict[str, VerificationReport] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.sections.values())

    def failing_sections(self) -> list[str]:
        return [k for k, r in self.sections.items() if not r.passed]

    def to_dict(self) -> dict:
        return {
            "type": self.type,
            "passed": self.passed,
            "sections": {k: [c.to_dict() for c in r.checks] for k, r in self.sections.items()},
        }


def verify_type(t: SimpleType | str, tol: dict | None = None) -> TypeVerification:
    t0 = time.perf_counter()
    rs = build_root_system(t)
    la = build_lie_algebra(rs)
    ap = apposition_data(la)
    out = TypeVerification(str(rs.type))
    out.sections["coxeter"] = verify_coxeter(rs, tol)
    out.sections["lie_algebra"] = verify_lie_algebra(la, tol)
    out.sections["apposition"] = verify_apposition(la, ap, tol)
    out.sections["mass_spectra"] = verify_mass_spectra(la, ap, tol)
    out.sections["cross_oracle"] = verify_cross_oracle(la, ap, tol)
    out.sections["patterns"] = verify_patterns(rs, tol)
    out.seconds = time.perf_counter() - t0
    return out
