"""Chevalley basis, Weyl normalization, Killing form and compact involution.

Basis order is ``[e_alpha for alpha in rs.roots] + [h_1, ..., h_r]`` with
``h_i = [e_{alpha_i}, e_{-alpha_i}]`` the simple coroots.  Structure
constants are stored sparsely as parallel arrays ``(i, j, k, v)`` meaning
``[b_i, b_j] = sum v * b_k``.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .rootsys import RootSystem, SimpleType, build_root_system, cartan_matrix

log = logging.getLogger(__name__)

CACHE_SCHEMA_VERSION = 1
CACHE_ENV = "CARTAN_SPECTRA_CACHE"


class StructureError(RuntimeError):
    pass


# ---------------------------------------------------------------- integer layer


class _ChevalleyConstants:
    """N_{alpha,beta} from extraspecial pairs (all signs +1)."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.order = {a: n for n, a in enumerate(rs.roots)}
        self.pos = rs.positive_roots
        self.memo: dict[tuple, int] = {}
        self.extraspecial: dict[tuple, tuple] = {}
        for xi in self.pos:
            for z in self.pos:
                rest = _sub(xi, z)
                if rs.is_root(rest) and sum(rest) > 0:
                    self.extraspecial[xi] = (z, rest)
                    break

    def p_value(self, a, b) -> int:
        p = 0
        while self.rs.is_root(_sub(b, _scale(p + 1, a))):
            p += 1
        return p

    def sq(self, a) -> Fraction:
        return self.rs.norm2(a)

    def N(self, a, b) -> int:
        s = _add(a, b)
        if not any(s) or not self.rs.is_root(s):
            return 0
        key = (a, b)
        if key not in self.memo:
            self.memo[key] = self._compute(a, b, s)
        return self.memo[key]

    def _compute(self, a, b, s) -> int:
        pa, pb = sum(a) > 0, sum(b) > 0
        if pa and pb:
            if self.order[a] > self.order[b]:
                return -self.N(b, a)
            z1, z2 = self.extraspecial[s]
            if a == z1:
                return self.p_value(a, b) + 1
            total = Fraction(0)
            if self.rs.is_root(_sub(b, z1)):
                total += Fraction(self.N(b, _neg(z1)) * self.N(a, _neg(z2))) / self.sq(_sub(b, z1))
            if self.rs.is_root(_sub(a, z1)):
                total += Fraction(self.N(_neg(z1), a) * self.N(b, _neg(z2))) / self.sq(_sub(a, z1))
            val = self.sq(s) / self.N(z1, z2) * total
            if val.denominator != 1:
                raise StructureError(f"non-integral N for {a}, {b}: {val}")
            return int(val)
        if not pa and not pb:
            return -self.N(_neg(a), _neg(b))
        if not pa:
            return -self.N(b, a)
        # a > 0 > b; use the cyclic relation with g = -(a + b)
        g = _neg(s)
        if sum(s) > 0:
            val = self.sq(g) / self.sq(a) * self.N(b, g)
        else:
            val = self.sq(g) / self.sq(b) * self.N(g, a)
        if val.denominator != 1:
            raise StructureError(f"non-integral N for {a}, {b}: {val}")
        return int(val)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


def _scale(k, a):
    return tuple(k * x for x in a)


def coroot_coefficients(rs: RootSystem, a) -> list[Fraction]:
    """alpha^vee in the basis of simple coroots."""
    n2 = rs.norm2(a)
    return [Fraction(a[i]) * rs.bilinear[i][i] / n2 for i in range(rs.rank)]


def integer_structure(rs: RootSystem) -> list[tuple[int, int, int, int]]:
    """Integer structure constants of the Chevalley basis as (i, j, k, v)."""
    cc = _ChevalleyConstants(rs)
    A = cartan_matrix(rs)
    roots = rs.roots
    nroot = len(roots)
    r = rs.rank
    entries = []
    for ia, a in enumerate(roots):
        for ib, b in enumerate(roots):
            s = _add(a, b)
            if not any(s):
                for i, c in enumerate(coroot_coefficients(rs, a)):
                    if c:
                        if c.denominator != 1:
                            raise StructureError("non-integral coroot")
                        entries.append((ia, ib, nroot + i, int(c)))
            elif rs.is_root(s):
                entries.append((ia, ib, rs.index[s], cc.N(a, b)))
        for i in range(r):
            v = int(sum(int(a[j]) * int(A[j, i]) for j in range(r)))
            if v:
                entries.append((nroot + i, ia, ia, v))
                entries.append((ia, nroot + i, ia, -v))
    return entries


def _bracket_dict(table, x: dict, y: dict) -> dict:
    out: dict = {}
    for i, xi in x.items():
        for j, yj in y.items():
            for k, v in table.get((i, j), ()):
                out[k] = out.get(k, 0) + xi * yj * v
    return {k: v for k, v in out.items() if v != 0}


def jacobi_violations(entries, dim: int, triples) -> int:
    """Count basis triples (exactly) violating the Jacobi identity."""
    table: dict = {}
    for i, j, k, v in entries:
        table.setdefault((int(i), int(j)), []).append((int(k), v))
    bad = 0
    for a, b, c in triples:
        x, y, z = {a: 1}, {b: 1}, {c: 1}
        t1 = _bracket_dict(table, _bracket_dict(table, x, y), z)
        t2 = _bracket_dict(table, _bracket_dict(table, y, z), x)
        t3 = _bracket_dict(table, _bracket_dict(table, z, x), y)
        tot = dict(t1)
        for t in (t2, t3):
            for k, v in t.items():
                tot[k] = tot.get(k, 0) + v
        if any(abs(v) > 1e-10 for v in tot.values()):
            bad += 1
    return bad


def random_triples(dim: int, n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, dim, size=(n, 3))


# ---------------------------------------------------------------- cache


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "cartan_spectra"))


def _cache_path(t: SimpleType) -> Path:
    return cache_dir() / f"{t}.v{CACHE_SCHEMA_VERSION}.json"


def _save_cache(rs: RootSystem, entries, killing_scalars) -> None:
    doc = {
        "schema_version": CACHE_SCHEMA_VERSION,
        "type": str(rs.type),
        "basis": [list(a) for a in rs.roots] + [f"h{i + 1}" for i in range(rs.rank)],
        "structure": [list(e) for e in entries],
        "killing_scalars": [int(v) for v in killing_scalars],
    }
    path = _cache_path(rs.type)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(doc))
        tmp.replace(path)
    except OSError as exc:  # read-only home etc.
        log.warning("could not write structure cache %s: %s", path, exc)


def _load_cache(rs: RootSystem):
    path = _cache_path(rs.type)
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if doc.get("schema_version") != CACHE_SCHEMA_VERSION or doc.get("type") != str(rs.type):
        return None
    if [tuple(a) for a in doc["basis"][: len(rs.roots)]] != list(rs.roots):
        return None
    entries = [tuple(e) for e in doc["structure"]]
    dim = len(rs.roots) + rs.rank
    if jacobi_violations(entries, dim, random_triples(dim, 200, seed=1)):
        log.warning("cached structure constants for %s fail Jacobi; rebuilding", rs.type)
        return None
    return entries, doc["killing_scalars"]


# ---------------------------------------------------------------- the algebra


def _coo(entries, dim, dtype):
    arr = np.array(entries, dtype=np.int64).reshape(-1, 4)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3].astype(dtype)


def killing_matrix(I, J, K, V, dim: int) -> np.ndarray:
    """kappa(b_a, b_b) = tr(ad b_a ad b_b) = sum_{j,k} C[a,j,k] C[b,k,j]."""
    M = sp.csr_matrix((V, (I, J * dim + K)), shape=(dim, dim * dim))
    Mt = sp.csr_matrix((V, (I, K * dim + J)), shape=(dim, dim * dim))
    return (M @ Mt.T).toarray()


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    rs: RootSystem
    int_entries: tuple = field(repr=False)
    killing_scalars: np.ndarray = field(repr=False)  # kappa(e_a, e_-a) before rescaling
    I: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    K: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)  # normalized constants

    @property
    def dim(self) -> int:
        return len(self.rs.roots) + self.rs.rank

    @property
    def nroot(self) -> int:
        return len(self.rs.roots)

    @property
    def cartan_slice(self) -> slice:
        return slice(self.nroot, self.dim)

    def root_index(self, a) -> int:
        return self.rs.index[tuple(a)]

    def basis_vector(self, n: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[n] = 1.0
        return v

    def e(self, a) -> np.ndarray:
        return self.basis_vector(self.root_index(a))

    def h(self, i: int) -> np.ndarray:
        return self.basis_vector(self.nroot + i)

    @cached_property
    def killing(self) -> np.ndarray:
        return killing_matrix(self.I, self.J, self.K, self.V, self.dim)

    @cached_property
    def cartan_gram(self) -> np.ndarray:
        """Killing form on span{h_j}."""
        s = self.cartan_slice
        return self.killing[s, s]

    @cached_property
    def negation(self) -> np.ndarray:
        """Index permutation e_a <-> e_-a, h_j fixed."""
        perm = np.arange(self.dim)
        for n, a in enumerate(self.rs.roots):
            perm[n] = self.rs.index[tuple(-x for x in a)]
        return perm

    @cached_property
    def grades(self) -> np.ndarray:
        """Height of each basis element (0 on the Cartan)."""
        return np.array([sum(a) for a in self.rs.roots] + [0] * self.rs.rank)

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ad_x on the basis (columns are images)."""
        x = np.asarray(x)
        M = np.zeros((self.dim, self.dim), dtype=np.result_type(x, float))
        np.add.at(M, (self.K, self.J), x[self.I] * self.V)
        return M

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x, y = np.asarray(x), np.asarray(y)
        out = np.zeros(self.dim, dtype=np.result_type(x, y, float))
        np.add.at(out, self.K, x[self.I] * y[self.J] * self.V)
        return out

    def kappa(self, x, y) -> complex:
        return complex(np.asarray(x) @ self.killing @ np.asarray(y))


def _normalize(rs: RootSystem, entries, killing_scalars):
    """Rescale e_a -> e_a / sqrt(kappa(e_a, e_-a)); Cartan basis untouched."""
    nroot = len(rs.roots)
    s = np.concatenate([1.0 / np.sqrt(np.asarray(killing_scalars, float)), np.ones(rs.rank)])
    arr = np.array(entries, dtype=np.int64).reshape(-1, 4)
    I, J, K = arr[:, 0], arr[:, 1], arr[:, 2]
    V = arr[:, 3] * s[I] * s[J] / s[K]
    return I, J, K, V


@lru_cache(maxsize=None)
def build_lie_algebra(rs: RootSystem | SimpleType | str, use_cache: bool = True) -> LieAlgebra:
    if not isinstance(rs, RootSystem):
        rs = build_root_system(rs)
    loaded = _load_cache(rs) if use_cache else None
    if loaded is not None:
        entries, kscal = loaded
    else:
        entries = integer_structure(rs)
        dim = len(rs.roots) + rs.rank
        if jacobi_violations(entries, dim, random_triples(dim, 1000)):
            raise StructureError(f"Jacobi identity fails for {rs.type}")
        I, J, K, V = _coo(entries, dim, np.int64)
        kil = killing_matrix(I, J, K, V, dim)
        kscal = [int(kil[n, rs.index[tuple(-x for x in a)]]) for n, a in enumerate(rs.roots)]
        if min(kscal) <= 0:
            raise StructureError("kappa(e_a, e_-a) must be positive")
        if use_cache:
            _save_cache(rs, entries, kscal)
    I, J, K, V = _normalize(rs, entries, kscal)
    return LieAlgebra(
        rs=rs,
        int_entries=tuple(tuple(int(v) for v in e) for e in entries),
        killing_scalars=np.asarray(kscal),
        I=I,
        J=J,
        K=K,
        V=V,
    )


# ---------------------------------------------------------------- compact form


@dataclass(frozen=True)
class StarStructure:
    """x* = P conj(x) with P swapping e_a and e_-a; H(x, y) = kappa(x, y*)."""

    perm: np.ndarray
    hermitian_gram: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.conj(np.asarray(x))[self.perm]

    def realified(self) -> np.ndarray:
        n = len(self.perm)
        P = np.zeros((n, n))
        P[self.perm, np.arange(n)] = 1.0
        return np.block([[P, np.zeros((n, n))], [np.zeros((n, n)), -P]])

    def H(self, x, y) -> complex:
        return complex(np.asarray(x) @ self.hermitian_gram @ np.conj(np.asarray(y)))


class StarError(RuntimeError):
    pass


def star(la: LieAlgebra) -> StarStructure:
    perm = la.negation
    # H(b_a, b_b) = kappa(b_a, b_b*) = kappa[a, perm[b]]
    G = la.killing[:, perm]
    G = 0.5 * (G + G.T)
    if np.linalg.eigvalsh(G).min() <= 1e-8:
        raise StarError("Hermitian form is not positive definite")
    return StarStructure(perm=perm, hermitian_gram=G)


def ad(la: LieAlgebra, x) -> np.ndarray:
    return la.ad(x)


def killing_identification(la: LieAlgebra, a) -> np.ndarray:
    """t_a in the Cartan with kappa(t_a, h) = a(h) for every h."""
    rs = la.rs
    A = cartan_matrix(rs)
    vals = np.array([sum(int(a[j]) * int(A[j, i]) for j in range(rs.rank)) for i in range(rs.rank)], float)
    coef = np.linalg.solve(la.cartan_gram, vals)
    out = np.zeros(la.dim, dtype=complex)
    out[la.cartan_slice] = coef
    return out


def rho_check(la: LieAlgebra) -> np.ndarray:
    """rho^vee with alpha_i(rho^vee) = 1, as an element of the algebra."""
    A = cartan_matrix(la.rs).astype(float)
    out = np.zeros(la.dim, dtype=complex)
    out[la.cartan_slice] = np.linalg.solve(A, np.ones(la.rs.rank))
    return out
