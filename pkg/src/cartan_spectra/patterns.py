"""Eigenvectors of the Cartan matrix and their factorization patterns.

This module never touches the Lie algebra: it diagonalizes A directly
(through its symmetrization) and so serves as an independent oracle for
the mass-operator pipeline in ``apposition``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .rootsys import RootSystem, SimpleType, all_types, bicolor, build_root_system, cartan_matrix

ZERO_TOL = 1e-8
MATCH_TOL = 1e-6


class PatternError(RuntimeError):
    pass


def _normalize(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    nz = np.flatnonzero(np.abs(v) > 1e-9 * np.abs(v).max())
    return -v if v[nz[0]] < 0 else v


@dataclass(frozen=True)
class EigenTable:
    type: SimpleType
    exponents: tuple[int, ...]
    coxeter_number: int
    eigenvalues: np.ndarray
    vectors: np.ndarray  # column i-1 is mu^(i), eigenvector of A

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def vector(self, i: int) -> np.ndarray:
        return self.vectors[:, i - 1]

    def abs_vector(self, i: int) -> np.ndarray:
        return np.abs(self.vectors[:, i - 1])

    def block(self, i: int) -> list[int]:
        k = self.exponents[i - 1]
        return [j + 1 for j, kj in enumerate(self.exponents) if kj == k]

    def projector_diagonal(self, i: int) -> np.ndarray:
        """Diagonal of the orthogonal projector onto the eigenspace containing mu^(i)."""
        cols = [j - 1 for j in self.block(i)]
        Q, _ = np.linalg.qr(self.vectors[:, cols])
        return np.sum(np.abs(Q) ** 2, axis=1)


@lru_cache(maxsize=None)
def eigen_table(rs: RootSystem | SimpleType | str) -> EigenTable:
    if not isinstance(rs, RootSystem):
        rs = build_root_system(rs)
    A = cartan_matrix(rs).astype(float)
    d = 2.0 / rs.lengths  # A = B diag(d)
    S = np.sqrt(d)[:, None] * rs.gram * np.sqrt(d)[None, :]
    w, W = np.linalg.eigh(S)
    h = rs.coxeter_number
    lam = 2 * (1 - np.cos(np.array(rs.exponents) * np.pi / h))
    if np.max(np.abs(w - lam)) > 1e-9:
        raise PatternError(f"eigenvalues of A do not match 2(1 - cos(k pi/h)) for {rs.type}")
    V = W / np.sqrt(d)[:, None]
    V = np.column_stack([_normalize(V[:, n]) for n in range(rs.rank)])
    if np.linalg.norm(A @ V - V * w) > 1e-9:
        raise PatternError("eigenvector residual too large")
    return EigenTable(rs.type, rs.exponents, h, w, V)


def pf_vector(rs: RootSystem) -> np.ndarray:
    v = eigen_table(rs).vector(1)
    if np.all(v < 0):
        v = -v
    if np.any(v <= 0):
        raise PatternError("Perron-Frobenius vector has mixed signs")
    return v


def sine_pf(m: int) -> np.ndarray:
    """(sin(pi/m), ..., sin((m-1) pi/m)), the PF vector of sl(m)."""
    return np.sin(np.arange(1, m) * np.pi / m)


def e8_closed_form() -> np.ndarray:
    mu = 2 * np.cos(np.pi / 30)
    m2, m4, m6 = mu**2, mu**4, mu**6
    return np.array([
        1.0,
        (m2 - 1) / mu,
        mu,
        m2 - 1,
        (m4 - 3 * m2 + 1) / mu,
        m4 - 4 * m2 + 2,
        (m6 - 5 * m4 + 5 * m2 - 1) / mu,
        m6 - 6 * m4 + 9 * m2 - 3,
    ])


def scale_fit(values: np.ndarray, target: np.ndarray) -> float:
    """Relative residual of sorted |values| against a least-squares multiple of sorted |target|."""
    a, b = np.sort(np.abs(values)), np.sort(np.abs(target))
    s = a @ b / (b @ b)
    return float(np.linalg.norm(a - s * b) / np.linalg.norm(a))


# ---------------------------------------------------------------- clusters


def coxeter_number_of(t: SimpleType) -> int:
    n = t.rank
    return {"A": n + 1, "B": 2 * n, "C": 2 * n, "D": 2 * n - 2,
            "E": {6: 12, 7: 18, 8: 30}.get(n, 0), "F": 12, "G": 6}[t.family]


def types_with(rank: int, h: int) -> list[SimpleType]:
    return [t for t in all_types(max(rank, 1)) if t.rank == rank and coxeter_number_of(t) == h]


@dataclass
class Cluster:
    indices: list[int]  # 1-based coordinates
    values: list[float]
    match: str = "unmatched"
    residual: float = math.inf


@dataclass
class ClusterReport:
    i: int
    exponent: int
    p: int
    q: int
    zero_indices: list[int]
    clusters: list[Cluster] = field(default_factory=list)
    conjectural: bool = False
    eigenspace_ambiguous: bool = False

    def to_dict(self) -> dict:
        return {
            "i": self.i, "exponent": self.exponent, "p": self.p, "q": self.q,
            "zero_indices": self.zero_indices,
            "clusters": [
                {"indices": c.indices, "values": c.values, "match": c.match,
                 "residual": c.residual if math.isfinite(c.residual) else None}
                for c in self.clusters
            ],
            "conjectural": self.conjectural,
            "eigenspace_ambiguous": self.eigenspace_ambiguous,
        }


def _components(rs: RootSystem, support: list[int]) -> list[list[int]]:
    left = set(support)
    comps = []
    for s in support:
        if s not in left:
            continue
        comp, stack = [], [s]
        left.discard(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in rs.neighbors[u]:
                if v in left:
                    left.discard(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def cluster_report(rs: RootSystem, table: EigenTable | None = None, i: int = 1, tol: float = ZERO_TOL) -> ClusterReport:
    table = table or eigen_table(rs)
    h = rs.coxeter_number
    k = rs.exponents[i - 1]
    p = math.gcd(k, h)
    v = table.vector(i)
    a = np.abs(v)
    zero = a <= tol * a.max()
    support = [j for j in range(rs.rank) if not zero[j]]
    rep = ClusterReport(
        i=i, exponent=k, p=p, q=h // p,
        zero_indices=[j + 1 for j in range(rs.rank) if zero[j]],
        conjectural=not rs.type.simply_laced,
        eigenspace_ambiguous=len(table.block(i)) > 1,
    )
    for comp in _components(rs, support):
        vals = a[comp]
        cl = Cluster([j + 1 for j in comp], [float(x) for x in vals])
        for t in types_with(len(comp), rep.q):
            res = scale_fit(vals, pf_vector(build_root_system(t)))
            if res < cl.residual:
                cl.residual = res
                if res <= MATCH_TOL:
                    cl.match = str(t)
        rep.clusters.append(cl)
    return rep


# ---------------------------------------------------------------- PF-type permutations


def apply_perm(v: np.ndarray, sigma: tuple[int, ...]) -> np.ndarray:
    """v_sigma = (v_sigma(1), ..., v_sigma(r)); sigma is 0-based image tuple."""
    return np.asarray(v)[list(sigma)]


def compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a o b)(j) = a(b(j))."""
    return tuple(a[b[j]] for j in range(len(a)))


def from_cycles(cycles: list[tuple[int, ...]], r: int) -> tuple[int, ...]:
    """0-based image tuple from 1-based cycle notation."""
    img = list(range(r))
    for cyc in cycles:
        for n, x in enumerate(cyc):
            img[x - 1] = cyc[(n + 1) % len(cyc)] - 1
    return tuple(img)


def to_cycles(sigma: tuple[int, ...]) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for s in range(len(sigma)):
        if s in seen or sigma[s] == s:
            seen.add(s)
            continue
        cyc, x = [], s
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = sigma[x]
        out.append(tuple(cyc))
    return out


def cycle_string(sigma: tuple[int, ...]) -> str:
    cyc = to_cycles(sigma)
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def canonical_permutation(target: np.ndarray, source: np.ndarray, tol: float = 1e-8) -> tuple[tuple[int, ...], int]:
    """sigma with target = source_sigma, pairing equal values in index order.

    Returns the permutation and the number of candidate permutations."""
    r = len(target)
    order_t = sorted(range(r), key=lambda j: (round(target[j] / tol), j))
    order_s = sorted(range(r), key=lambda j: (round(source[j] / tol), j))
    sigma = [0] * r
    for jt, js in zip(order_t, order_s):
        sigma[jt] = js
    count = 1
    groups: dict[int, int] = {}
    for x in source:
        key = int(round(x / tol))
        groups[key] = groups.get(key, 0) + 1
    for g in groups.values():
        count *= math.factorial(g)
    return tuple(sigma), count


@dataclass
class PermutationReport:
    type: str
    conjectural: bool
    entries: list[dict]
    group: list[tuple[int, ...]]
    closed: bool
    expected_order: int
    ambiguous: bool

    def to_dict(self) -> dict:
        return {
            "type": self.type,
            "conjectural": self.conjectural,
            "entries": self.entries,
            "group": [cycle_string(g) for g in self.group],
            "closed": self.closed,
            "order": len(self.group),
            "expected_order": self.expected_order,
            "ambiguous": self.ambiguous,
        }


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def pf_type_analysis(rs: RootSystem, table: EigenTable | None = None, tol: float = 1e-8) -> PermutationReport:
    table = table or eigen_table(rs)
    h = rs.coxeter_number
    v1 = table.abs_vector(1)
    entries = []
    perms = []
    ambiguous = False
    for i, k in enumerate(rs.exponents, start=1):
        if math.gcd(k, h) != 1:
            continue
        vi = table.abs_vector(i)
        res = float(np.max(np.abs(np.sort(vi) - np.sort(v1))))
        sigma, count = canonical_permutation(vi, v1, tol=max(tol, 1e-9) * 100)
        ok = bool(np.max(np.abs(apply_perm(v1, sigma) - vi)) <= tol)
        ambiguous |= count > 1
        entries.append({
            "i": i, "exponent": k, "multiset_residual": res, "multiset_equal": res <= tol,
            "sigma": cycle_string(sigma), "candidates": count, "sigma_reproduces": ok,
        })
        if sigma not in perms:
            perms.append(sigma)
    closed = all(compose(a, b) in perms for a, b in itertools.product(perms, repeat=2))
    return PermutationReport(
        type=str(rs.type), conjectural=not rs.type.simply_laced, entries=entries,
        group=perms, closed=closed, expected_order=euler_phi(h) // 2, ambiguous=ambiguous,
    )


def twist_residual(rs: RootSystem, table: EigenTable | None = None) -> float:
    """max_i min_sign |mu^(r+1-i) -/+ eps mu^(i)| over non-degenerate exponents."""
    table = table or eigen_table(rs)
    eps = np.array(bicolor(rs).color)
    worst = 0.0
    r = rs.rank
    for i in range(1, r + 1):
        if len(table.block(i)) > 1:
            continue
        a, b = table.vector(r + 1 - i), eps * table.vector(i)
        worst = max(worst, min(np.linalg.norm(a - b), np.linalg.norm(a + b)))
    return float(worst)
