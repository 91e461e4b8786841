"""Bicoloured Coxeter element on the reflection representation.

All matrices act on column vectors of simple-root coordinates, so the
operator alpha_i -> sum_j n_ij alpha_j has matrix A.T.  Every matrix here
has integer entries, hence the exact identities are checked in integer
arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rootsys import Bicoloring, RootSystem, bicolor, cartan_matrix

EXPONENT_TOL = 1e-9


class CoxeterError(RuntimeError):
    pass


def reflection_matrix(A: np.ndarray, i: int) -> np.ndarray:
    r = A.shape[0]
    S = np.eye(r, dtype=np.int64)
    S[i, :] -= A[:, i]
    return S


@dataclass(frozen=True)
class CoxeterData:
    s: tuple[np.ndarray, ...]
    c_b: np.ndarray
    c_w: np.ndarray
    c: np.ndarray
    c_inv: np.ndarray
    A_hat: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    coloring: Bicoloring

    def order(self) -> int:
        r = self.c.shape[0]
        M = self.c.copy()
        k = 1
        I = np.eye(r, dtype=np.int64)
        while not np.array_equal(M, I):
            M = M @ self.c
            k += 1
            if k > 10_000:
                raise CoxeterError("Coxeter element has no finite order")
        return k


def coxeter_element(rs: RootSystem, col: Bicoloring | None = None) -> CoxeterData:
    col = col or bicolor(rs)
    A = cartan_matrix(rs).astype(np.int64)
    r = rs.rank
    s = tuple(reflection_matrix(A, i) for i in range(r))
    I = np.eye(r, dtype=np.int64)
    c_b, c_w = I.copy(), I.copy()
    for i in col.black:
        c_b = c_b @ s[i]
    for i in col.white:
        c_w = c_w @ s[i]
    black, white = col.black, col.white
    return CoxeterData(
        s=s,
        c_b=c_b,
        c_w=c_w,
        c=c_b @ c_w,
        c_inv=c_w @ c_b,
        A_hat=A.T.copy(),
        X=A[np.ix_(black, white)],
        Y=A[np.ix_(white, black)],
        coloring=col,
    )


def exponents_of(cd: CoxeterData, rs: RootSystem | None = None) -> list[int]:
    """Exponents read off from the eigenvalue arguments of c."""
    h = cd.order()
    ev = np.linalg.eigvals(cd.c.astype(float))
    k = np.mod(np.angle(ev), 2 * np.pi) * h / (2 * np.pi)
    ks = np.rint(k)
    resid = np.max(np.abs(k - ks)) if len(k) else 0.0
    if resid > EXPONENT_TOL:
        raise CoxeterError(f"eigenvalue arguments off the 2*pi/h lattice by {resid:.2e}")
    out = sorted(int(v) % h for v in ks)
    if rs is not None and tuple(out) != rs.exponents:
        raise CoxeterError(f"exponents {out} disagree with root heights {rs.exponents}")
    return out


def exponent_residual(cd: CoxeterData, rs: RootSystem) -> float:
    """Max distance between sorted eigenvalue arguments of c and 2 pi k_i / h."""
    h = rs.coxeter_number
    ev = np.linalg.eigvals(cd.c.astype(float))
    args = np.sort(np.mod(np.angle(ev), 2 * np.pi))
    # exponents lie in [1, h-1], so arguments stay clear of the 0 / 2 pi seam
    target = np.sort(2 * np.pi * np.array(rs.exponents) / h)
    return float(np.max(np.abs(args - target)))


def cartan_eigenvalue(rs: RootSystem, i: int) -> float:
    """lambda_i = 2(1 - cos(k_i pi / h)) for the 1-based exponent index i."""
    k = rs.exponents[i - 1]
    return 2.0 * (1.0 - np.cos(k * np.pi / rs.coxeter_number))


def exponent_block(rs: RootSystem, i: int) -> list[int]:
    """1-based indices sharing the exponent k_i (two of them for the middle of D_2n)."""
    k = rs.exponents[i - 1]
    return [j + 1 for j, kj in enumerate(rs.exponents) if kj == k]


def _fix_sign(x: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(x) > 1e-12)
    if len(nz) and x[nz[0]] < 0:
        x = -x
    return x


def transpose_eigenspace(rs: RootSystem, i: int) -> np.ndarray:
    """Orthonormal basis (columns) of ker(A.T - lambda_i) from an SVD."""
    A = cartan_matrix(rs).astype(float)
    lam = cartan_eigenvalue(rs, i)
    m = len(exponent_block(rs, i))
    _, sv, Vh = np.linalg.svd(A.T - lam * np.eye(rs.rank))
    if sv[-m] > 1e-8 * max(1.0, sv[0]):
        raise CoxeterError(f"lambda_{i} = {lam} is not an eigenvalue of A^T (sv {sv[-m]:.2e})")
    basis = Vh[-m:].T
    if m == 1:
        basis = _fix_sign(basis[:, 0])[:, None]
    return basis


@dataclass(frozen=True)
class CoxeterEigenpair:
    exponent_index: int
    theta: float
    lam: float
    x: np.ndarray
    x_tilde: np.ndarray
    y: np.ndarray
    basis: np.ndarray  # columns span the A^T eigenspace; 2 columns for the middle of D_2n


def _y_from_x(x: np.ndarray, col: Bicoloring, theta: float) -> np.ndarray:
    eps = np.array(col.color)
    return np.where(eps > 0, np.exp(0.5j * theta), np.exp(-0.5j * theta)) * x


def cartan_eigenpair(rs: RootSystem, cd: CoxeterData, i: int) -> CoxeterEigenpair:
    if not 1 <= i <= rs.rank:
        raise IndexError(i)
    h = rs.coxeter_number
    theta = rs.exponents[i - 1] * np.pi / h
    lam = cartan_eigenvalue(rs, i)
    basis = transpose_eigenspace(rs, i)
    block = exponent_block(rs, i)
    x = basis[:, block.index(i)] if basis.shape[1] > 1 else basis[:, 0]
    if i == 1 and np.any(x <= 0):
        raise CoxeterError("Perron-Frobenius vector is not positive")
    y = _y_from_x(x, cd.coloring, theta)
    ey = np.exp(2j * theta)
    cy = cd.c.astype(float) @ y
    if np.linalg.norm(cy - ey * y) > 1e-9 * np.linalg.norm(y):
        raise CoxeterError(f"c y != exp(2 i theta) y for i={i}")
    return CoxeterEigenpair(i, theta, lam, x, rs.lengths * x, y, basis)


def duality_twist(rs: RootSystem, col: Bicoloring, pair: CoxeterEigenpair) -> CoxeterEigenpair:
    """x_j -> eps(j) x_j, exchanging lambda = 2(1 - cos t) and 2(1 + cos t)."""
    eps = np.array(col.color)
    x = eps * pair.x
    theta = np.pi - pair.theta
    return CoxeterEigenpair(
        exponent_index=rs.rank + 1 - pair.exponent_index,
        theta=theta,
        lam=2.0 * (1.0 - np.cos(theta)),
        x=x,
        x_tilde=rs.lengths * x,
        y=_y_from_x(x, col, theta),
        basis=eps[:, None] * pair.basis,
    )


def split_parts(pair: CoxeterEigenpair, col: Bicoloring) -> tuple[np.ndarray, np.ndarray]:
    eps = np.array(col.color)
    return np.where(eps > 0, pair.x, 0.0), np.where(eps < 0, pair.x, 0.0)


def pairing_check(rs: RootSystem, pair: CoxeterEigenpair, j: int) -> complex:
    """(y, alpha_j) computed with the invariant form."""
    return complex(pair.y @ rs.gram[:, j])


def pairing_prediction(rs: RootSystem, col: Bicoloring, pair: CoxeterEigenpair, j: int) -> complex:
    eps = col.color[j]
    t = pair.theta
    return complex(1j * eps * np.exp(-1j * eps * t / 2) * np.sin(t) * rs.lengths[j] * pair.x[j])


def orbit_decomposition(rs: RootSystem, cd: CoxeterData) -> list[list[tuple[int, ...]]]:
    """Orbits of c on R, each listed as (gamma, c gamma, c^2 gamma, ...)."""
    h = rs.coxeter_number
    remaining = dict.fromkeys(rs.roots)
    orbits = []
    while remaining:
        start = next(iter(remaining))
        orbit = [start]
        v = np.array(start, dtype=np.int64)
        while True:
            v = cd.c @ v
            t = tuple(int(a) for a in v)
            if t == start:
                break
            orbit.append(t)
        for a in orbit:
            del remaining[a]
        if len(orbit) != h:
            raise CoxeterError(f"orbit of size {len(orbit)} != h = {h}")
        orbits.append(orbit)
    if len(orbits) != rs.rank:
        raise CoxeterError(f"{len(orbits)} orbits, expected {rs.rank}")
    return orbits


def colored_simple_orbits(rs: RootSystem, cd: CoxeterData, orbits=None) -> list[int]:
    """Orbit index of eps(i) alpha_i for each i."""
    orbits = orbits if orbits is not None else orbit_decomposition(rs, cd)
    where = {a: n for n, orb in enumerate(orbits) for a in orb}
    out = []
    for i, eps in enumerate(cd.coloring.color):
        a = tuple(eps * int(i == j) for j in range(rs.rank))
        out.append(where[a])
    return out
