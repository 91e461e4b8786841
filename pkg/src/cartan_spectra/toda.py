"""Affine Toda field equations on a periodic 2-d lattice.

Fields take values in the Cartan subalgebra and are stored as coroot
coordinates, shape ``(nx, ny, r)``.  Nothing here time-integrates the
equations; only residuals and linearizations are evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from .apposition import AppositionData, commutator_norm, mass_operator_matrix, spectra
from .chevalley import LieAlgebra


class TodaError(ValueError):
    pass


@dataclass
class FieldConfig:
    phi: np.ndarray  # (nx, ny, r) complex coroot coordinates
    dx: float = 0.1
    dy: float = 0.1
    mass_param: float = 1.0

    @property
    def shape(self) -> tuple[int, int]:
        return self.phi.shape[:2]

    @classmethod
    def zeros(cls, rank: int, n: int = 64, spacing: float = 0.1, m: float = 1.0) -> "FieldConfig":
        return cls(np.zeros((n, n, rank), dtype=complex), spacing, spacing, m)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        nx, ny = self.shape
        return np.meshgrid(np.arange(nx) * self.dx, np.arange(ny) * self.dy, indexing="ij")


@dataclass(frozen=True)
class NormalMode:
    j: int
    mu: float
    y: np.ndarray  # coroot coordinates, H-orthonormal
    k: float
    omega: float

    def shell_residual(self, m: float) -> float:
        return abs(self.k**2 + self.omega**2 - (m * self.mu) ** 2)

    def with_momentum(self, k: float, m: float) -> "NormalMode":
        w2 = (m * self.mu) ** 2 - k**2
        if w2 < 0:
            raise TodaError("momentum exceeds the mass shell")
        return replace(self, k=k, omega=float(np.sqrt(w2)))

    def field(self, cfg: FieldConfig, amplitude: complex = 1.0) -> np.ndarray:
        X1, X2 = cfg.coords()
        return amplitude * np.exp(1j * (self.k * X1 + self.omega * X2))[..., None] * self.y


# ---------------------------------------------------------------- adjoint exponentials


def adjoint_exp(la: LieAlgebra, x: np.ndarray) -> np.ndarray:
    """exp(ad_x) by scaling and squaring (dense)."""
    return sla.expm(la.ad(x))


def _cartan_vector(la: LieAlgebra, coroot: np.ndarray) -> np.ndarray:
    v = np.zeros(la.dim, dtype=complex)
    v[la.cartan_slice] = coroot
    return v


def _root_pairings(la: LieAlgebra) -> np.ndarray:
    """P[n, i] = alpha_n(h_i) so that alpha_n(phi) = P @ phi for coroot coordinates phi."""
    from .rootsys import cartan_matrix

    A = cartan_matrix(la.rs)
    R = np.array(la.rs.roots)
    return R @ A


def _Ad_exp_on(la: LieAlgebra, phi: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Ad_{exp(phi)} x for Cartan-valued phi of shape (..., r); ad_phi is diagonal on root vectors."""
    P = _root_pairings(la)
    w = np.exp(phi @ P.T)  # (..., nroot)
    out = np.broadcast_to(x, phi.shape[:-1] + (la.dim,)).astype(complex).copy()
    out[..., : la.nroot] *= w
    return out


# ---------------------------------------------------------------- Lagrangian and equations


def _grad(phi: np.ndarray, dx: float, dy: float) -> tuple[np.ndarray, np.ndarray]:
    d1 = (np.roll(phi, -1, 0) - np.roll(phi, 1, 0)) / (2 * dx)
    d2 = (np.roll(phi, -1, 1) - np.roll(phi, 1, 1)) / (2 * dy)
    return d1, d2


def laplacian(phi: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Periodic 5-point Laplacian."""
    return (
        (np.roll(phi, -1, 0) - 2 * phi + np.roll(phi, 1, 0)) / dx**2
        + (np.roll(phi, -1, 1) - 2 * phi + np.roll(phi, 1, 1)) / dy**2
    )


def lagrangian_density(la: LieAlgebra, e: np.ndarray, e_star: np.ndarray, cfg: FieldConfig,
                       point: tuple[int, int]) -> complex:
    """1/2 sum_a (d_a phi, d_a phi) - m^2 (Ad_exp(phi) e, e*) at one lattice point."""
    G = la.cartan_gram
    d1, d2 = _grad(cfg.phi, cfg.dx, cfg.dy)
    i, j = point
    kin = 0.5 * (d1[i, j] @ G @ d1[i, j] + d2[i, j] @ G @ d2[i, j])
    g = adjoint_exp(la, _cartan_vector(la, cfg.phi[i, j]))
    return complex(kin - cfg.mass_param**2 * la.kappa(g @ e, e_star))


def potential(la: LieAlgebra, e: np.ndarray, e_star: np.ndarray, phi: np.ndarray, m: float) -> complex:
    """-m^2 (Ad_exp(phi) e, e*) for a single Cartan value phi (coroot coordinates)."""
    g = adjoint_exp(la, _cartan_vector(la, phi))
    return complex(-(m**2) * la.kappa(g @ e, e_star))


@dataclass
class EomResidual:
    cartan: np.ndarray  # (nx, ny, r) component in h, coroot coordinates
    off_cartan: np.ndarray  # (nx, ny) norm of the component outside h

    def max_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.cartan, axis=-1)))


def _brackets_with(la: LieAlgebra, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """[X[..., :], y] for a stack of algebra elements X."""
    ady = la.ad(y)
    return -(X @ ady.T)


def eom_residual(la: LieAlgebra, e: np.ndarray, e_star: np.ndarray, cfg: FieldConfig) -> EomResidual:
    """D_e(phi) = Lap(phi) + m^2 [Ad_exp(phi) e, e*] on the lattice."""
    lap = laplacian(cfg.phi, cfg.dx, cfg.dy)
    Ade = _Ad_exp_on(la, cfg.phi, e)
    br = _brackets_with(la, Ade, e_star)
    s = la.cartan_slice
    cart = lap + cfg.mass_param**2 * br[..., s]
    off = np.linalg.norm(br[..., : la.nroot], axis=-1) * cfg.mass_param**2
    return EomResidual(cart, off)


def linear_operator(la: LieAlgebra, e: np.ndarray, cfg: FieldConfig) -> np.ndarray:
    """Delta_e(phi) = Lap(phi) + m^2 ad_e ad_e* phi, coroot coordinates."""
    ap_M = _mass_square(la, e)
    return laplacian(cfg.phi, cfg.dx, cfg.dy) + cfg.mass_param**2 * cfg.phi @ ap_M.T


def _mass_square(la: LieAlgebra, e: np.ndarray) -> np.ndarray:
    from .chevalley import star

    es = star(la).apply(e)
    full = la.ad(e) @ la.ad(es)
    s = la.cartan_slice
    return full[s, s]


# ---------------------------------------------------------------- normal modes


def normal_modes(la: LieAlgebra, ap: AppositionData, m: float = 1.0, e: np.ndarray | None = None) -> list[NormalMode]:
    """Rest-frame plane waves of the Klein-Gordon linearization, masses ascending."""
    e = ap.e if e is None else e
    M, _ = mass_operator_matrix(ap, e)
    G = la.cartan_gram
    GM = G @ M
    w, Y = sla.eigh(0.5 * (GM + GM.conj().T), G)
    w = np.clip(w.real, 0.0, None)
    mus = np.sqrt(w)
    return [NormalMode(j + 1, float(mus[j]), Y[:, j], 0.0, float(m * mus[j])) for j in range(len(mus))]


def mode_eigen_residual(la: LieAlgebra, ap: AppositionData, mode: NormalMode, e: np.ndarray | None = None) -> float:
    e = ap.e if e is None else e
    M, _ = mass_operator_matrix(ap, e)
    return float(np.linalg.norm(M @ mode.y - mode.mu**2 * mode.y) / np.linalg.norm(mode.y))


def analytic_kg_residual(la: LieAlgebra, ap: AppositionData, mode: NormalMode, m: float,
                         e: np.ndarray | None = None) -> float:
    """|(-k^2 - w^2) y + m^2 M_e^2 y| for the exact (non-discretized) plane wave."""
    e = ap.e if e is None else e
    M, _ = mass_operator_matrix(ap, e)
    lhs = -(mode.k**2 + mode.omega**2) * mode.y + m**2 * (M @ mode.y)
    return float(np.linalg.norm(lhs) / np.linalg.norm(mode.y))


def _check_commensurate(cfg: FieldConfig, mode: NormalMode, tol: float = 1e-9) -> None:
    nx, ny = cfg.shape
    for kk, L in ((mode.k, nx * cfg.dx), (mode.omega, ny * cfg.dy)):
        q = kk * L / (2 * np.pi)
        if abs(q - round(q)) > tol:
            raise TodaError(f"wave number {kk} incommensurate with period {L}")


def kg_residual(la: LieAlgebra, e: np.ndarray, mode: NormalMode, cfg: FieldConfig) -> float:
    """Max-norm of the discrete Delta_e(phi_j) over the lattice, relative to max |phi_j|."""
    _check_commensurate(cfg, mode)
    cfg = replace(cfg, phi=mode.field(cfg))
    res = linear_operator(la, e, cfg)
    return float(np.max(np.linalg.norm(res, axis=-1)) / np.max(np.linalg.norm(cfg.phi, axis=-1)))


def commensurate_config(mode: NormalMode, rank: int, m: float, n: int, winding: tuple[int, int] = (1, 1)) -> tuple[FieldConfig, NormalMode]:
    """Square periodic lattice of n x n points on which the on-shell plane wave of ``mode`` is periodic."""
    a, b = winding
    if mode.mu <= 0:
        raise TodaError("massless mode")
    L = 2 * np.pi * np.hypot(a, b) / (m * mode.mu)
    k, w = 2 * np.pi * a / L, 2 * np.pi * b / L
    cfg = FieldConfig(np.zeros((n, n, rank), dtype=complex), L / n, L / n, m)
    return cfg, replace(mode, k=k, omega=w)


def fit_order(h: np.ndarray, err: np.ndarray) -> float:
    """Slope of log(err) against log(h)."""
    return float(np.polyfit(np.log(h), np.log(err), 1)[0])


def kg_convergence(la: LieAlgebra, e: np.ndarray, mode: NormalMode, m: float = 1.0,
                   sizes=(16, 32, 64, 128)) -> tuple[np.ndarray, np.ndarray, float]:
    """Discrete KG residual under grid refinement; returns spacings, residuals, fitted order."""
    hs, errs = [], []
    for n in sizes:
        cfg, md = commensurate_config(mode, la.rs.rank, m, n)
        hs.append(cfg.dx)
        errs.append(kg_residual(la, e, md, cfg))
    hs, errs = np.array(hs), np.array(errs)
    return hs, errs, fit_order(hs, errs)


def linearization_study(la: LieAlgebra, e: np.ndarray, e_star: np.ndarray, mode: NormalMode, cfg: FieldConfig,
                        eps=(1e-2, 1e-3, 1e-4)) -> tuple[np.ndarray, np.ndarray, float]:
    """max |D_e(eps phi) - eps Delta_e(phi)| for a normal mode phi; returns eps, gaps, fitted slope."""
    phi = mode.field(cfg)
    lin = linear_operator(la, e, replace(cfg, phi=phi))
    gaps = []
    for ep in eps:
        nl = eom_residual(la, e, e_star, replace(cfg, phi=ep * phi))
        gaps.append(np.max(np.linalg.norm(nl.cartan - ep * lin, axis=-1)))
    eps, gaps = np.array(eps), np.array(gaps)
    return eps, gaps, fit_order(eps, gaps)


def commutator_check(la: LieAlgebra, ap: AppositionData) -> float:
    """[Delta_e, Delta_e'] reduces to commutators of the mass operators on h."""
    if la.rs.rank == 1:
        return 0.0
    return commutator_norm(ap, spectra(ap))


def potential_expansion(la: LieAlgebra, e: np.ndarray, e_star: np.ndarray, phi: np.ndarray, m: float,
                        eps: float = 1e-2) -> tuple[complex, complex]:
    """Linear and quadratic Taylor coefficients of a -> V(a phi) at 0.

    Symmetric differences with one Richardson step, so both errors are O(eps^4)."""
    V = lambda a: potential(la, e, e_star, a * phi, m)  # noqa: E731
    v0 = V(0.0)

    def lin(h):
        return (V(h) - V(-h)) / (2 * h)

    def quad(h):
        return (V(h) + V(-h) - 2 * v0) / (2 * h * h)

    return (4 * lin(eps / 2) - lin(eps)) / 3, (4 * quad(eps / 2) - quad(eps)) / 3
