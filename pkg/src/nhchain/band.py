"""Two-band Bloch Hamiltonian of the non-reciprocal chain with staggered
potential: dispersion, biorthogonal eigenvectors, spectral-exceptional-point
location, symmetry checks, and real-space / open-boundary diagnostics.

The Bloch matrix is  h(k) = [[u, w1 e^{-ik} + v1], [w2 e^{ik} + v2, -u]]
(lattice constant 1, basis A then B within each cell), with derived
invariants a_r = w1 w2 + v1 v2 + u^2, b_r = w2 v1 + w1 v2, s = w2 v1 - w1 v2
so that eps(k) = +/- sqrt(a_r + b_r cos k + i s sin k).
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import BinormVanishing, DegenerateMatrix, NonComparable
from .numerics import eig_general

PBC = "pbc"
APBC = "apbc"
OBC = "obc"

_REAL_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """The five complex couplings (dimensionless energy units)."""

    u: complex
    v1: complex
    v2: complex
    w1: complex
    w2: complex

    @property
    def a_r(self) -> complex:
        return self.w1 * self.w2 + self.v1 * self.v2 + self.u * self.u

    @property
    def b_r(self) -> complex:
        return self.w2 * self.v1 + self.w1 * self.v2

    @property
    def s(self) -> complex:
        return self.w2 * self.v1 - self.w1 * self.v2

    def with_u(self, u: complex) -> "ModelParams":
        return ModelParams(u=complex(u), v1=self.v1, v2=self.v2, w1=self.w1, w2=self.w2)

    def is_hermitian(self) -> bool:
        return (
            abs(np.conj(self.v1) - self.v2) < _REAL_TOL
            and abs(np.conj(self.w1) - self.w2) < _REAL_TOL
            and abs(complex(self.u).imag) < _REAL_TOL
        )


@dataclass(frozen=True)
class LambdaParams:
    """Ratio-constrained couplings: w1 = w, w2 = lam*w, v1 = v, v2 = lam*v."""

    lam: float
    w: complex
    v: complex
    u: complex

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lam must be a positive real ratio")

    def expand(self) -> ModelParams:
        return ModelParams(u=complex(self.u), v1=complex(self.v), v2=self.lam * complex(self.v),
                           w1=complex(self.w), w2=self.lam * complex(self.w))


def as_model_params(params) -> ModelParams:
    if isinstance(params, LambdaParams):
        return params.expand()
    return params


@dataclass
class BlochMode:
    """One (k, band) solution with biorthogonally normalized vectors.

    binorm is the pre-normalization overlap <L|R>/(|L| |R|), the
    convention-independent coalescence measure (it vanishes at an
    exceptional point no matter how the raw vectors are scaled).
    """

    k: float
    band: int
    energy: complex
    right_vec: np.ndarray
    left_vec: np.ndarray
    binorm: complex


@dataclass
class SymmetryReport:
    pseudo_hermitian: bool
    pseudo_hermitian_residual: float
    screw_pt: bool
    screw_pt_residual: float
    anti_screw_pt: bool
    anti_screw_pt_residual: float
    nh_chiral: bool
    nh_chiral_residual: float
    ssh_similar: bool
    ssh_similar_residual: float


@dataclass
class RealSpaceHamiltonian:
    size: int
    matrix: np.ndarray
    boundary: str


def bloch_matrix(params: ModelParams, k: float) -> np.ndarray:
    p = as_model_params(params)
    return np.array(
        [
            [p.u, p.w1 * np.exp(-1j * k) + p.v1],
            [p.w2 * np.exp(1j * k) + p.v2, -p.u],
        ],
        dtype=complex,
    )


def _radicand(p: ModelParams, k: float) -> complex:
    # half-angle forms keep the tiny gap near k = 0 / k = +/-pi from being
    # lost to cancellation when a_r = -/+ b_r (EP-tuned parameters)
    if math.cos(k) >= 0.0:
        trig = (p.a_r + p.b_r) - 2.0 * p.b_r * math.sin(0.5 * k) ** 2
    else:
        trig = (p.a_r - p.b_r) + 2.0 * p.b_r * math.cos(0.5 * k) ** 2
    return trig + 1j * p.s * math.sin(k)


def dispersion(params: ModelParams, k: float) -> Tuple[complex, complex]:
    """The two branches +/- sqrt(a_r + b_r cos k + i s sin k), principal root."""
    p = as_model_params(params)
    e = np.sqrt(complex(_radicand(p, k)))
    return complex(e), complex(-e)


def band_energy(params: ModelParams, k: float, band: int) -> complex:
    ep, em = dispersion(params, k)
    return ep if band > 0 else em


def eigenpair(params: ModelParams, k: float, band: int, binorm_floor: float = 1e-10) -> BlochMode:
    """Biorthogonal eigenvectors at (k, band), normalized so <left|right> = 1.

    The B component is fixed to 1 before normalization; if the B-row
    off-diagonal vanishes the A component is fixed instead.
    """
    if not binorm_floor > 0:
        raise ValueError("binorm_floor must be positive")
    p = as_model_params(params)
    e = band_energy(p, k, band)
    x = p.w1 * np.exp(-1j * k) + p.v1
    y = p.w2 * np.exp(1j * k) + p.v2
    if abs(x) < 1e-300 and abs(y) < 1e-300 and abs(p.u) < 1e-300:
        raise DegenerateMatrix("h(k) is scalar; eigenvector directions arbitrary")

    if abs(y) > 1e-300:
        right = np.array([(e + p.u) / y, 1.0], dtype=complex)
    elif abs(e - p.u) > 1e-300:
        right = np.array([x / (e - p.u), 1.0], dtype=complex)
    else:
        right = np.array([1.0, 0.0], dtype=complex)

    if abs(x) > 1e-300:
        left = np.array([np.conj((e + p.u) / x), 1.0], dtype=complex)
    elif abs(e - p.u) > 1e-300:
        left = np.array([np.conj(y / (e - p.u)), 1.0], dtype=complex)
    else:
        left = np.array([1.0, 0.0], dtype=complex)

    raw = complex(np.vdot(left, right))
    binorm = raw / (np.linalg.norm(left) * np.linalg.norm(right))
    if abs(binorm) < binorm_floor:
        raise BinormVanishing(
            f"|<L|R>|/(|L||R|) = {abs(binorm):.3e} < {binorm_floor:.1e} "
            f"at k = {k:.6f} (band {band:+d})"
        )
    root = np.sqrt(raw)
    return BlochMode(
        k=float(k),
        band=int(band),
        energy=e,
        right_vec=right / root,
        left_vec=left / np.conj(root),
        binorm=complex(binorm),
    )


def _newton_refine_root(p: ModelParams, k: float, steps: int = 2) -> float:
    # polish a real root of f(k) = a_r + b_r cos k + i s sin k
    for _ in range(steps):
        f = p.a_r + p.b_r * np.cos(k) + 1j * p.s * np.sin(k)
        df = -p.b_r * np.sin(k) + 1j * p.s * np.cos(k)
        if abs(df) < 1e-300:
            break
        step = f / df
        if abs(step.imag) > 1e-2:
            break
        k = k - step.real
    return k


def locate_seps(params: ModelParams, tol: float = 1e-10) -> List[float]:
    """Momenta with eps(k) = 0; the zone edge is reported as k = -pi.

    For s = 0 the roots solve cos k = -a_r/b_r; for s != 0 only the
    zone center/edge can be exceptional (a_r = -/+ b_r, checked
    algebraically so the root condition is exact there).
    """
    p = as_model_params(params)
    a, b, s = p.a_r, p.b_r, p.s
    scale = max(1.0, abs(a), abs(b))
    out: List[float] = []
    if abs(s) <= tol * scale:
        if abs(b) <= tol * scale:
            return []  # flat eps^2: no isolated root
        ratio = -a / b
        if abs(ratio.imag) > 1e-12 * scale or abs(ratio.real) > 1.0 + 1e-12:
            return []
        r = min(1.0, max(-1.0, ratio.real))
        k0 = math.acos(r)
        if k0 < 1e-12:
            cands = [0.0]
        elif math.pi - k0 < 1e-12:
            cands = [-math.pi]
        else:
            cands = [-k0, k0]
        for k in cands:
            kr = k if k in (0.0, -math.pi) else _newton_refine_root(p, k)
            if abs(dispersion(p, kr)[0]) < 1e-8 * max(1.0, math.sqrt(scale)):
                out.append(kr)
    else:
        if abs(a + b) <= tol * scale:
            out.append(0.0)
        if abs(a - b) <= tol * scale:
            out.append(-math.pi)
    return sorted(out)


def ep_window(lparams: LambdaParams, tol: float = 1e-12) -> bool:
    """Whether -u^2 falls between the band-edge values lam*(w-v)^2 and
    lam*(w+v)^2. Bounds are compared after sorting, which also covers
    negative or imaginary hopping choices.
    """
    lo = lparams.lam * (complex(lparams.w) - complex(lparams.v)) ** 2
    hi = lparams.lam * (complex(lparams.w) + complex(lparams.v)) ** 2
    mu = -complex(lparams.u) ** 2
    for val, name in ((mu, "-u^2"), (lo, "lam*(w-v)^2"), (hi, "lam*(w+v)^2")):
        if abs(val.imag) > tol * max(1.0, abs(val)):
            raise NonComparable(f"{name} is not real within {tol:.0e}")
    lo_r, hi_r = sorted((lo.real, hi.real))
    slack = tol * max(1.0, abs(lo_r), abs(hi_r))
    return lo_r - slack <= mu.real <= hi_r + slack


def _effective_lambda(p: ModelParams) -> complex:
    if abs(p.w1) > 1e-300:
        return p.w2 / p.w1
    if abs(p.v1) > 1e-300:
        return p.v2 / p.v1
    return 1.0 + 0.0j


def symmetry_report(params: ModelParams, kgrid_size: int = 64) -> SymmetryReport:
    """Residuals of the defining symmetry relations over a momentum grid.

    The transformation matrices are built from the effective ratio
    lam = w2/w1; each flag is true when its worst-case residual over the
    grid is below 1e-10.
    """
    if kgrid_size < 8:
        raise ValueError("kgrid_size must be at least 8")
    p = as_model_params(params)
    lam = _effective_lambda(p)
    if not np.isfinite(lam) or abs(lam) < 1e-300:
        inf = float("inf")
        return SymmetryReport(False, inf, False, inf, False, inf, False, inf, False, inf)
    rt = np.sqrt(complex(lam))

    u_psh = np.diag([rt, 1.0 / rt])
    u_pt = np.array([[0.0, 1.0 / rt], [rt, 0.0]], dtype=complex)
    u_apt = 1j * u_pt
    u_nhch = np.diag([1.0 / rt, -rt])
    s_mat = np.diag([1.0 + 0.0j, rt])
    ssh = ModelParams(u=p.u, v1=p.v1 * rt, v2=p.v1 * rt, w1=p.w1 * rt, w2=p.w1 * rt)

    res = np.zeros(5)
    ks = -math.pi + 2.0 * math.pi * np.arange(kgrid_size) / kgrid_size
    for k in ks:
        h = bloch_matrix(p, k)
        hd = h.conj().T
        hc = h.conj()
        res[0] = max(res[0], np.abs(u_psh @ h @ np.linalg.inv(u_psh) - hd).max())
        res[1] = max(res[1], np.abs(u_pt @ h @ np.linalg.inv(u_pt) - hc).max())
        res[2] = max(res[2], np.abs(u_apt @ h @ np.linalg.inv(u_apt) + hc).max())
        res[3] = max(res[3], np.abs(u_nhch @ hd @ np.linalg.inv(u_nhch) + h).max())
        res[4] = max(res[4], np.abs(np.linalg.inv(s_mat) @ h @ s_mat - bloch_matrix(ssh, k)).max())

    thr = 1e-10
    return SymmetryReport(
        pseudo_hermitian=bool(res[0] < thr), pseudo_hermitian_residual=float(res[0]),
        screw_pt=bool(res[1] < thr), screw_pt_residual=float(res[1]),
        anti_screw_pt=bool(res[2] < thr), anti_screw_pt_residual=float(res[2]),
        nh_chiral=bool(res[3] < thr), nh_chiral_residual=float(res[3]),
        ssh_similar=bool(res[4] < thr), ssh_similar_residual=float(res[4]),
    )


def real_space_hamiltonian(params: ModelParams, L: int, boundary: str = PBC) -> RealSpaceHamiltonian:
    """2L x 2L matrix in the (cell 1 A, cell 1 B, cell 2 A, ...) basis.

    APBC flips the sign of the boundary-wrapping block; OBC drops it.
    """
    if L < 2:
        raise ValueError("need at least two cells")
    if boundary not in (PBC, APBC, OBC):
        raise ValueError(f"unknown boundary {boundary!r}")
    p = as_model_params(params)
    h = np.zeros((2 * L, 2 * L), dtype=complex)
    for x in range(L):
        a, b = 2 * x, 2 * x + 1
        h[a, a] = p.u
        h[b, b] = -p.u
        h[a, b] += p.v1
        h[b, a] += p.v2
        if x + 1 < L:
            h[2 * (x + 1), b] += p.w1
            h[b, 2 * (x + 1)] += p.w2
        elif boundary != OBC:
            sign = 1.0 if boundary == PBC else -1.0
            h[0, b] += sign * p.w1
            h[b, 0] += sign * p.w2
    return RealSpaceHamiltonian(size=2 * L, matrix=h, boundary=boundary)


def obc_edge_modes(params: ModelParams, L: int, energy_tol: float = 1e-4) -> List[Tuple[complex, float]]:
    """Localized open-boundary eigenmodes with energy within energy_tol
    of +/-u, as (energy, participation length) pairs.

    Localization is judged by the inverse participation ratio (> 4/L); the
    length reported is 1/IPR in sites. Both thresholds are detection
    configuration, not physics.
    """
    if L < 8:
        raise ValueError("need at least eight cells")
    p = as_model_params(params)
    ham = real_space_hamiltonian(p, L, OBC)
    dec = eig_general(ham.matrix)
    modes: List[Tuple[complex, float]] = []
    for i, energy in enumerate(dec.values):
        if min(abs(energy - p.u), abs(energy + p.u)) > energy_tol:
            continue
        vec = dec.right_vectors[:, i]
        ipr = float(np.sum(np.abs(vec) ** 4))
        if ipr > 4.0 / L:
            modes.append((complex(energy), 1.0 / ipr))
    return modes
