"""Biorthogonal many-body ground states and their two-point correlation
matrices on twisted momentum grids, with quasiparticle/quasihole variants
and the Nambu (BdG) correlation of the transverse-field chain.

The twist delta_kappa shifts every grid momentum uniformly (flux insertion),
keeping grid points off exceptional momenta.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import band
from .band import APBC, PBC, LambdaParams, ModelParams, as_model_params
from .errors import BinormVanishing, ModeAlreadyOccupied, ModeNotOccupied

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class MomentumGrid:
    L: int
    boundary: str
    delta_kappa: float
    ks: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, MomentumGrid)
            and self.L == other.L
            and self.boundary == other.boundary
            and self.delta_kappa == other.delta_kappa
        )


@dataclass(frozen=True)
class OccupationSet:
    """Occupied (grid index, band sign) modes with provenance."""

    modes: Tuple[Tuple[int, int], ...]
    provenance: str = "ground"

    def __post_init__(self):
        if len(set(self.modes)) != len(self.modes):
            raise ValueError("duplicate (index, band) entries")

    def __len__(self):
        return len(self.modes)


@dataclass
class CorrelationMatrix:
    """<GS_L| c^dag_(x,a) c_(y,b) |GS_R> in the (cell, A then B) ordering."""

    matrix: np.ndarray
    grid: MomentumGrid
    occupation: OccupationSet

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass
class NambuCorrelation:
    """Subsystem correlation in Nambu space, (site, particle/hole) ordering."""

    matrix: np.ndarray
    L: int
    l: int
    delta_kappa: float

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def grid(L: int, boundary: str = PBC, delta_kappa: float = 0.0) -> MomentumGrid:
    """Quantized momenta: PBC k_n = -pi + 2 pi n / L + dk, APBC offset by half
    a spacing. Construction never fails; an exceptional grid point only
    surfaces later as BinormVanishing from eigenpair calls.
    """
    if L < 2:
        raise ValueError("need at least two cells")
    if delta_kappa < 0:
        raise ValueError("delta_kappa must be nonnegative")
    if boundary not in (PBC, APBC):
        raise ValueError(f"momentum grid needs pbc or apbc, got {boundary!r}")
    n = np.arange(L, dtype=float)
    if boundary == APBC:
        n = n + 0.5
    ks = -math.pi + 2.0 * math.pi * n / L + delta_kappa
    return MomentumGrid(L=L, boundary=boundary, delta_kappa=float(delta_kappa), ks=ks)


def _occupied_band(e_plus: complex, tie_tol: float = _TIE_TOL) -> int:
    """Band sign filled at one momentum: negative real part, with purely
    imaginary branches resolved toward negative imaginary part; an exact
    zero (exceptional mode) is assigned the '-' label.
    """
    if e_plus.real > tie_tol:
        return -1
    if e_plus.real < -tie_tol:
        return +1
    if e_plus.imag > tie_tol:
        return -1
    if e_plus.imag < -tie_tol:
        return +1
    return -1


def fill_ground(params, grd: MomentumGrid) -> OccupationSet:
    """Half filling by the real part of the energy (Re eps < 0); purely
    imaginary branches fall back to Im eps < 0.
    """
    p = as_model_params(params)
    modes = []
    for ik, k in enumerate(grd.ks):
        ep, _ = band.dispersion(p, k)
        modes.append((ik, _occupied_band(ep)))
    return OccupationSet(modes=tuple(modes), provenance="ground")


def fill_real_negative(params, grd: MomentumGrid, tol: float = _TIE_TOL) -> OccupationSet:
    """Occupy only modes with strictly negative real energy, leaving purely
    imaginary branches empty.
    """
    p = as_model_params(params)
    modes = []
    for ik, k in enumerate(grd.ks):
        ep, em = band.dispersion(p, k)
        for sign, e in ((+1, ep), (-1, em)):
            if e.real < -tol:
                modes.append((ik, sign))
    return OccupationSet(modes=tuple(modes), provenance="custom")


def fill_fermi(params, grd: MomentumGrid, fermi: float) -> OccupationSet:
    """Occupy modes with Re eps below a Fermi level strictly inside the
    lower band (filling below the exceptional region, away from any
    spectral exceptional point).
    """
    p = as_model_params(params)
    modes = []
    for ik, k in enumerate(grd.ks):
        ep, em = band.dispersion(p, k)
        for sign, e in ((+1, ep), (-1, em)):
            if e.real < fermi:
                modes.append((ik, sign))
    return OccupationSet(modes=tuple(modes), provenance="custom")


def add_quasiparticle(occ: OccupationSet, k_index: int, band_sign: int) -> OccupationSet:
    target = (int(k_index), int(band_sign))
    if target in occ.modes:
        raise ModeAlreadyOccupied(f"mode {target} already occupied")
    return OccupationSet(modes=occ.modes + (target,),
                         provenance=f"quasiparticle(k_index={k_index}, band={band_sign:+d})")


def remove_mode(occ: OccupationSet, k_index: int, band_sign: int) -> OccupationSet:
    target = (int(k_index), int(band_sign))
    if target not in occ.modes:
        raise ModeNotOccupied(f"mode {target} not occupied")
    modes = tuple(m for m in occ.modes if m != target)
    return OccupationSet(modes=modes,
                         provenance=f"quasihole(k_index={k_index}, band={band_sign:+d})")


def exceptional_mode(params, grd: MomentumGrid, occ: OccupationSet) -> Tuple[int, int]:
    """The occupied mode closest (circularly) to a spectral exceptional
    point; falls back to the occupied mode of smallest |energy|.
    """
    p = as_model_params(params)
    seps = band.locate_seps(p)
    best = None
    best_d = math.inf
    for ik, sign in occ.modes:
        k = grd.ks[ik]
        if seps:
            d = min(abs(math.remainder(k - ks, 2.0 * math.pi)) for ks in seps)
        else:
            d = abs(band.band_energy(p, k, sign))
        if d < best_d:
            best_d = d
            best = (ik, sign)
    if best is None:
        raise ModeNotOccupied("occupation set is empty")
    return best


def correlation(params, grd: MomentumGrid, occ: OccupationSet,
                binorm_floor: float = 1e-10) -> CorrelationMatrix:
    """Assemble C[(x,a),(y,b)] = (1/L) sum_occ conj(L_a) R_b e^{-ik(x-y)}.

    Block-Toeplitz by construction; propagates BinormVanishing from modes
    too close to an exceptional point.
    """
    p = as_model_params(params)
    L = grd.L
    dyads = np.zeros((L, 2, 2), dtype=complex)
    used = np.zeros(L, dtype=bool)
    for ik, sign in occ.modes:
        mode = band.eigenpair(p, grd.ks[ik], sign, binorm_floor=binorm_floor)
        dyads[ik] += np.outer(np.conj(mode.left_vec), mode.right_vec)
        used[ik] = True
    rvals = np.arange(-(L - 1), L, dtype=float)
    phases = np.exp(-1j * np.outer(rvals, grd.ks[used]))
    blocks = np.tensordot(phases, dyads[used], axes=(1, 0)) / L
    x = np.arange(L)
    idx = x[:, None] - x[None, :] + (L - 1)
    c4 = blocks[idx]  # (L, L, 2, 2)
    c = c4.transpose(0, 2, 1, 3).reshape(2 * L, 2 * L)
    return CorrelationMatrix(matrix=c, grid=grd, occupation=occ)


# ---------------------------------------------------------------------------
# Nambu (BdG) correlations for the transverse-field chain


def tfim_bdg_bloch(k: float, J: float, h: complex) -> np.ndarray:
    """Nambu Bloch matrix [[eps_k, 2iJ sin k], [-2iJ sin k, -eps_k]] with
    eps_k = 2h + 2J cos k (complex h allowed).

    This normalization reproduces the spectrum +/-2J sqrt(1+(h/J)^2+2(h/J)cos k),
    the Ising gap closing at h = J, and exceptional momenta at
    k = +/- arccos(-Re(h)/J) on the circle |h| = J.
    """
    eps = 2.0 * complex(h) + 2.0 * J * math.cos(k)
    delta = 2.0j * J * math.sin(k)
    return np.array([[eps, delta], [-delta, -eps]], dtype=complex)


def _biortho_2x2(m: np.ndarray, energy: complex, binorm_floor: float):
    """Biorthogonal (right, left) pair of a 2x2 matrix at a known eigenvalue,
    normalized to <L|R> = 1 (same conventions as band.eigenpair).
    """
    p, q = m[0, 0], m[0, 1]
    r, t = m[1, 0], m[1, 1]
    if abs(r) > 1e-300:
        right = np.array([(energy - t) / r, 1.0], dtype=complex)
    elif abs(energy - p) > 1e-300:
        right = np.array([q / (energy - p), 1.0], dtype=complex)
    else:
        right = np.array([1.0, 0.0], dtype=complex)
    if abs(q) > 1e-300:
        left = np.array([np.conj((energy - t) / q), 1.0], dtype=complex)
    elif abs(energy - p) > 1e-300:
        left = np.array([np.conj(r / (energy - p)), 1.0], dtype=complex)
    else:
        left = np.array([1.0, 0.0], dtype=complex)
    raw = complex(np.vdot(left, right))
    binorm = raw / (np.linalg.norm(left) * np.linalg.norm(right))
    if abs(binorm) < binorm_floor:
        raise BinormVanishing(f"normalized <L|R> = {abs(binorm):.3e} below floor (Nambu mode)")
    root = np.sqrt(raw)
    return right / root, left / np.conj(root)


def nambu_correlation(J: float, h: complex, L: int, l: int,
                      delta_kappa: float = 0.0,
                      binorm_floor: float = 1e-10) -> NambuCorrelation:
    """Subsystem Nambu correlation of the fermionized transverse-field chain.

    Works on the APBC grid (even fermion parity); at each momentum the
    negative-real-part band of the 2x2 Nambu matrix is filled
    biorthogonally, then the four subsystem correlator blocks are
    assembled site by site: index (x, 0) is c^dag_x c_y-type, (x, 1) the
    conjugate-hole row.
    """
    if L < 2 or L % 2:
        raise ValueError("L must be even")
    if not 1 <= l < L:
        raise ValueError("need 1 <= l < L")
    grd = grid(L, APBC, delta_kappa)
    dyads = np.zeros((L, 2, 2), dtype=complex)
    for ik, k in enumerate(grd.ks):
        m = tfim_bdg_bloch(k, J, h)
        # traceless 2x2: eigenvalues +/- sqrt(qr - pt)
        e = np.sqrt(complex(m[0, 1] * m[1, 0] - m[0, 0] * m[1, 1]))
        sign = _occupied_band(complex(e))
        energy = e if sign > 0 else -e
        right, left = _biortho_2x2(m, energy, binorm_floor)
        dyads[ik] = np.outer(np.conj(left), right)
    rvals = np.arange(-(l - 1), l, dtype=float)
    phases = np.exp(-1j * np.outer(rvals, grd.ks))
    blocks = np.tensordot(phases, dyads, axes=(1, 0)) / L
    x = np.arange(l)
    idx = x[:, None] - x[None, :] + (l - 1)
    c4 = blocks[idx]
    c = c4.transpose(0, 2, 1, 3).reshape(2 * l, 2 * l)
    return NambuCorrelation(matrix=c, L=L, l=l, delta_kappa=float(delta_kappa))
