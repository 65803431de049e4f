"""Spin-chain analogues: the transverse-field Ising chain with a complex
field (fermionized, Nambu correlation matrices, entropy halved), dense
biorthogonal exact diagonalization for the Ising chain in an imaginary
longitudinal field, and the one-/two-qubit exceptional-point toy models.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import entanglement, states
from .entanglement import EntropyValue
from .errors import BinormVanishing, GroundDegenerate, SizeBudgetExceeded
from .numerics import eig_general
from .scaling import EntropyProfile
from .states import tfim_bdg_bloch  # noqa: F401  (public surface)

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class SpinChainParams:
    J: float
    h: complex
    kappa: float = 0.0
    N: int = 8
    boundary: str = "pbc"

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError("J must be positive")
        if self.N < 1:
            raise ValueError("N must be at least 1")


@dataclass
class BiorthogonalPair:
    """Right/left many-body eigenvectors with <L|R> = 1."""

    right: np.ndarray
    left: np.ndarray
    energy: complex


@dataclass
class ReducedDensityMatrix:
    rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass
class ToyEigenAnalysis:
    values: np.ndarray
    right_vectors: np.ndarray
    binorms: np.ndarray
    coalesced: bool


def tfim_exceptional_momentum(J: float, h: complex) -> Optional[float]:
    """Positive exceptional momentum arccos(-Re h / J) of the Nambu
    dispersion, or None when the spectrum has no exceptional point."""
    ratio = -(complex(h) ** 2 + J ** 2) / (2.0 * complex(h) * J) if h != 0 else None
    if ratio is None or abs(ratio.imag) > 1e-12 * max(1.0, abs(ratio)) or abs(ratio.real) > 1.0:
        return None
    return math.acos(min(1.0, max(-1.0, ratio.real)))


def tfim_entropy_profile(J: float, h: complex, L: int, delta_kappa: float = 0.0,
                         policy: str = "paired") -> EntropyProfile:
    """Halved entanglement entropy of the fermionized transverse-field
    chain for every bipartition, from the Nambu correlation on the APBC
    grid (even fermion parity). The halving undoes the particle-hole
    doubling of the Nambu description.

    When the dispersion has exceptional momenta the grid twist is anchored
    there: the grid is shifted so its nearest point sits exactly
    delta_kappa away from the exceptional momentum (the momentum cutoff is
    meaningful relative to the singularity, which here is not at a zone
    point).
    """
    if L < 2 or L % 2:
        raise ValueError("L must be even")
    twist = delta_kappa
    k_ep = tfim_exceptional_momentum(J, h)
    if k_ep is not None and delta_kappa > 0.0:
        spacing = 2.0 * math.pi / L
        base = -math.pi + spacing * (math.floor((k_ep + math.pi) / spacing - 0.5) + 0.5)
        twist = (k_ep - base) + delta_kappa
    lengths = np.arange(1, L)
    vals = np.empty(L - 1, dtype=complex)
    for i, l in enumerate(lengths):
        nc = states.nambu_correlation(J, h, L, int(l), twist)
        es = entanglement.single_particle_es(nc.matrix)
        vals[i] = 0.5 * entanglement.bee(es, policy=policy).value
    return EntropyProfile(L=L, boundary="apbc", delta_kappa=float(delta_kappa),
                          lengths=lengths, entropies=vals)


def yang_lee_hamiltonian(N: int, h: float, J: float = 1.0, kappa: float = 0.0) -> np.ndarray:
    """Dense 2^N matrix of -sum_j [h sz_j + J sx_j sx_{j+1} + i kappa sx_j]
    with periodic coupling (site N back to site 1).

    Site j maps to bit j of the basis index (bit 0 least significant);
    N = 1 is allowed for the single-qubit picture, where the periodic
    exchange term degenerates to the constant -J.
    """
    if N < 1 or N > 12:
        raise SizeBudgetExceeded("dense construction supports 1 <= N <= 12")
    dim = 1 << N
    ham = np.zeros((dim, dim), dtype=complex)
    n = np.arange(dim)
    zdiag = np.zeros(dim)
    for j in range(N):
        zdiag += 1.0 - 2.0 * ((n >> j) & 1)
    ham[n, n] += -h * zdiag
    for j in range(N):
        m = n ^ (1 << j)
        ham[m, n] += -1j * kappa
        j2 = (j + 1) % N
        if j2 == j:  # N = 1: sx_j sx_j = identity
            ham[n, n] += -J
        else:
            m2 = m ^ (1 << j2)
            ham[m2, n] += -J
    return ham


def _min_re_energy(values: np.ndarray, re_tol: float):
    scale = max(1.0, float(np.max(np.abs(values))))
    order = np.lexsort((values.imag, values.real))
    first = values[order[0]]
    ties = [v for v in values if abs(v.real - first.real) <= re_tol * scale]
    if len(ties) > 1:
        ties.sort(key=lambda z: z.imag)
        # resolved toward negative imaginary part unless truly coincident
        if abs(ties[0].imag - ties[1].imag) <= re_tol * scale:
            raise GroundDegenerate("two candidate ground energies coincide",
                                   energies=ties[:2])
        return ties[0]
    return first


def _inverse_iteration(ham: np.ndarray, sigma: complex, tol: float) -> np.ndarray:
    n = ham.shape[0]
    scale = max(1.0, float(np.max(np.abs(ham))))
    shifted = ham - (sigma + 1e-12 * scale) * np.eye(n)
    rng = np.random.default_rng(12345)  # fixed seed: deterministic output
    vec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    vec /= np.linalg.norm(vec)
    for _ in range(8):
        vec = np.linalg.solve(shifted, vec)
        vec /= np.linalg.norm(vec)
        if np.linalg.norm(ham @ vec - sigma * vec) <= tol * scale:
            break
    return vec


def biorthogonal_ground(ham: np.ndarray, re_tol: float = 1e-10,
                        binorm_floor: float = 1e-10) -> BiorthogonalPair:
    """Eigenpair with minimal Re(E): eigenvalues from the QR solver, then
    shifted inverse iteration for the right and left vectors.

    Re-ties are resolved toward negative Im; a genuine double tie raises
    GroundDegenerate with both energies attached, and a vanishing
    left/right overlap (coalescence) raises BinormVanishing.
    """
    ham = np.asarray(ham, dtype=complex)
    values = eig_general(ham, want_vectors=False).values
    e0 = complex(_min_re_energy(values, re_tol))
    right = _inverse_iteration(ham, e0, 1e-10)
    left = _inverse_iteration(ham.conj().T, np.conj(e0), 1e-10)
    overlap = complex(np.vdot(left, right))
    if abs(overlap) < binorm_floor:
        raise BinormVanishing(f"ground-state <L|R> = {abs(overlap):.3e}; states coalesce")
    left = left / np.conj(overlap)
    return BiorthogonalPair(right=right, left=left, energy=e0)


def reduced_density(pair: BiorthogonalPair, l: int) -> ReducedDensityMatrix:
    """Partial trace of |R><L| over sites l+1..N (high bits)."""
    dim = pair.right.size
    n_sites = int(round(math.log2(dim)))
    if not 1 <= l < n_sites:
        raise ValueError("need 1 <= l < N")
    rmat = pair.right.reshape(1 << (n_sites - l), 1 << l)
    lmat = pair.left.reshape(1 << (n_sites - l), 1 << l)
    rho = rmat.T @ lmat.conj()
    return ReducedDensityMatrix(rho=rho)


def ed_entropy(rho: ReducedDensityMatrix, policy: str = "paired") -> EntropyValue:
    """-sum lambda ln lambda over the (generally complex) eigenvalues of
    the reduced density matrix. "paired" and "magnitude" take ln|lambda|
    for real negative eigenvalues; "principal" keeps the standard branch.
    """
    if policy not in ("principal", "magnitude", "paired"):
        raise ValueError(f"unknown policy {policy!r}")
    values = eig_general(rho.rho, want_vectors=False).values
    total = 0.0 + 0.0j
    for lam in values:
        lam = complex(lam)
        if abs(lam) <= 1e-14:
            continue
        if policy != "principal" and abs(lam.imag) <= 1e-10 * max(1.0, abs(lam.real)):
            total += lam.real * math.log(abs(lam.real))
        else:
            total += lam * np.log(lam)
    return EntropyValue(value=complex(-total), policy=policy)


def spectrum_is_real(values: np.ndarray, im_tol: float = 1e-8) -> bool:
    return bool(np.max(np.abs(values.imag)) < im_tol)


def pt_breaking_kappa(N: int, h: float, J: float = 1.0, rel_tol: float = 1e-3,
                      im_tol: float = 1e-8, criterion: str = "ground",
                      bracket: Optional[Tuple[float, float]] = None) -> float:
    """Largest kappa on the symmetric side of the PT-breaking line at
    (N, h), located by bisection, within rel_tol (relative).

    criterion "ground" tests the reality of the lowest-Re eigenvalue (the
    collision of the two lowest levels is the transition the entropy
    scaling probes); "full" tests max|Im E| over the whole spectrum, which
    at finite size breaks at much smaller kappa through excited-state
    collisions.
    """
    if criterion not in ("ground", "full"):
        raise ValueError(f"unknown criterion {criterion!r}")

    def is_real(kappa: float) -> bool:
        vals = eig_general(yang_lee_hamiltonian(N, h, J, kappa), want_vectors=False).values
        if criterion == "full":
            return spectrum_is_real(vals, im_tol)
        ground = vals[int(np.argmin(vals.real))]
        return abs(ground.imag) < im_tol * max(1.0, abs(ground))

    if bracket is None:
        lo, hi = 0.0, 0.5 * h
        while is_real(hi):
            lo, hi = hi, 2.0 * hi
            if hi > 100.0 * h:
                raise ValueError("no symmetry breaking found below 100 h")
    else:
        lo, hi = bracket
        if not is_real(lo):
            raise ValueError("bracket lower end already has complex spectrum")
        while is_real(hi):
            lo, hi = hi, hi + (hi - lo)
    while (hi - lo) > rel_tol * max(hi, 1e-12):
        mid = 0.5 * (lo + hi)
        if is_real(mid):
            lo = mid
        else:
            hi = mid
    return lo


def yang_lee_entropy_profile(N: int, h: float, J: float = 1.0,
                             kappa: float = 0.0) -> EntropyProfile:
    """ED entanglement entropy of the chain for l = 1..N-1."""
    ham = yang_lee_hamiltonian(N, h, J, kappa)
    pair = biorthogonal_ground(ham)
    lengths = np.arange(1, N)
    vals = np.empty(N - 1, dtype=complex)
    for i, l in enumerate(lengths):
        vals[i] = ed_entropy(reduced_density(pair, int(l))).value
    return EntropyProfile(L=N, boundary="pbc", delta_kappa=0.0,
                          lengths=lengths, entropies=vals)


def _toy_analysis(ham: np.ndarray) -> ToyEigenAnalysis:
    dec = eig_general(ham)
    decl = eig_general(ham.conj().T)
    n = ham.shape[0]
    binorms = np.zeros(n, dtype=complex)
    for i in range(n):
        target = np.conj(dec.values[i])
        j = int(np.argmin(np.abs(decl.values - target)))
        binorms[i] = np.vdot(decl.right_vectors[:, j], dec.right_vectors[:, i])
    coalesced = False
    for i in range(n):
        for j in range(i + 1, n):
            if abs(dec.values[i] - dec.values[j]) < 1e-8:
                ri, rj = dec.right_vectors[:, i], dec.right_vectors[:, j]
                if abs(np.vdot(ri, rj)) > 1.0 - 1e-6:
                    coalesced = True
    return ToyEigenAnalysis(values=dec.values, right_vectors=dec.right_vectors,
                            binorms=binorms, coalesced=coalesced)


def toy_qubit(phi: float) -> ToyEigenAnalysis:
    """Spin pointing in z with a phase-twisted flip term: sz + e^{i phi} sx;
    coalesces at phi = pi/2."""
    if not 0.0 <= phi <= math.pi / 2:
        raise ValueError("phi must lie in [0, pi/2]")
    return _toy_analysis(_SZ + np.exp(1j * phi) * _SX)


def toy_two_qubit(big_phi: float) -> ToyEigenAnalysis:
    """Exchange plus phase-twisted uniform field:
    sx x sx + e^{i Phi} (sz x 1 + 1 x sz)/2."""
    if not 0.0 <= big_phi <= math.pi / 2:
        raise ValueError("Phi must lie in [0, pi/2]")
    eye = np.eye(2, dtype=complex)
    ham = np.kron(_SX, _SX) + np.exp(1j * big_phi) * (np.kron(_SZ, eye) + np.kron(eye, _SZ)) / 2.0
    return _toy_analysis(ham)
