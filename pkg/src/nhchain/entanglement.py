"""Entanglement spectra and bi-orthogonal entanglement entropy from
restricted correlation matrices, eigenvalue-pair classification, the block
determinant index, many-body spectra, and bound-state diagnostics.

Correlation eigenvalues of the non-Hermitian ground states come in pairs
C_a + C_b = 1 but generally leave the [0, 1] interval or the real axis; the
entropy S = -sum [C ln C + (1-C) ln(1-C)] therefore carries a branch policy
(default "paired": magnitude branch for real values, principal for complex).
"""

import itertools
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from . import band, states
from .band import PBC, as_model_params
from .errors import IndexUnstable
from .numerics import eig_general

KIND_TRIVIAL = "trivial"
KIND_REAL_IN = "real_in_range"
KIND_REAL_OUT = "real_out_of_range"
KIND_COMPLEX = "complex"


@dataclass(frozen=True)
class Region:
    """Contiguous block of cells; both sublattice sites of a cell included."""

    start: int
    length: int

    def __post_init__(self):
        if self.length < 1 or self.start < 0:
            raise ValueError("region must have positive length and start >= 0")


@dataclass
class PairInfo:
    indices: Tuple[int, ...]
    kind: str


@dataclass
class ESpectrum:
    """Single-particle entanglement levels {C} with entanglement energies
    ln(1/C - 1) and the pair classification."""

    values: np.ndarray
    ent_energies: np.ndarray
    pairs: List[PairInfo]

    def kinds(self) -> List[str]:
        out = [""] * len(self.values)
        for p in self.pairs:
            for i in p.indices:
                out[i] = p.kind
        return out


@dataclass
class EntropyValue:
    value: complex
    policy: str


@dataclass
class ManyBodyES:
    levels: np.ndarray


def restrict(c: Union[states.CorrelationMatrix, np.ndarray], region: Region) -> np.ndarray:
    """Principal submatrix for the region's sites (two per cell)."""
    m = c.matrix if isinstance(c, states.CorrelationMatrix) else np.asarray(c)
    lo = 2 * region.start
    hi = 2 * (region.start + region.length)
    if hi > m.shape[0]:
        raise ValueError("region exceeds the chain")
    return np.ascontiguousarray(m[lo:hi, lo:hi])


def _is_real(v: complex, tol: float) -> bool:
    return abs(v.imag) <= tol * max(1.0, abs(v.real))


def _classify_values(values: np.ndarray, kinds_real: Sequence[bool], in_range_pad: float = 1e-9) -> List[str]:
    out = []
    for v, is_r in zip(values, kinds_real):
        if not is_r:
            out.append(KIND_COMPLEX)
        elif -in_range_pad <= v.real <= 1.0 + in_range_pad:
            out.append(KIND_REAL_IN)
        else:
            out.append(KIND_REAL_OUT)
    return out


def single_particle_es(c_a: np.ndarray, pair_tol: float = 1e-4, trivial_tol: float = 1e-6,
                       real_tol: float = 1e-6) -> ESpectrum:
    """Eigenvalues of the restricted correlation matrix, with greedy pairing
    of partners minimizing |C_a + C_b - 1|; values within trivial_tol of 0
    or 1 are classified trivial and excluded from pairing. real_tol sets
    how much relative imaginary part still counts as a real level.
    """
    c_a = np.asarray(c_a, dtype=complex)
    dec = eig_general(c_a, want_vectors=False)
    values = dec.values
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = np.log(1.0 / values - 1.0)

    n = len(values)
    pairs: List[PairInfo] = []
    nontrivial = []
    for i, v in enumerate(values):
        if abs(v) < trivial_tol or abs(v - 1.0) < trivial_tol:
            pairs.append(PairInfo(indices=(i,), kind=KIND_TRIVIAL))
        else:
            nontrivial.append(i)

    unpaired = list(nontrivial)
    while unpaired:
        i = unpaired.pop(0)
        best_j = -1
        best = math.inf
        for j in unpaired:
            d = abs(values[i] + values[j] - 1.0)
            if d < best:
                best = d
                best_j = j
        if best_j >= 0 and best < pair_tol:
            unpaired.remove(best_j)
            duo = (i, best_j)
            is_real = all(_is_real(complex(values[t]), real_tol) for t in duo)
            kind = _classify_values(values[list(duo)], [is_real, is_real])
            # a pair shares a kind: out-of-range wins over in-range
            k = KIND_COMPLEX if not is_real else (
                KIND_REAL_OUT if KIND_REAL_OUT in kind else KIND_REAL_IN)
            pairs.append(PairInfo(indices=duo, kind=k))
        else:
            v = complex(values[i])
            kind = _classify_values(np.array([v]), [_is_real(v, real_tol)])[0]
            pairs.append(PairInfo(indices=(i,), kind=kind))
    pairs.sort(key=lambda p: p.indices[0])
    assert sum(len(p.indices) for p in pairs) == n
    return ESpectrum(values=values, ent_energies=ent, pairs=pairs)


def _entropy_term_real(c: float) -> float:
    # magnitude branch: ln|C|, ln|1-C|; x ln x -> 0 as x -> 0
    term = 0.0
    if c != 0.0:
        term += c * math.log(abs(c))
    if c != 1.0:
        term += (1.0 - c) * math.log(abs(1.0 - c))
    return term


def _entropy_term_principal(c: complex) -> complex:
    term = 0.0 + 0.0j
    if c != 0.0:
        term += c * np.log(c)
    if c != 1.0:
        term += (1.0 - c) * np.log(1.0 - c)
    return term


def bee(spectrum: ESpectrum, policy: str = "paired") -> EntropyValue:
    """Bi-orthogonal entanglement entropy -sum [C ln C + (1-C) ln(1-C)].

    Values within 1e-14 of 0 or 1 contribute zero. Policies: "principal"
    (standard branch throughout), "magnitude" (ln|.| whenever the value is
    real to machine precision), "paired" (magnitude branch for values the
    pair classification marks real, principal otherwise).
    """
    if policy not in ("principal", "magnitude", "paired"):
        raise ValueError(f"unknown policy {policy!r}")
    kinds = spectrum.kinds()
    total = 0.0 + 0.0j
    for v, kind in zip(spectrum.values, kinds):
        v = complex(v)
        if abs(v) <= 1e-14 or abs(v - 1.0) <= 1e-14:
            continue
        if policy == "principal":
            total += _entropy_term_principal(v)
        elif policy == "magnitude":
            if abs(v.imag) <= 1e-12 * max(1.0, abs(v.real)):
                total += _entropy_term_real(v.real)
            else:
                total += _entropy_term_principal(v)
        else:
            if kind in (KIND_TRIVIAL, KIND_REAL_IN, KIND_REAL_OUT):
                total += _entropy_term_real(v.real)
            else:
                total += _entropy_term_principal(v)
    return EntropyValue(value=complex(-total), policy=policy)


def entropy_of(c_a: np.ndarray, policy: str = "paired") -> EntropyValue:
    return bee(single_particle_es(c_a), policy=policy)


def entropy_from_kinds(spectrum: ESpectrum, kinds: Sequence[str]) -> float:
    """Entropy restricted to levels of the given classification kinds,
    evaluated on the real parts (used to isolate the contribution of
    real in-range pairs when complex pairs coexist).
    """
    wanted = set(kinds)
    total = 0.0
    for v, kind in zip(spectrum.values, spectrum.kinds()):
        if kind in wanted:
            total += _entropy_term_real(complex(v).real)
    return -total


def block_index(params, delta_sequence: Sequence[float] = (1e-4, 1e-5, 1e-6),
                L: int = 40) -> int:
    """Sign index from the determinant of the on-diagonal 2x2 unit-cell
    correlation block, stabilized along a decreasing twist sequence.

    The informative cases have block entries diverging as 1/delta_kappa and
    a determinant tracking that divergence; the square-root-dispersion
    models grow much slower (their limit carries no information) and raise
    IndexUnstable, as does a sign flip between the last two twists. The
    delta^2 rescaling keeps reported magnitudes bounded without touching
    signs. The orientation is fixed so that +1 labels the entangled-pair
    (c = -2) class; with this package's conventions that is the negated
    sign of Re det.
    """
    seq = list(delta_sequence)
    if len(seq) < 3 or any(b >= a for a, b in zip(seq, seq[1:])):
        raise ValueError("delta_sequence must be strictly decreasing with >= 3 entries")
    p = as_model_params(params)
    dets = []
    for dk in seq:
        g = states.grid(L, PBC, dk)
        occ = states.fill_ground(p, g)
        block = np.zeros((2, 2), dtype=complex)
        for ik, sign in occ.modes:
            mode = band.eigenpair(p, g.ks[ik], sign)
            block += np.outer(np.conj(mode.left_vec), mode.right_vec)
        block /= g.L
        dets.append(complex(block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0]))
    mags = [abs(d) for d in dets]
    needed = 0.3 * (seq[0] / seq[-1])  # a 1/delta divergence, with headroom
    if mags[-1] < needed * mags[0]:
        raise IndexUnstable("block determinant does not diverge as 1/delta_kappa")
    s_last = math.copysign(1.0, dets[-1].real)
    s_prev = math.copysign(1.0, dets[-2].real)
    if s_last != s_prev:
        raise IndexUnstable("block determinant sign flips between the last two twists")
    return -int(s_last)


def many_body_es(spectrum: ESpectrum, m: int) -> ManyBodyES:
    """Products lambda_{s} = prod_n [1/2 + s_n (C_n - 1/2)] over all sign
    choices of the m single-particle values nearest 1/2.
    """
    if m < 1 or m > 12:
        raise ValueError("m must be between 1 and 12")
    if m > len(spectrum.values):
        raise ValueError("m exceeds the number of single-particle values")
    order = np.argsort(np.abs(spectrum.values - 0.5), kind="stable")
    chosen = spectrum.values[order[:m]]
    levels = []
    for signs in itertools.product((1.0, -1.0), repeat=m):
        lam = 1.0 + 0.0j
        for s, c in zip(signs, chosen):
            lam *= 0.5 + s * (c - 0.5)
        levels.append(lam)
    levels = np.array(levels)
    order = np.lexsort((levels.imag, levels.real))[::-1]
    return ManyBodyES(levels=levels[order])


def bound_state_divergence(params, L_list: Sequence[int], region_fraction: float = 0.5,
                           delta_kappa: float = 1e-8) -> List[Tuple[int, float]]:
    """Largest correlation-matrix entry of the region after removing the
    exceptional mode (quasi-hole), per system size.

    The remaining bound states make this grow ~ ln L for k-linear
    exceptional points and converge ~ const - O(1/sqrt(L)) for the
    square-root kind.
    """
    p = as_model_params(params)
    out = []
    for L in L_list:
        g = states.grid(int(L), PBC, delta_kappa)
        occ = states.fill_ground(p, g)
        ik, sign = states.exceptional_mode(p, g, occ)
        holed = states.remove_mode(occ, ik, sign)
        c = states.correlation(p, g, holed)
        ca = restrict(c, Region(0, max(1, round(region_fraction * L))))
        out.append((int(L), float(np.max(np.abs(ca)))))
    return out
