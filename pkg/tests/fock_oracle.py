"""Brute-force many-body oracle on the full Fock space (NumPy-only).

Independent of the package's momentum-space pipeline: builds the dense
many-body Hamiltonian from a single-particle matrix, takes the biorthogonal
ground state from numpy.linalg.eig, and evaluates correlators and reduced
density matrices directly. Site i maps to bit i (bit 0 least significant).
"""

import math

import numpy as np


def many_body_hamiltonian(h):
    """Dense sum_{ij} h_ij c^dag_i c_j on the 2^n Fock space."""
    n = h.shape[0]
    dim = 1 << n
    ham = np.zeros((dim, dim), dtype=complex)
    for j in range(n):
        for i in range(n):
            if h[i, j] == 0:
                continue
            for state in range(dim):
                if not (state >> j) & 1:
                    continue
                sign_j = (-1) ** bin(state & ((1 << j) - 1)).count("1")
                mid = state ^ (1 << j)
                if (mid >> i) & 1:
                    continue
                sign_i = (-1) ** bin(mid & ((1 << i) - 1)).count("1")
                ham[mid | (1 << i), state] += h[i, j] * sign_j * sign_i
    return ham


def annihilate(vec, j):
    n_states = vec.size
    out = np.zeros(n_states, dtype=complex)
    for state in range(n_states):
        if (state >> j) & 1:
            sign = (-1) ** bin(state & ((1 << j) - 1)).count("1")
            out[state ^ (1 << j)] += sign * vec[state]
    return out


def biorthogonal_ground(ham, re_tol=1e-9):
    """(right, left, energy) with minimal Re E (ties resolved toward
    negative Im, matching the filling convention), <L|R> = 1."""
    vals, right = np.linalg.eig(ham)
    vals_l, left = np.linalg.eig(ham.conj().T)
    scale = max(1.0, float(np.max(np.abs(vals))))
    re_min = vals.real.min()
    ties = [i for i in range(vals.size) if vals.real[i] - re_min <= re_tol * scale]
    idx = min(ties, key=lambda i: vals.imag[i])
    energy = vals[idx]
    jdx = int(np.argmin(np.abs(vals_l - np.conj(energy))))
    r = right[:, idx]
    lv = left[:, jdx]
    overlap = np.vdot(lv, r)
    lv = lv / np.conj(overlap)
    return r, lv, energy


def correlation_matrix(right, left, n_sites):
    """C[i, j] = <L| c^dag_i c_j |R> (the pair is assumed binormalized)."""
    c = np.zeros((n_sites, n_sites), dtype=complex)
    annih_r = [annihilate(right, j) for j in range(n_sites)]
    annih_l = [annihilate(left, i) for i in range(n_sites)]
    for i in range(n_sites):
        for j in range(n_sites):
            c[i, j] = np.vdot(annih_l[i], annih_r[j])
    return c


def reduced_density(right, left, n_sites, m_sites):
    """Tr_B |R><L| keeping the first m_sites (low bits)."""
    rmat = right.reshape(1 << (n_sites - m_sites), 1 << m_sites)
    lmat = left.reshape(1 << (n_sites - m_sites), 1 << m_sites)
    return rmat.T @ lmat.conj()


def entropy_magnitude(rho, real_tol=1e-6):
    """-sum lam ln lam with ln|.| for (near-)real eigenvalues.

    real_tol absorbs the imaginary noise that dense ED puts on
    mathematically real eigenvalues near an exceptional mode.
    """
    vals = np.linalg.eigvals(rho)
    total = 0.0 + 0.0j
    for lam in vals:
        if abs(lam) <= 1e-14:
            continue
        if abs(lam.imag) <= real_tol * max(1.0, abs(lam.real)):
            total += lam.real * math.log(abs(lam.real))
        else:
            total += lam * np.log(lam)
    return complex(-total)


def twisted_params(params, delta_kappa):
    """Gauge-equivalent couplings whose periodic Bloch momenta sit at the
    twisted grid: w1 -> w1 e^{-i dk}, w2 -> w2 e^{+i dk}."""
    from nhchain.band import ModelParams

    ph = np.exp(1j * delta_kappa)
    return ModelParams(u=params.u, v1=params.v1, v2=params.v2,
                       w1=params.w1 / ph, w2=params.w2 * ph)


def single_particle_from_grid(params, grd):
    """2L x 2L single-particle matrix assembled from the grid's Bloch
    matrices in the same frame the package uses (no twist gauge phases):
    h[(x,a),(y,b)] = (1/L) sum_k e^{ik(x-y)} h(k)_{ab}."""
    from nhchain.band import bloch_matrix

    L = grd.L
    h = np.zeros((2 * L, 2 * L), dtype=complex)
    for k in grd.ks:
        hk = bloch_matrix(params, k)
        for x in range(L):
            for y in range(L):
                ph = np.exp(1j * k * (x - y)) / L
                h[2 * x: 2 * x + 2, 2 * y: 2 * y + 2] += ph * hk
    return h
