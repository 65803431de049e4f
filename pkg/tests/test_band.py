"""Bloch band analytics: dispersion, biorthogonal eigenpairs, exceptional
momenta, symmetries, real-space consistency, and edge modes."""

import math

import numpy as np
import pytest

from nhchain import band
from nhchain.band import (LambdaParams, ModelParams, bloch_matrix, dispersion,
                          eigenpair, ep_window, locate_seps, obc_edge_modes,
                          real_space_hamiltonian, symmetry_report)
from nhchain.errors import BinormVanishing, DegenerateMatrix, NonComparable
from nhchain.numerics import eig_general

C2 = LambdaParams(lam=1.0, w=2.0, v=3.0, u=1j)          # c = -2 configuration
NONUNI = LambdaParams(lam=1.0, w=3.0, v=2.0, u=1j)      # edge-mode configuration
TYPE2 = ModelParams(u=0.0, w1=1.0, v1=1.0, w2=0.3, v2=0.7)
HSSH = ModelParams(u=0.0, w1=1.0, w2=1.0, v1=1.0, v2=1.0)


def test_invariants_recomputed():
    p = TYPE2
    assert p.a_r == p.w1 * p.w2 + p.v1 * p.v2 + p.u ** 2
    assert p.b_r == p.w2 * p.v1 + p.w1 * p.v2
    assert p.s == p.w2 * p.v1 - p.w1 * p.v2


def test_lambda_expansion_exact():
    lp = LambdaParams(lam=2.0, w=1.5, v=-0.5j, u=0.25)
    p = lp.expand()
    assert p.w2 / p.w1 == 2.0
    assert p.v2 / p.v1 == 2.0


def test_hermitian_bloch_matrix():
    p = ModelParams(u=0.5, w1=1.0 + 0.2j, w2=1.0 - 0.2j, v1=0.3j, v2=-0.3j)
    assert p.is_hermitian()
    for k in (-2.0, 0.3, 1.7):
        h = bloch_matrix(p, k)
        assert np.allclose(h, h.conj().T, atol=1e-14)


def test_dispersion_examples():
    ep, em = dispersion(HSSH, 0.0)
    assert abs(ep - 2.0) < 1e-14 and abs(em + 2.0) < 1e-14
    # float pi leaves a ~1e-16 sine residue, amplified to ~1e-8 by the root
    ep, em = dispersion(TYPE2, -math.pi)
    assert abs(ep) < 1e-8 and abs(em) < 1e-8
    ep, em = dispersion(LambdaParams(1.0, 2.0, 3.0, 1j), 0.0)
    assert abs(ep - math.sqrt(24.0)) < 1e-12


def test_chiral_pairing_exact():
    rng = np.random.default_rng(2)
    for _ in range(20):
        c = rng.standard_normal(10)
        p = ModelParams(u=c[0] + 1j * c[1], v1=c[2] + 1j * c[3], v2=c[4] + 1j * c[5],
                        w1=c[6] + 1j * c[7], w2=c[8] + 1j * c[9])
        k = float(rng.uniform(-math.pi, math.pi))
        ep, em = dispersion(p, k)
        assert ep + em == 0.0


def test_eigenpair_hermitian_limit():
    m = eigenpair(HSSH, math.pi / 2, -1)
    assert np.allclose(m.left_vec, m.right_vec, atol=1e-12)
    assert abs(np.vdot(m.left_vec, m.right_vec) - 1.0) < 1e-12


def test_eigenpair_residuals_and_binorm():
    for p in (C2.expand(), TYPE2):
        for k in (-2.1, 0.4, 2.8):
            for sign in (+1, -1):
                m = eigenpair(p, k, sign)
                h = bloch_matrix(p, k)
                norm = np.linalg.norm(h)
                assert np.linalg.norm(h @ m.right_vec - m.energy * m.right_vec) <= 1e-10 * norm
                assert np.linalg.norm(h.conj().T @ m.left_vec - np.conj(m.energy) * m.left_vec) <= 1e-10 * norm
                assert abs(np.vdot(m.left_vec, m.right_vec) - 1.0) < 1e-12


def test_biorthonormality_2x2():
    p = C2.expand()
    for k in (-2.5, -0.8, 1.9):
        modes = [eigenpair(p, k, s) for s in (+1, -1)]
        for a in range(2):
            for b in range(2):
                ov = np.vdot(modes[a].left_vec, modes[b].right_vec)
                assert abs(ov - (1.0 if a == b else 0.0)) < 1e-10


def test_eigenpair_binorm_vanishing_near_ep():
    with pytest.raises(BinormVanishing):
        eigenpair(C2, -math.pi + 1e-12, -1, binorm_floor=1e-8)


def test_eigenpair_degenerate_matrix():
    zero = ModelParams(u=0.0, v1=0.0, v2=0.0, w1=0.0, w2=0.0)
    with pytest.raises(DegenerateMatrix):
        eigenpair(zero, 0.3, +1)


def test_binorm_sqrt_scaling_type2():
    # |<L|R>| ~ sqrt(dk) near the square-root exceptional point
    vals = {}
    for dk in (1e-6, 1e-8):
        m = eigenpair(TYPE2, -math.pi + dk, -1, binorm_floor=1e-16)
        vals[dk] = abs(m.binorm)
    ratio = vals[1e-6] / vals[1e-8]
    assert abs(ratio - 10.0) < 1.0  # within 10% of sqrt(100)


def test_locate_seps_examples():
    assert locate_seps(TYPE2) == [-math.pi]
    ks = locate_seps(LambdaParams(1.0, 2.0, 3.0, 1j))
    assert len(ks) == 1 and abs(ks[0] + math.pi) < 1e-12
    assert abs(dispersion(LambdaParams(1.0, 2.0, 3.0, 1j), ks[0])[0]) < 1e-8
    assert locate_seps(ModelParams(u=0.0, w1=2.0, w2=2.0, v1=1.0, v2=1.0)) == []


def test_locate_seps_interior_pair():
    p = LambdaParams(1.0, 2.0, 3.0, 1.5j).expand()
    ks = locate_seps(p)
    assert len(ks) == 2 and abs(ks[0] + ks[1]) < 1e-12
    for k in ks:
        assert abs(dispersion(p, k)[0]) < 1e-8


def test_ep_window_examples():
    assert ep_window(LambdaParams(1.0, 2.0, 3.0, 1j)) is True
    assert ep_window(LambdaParams(1.0, 2.0, 3.0, 0.5)) is False
    assert ep_window(LambdaParams(1.0, 1.0, 1.0, 3.8j)) is False
    with pytest.raises(NonComparable):
        ep_window(LambdaParams(1.0, 2.0, 3.0, 0.3 + 0.4j))


def test_ep_window_negative_couplings():
    # sorted bounds make the window meaningful for negative v as well
    assert ep_window(LambdaParams(1.0, 2.0, -3.0, 5j)) is True


def test_symmetry_report_real_couplings():
    rep = symmetry_report(LambdaParams(2.0, 2.0, 3.0, 0.0).expand())
    assert rep.pseudo_hermitian and rep.screw_pt and rep.nh_chiral and rep.ssh_similar
    assert not rep.anti_screw_pt


def test_symmetry_report_imaginary_couplings():
    rep = symmetry_report(LambdaParams(2.0, 2.0j, 3.0j, 0.0).expand())
    assert rep.anti_screw_pt
    assert not rep.screw_pt


def test_symmetry_report_hermitian_ssh():
    rep = symmetry_report(HSSH)
    assert rep.pseudo_hermitian and rep.screw_pt and rep.nh_chiral and rep.ssh_similar


def test_symmetry_report_imaginary_u_keeps_screw_pt():
    rep = symmetry_report(C2.expand())
    assert rep.screw_pt and rep.nh_chiral and rep.ssh_similar
    assert not rep.pseudo_hermitian  # u breaks the fixed-metric relation


def test_real_space_hermitian():
    h = real_space_hamiltonian(HSSH, 2, band.PBC).matrix
    assert np.allclose(h, h.conj().T, atol=1e-14)


def test_real_space_pbc_matches_bloch():
    p = C2.expand()
    L = 40
    h = real_space_hamiltonian(p, L, band.PBC).matrix
    vals = eig_general(h, want_vectors=False).values
    ks = -math.pi + 2 * math.pi * np.arange(L) / L
    expected = []
    for k in ks:
        ep, em = dispersion(p, k)
        expected += [ep, em]
    expected = np.sort_complex(np.array(expected))
    got = np.sort_complex(vals)
    matched = list(expected)
    for x in got:
        j = int(np.argmin(np.abs(np.array(matched) - x)))
        assert abs(matched[j] - x) < 1e-8
        matched.pop(j)


def test_real_space_apbc_flips_wrap_sign():
    p = TYPE2
    h_p = real_space_hamiltonian(p, 4, band.PBC).matrix
    h_a = real_space_hamiltonian(p, 4, band.APBC).matrix
    diff = h_p - h_a
    assert abs(diff[0, 7] - 2 * p.w1) < 1e-14
    assert abs(diff[7, 0] - 2 * p.w2) < 1e-14
    assert np.count_nonzero(diff) == 2


def test_real_space_bandwidth():
    h = real_space_hamiltonian(TYPE2, 6, band.OBC).matrix
    for x in range(6):
        for y in range(6):
            if abs(x - y) > 1:
                assert np.all(h[2 * x: 2 * x + 2, 2 * y: 2 * y + 2] == 0)


def test_obc_edge_modes_pm_u():
    modes = obc_edge_modes(NONUNI.expand(), 40)
    assert len(modes) == 2
    energies = sorted(m[0].imag for m in modes)
    assert abs(energies[0] + 1.0) < 1e-6 and abs(energies[1] - 1.0) < 1e-6


def test_obc_no_edge_modes():
    assert obc_edge_modes(C2.expand(), 40) == []


def test_obc_hermitian_ssh_zero_modes():
    p = ModelParams(u=0.0, w1=3.0, w2=3.0, v1=2.0, v2=2.0)
    modes = obc_edge_modes(p, 40)
    assert len(modes) == 2
    for e, ell in modes:
        assert abs(e) < 1e-4
        assert ell < 40


def test_spectrum_similarity_invariance():
    # spectrum of h(k) equals the spectrum of S^-1 h S for S = diag(1, sqrt(lam))
    for lam in (1.0, 2.0):
        lp = LambdaParams(lam, 2.0, 3.0, 1j)
        p = lp.expand()
        s = np.diag([1.0, math.sqrt(lam)]).astype(complex)
        for k in (-1.2, 0.7):
            h = bloch_matrix(p, k)
            hs = np.linalg.inv(s) @ h @ s
            a = np.sort_complex(np.linalg.eigvals(h))
            b = np.sort_complex(np.linalg.eigvals(hs))
            assert np.max(np.abs(a - b)) < 1e-10
