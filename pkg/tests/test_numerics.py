"""Eigensolver, branch logs, and complex least squares against independent
oracles (brute-force characteristic polynomials, Jacobi rotations, numpy
LU determinants)."""

import numpy as np
import pytest

from nhchain import numerics
from nhchain.errors import DegenerateAbscissae, LogOfZero, NoConvergence
from nhchain.numerics import branch_log, complex_linear_fit, eig_general


def random_complex(rng, n, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def as_multiset_close(a, b, tol):
    a = np.sort_complex(np.asarray(a))
    b = np.sort_complex(np.asarray(b))
    # sorting by (re, im) can swap nearly-equal entries; match greedily
    b = list(b)
    for x in a:
        j = int(np.argmin(np.abs(np.array(b) - x)))
        assert abs(b[j] - x) < tol, f"unmatched eigenvalue {x}"
        b.pop(j)


def charpoly_coeffs(a):
    """Characteristic polynomial of a small matrix by permutation expansion
    of det(xI - a); returns coefficients highest power first."""
    import itertools

    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)

    def parity(perm):
        seen = [False] * len(perm)
        sign = 1
        for i in range(len(perm)):
            if seen[i]:
                continue
            j, cycle = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                cycle += 1
            if cycle % 2 == 0:
                sign = -sign
        return sign

    for perm in itertools.permutations(range(n)):
        term = np.zeros(1, dtype=complex)
        term[0] = parity(perm)
        for i in range(n):
            if perm[i] == i:
                # (x - a_ii)
                term = np.convolve(term, np.array([1.0, -a[i, i]], dtype=complex))
            else:
                term = np.convolve(term, np.array([-a[i, perm[i]]], dtype=complex))
        coeffs[n + 1 - len(term):] += term
    return coeffs


def jacobi_hermitian_eigvals(a, sweeps=100):
    """Cyclic complex Jacobi rotations for a Hermitian matrix: with
    J = [[c, s], [-conj(s), c]], s = sin(theta) e^{i arg(apq)} and
    tan(2 theta) = 2|apq| / (aqq - app), A <- J^H A J zeroes a[p, q]."""
    a = a.copy().astype(complex)
    n = a.shape[0]
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                off += abs(apq)
                phase = apq / abs(apq)
                theta = 0.5 * np.arctan2(2 * abs(apq), (a[q, q] - a[p, p]).real)
                c = np.cos(theta)
                s = np.sin(theta) * phase
                row_p = c * a[p, :] - s * a[q, :]
                row_q = np.conj(s) * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = row_p, row_q
                col_p = c * a[:, p] - np.conj(s) * a[:, q]
                col_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = col_p, col_q
        if off < 1e-14:
            break
    return np.sort(np.diag(a).real)


def test_jordan_block():
    dec = eig_general(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    assert np.allclose(dec.values, 0.0)
    assert dec.converged


def test_sigma_x():
    dec = eig_general(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))
    assert np.allclose(dec.values, [-1.0, 1.0])


def test_charpoly_oracle_small():
    rng = np.random.default_rng(3)
    for n in (2, 3, 4, 5, 6):
        a = random_complex(rng, n)
        expected = np.roots(charpoly_coeffs(a))
        got = eig_general(a).values
        as_multiset_close(got, expected, 1e-8)


def test_right_vector_residuals():
    rng = np.random.default_rng(5)
    for n in (3, 10, 40):
        a = random_complex(rng, n)
        dec = eig_general(a)
        norm = np.linalg.norm(a)
        for i in range(n):
            v = dec.right_vectors[:, i]
            assert np.linalg.norm(a @ v - dec.values[i] * v) <= 1e-10 * norm


def test_trace_consistency():
    rng = np.random.default_rng(7)
    for n in (5, 30, 100):
        a = random_complex(rng, n)
        dec = eig_general(a, want_vectors=False)
        norm = np.max(np.abs(a))
        assert abs(dec.values.sum() - np.trace(a)) <= n * 1e-10 * norm


def test_similarity_invariance():
    rng = np.random.default_rng(11)
    for n in (4, 12, 20):
        a = random_complex(rng, n)
        p = np.eye(n) + 0.3 * random_complex(rng, n)
        b = np.linalg.solve(p, a @ p)
        as_multiset_close(eig_general(a, want_vectors=False).values,
                          eig_general(b, want_vectors=False).values, 1e-7)


def test_hermitian_specialization_jacobi():
    rng = np.random.default_rng(13)
    for n in (4, 10, 16):
        x = random_complex(rng, n)
        a = (x + x.conj().T) / 2.0
        dec = eig_general(a, want_vectors=False)
        assert np.max(np.abs(dec.values.imag)) < 1e-10
        ref = jacobi_hermitian_eigvals(a)
        assert np.max(np.abs(np.sort(dec.values.real) - ref)) < 1e-9


def test_determinant_consistency():
    rng = np.random.default_rng(17)
    for n in (5, 20, 50):
        a = random_complex(rng, n)
        dec = eig_general(a, want_vectors=False)
        det_lu = np.linalg.det(a)  # LU-based reference
        det_eig = np.prod(dec.values)
        assert abs(det_eig - det_lu) <= 1e-7 * abs(det_lu)


def test_no_convergence_budget():
    rng = np.random.default_rng(19)
    a = random_complex(rng, 30)
    with pytest.raises(NoConvergence):
        eig_general(a, max_iter=1)


def test_deterministic_ordering():
    rng = np.random.default_rng(23)
    a = random_complex(rng, 12)
    v1 = eig_general(a).values
    v2 = eig_general(a).values
    assert np.array_equal(v1, v2)
    assert np.all(np.diff(v1.real) >= -1e-300)


def test_backend_agreement():
    if numerics.BACKEND != "cython":
        pytest.skip("compiled backend unavailable")
    from nhchain import _schur_py
    rng = np.random.default_rng(29)
    a = random_complex(rng, 25)
    h = a.copy()
    q = np.eye(25, dtype=complex)
    _schur_py.hessenberg(h, q)
    assert _schur_py.qr_schur(h, q, 1e-14, 900) >= 0
    vals_py = np.sort_complex(np.diag(h))
    vals_cy = np.sort_complex(eig_general(a, want_vectors=False).values)
    as_multiset_close(vals_cy, vals_py, 1e-9)


def test_branch_log_examples():
    assert abs(branch_log(-0.2, "magnitude") - np.log(0.2)) < 1e-14
    assert abs(branch_log(-0.2, "principal") - (np.log(0.2) + 1j * np.pi)) < 1e-14
    assert abs(branch_log(1j, "principal") - 1j * np.pi / 2) < 1e-14
    assert abs(branch_log(1j, "magnitude") - 1j * np.pi / 2) < 1e-14
    with pytest.raises(LogOfZero):
        branch_log(0.0)


def test_linear_fit_exact_line():
    fit = complex_linear_fit([0.0, 1.0, 2.0], [0.0, 1.0 + 1.0j, 2.0 + 2.0j])
    assert abs(fit.slope - (1 + 1j)) < 1e-14
    assert abs(fit.intercept) < 1e-14
    assert fit.residual_norm < 1e-12


def test_linear_fit_two_points():
    fit = complex_linear_fit([0.0, 1.0], [3.0, 3.0])
    assert abs(fit.slope) < 1e-14
    assert abs(fit.intercept - 3.0) < 1e-14
    assert fit.residual_norm < 1e-12


def test_linear_fit_noisy_recovery():
    rng = np.random.default_rng(31)
    xs = np.linspace(0.0, 5.0, 60)
    sigma = 0.05
    true_slope = 2.0 - 0.7j
    ys = true_slope * xs + 0.3 + sigma * (rng.standard_normal(60) + 1j * rng.standard_normal(60))
    fit = complex_linear_fit(xs, ys)
    # per-component slope std for complex noise of std sigma per component
    slope_sigma = sigma / np.sqrt(np.sum((xs - xs.mean()) ** 2))
    assert abs(fit.slope - true_slope) < 3.0 * slope_sigma * np.sqrt(2)


def test_linear_fit_degenerate():
    with pytest.raises(DegenerateAbscissae):
        complex_linear_fit([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
