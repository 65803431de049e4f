"""Dense complex linear algebra: non-normal eigendecomposition, branch logs,
complex least squares.

The eigensolver is a balanced Hessenberg reduction followed by single-shift
(Wilkinson) complex QR with deflation; right eigenvectors come from back
substitution on the triangular factor. The O(n^3) inner kernels live in the
compiled module `_schur_cy` with a NumPy fallback `_schur_py`; set
NHCHAIN_PURE_PY=1 to force the fallback. Matrices are plain complex ndarrays.
"""

import cmath
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateAbscissae, LogOfZero, NoConvergence

if os.environ.get("NHCHAIN_PURE_PY"):
    from . import _schur_py as _kernels
else:
    try:
        from . import _schur_cy as _kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _schur_py as _kernels

BACKEND = _kernels.BACKEND


@dataclass
class EigenDecomposition:
    """Eigenvalues (sorted by real, then imaginary part) and optional vectors."""

    values: np.ndarray
    right_vectors: Optional[np.ndarray]
    converged: bool
    iterations: int


@dataclass
class LinearFit:
    slope: complex
    intercept: complex
    residual_norm: float
    n_points: int


def _balance(a, max_passes=20):
    """Diagonal similarity scaling (radix-2) reducing the matrix norm."""
    n = a.shape[0]
    d = np.ones(n)
    b = a.copy()
    for _ in range(max_passes):
        done = True
        for i in range(n):
            r = np.sum(np.abs(b[i, :])) - abs(b[i, i])
            c = np.sum(np.abs(b[:, i])) - abs(b[i, i])
            if r < 1e-300 or c < 1e-300:
                continue
            f = 1.0
            g = r / 2.0
            while c < g:
                f *= 2.0
                c *= 4.0
            g = r * 2.0
            while c >= g:
                f /= 2.0
                c /= 4.0
            if f != 1.0 and (c + r) / f < 0.95 * (np.sum(np.abs(b[i, :])) + np.sum(np.abs(b[:, i])) - 2 * abs(b[i, i])):
                d[i] *= f
                b[i, :] /= f
                b[:, i] *= f
                done = False
        if done:
            break
    return b, d


def eig_general(a, tol=1e-14, max_iter=None, want_vectors=True):
    """Eigendecomposition of a general (non-normal) complex square matrix.

    Parameters
    ----------
    a : (n, n) array_like, complex
    tol : relative deflation/convergence threshold for the QR iteration.
    max_iter : total QR sweep budget; defaults to 30*n.
    want_vectors : skip the Schur-basis accumulation and back substitution
        when only eigenvalues are needed (about 3x faster).

    Raises
    ------
    NoConvergence
        If the sweep budget is exhausted (pathological input; retry with a
        larger budget).
    """
    a = np.ascontiguousarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eig_general expects a square matrix")
    n = a.shape[0]
    if n == 0:
        return EigenDecomposition(np.zeros(0, complex), np.zeros((0, 0), complex) if want_vectors else None, True, 0)
    if max_iter is None:
        max_iter = 30 * n
    if n == 1:
        vec = np.ones((1, 1), dtype=complex) if want_vectors else None
        return EigenDecomposition(a[0, :1].copy(), vec, True, 0)

    h, d = _balance(a)
    q = np.eye(n, dtype=complex) if want_vectors else None
    _kernels.hessenberg(h, q)
    sweeps = _kernels.qr_schur(h, q, float(tol), int(max_iter))
    if sweeps < 0:
        raise NoConvergence(f"QR iteration did not converge within {max_iter} sweeps")
    values = np.diag(h).copy()
    order = np.lexsort((values.imag, values.real))
    values = values[order]

    vectors = None
    if want_vectors:
        y = _kernels.tri_right_vectors(h)
        vectors = q @ y
        vectors = d[:, None] * vectors  # undo balancing
        vectors = vectors[:, order]
        norms = np.linalg.norm(vectors, axis=0)
        norms[norms == 0] = 1.0
        vectors = vectors / norms
        # deterministic phase: largest-magnitude component real positive
        lead = np.argmax(np.abs(vectors), axis=0)
        phases = vectors[lead, np.arange(n)]
        phases = np.where(np.abs(phases) == 0, 1.0, phases / np.abs(phases))
        vectors = vectors / phases
    return EigenDecomposition(values, vectors, True, sweeps)


def branch_log(x, policy="principal"):
    """Complex log with branch control.

    "principal" is the standard branch (imaginary part in (-pi, pi]);
    "magnitude" returns ln|x| for x on the negative real axis and the
    principal value elsewhere.
    """
    x = complex(x)
    if x == 0:
        raise LogOfZero("log of zero")
    if policy == "magnitude" and x.imag == 0.0 and x.real < 0.0:
        return complex(np.log(abs(x.real)), 0.0)
    if policy not in ("principal", "magnitude"):
        raise ValueError(f"unknown branch policy {policy!r}")
    return cmath.log(x)


def complex_linear_fit(xs, ys):
    """Least squares line y = a*x + b for real xs and complex ys.

    Closed-form normal equations; needs at least two distinct abscissae.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=complex)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be 1-d arrays of equal length")
    m = xs.size
    if m < 2 or np.all(xs == xs[0]):
        raise DegenerateAbscissae("need at least two distinct abscissae")
    sx = xs.sum()
    sxx = (xs * xs).sum()
    sy = ys.sum()
    sxy = (xs * ys).sum()
    det = m * sxx - sx * sx
    slope = (m * sxy - sx * sy) / det
    intercept = (sy * sxx - sx * sxy) / det
    resid = ys - (slope * xs + intercept)
    return LinearFit(complex(slope), complex(intercept), float(np.linalg.norm(resid)), int(m))
