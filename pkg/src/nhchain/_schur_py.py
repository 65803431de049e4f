"""Pure NumPy kernels for the dense complex Schur decomposition.

Same contract as the compiled module `_schur_cy`; selected as a fallback
when the extension is unavailable (or when NHCHAIN_PURE_PY=1).
"""

import numpy as np

BACKEND = "python"


def _givens(a, b):
    """Rotation (c, s) with c real, |c|^2+|s|^2=1 zeroing b in (a, b)."""
    if b == 0:
        return 1.0, 0.0 + 0.0j
    if a == 0:
        return 0.0, 1.0 + 0.0j
    absa = abs(a)
    rho = np.hypot(absa, abs(b))
    c = absa / rho
    s = (a / absa) * np.conj(b) / rho
    return c, s


def hessenberg(h, q):
    """Reduce h to upper Hessenberg form in place by unitary similarity.

    If q is not None it accumulates the transformation (q <- q @ P).
    """
    n = h.shape[0]
    for j in range(n - 2):
        x = h[j + 1:, j]
        xnorm = np.linalg.norm(x)
        if xnorm <= 1e-300:
            h[j + 2:, j] = 0.0
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0 + 0.0j
        alpha = -phase * xnorm
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm <= 1e-300:
            continue
        v /= vnorm
        # rows j+1.., then columns j+1.. (P = I - 2 v v†)
        h[j + 1:, j:] -= 2.0 * np.outer(v, v.conj() @ h[j + 1:, j:])
        h[:, j + 1:] -= 2.0 * np.outer(h[:, j + 1:] @ v, v.conj())
        if q is not None:
            q[:, j + 1:] -= 2.0 * np.outer(q[:, j + 1:] @ v, v.conj())
        h[j + 1, j] = alpha
        h[j + 2:, j] = 0.0


def _wilkinson_shift(h, hi):
    a = h[hi - 1, hi - 1]
    b = h[hi - 1, hi]
    c = h[hi, hi - 1]
    d = h[hi, hi]
    tr = a + d
    disc = np.sqrt((a - d) * (a - d) + 4.0 * b * c)
    mu1 = 0.5 * (tr + disc)
    mu2 = 0.5 * (tr - disc)
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def _sweep(h, q, lo, hi, mu):
    n = h.shape[0]
    x = h[lo, lo] - mu
    z = h[lo + 1, lo]
    for i in range(lo, hi):
        c, s = _givens(x, z)
        cs = np.conj(s)
        c0 = i - 1 if i > lo else lo
        # rows i, i+1 from the left
        t1 = h[i, c0:].copy()
        t2 = h[i + 1, c0:]
        h[i, c0:] = c * t1 + s * t2
        h[i + 1, c0:] = -cs * t1 + c * t2
        # columns i, i+1 from the right
        r1 = min(i + 2, hi) + 1
        u1 = h[:r1, i].copy()
        u2 = h[:r1, i + 1]
        h[:r1, i] = c * u1 + cs * u2
        h[:r1, i + 1] = -s * u1 + c * u2
        if q is not None:
            w1 = q[:, i].copy()
            w2 = q[:, i + 1]
            q[:, i] = c * w1 + cs * w2
            q[:, i + 1] = -s * w1 + c * w2
        if i < hi - 1:
            x = h[i + 1, i]
            z = h[i + 2, i]


def qr_schur(h, q, tol, max_sweeps):
    """Shifted QR iteration driving Hessenberg h to upper-triangular form.

    Returns the number of sweeps, or -1 if max_sweeps was exhausted.
    Deflated subdiagonals are set to exact zeros.
    """
    n = h.shape[0]
    hnorm = np.max(np.abs(h)) if n else 0.0
    if hnorm == 0.0:
        return 0
    hi = n - 1
    sweeps = 0
    stagnation = 0
    while hi > 0:
        # deflate any negligible subdiagonal inside the active block
        lo = hi
        while lo > 0:
            off = abs(h[lo, lo - 1])
            ref = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if ref == 0.0:
                ref = hnorm
            if off <= tol * ref:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            stagnation = 0
            continue
        if sweeps >= max_sweeps:
            return -1
        if stagnation > 0 and stagnation % 10 == 0:
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson_shift(h, hi)
        _sweep(h, q, lo, hi, mu)
        sweeps += 1
        stagnation += 1
    return sweeps


def tri_right_vectors(t):
    """Right eigenvectors of the upper-triangular t by back substitution.

    Near-equal diagonal entries are regularized; columns of the result are
    unit 2-norm. For defective clusters the returned vectors may repeat.
    """
    n = t.shape[0]
    tnorm = np.max(np.abs(t)) if n else 0.0
    tiny = max(tnorm, 1.0) * 1e-40
    smallden = max(tnorm, 1.0) * np.finfo(float).eps
    y = np.zeros((n, n), dtype=complex)
    for k in range(n):
        lam = t[k, k]
        v = np.zeros(k + 1, dtype=complex)
        v[k] = 1.0
        for i in range(k - 1, -1, -1):
            rhs = -(t[i, i + 1:k + 1] @ v[i + 1:k + 1])
            den = t[i, i] - lam
            if abs(den) < smallden:
                den = complex(smallden, 0.0)
            v[i] = rhs / den
            av = abs(v[i])
            if av > 1e120:
                v[i:] /= av
        nv = np.linalg.norm(v)
        if nv <= tiny:
            v[k] = 1.0
            nv = 1.0
        y[:k + 1, k] = v / nv
    return y
