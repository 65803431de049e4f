# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the dense complex Schur decomposition.

Mirrors `_schur_py` exactly; scalar loops instead of NumPy slicing.
"""

import numpy as np

cimport cython
from libc.math cimport hypot, sqrt

BACKEND = "cython"

ctypedef double complex zdouble


cdef inline double _cabs(zdouble z) noexcept:
    return hypot(z.real, z.imag)


cdef void _givens(zdouble a, zdouble b, double *c, zdouble *s) noexcept:
    cdef double absa, rho
    if b == 0:
        c[0] = 1.0
        s[0] = 0.0
        return
    if a == 0:
        c[0] = 0.0
        s[0] = 1.0
        return
    absa = _cabs(a)
    rho = hypot(absa, _cabs(b))
    c[0] = absa / rho
    s[0] = (a / absa) * b.conjugate() / rho


def hessenberg(zdouble[:, ::1] h, q_obj):
    """Reduce h to upper Hessenberg form in place; accumulate q if given."""
    cdef Py_ssize_t n = h.shape[0]
    cdef zdouble[:, ::1] q
    cdef bint with_q = q_obj is not None
    if with_q:
        q = q_obj
    cdef Py_ssize_t i, j, k
    cdef double xnorm, vnorm, av
    cdef zdouble x0, phase, alpha, acc
    cdef zdouble[::1] v = np.zeros(n, dtype=complex)
    for j in range(n - 2):
        xnorm = 0.0
        for i in range(j + 1, n):
            av = _cabs(h[i, j])
            xnorm += av * av
        xnorm = sqrt(xnorm)
        if xnorm <= 1e-300:
            for i in range(j + 2, n):
                h[i, j] = 0.0
            continue
        x0 = h[j + 1, j]
        if x0 != 0:
            phase = x0 / _cabs(x0)
        else:
            phase = 1.0
        alpha = -phase * xnorm
        for i in range(j + 1, n):
            v[i] = h[i, j]
        v[j + 1] = v[j + 1] - alpha
        vnorm = 0.0
        for i in range(j + 1, n):
            av = _cabs(v[i])
            vnorm += av * av
        vnorm = sqrt(vnorm)
        if vnorm <= 1e-300:
            continue
        for i in range(j + 1, n):
            v[i] = v[i] / vnorm
        # rows j+1.. : h <- (I - 2 v v^H) h
        for k in range(j, n):
            acc = 0.0
            for i in range(j + 1, n):
                acc += v[i].conjugate() * h[i, k]
            acc *= 2.0
            for i in range(j + 1, n):
                h[i, k] = h[i, k] - acc * v[i]
        # columns j+1.. : h <- h (I - 2 v v^H)
        for i in range(n):
            acc = 0.0
            for k in range(j + 1, n):
                acc += h[i, k] * v[k]
            acc *= 2.0
            for k in range(j + 1, n):
                h[i, k] = h[i, k] - acc * v[k].conjugate()
        if with_q:
            for i in range(n):
                acc = 0.0
                for k in range(j + 1, n):
                    acc += q[i, k] * v[k]
                acc *= 2.0
                for k in range(j + 1, n):
                    q[i, k] = q[i, k] - acc * v[k].conjugate()
        h[j + 1, j] = alpha
        for i in range(j + 2, n):
            h[i, j] = 0.0


cdef zdouble _wilkinson(zdouble[:, ::1] h, Py_ssize_t hi) noexcept:
    cdef zdouble a = h[hi - 1, hi - 1]
    cdef zdouble b = h[hi - 1, hi]
    cdef zdouble c = h[hi, hi - 1]
    cdef zdouble d = h[hi, hi]
    cdef zdouble disc = ((a - d) * (a - d) + 4.0 * b * c) ** 0.5
    cdef zdouble mu1 = 0.5 * (a + d + disc)
    cdef zdouble mu2 = 0.5 * (a + d - disc)
    if _cabs(mu1 - d) <= _cabs(mu2 - d):
        return mu1
    return mu2


cdef void _sweep(zdouble[:, ::1] h, zdouble[:, ::1] q, bint with_q,
                 Py_ssize_t lo, Py_ssize_t hi, zdouble mu, Py_ssize_t n) noexcept:
    cdef zdouble x = h[lo, lo] - mu
    cdef zdouble z = h[lo + 1, lo]
    cdef double c
    cdef zdouble s, cs, t1, t2
    cdef Py_ssize_t i, k, c0, r1
    for i in range(lo, hi):
        _givens(x, z, &c, &s)
        cs = s.conjugate()
        c0 = i - 1 if i > lo else lo
        for k in range(c0, n):
            t1 = h[i, k]
            t2 = h[i + 1, k]
            h[i, k] = c * t1 + s * t2
            h[i + 1, k] = -cs * t1 + c * t2
        r1 = i + 2
        if r1 > hi:
            r1 = hi
        for k in range(r1 + 1):
            t1 = h[k, i]
            t2 = h[k, i + 1]
            h[k, i] = c * t1 + cs * t2
            h[k, i + 1] = -s * t1 + c * t2
        if with_q:
            for k in range(n):
                t1 = q[k, i]
                t2 = q[k, i + 1]
                q[k, i] = c * t1 + cs * t2
                q[k, i + 1] = -s * t1 + c * t2
        if i < hi - 1:
            x = h[i + 1, i]
            z = h[i + 2, i]


def qr_schur(zdouble[:, ::1] h, q_obj, double tol, int max_sweeps):
    """Shifted QR iteration on Hessenberg h; returns sweep count or -1."""
    cdef Py_ssize_t n = h.shape[0]
    cdef zdouble[:, ::1] q
    cdef bint with_q = q_obj is not None
    if with_q:
        q = q_obj
    else:
        q = h  # unused
    cdef double hnorm = 0.0, av, off, ref
    cdef Py_ssize_t i, j, lo, hi
    cdef int sweeps = 0, stagnation = 0
    cdef zdouble mu
    for i in range(n):
        for j in range(n):
            av = _cabs(h[i, j])
            if av > hnorm:
                hnorm = av
    if hnorm == 0.0:
        return 0
    hi = n - 1
    while hi > 0:
        lo = hi
        while lo > 0:
            off = _cabs(h[lo, lo - 1])
            ref = _cabs(h[lo - 1, lo - 1]) + _cabs(h[lo, lo])
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
            mu = h[hi, hi] + 0.75 * _cabs(h[hi, hi - 1])
        else:
            mu = _wilkinson(h, hi)
        _sweep(h, q, with_q, lo, hi, mu, n)
        sweeps += 1
        stagnation += 1
    return sweeps


def tri_right_vectors(zdouble[:, ::1] t):
    """Right eigenvectors of upper-triangular t by back substitution."""
    cdef Py_ssize_t n = t.shape[0]
    cdef double tnorm = 0.0, av, nv, smallden, tiny
    cdef Py_ssize_t i, j, k
    cdef zdouble lam, rhs, den
    for i in range(n):
        for j in range(n):
            av = _cabs(t[i, j])
            if av > tnorm:
                tnorm = av
    tiny = (tnorm if tnorm > 1.0 else 1.0) * 1e-40
    smallden = (tnorm if tnorm > 1.0 else 1.0) * 2.220446049250313e-16
    y_arr = np.zeros((n, n), dtype=complex)
    cdef zdouble[:, ::1] y = y_arr
    cdef zdouble[::1] v = np.zeros(n, dtype=complex)
    for k in range(n):
        lam = t[k, k]
        for i in range(k + 1):
            v[i] = 0.0
        v[k] = 1.0
        for i in range(k - 1, -1, -1):
            rhs = 0.0
            for j in range(i + 1, k + 1):
                rhs += t[i, j] * v[j]
            rhs = -rhs
            den = t[i, i] - lam
            if _cabs(den) < smallden:
                den = smallden
            v[i] = rhs / den
            av = _cabs(v[i])
            if av > 1e120:
                for j in range(i, k + 1):
                    v[j] = v[j] / av
        nv = 0.0
        for i in range(k + 1):
            av = _cabs(v[i])
            nv += av * av
        nv = sqrt(nv)
        if nv <= tiny:
            v[k] = 1.0
            nv = 1.0
        for i in range(k + 1):
            y[i, k] = v[i] / nv
    return y_arr
