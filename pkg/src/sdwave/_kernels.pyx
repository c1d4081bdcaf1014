# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-node kernels: evolution symbols and jet-based expansion terms.

Mirrors ``_fallback.py`` element by element.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, expm1, sin, cos, sinh, cosh, sqrt, fabs

cnp.import_array()

DEF MAX_ORDER = 31

cdef double BRANCH_EPS = 1e-6
cdef double SINC_EPS = 1e-5
cdef double SERIES_EPS = 1e-2


cdef inline double _sinc_series(double x2) nogil:
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))


cdef inline double _cos_series(double x2) nogil:
    return 1.0 - x2 / 2.0 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0))


cdef inline void _symbols_one(double t, double r, double* e0, double* e1) nogil:
    cdef double beta, x, g, s, lam_m, lam_p, ep, b2, x2, xs, sign
    if fabs(r - 2.0) <= BRANCH_EPS:
        sign = 1.0 if r <= 2.0 else -1.0
        b2 = r * r * fabs((2.0 - r) * (2.0 + r)) / 4.0
        x2 = t * t * b2
        g = exp(-t * r * r / 2.0)
        if x2 < SERIES_EPS * SERIES_EPS:
            e0[0] = g * _cos_series(sign * x2)
            e1[0] = g * t * _sinc_series(sign * x2)
        else:
            xs = sqrt(x2)
            if sign > 0:
                e0[0] = g * cos(xs)
                e1[0] = g * t * sin(xs) / xs
            else:
                e0[0] = g * cosh(xs)
                e1[0] = g * t * sinh(xs) / xs
    elif r < 2.0:
        beta = r * sqrt((2.0 - r) * (2.0 + r)) / 2.0
        x = t * beta
        g = exp(-t * r * r / 2.0)
        e0[0] = g * cos(x)
        if fabs(x) < SINC_EPS:
            e1[0] = g * t * _sinc_series(x * x)
        else:
            e1[0] = g * t * sin(x) / x
    else:
        s = r * sqrt((r - 2.0) * (r + 2.0))
        lam_m = (-r * r - s) / 2.0
        lam_p = r * r / lam_m
        ep = exp(lam_p * t)
        e0[0] = (ep + exp(lam_m * t)) / 2.0
        if s * t < SINC_EPS:
            e1[0] = ep * t * (1.0 - s * t / 2.0)
        else:
            e1[0] = ep * (-expm1(-s * t)) / s


def symbols(double t, r):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rr = np.ascontiguousarray(r, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t n = rr.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out0 = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out1 = np.empty(n)
    cdef double[::1] rv = rr, o0 = out0, o1 = out1
    with nogil:
        for k in range(n):
            _symbols_one(t, rv[k], &o0[k], &o1[k])
    shape = np.shape(r)
    return out0.reshape(shape), out1.reshape(shape)


cdef inline void _mul(double* a, double* b, double* out, int K) nogil:
    cdef int k, j
    cdef double acc
    for k in range(K + 1):
        acc = a[0] * b[k]
        for j in range(1, k + 1):
            acc = acc + a[j] * b[k - j]
        out[k] = acc


cdef inline void _div(double* a, double* b, double* q, int K) nogil:
    cdef int k, j
    cdef double acc
    for k in range(K + 1):
        acc = a[k]
        for j in range(1, k + 1):
            acc = acc - b[j] * q[k - j]
        q[k] = acc / b[0]


cdef inline void _sqrt(double* c, double* y, int K) nogil:
    cdef int k, j
    cdef double acc
    y[0] = sqrt(c[0])
    for k in range(1, K + 1):
        acc = c[k]
        for j in range(1, k):
            acc = acc - y[j] * y[k - j]
        y[k] = acc / (2.0 * y[0])


cdef inline void _sin_cos(double* x, double* sn, double* cs, int K) nogil:
    cdef double sh[MAX_ORDER + 1]
    cdef double ch[MAX_ORDER + 1]
    cdef int k, j
    cdef double acc_s, acc_c, s0, c0
    sh[0] = 0.0
    ch[0] = 1.0
    for k in range(1, K + 1):
        acc_s = 0.0
        acc_c = 0.0
        for j in range(1, k + 1):
            acc_s = acc_s + j * x[j] * ch[k - j]
            acc_c = acc_c + j * x[j] * sh[k - j]
        sh[k] = acc_s / k
        ch[k] = -acc_c / k
    s0 = sin(x[0])
    c0 = cos(x[0])
    for k in range(K + 1):
        sn[k] = s0 * ch[k] + c0 * sh[k]
        cs[k] = c0 * ch[k] - s0 * sh[k]


cdef void _root_and_shift(double* root, double* shift, int K) nogil:
    # r-independent pieces: sqrt(4 - a^2) and a / (4 + 2 sqrt(4 - a^2))
    cdef double w[MAX_ORDER + 1]
    cdef double a[MAX_ORDER + 1]
    cdef double den[MAX_ORDER + 1]
    cdef int k
    for k in range(K + 1):
        w[k] = 0.0
        a[k] = 0.0
    w[0] = 4.0
    if K >= 2:
        w[2] = -1.0
    a[1] = 1.0
    _sqrt(w, root, K)
    for k in range(K + 1):
        den[k] = 2.0 * root[k]
    den[0] += 4.0
    _div(a, den, shift, K)


def expansion_terms(int i, int K, double t, r):
    if K < 0 or K > MAX_ORDER - 1:
        raise ValueError(f"expansion order {K} outside 0..{MAX_ORDER - 1}")
    cdef int J = K if K >= 1 else 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rr = np.ascontiguousarray(r, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t n = rr.shape[0], m
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((K + 1, n))
    cdef double[::1] rv = rr
    cdef double[:, ::1] ov = out
    cdef double root[MAX_ORDER + 1]
    cdef double shift[MAX_ORDER + 1]
    cdef double phase[MAX_ORDER + 1]
    cdef double sn[MAX_ORDER + 1]
    cdef double cs[MAX_ORDER + 1]
    cdef double q[MAX_ORDER + 1]
    cdef double rk, g, rad, tr2
    cdef int k
    _root_and_shift(root, shift, J)
    with nogil:
        for m in range(n):
            rad = rv[m]
            g = exp(-t * rad * rad / 2.0)
            if i == 1 and rad == 0.0:
                ov[0, m] = t
                for k in range(1, K + 1):
                    ov[k, m] = 0.0
                continue
            tr2 = t * rad * rad
            for k in range(J + 1):
                phase[k] = -tr2 * shift[k]
            phase[0] += t * rad
            _sin_cos(phase, sn, cs, J)
            if i == 1:
                _div(sn, root, q, J)
                for k in range(J + 1):
                    q[k] = q[k] * 2.0 / rad
            else:
                for k in range(J + 1):
                    q[k] = cs[k]
            rk = 1.0
            for k in range(K + 1):
                ov[k, m] = g * q[k] * rk
                rk = rk * rad
    return out.reshape((K + 1,) + np.shape(r))
