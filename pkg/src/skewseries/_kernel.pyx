# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: sparse matrix-vector products and axpy over
Z/M (M < 2^62, 128-bit intermediate products) and over F_q via tables."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64

cdef extern from *:
    """
    static inline long long sk_mulmod(long long a, long long b, long long m) {
        return (long long)(((unsigned __int128)a * (unsigned __int128)b) % (unsigned __int128)m);
    }
    """
    long long sk_mulmod(long long a, long long b, long long m) nogil


IMPLEMENTATION = "cython"


def matvec(const i64[::1] indptr, const i64[::1] indices, const i64[::1] data,
           const i64[::1] x, long long M):
    cdef Py_ssize_t nrows = indptr.shape[0] - 1
    out = np.zeros(nrows, dtype=np.int64)
    cdef i64[::1] y = out
    cdef Py_ssize_t r, k
    cdef long long acc, xv
    with nogil:
        for r in range(nrows):
            acc = 0
            for k in range(indptr[r], indptr[r + 1]):
                xv = x[indices[k]]
                if xv != 0:
                    acc += sk_mulmod(data[k], xv, M)
                    if acc >= M:
                        acc -= M
            y[r] = acc
    return out


def axpy(const i64[::1] y, long long a, const i64[::1] x, long long M):
    cdef Py_ssize_t n = y.shape[0], i
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    cdef long long v
    with nogil:
        for i in range(n):
            v = y[i] + sk_mulmod(a, x[i], M)
            if v >= M:
                v -= M
            o[i] = v
    return out


def scale(long long a, const i64[::1] x, long long M):
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = sk_mulmod(a, x[i], M)
    return out


def matvec_gf(const i64[::1] indptr, const i64[::1] indices, const i64[::1] data,
              const i64[::1] x, const i64[:, ::1] multab, const i64[:, ::1] addtab,
              int p, int m):
    cdef Py_ssize_t nrows = indptr.shape[0] - 1
    out = np.zeros(nrows, dtype=np.int64)
    cdef i64[::1] y = out
    cdef Py_ssize_t r, k
    cdef i64 acc, xv
    with nogil:
        for r in range(nrows):
            acc = 0
            for k in range(indptr[r], indptr[r + 1]):
                xv = x[indices[k]]
                if xv != 0:
                    acc = addtab[acc, multab[data[k], xv]]
            y[r] = acc
    return out


def axpy_gf(const i64[::1] y, i64 a, const i64[::1] x,
            const i64[:, ::1] multab, const i64[:, ::1] addtab, int p, int m):
    cdef Py_ssize_t n = y.shape[0], i
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = addtab[y[i], multab[a, x[i]]]
    return out
