"""Pure numpy implementations of the kernel entry points.

Same signatures as the compiled module. These also accept object arrays,
which the ring uses once the scalar modulus no longer fits in 62 bits.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"

_SMALL = 1 << 31


def _mulmod(a, x, M):
    if x.dtype == object or M < _SMALL:
        return (a * x) % M
    return ((x.astype(object) * int(a)) % M).astype(np.int64)


def _rowsum(indptr, vals, M, dtype):
    nrows = len(indptr) - 1
    if len(vals) == 0:
        return np.zeros(nrows, dtype=dtype)
    cs = np.concatenate([np.zeros(1, dtype=vals.dtype), np.cumsum(vals)])
    sums = cs[indptr[1:]] - cs[indptr[:-1]]
    return (sums % M).astype(dtype)


def matvec(indptr, indices, data, x, M):
    if x.dtype == object or M >= _SMALL:
        prod = (data.astype(object) * x[indices].astype(object)) % M
        out = _rowsum(indptr, prod, M, object)
        return out if x.dtype == object else out.astype(np.int64)
    prod = (data * x[indices]) % M
    return _rowsum(indptr, prod, M, np.int64)


def axpy(y, a, x, M):
    return (y + _mulmod(a, x, M)) % M


def scale(a, x, M):
    return _mulmod(a, x, M)


def _to_digits(v, p, m):
    return (v[:, None] // (p ** np.arange(m, dtype=np.int64))[None, :]) % p


def _from_digits(d, p):
    return (d * (p ** np.arange(d.shape[1], dtype=np.int64))[None, :]).sum(axis=1)


def matvec_gf(indptr, indices, data, x, multab, addtab, p, m):
    # F_q addition is digitwise addition in (Z/p)^m, so row sums can be
    # taken on base-p digit columns with a single cumulative sum.
    nrows = len(indptr) - 1
    prod = multab[data, x[indices]]
    if len(prod) == 0:
        return np.zeros(nrows, dtype=np.int64)
    dig = _to_digits(prod, p, m)
    cs = np.vstack([np.zeros((1, m), dtype=np.int64), np.cumsum(dig, axis=0)])
    sums = (cs[indptr[1:]] - cs[indptr[:-1]]) % p
    return _from_digits(sums, p).astype(np.int64)


def axpy_gf(y, a, x, multab, addtab, p, m):
    return addtab[y, multab[a, x]]
