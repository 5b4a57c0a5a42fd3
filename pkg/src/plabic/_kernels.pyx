# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: truncated Neumann series for the signed edge transfer matrix."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def neumann_series(indptr, indices, data, b, int max_terms, double tol):
    """Accumulate x = sum_{m < max_terms} T^m b for a CSR matrix T.

    Same contract as the pure-Python fallback; returns (x, terms_used, last_norm)
    with x as a list of row lists.
    """
    cdef cnp.int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[::1] dv = np.ascontiguousarray(data, dtype=np.float64)
    cdef Py_ssize_t nrows = ip.shape[0] - 1
    cdef Py_ssize_t dim = len(b[0]) if nrows else 0
    arr = np.zeros((nrows, dim), dtype=np.float64)
    if nrows:
        arr[:, :] = np.asarray(b, dtype=np.float64)
    cdef double[:, ::1] term = arr.copy()
    cdef double[:, ::1] x = arr.copy()
    cdef double[:, ::1] nxt = np.zeros((nrows, dim), dtype=np.float64)
    cdef double[:, ::1] swap
    cdef Py_ssize_t i, p, t, j
    cdef double coef, v, last = 0.0
    cdef int used = 1
    for i in range(nrows):
        for t in range(dim):
            if fabs(term[i, t]) > last:
                last = fabs(term[i, t])
    while used < max_terms and last > tol:
        for i in range(nrows):
            for t in range(dim):
                nxt[i, t] = 0.0
            for p in range(ip[i], ip[i + 1]):
                coef = dv[p]
                j = ix[p]
                for t in range(dim):
                    nxt[i, t] += coef * term[j, t]
        swap = term
        term = nxt
        nxt = swap
        last = 0.0
        for i in range(nrows):
            for t in range(dim):
                v = term[i, t]
                x[i, t] += v
                if fabs(v) > last:
                    last = fabs(v)
        used += 1
    return np.asarray(x).tolist(), used, last
