# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: min-sum syndrome decoding and partial Fisher-Yates.

Mirrors qrot._kernels._purecore; outputs must agree with the pure backend.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.uint8_t u8


def fisher_yates_partial(cnp.ndarray[i64, ndim=1] perm,
                         cnp.ndarray[i64, ndim=1] j):
    cdef Py_ssize_t i, t
    cdef i64 tmp
    for i in range(j.shape[0]):
        t = j[i]
        tmp = perm[i]
        perm[i] = perm[t]
        perm[t] = tmp


def bp_decode(cnp.ndarray[i64, ndim=2] chk_rows,
              cnp.ndarray[i64, ndim=1] var_of_edge,
              cnp.ndarray[i64, ndim=2] var_edges,
              cnp.ndarray[u8, ndim=1] synd,
              double llr0, int max_iter, double norm, double clamp):
    cdef Py_ssize_t m = chk_rows.shape[0]
    cdef Py_ssize_t dmax = chk_rows.shape[1]
    cdef Py_ssize_t n = var_edges.shape[0]
    cdef Py_ssize_t e_tot = var_of_edge.shape[0] - 1

    cdef cnp.ndarray[cnp.float64_t, ndim=1] v2c = np.empty(e_tot + 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c2v = np.zeros(e_tot + 1, dtype=np.float64)
    cdef cnp.ndarray[u8, ndim=1] hard = np.zeros(n + 1, dtype=np.uint8)

    cdef double init = llr0 if llr0 < clamp else clamp
    cdef Py_ssize_t i, j, k, e
    for i in range(e_tot):
        v2c[i] = init

    cdef double row_sign, min1, min2, mag, tot, val
    cdef Py_ssize_t i1
    cdef int it, par, converged
    cdef double s

    for it in range(max_iter + 1):
        converged = 1
        for i in range(m):
            par = 0
            for j in range(dmax):
                e = chk_rows[i, j]
                if e < e_tot:
                    par ^= hard[var_of_edge[e]]
            if par != synd[i]:
                converged = 0
                break
        if converged:
            return np.asarray(hard[:n]).copy(), True, it
        if it == max_iter:
            break

        # check node update
        for i in range(m):
            row_sign = -1.0 if synd[i] else 1.0
            min1 = np.inf
            min2 = np.inf
            i1 = -1
            for j in range(dmax):
                e = chk_rows[i, j]
                if e >= e_tot:
                    continue
                val = v2c[e]
                if val < 0.0:
                    row_sign = -row_sign
                    val = -val
                if val < min1:
                    min2 = min1
                    min1 = val
                    i1 = j
                elif val < min2:
                    min2 = val
            for j in range(dmax):
                e = chk_rows[i, j]
                if e >= e_tot:
                    continue
                mag = min2 if j == i1 else min1
                s = -1.0 if v2c[e] < 0.0 else 1.0
                c2v[e] = norm * row_sign * s * mag

        # variable node update
        for i in range(n):
            tot = llr0
            for k in range(3):
                tot += c2v[var_edges[i, k]]
            for k in range(3):
                e = var_edges[i, k]
                val = tot - c2v[e]
                if val > clamp:
                    val = clamp
                elif val < -clamp:
                    val = -clamp
                v2c[e] = val
            hard[i] = 1 if tot < 0.0 else 0

    return np.asarray(hard[:n]).copy(), False, max_iter
