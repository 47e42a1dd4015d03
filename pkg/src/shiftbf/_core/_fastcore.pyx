# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot line kernels: running maximum and clamped window sums.

Contracts match `_purecore`; selected automatically at import when built.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"


def running_max_lines(a, Py_ssize_t radius):
    """Windowed running maximum along each row, windows clamped at the ends."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] src = arr
    cdef Py_ssize_t m = src.shape[0], n = src.shape[1]
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return arr.copy()
    cdef Py_ssize_t w = 2 * radius + 1
    cdef Py_ssize_t padded = ((n + 2 * radius + w - 1) // w) * w
    out_arr = np.empty((m, n))
    cdef double[:, ::1] out = out_arr
    q_arr = np.empty(padded)
    l_arr = np.empty(padded)
    r_arr = np.empty(padded)
    cdef double[::1] q = q_arr, lmax = l_arr, rmax = r_arr
    cdef Py_ssize_t i, j, k
    cdef double v
    for i in range(m):
        for j in range(padded):
            k = j - radius
            if k < 0:
                k = 0
            elif k >= n:
                k = n - 1
            q[j] = src[i, k]
        for j in range(padded):
            if j % w == 0:
                lmax[j] = q[j]
            else:
                v = lmax[j - 1]
                lmax[j] = v if v > q[j] else q[j]
        for j in range(padded - 1, -1, -1):
            if j % w == w - 1:
                rmax[j] = q[j]
            else:
                v = rmax[j + 1]
                rmax[j] = v if v > q[j] else q[j]
        for j in range(n):
            v = rmax[j]
            out[i, j] = v if v > lmax[j + 2 * radius] else lmax[j + 2 * radius]
    return out_arr


def window_sum_lines(a, Py_ssize_t radius):
    """Sum over the clamped window [j-radius, j+radius] along each row."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[:, ::1] src = arr
    cdef Py_ssize_t m = src.shape[0], n = src.shape[1]
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return arr.copy()
    out_arr = np.empty((m, n))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, hi0
    cdef double s
    for i in range(m):
        s = 0.0
        hi0 = radius if radius < n - 1 else n - 1
        for j in range(hi0 + 1):
            s += src[i, j]
        out[i, 0] = s
        for j in range(1, n):
            if j + radius < n:
                s += src[i, j + radius]
            if j - radius - 1 >= 0:
                s -= src[i, j - radius - 1]
            out[i, j] = s
    return out_arr


def max_filter_1d_counted(seq, Py_ssize_t radius):
    """One line with an instrumented comparison counter; see `_purecore`."""
    arr = np.ascontiguousarray(seq, dtype=np.float64)
    cdef double[::1] src = arr
    cdef Py_ssize_t n = src.shape[0]
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return arr.copy(), 0
    cdef Py_ssize_t w = 2 * radius + 1
    cdef Py_ssize_t padded = ((n + 2 * radius + w - 1) // w) * w
    q_arr = np.empty(padded)
    l_arr = np.empty(padded)
    r_arr = np.empty(padded)
    out_arr = np.empty(n)
    cdef double[::1] q = q_arr, lmax = l_arr, rmax = r_arr, out = out_arr
    cdef Py_ssize_t j, k
    cdef long comparisons = 0
    cdef double v
    for j in range(padded):
        k = j - radius
        if k < 0:
            k = 0
        elif k >= n:
            k = n - 1
        q[j] = src[k]
    for j in range(padded):
        if j % w == 0:
            lmax[j] = q[j]
        else:
            comparisons += 1
            v = lmax[j - 1]
            lmax[j] = v if v > q[j] else q[j]
    for j in range(padded - 1, -1, -1):
        if j % w == w - 1:
            rmax[j] = q[j]
        else:
            comparisons += 1
            v = rmax[j + 1]
            rmax[j] = v if v > q[j] else q[j]
    for j in range(n):
        comparisons += 1
        v = rmax[j]
        out[j] = v if v > lmax[j + 2 * radius] else lmax[j + 2 * radius]
    return out_arr, comparisons
