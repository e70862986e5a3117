# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled point/slab kernels; mirrors kernels._py.

covered_mask gains an early exit per point, which dominates when most points
are covered by one of the first few slabs.  interval_counts replicates the
searchsorted semantics of the fallback exactly, so its integer outputs are
bit-identical across backends.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def covered_mask(points, normals, lows, highs):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    nrm = np.ascontiguousarray(normals, dtype=np.float64)
    lo = np.ascontiguousarray(lows, dtype=np.float64)
    hi = np.ascontiguousarray(highs, dtype=np.float64)
    cdef const double[:, ::1] p = pts
    cdef const double[:, ::1] v = nrm
    cdef const double[::1] l = lo
    cdef const double[::1] h = hi
    cdef Py_ssize_t n = p.shape[0], m = v.shape[0], d = p.shape[1]
    out = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double s
    for i in range(n):
        for j in range(m):
            s = 0.0
            for k in range(d):
                s += p[i, k] * v[j, k]
            if l[j] <= s <= h[j]:
                o[i] = 1
                break
    return out


def interval_counts(sorted_values, lows, highs):
    vals = np.ascontiguousarray(sorted_values, dtype=np.float64)
    lo = np.ascontiguousarray(lows, dtype=np.float64)
    hi = np.ascontiguousarray(highs, dtype=np.float64)
    cdef const double[::1] a = vals
    cdef const double[::1] l = lo
    cdef const double[::1] h = hi
    cdef Py_ssize_t n = a.shape[0], m = l.shape[0]
    out = np.empty(m, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t j
    for j in range(m):
        o[j] = _bisect_right(a, h[j], n) - _bisect_left(a, l[j], n)
    return out


cdef inline Py_ssize_t _bisect_left(const double[::1] a, double x, Py_ssize_t n) nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _bisect_right(const double[::1] a, double x, Py_ssize_t n) nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) // 2
        if x < a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def min_slab_distance(points, normals, mids, half_widths):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    nrm = np.ascontiguousarray(normals, dtype=np.float64)
    mid = np.ascontiguousarray(mids, dtype=np.float64)
    hw = np.ascontiguousarray(half_widths, dtype=np.float64)
    cdef const double[:, ::1] p = pts
    cdef const double[:, ::1] v = nrm
    cdef const double[::1] c = mid
    cdef const double[::1] w = hw
    cdef Py_ssize_t n = p.shape[0], m = v.shape[0], d = p.shape[1]
    out = np.full(n, np.inf)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double s, dist
    for i in range(n):
        for j in range(m):
            s = 0.0
            for k in range(d):
                s += p[i, k] * v[j, k]
            dist = s - c[j]
            if dist < 0.0:
                dist = -dist
            dist -= w[j]
            if dist < 0.0:
                dist = 0.0
            if dist < o[i]:
                o[i] = dist
                if dist == 0.0:
                    break
    return out
