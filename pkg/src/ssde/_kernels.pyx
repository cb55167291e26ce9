# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: segment evaluation, running trapezoid, graph-map gather.

Mirrors ssde._kernels_py function for function; see that module for the data
layout and semantics. Keep the arithmetic in the same order in both files so
the two backends agree to the last bit wherever the operations are identical.
"""

from libc.math cimport floor, fabs


cdef inline Py_ssize_t _bisect_left(const double[::1] arr, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = arr.shape[0]
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline double _eval_one(const double[::1] breaks,
                             const long long[::1] offsets,
                             const double[::1] values,
                             const double[::1] hs,
                             const long long[::1] ms,
                             double x) noexcept nogil:
    cdef Py_ssize_t n = breaks.shape[0] - 1
    cdef Py_ssize_t idx = _bisect_left(breaks, x)
    cdef Py_ssize_t seg, k, base
    cdef double t, frac
    if idx > n:
        idx = n
    if idx >= 1 and breaks[idx] == x:
        # exact breakpoint hit: left segment's endpoint value
        return values[offsets[idx] - 1]
    seg = idx - 1
    if seg < 0:
        seg = 0
    if seg > n - 1:
        seg = n - 1
    t = (x - breaks[seg]) / hs[seg]
    k = <Py_ssize_t>floor(t)
    if k < 0:
        k = 0
    if k > ms[seg] - 1:
        k = ms[seg] - 1
    frac = t - k
    if frac < 0.0:
        frac = 0.0
    if frac > 1.0:
        frac = 1.0
    base = offsets[seg] + k
    return values[base] * (1.0 - frac) + values[base + 1] * frac


def eval_nodes(const double[::1] breaks, const long long[::1] offsets,
               const double[::1] values, const double[::1] hs,
               const long long[::1] ms, const double[::1] xs, double[::1] out):
    cdef Py_ssize_t i
    with nogil:
        for i in range(xs.shape[0]):
            out[i] = _eval_one(breaks, offsets, values, hs, ms, xs[i])
    return out


def cumtrapz(const long long[::1] offsets, const double[::1] values,
             const double[::1] hs, double c0, double[::1] out):
    cdef Py_ssize_t s, i, lo, hi
    cdef double run = c0
    cdef double acc, half_h
    with nogil:
        for s in range(hs.shape[0]):
            lo = offsets[s]
            hi = offsets[s + 1]
            half_h = 0.5 * hs[s]
            out[lo] = run
            acc = 0.0
            for i in range(lo, hi - 1):
                acc = acc + (values[i] + values[i + 1]) * half_h
                out[i + 1] = acc + run
            run = out[hi - 1]
    return out


def trapz(const long long[::1] offsets, const double[::1] values,
          const double[::1] hs):
    cdef Py_ssize_t s, i, lo, hi
    cdef double total = 0.0
    cdef double acc, half_h
    with nogil:
        for s in range(hs.shape[0]):
            lo = offsets[s]
            hi = offsets[s + 1]
            half_h = 0.5 * hs[s]
            acc = 0.0
            for i in range(lo, hi - 1):
                acc = acc + (values[i] + values[i + 1]) * half_h
            total = total + acc
    return total


def sup_abs_diff(const double[::1] a, const double[::1] b):
    cdef Py_ssize_t i
    cdef double best = 0.0
    cdef double diff
    with nogil:
        for i in range(a.shape[0]):
            diff = fabs(a[i] - b[i])
            if diff > best:
                best = diff
    return best


def affine_gather(const double[::1] breaks, const long long[::1] offsets,
                  const double[::1] values, const double[::1] hs,
                  const long long[::1] ms, double lo, double hi,
                  double a, double d, double e, double fshift,
                  const double[::1] xs, double[::1] out):
    cdef Py_ssize_t i
    cdef double u
    with nogil:
        for i in range(xs.shape[0]):
            u = (xs[i] - e) / a
            if u < lo:
                u = lo
            if u > hi:
                u = hi
            out[i] = _eval_one(breaks, offsets, values, hs, ms, u) * d + fshift
    return out
