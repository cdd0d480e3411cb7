# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-pixel orbit kernel; same contract as ``_kernel_py.compute_chunk``."""

import numpy as np

from libc.math cimport hypot, log, INFINITY
from libc.stdlib cimport malloc, free

cdef double PHI = 1.6180339887498949
cdef double INV_SQRT5 = 0.44721359549995793
cdef double POLE_TOL = 1e-300


cdef inline double cabs_(double complex z) noexcept nogil:
    return hypot(z.real, z.imag)


cdef inline double complex poly(const double complex[::1] c, double complex z) noexcept nogil:
    cdef Py_ssize_t k
    cdef double complex acc = c[c.shape[0] - 1]
    for k in range(c.shape[0] - 2, -1, -1):
        acc = acc * z + c[k]
    return acc


cdef inline double complex biv(const double complex[:, ::1] M, double complex x,
                               double complex y) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef Py_ssize_t m = M.shape[0], n = M.shape[1]
    cdef double complex acc = 0, row
    for i in range(m - 1, -1, -1):
        row = 0
        for j in range(n - 1, -1, -1):
            row = row * y + M[i, j]
        acc = acc * x + row
    return acc


cdef inline double complex biv3(const double complex[:, :, ::1] M, Py_ssize_t r,
                                double complex x, double complex y) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef Py_ssize_t m = M.shape[1], n = M.shape[2]
    cdef double complex acc = 0, row
    for i in range(m - 1, -1, -1):
        row = 0
        for j in range(n - 1, -1, -1):
            row = row * y + M[r, i, j]
        acc = acc * x + row
    return acc


def compute_chunk(const double complex[::1] x0, const double complex[::1] y0,
                  const double complex[:, ::1] step_num, const double complex[:, ::1] step_den,
                  const double complex[::1] den, const double complex[::1] zr,
                  const double complex[:, :, ::1] g_num, const double complex[:, :, ::1] g_den,
                  const double complex[::1] g0, const unsigned char[::1] series_ok,
                  const double[::1] near, int budget, double conv_tol, double escape):
    cdef Py_ssize_t n = x0.shape[0]
    cdef Py_ssize_t nroots = zr.shape[0]
    basin_arr = np.full(n, -1, dtype=np.int32)
    steps_arr = np.zeros(n, dtype=np.int32)
    logh_arr = np.full(n, np.nan)
    cdef int[::1] basin = basin_arr
    cdef int[::1] steps = steps_arr
    cdef double[::1] logh = logh_arr
    cdef double complex* hx = <double complex*> malloc((budget + 1) * sizeof(double complex))
    cdef double complex* hy = <double complex*> malloc((budget + 1) * sizeof(double complex))
    cdef double* tols = <double*> malloc((nroots + 1) * sizeof(double))
    if hx == NULL or hy == NULL or tols == NULL:
        free(hx)
        free(hy)
        free(tols)
        raise MemoryError()
    cdef Py_ssize_t p, k, j, m
    cdef int it, code, final
    cdef bint polynomial = den.shape[0] == 1
    cdef double complex x, y, q, u, v
    cdef double total, weight, g
    for k in range(nroots):
        tols[k] = conv_tol * max(1.0, cabs_(zr[k]))
    try:
        with nogil:
            for p in range(n):
                x = x0[p]
                y = y0[p]
                code = -1
                final = budget
                for it in range(budget + 1):
                    hx[it] = x
                    hy[it] = y
                    for k in range(nroots):
                        if cabs_(x - zr[k]) <= tols[k] and cabs_(y - zr[k]) <= tols[k]:
                            code = <int> k
                            break
                    if code >= 0:
                        final = it
                        break
                    if it == budget:
                        break
                    if not (cabs_(x) <= escape and cabs_(y) <= escape):
                        final = it
                        break
                    if not polynomial:
                        if cabs_(poly(den, x)) <= POLE_TOL or cabs_(poly(den, y)) <= POLE_TOL:
                            code = -2
                            final = it
                            break
                    q = biv(step_den, x, y)
                    if not (cabs_(q) > POLE_TOL):
                        code = -2
                        final = it
                        break
                    x, y = biv(step_num, x, y) / q, x
                basin[p] = code
                steps[p] = final
                if code < 0 or not series_ok[code]:
                    continue
                if hx[0] == zr[code] or hy[0] == zr[code]:
                    logh[p] = -INFINITY
                    continue
                # first orbit index inside the small neighbourhood of the root
                m = final
                for j in range(final + 1):
                    if cabs_(hx[j] - zr[code]) <= near[code] and cabs_(hy[j] - zr[code]) <= near[code]:
                        m = j
                        break
                total = 0.0
                weight = 1.0
                for j in range(m, final):
                    u = hx[j] - zr[code]
                    v = hy[j] - zr[code]
                    g = cabs_(biv3(g_num, code, u, v)) / cabs_(biv3(g_den, code, u, v))
                    total += weight * (log(g) if g > 0 else -INFINITY)
                    weight /= PHI
                total += log(cabs_(g0[code])) * weight * PHI * PHI
                total = INV_SQRT5 * (total / PHI + log(cabs_(hx[m] - zr[code]))
                                     + log(cabs_(hy[m] - zr[code])) / PHI)
                logh[p] = total * PHI ** (-<double> m)
    finally:
        free(hx)
        free(hy)
        free(tols)
    return basin_arr, steps_arr, logh_arr
