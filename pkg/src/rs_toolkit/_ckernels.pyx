# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot series kernels.

Same contract as ``_kernels_py``; see that module for the reference
semantics. Scalar loops here avoid the temporary term matrices the numpy
fallback builds, which matters on the long quadrature grids.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, pow, sin

cnp.import_array()

BACKEND_NAME = "compiled"


def theta_sum(x, double nome, int terms, int kind):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xa = np.ascontiguousarray(
        np.atleast_1d(x), dtype=np.float64)
    cdef Py_ssize_t n = xa.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] amps = np.empty(terms + 1,
                                                            dtype=np.float64)
    cdef double[::1] xv = xa
    cdef double[::1] ov = out
    cdef double[::1] av = amps
    cdef Py_ssize_t i
    cdef int l
    cdef double acc, xi, sign
    if kind == 1 or kind == 2:
        sign = 1.0
        for l in range(terms + 1):
            av[l] = 2.0 * pow(nome, (l + 0.5) * (l + 0.5))
            if kind == 1:
                av[l] *= sign
                sign = -sign
        for i in range(n):
            xi = xv[i]
            acc = 0.0
            if kind == 1:
                for l in range(terms + 1):
                    acc += av[l] * sin((2.0 * l + 1.0) * xi)
            else:
                for l in range(terms + 1):
                    acc += av[l] * cos((2.0 * l + 1.0) * xi)
            ov[i] = acc
        return out
    if kind == 3 or kind == 4:
        sign = -1.0 if kind == 4 else 1.0
        av[0] = 0.0
        for l in range(1, terms + 1):
            av[l] = 2.0 * pow(nome, <double> l * l)
            if kind == 4:
                av[l] *= sign
                sign = -sign
        for i in range(n):
            xi = xv[i]
            acc = 1.0
            for l in range(1, terms + 1):
                acc += av[l] * cos(2.0 * l * xi)
            ov[i] = acc
        return out
    raise ValueError(f"unknown theta kind {kind}")


def qpoch_prod(a, double q, int terms):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] aa = np.ascontiguousarray(
        np.atleast_1d(a), dtype=np.complex128)
    cdef Py_ssize_t n = aa.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] av = aa
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i
    cdef int j
    cdef double qj
    cdef double complex acc
    for i in range(n):
        acc = 1.0
        qj = 1.0
        for j in range(terms):
            acc *= 1.0 - av[i] * qj
            qj *= q
        ov[i] = acc
    return out


def rs_poly_table(int n_top, z, double q):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] za = np.ascontiguousarray(
        np.atleast_1d(z), dtype=np.complex128)
    cdef Py_ssize_t m = za.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((n_top + 1, m),
                                                              dtype=np.complex128)
    cdef double complex[::1] zv = za
    cdef double complex[:, ::1] ov = out
    cdef Py_ssize_t i
    cdef int n
    cdef double qn
    cdef double complex zi, hm, h, hn
    for i in range(m):
        zi = zv[i]
        ov[0, i] = 1.0
        if n_top >= 1:
            ov[1, i] = 1.0 + zi
        hm = 1.0
        h = 1.0 + zi
        qn = 1.0
        for n in range(1, n_top):
            qn *= q
            hn = (1.0 + zi) * h - (1.0 - qn) * zi * hm
            ov[n + 1, i] = hn
            hm = h
            h = hn
    return out
