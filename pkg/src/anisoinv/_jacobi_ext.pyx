# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi kernels (same API as ``_jacobi_py``)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)

cnp.import_array()

NAME = "cython"


cdef int _herm_one(double complex[:, ::1] a, double complex[:, ::1] v,
                   double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t d = a.shape[0]
    cdef Py_ssize_t i, j, p, q, k
    cdef double off, scale, g, theta, t, c, s, sgn
    cdef double complex e, eb, x, y
    cdef int sweep
    scale = 0.0
    for i in range(d):
        for j in range(d):
            scale += cabs(a[i, j]) ** 2
    scale = sqrt(scale)
    if scale < 1.0:
        scale = 1.0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(d):
            for j in range(i + 1, d):
                off += cabs(a[i, j]) ** 2
        if sqrt(2.0 * off) < tol * scale:
            return 0
        for p in range(d - 1):
            for q in range(p + 1, d):
                g = cabs(a[p, q])
                if g <= 1e-300:
                    continue
                e = a[p, q] / g
                eb = conj(e)
                theta = (creal(a[q, q]) - creal(a[p, p])) / (2.0 * g)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (fabs(theta) + hypot(theta, 1.0))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(d):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - s * eb * y
                    a[k, q] = s * x + c * eb * y
                for k in range(d):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * e * y
                    a[q, k] = s * x + c * e * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(d):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - s * eb * y
                    v[k, q] = s * x + c * eb * y
    return 1


cdef int _sym_one(double[:, ::1] a, double tol, int max_sweeps) noexcept nogil:
    cdef Py_ssize_t d = a.shape[0]
    cdef Py_ssize_t i, j, p, q, k
    cdef double off, scale, g, apq, theta, t, c, s, sgn, e, x, y
    cdef int sweep
    scale = 0.0
    for i in range(d):
        for j in range(d):
            scale += a[i, j] * a[i, j]
    scale = sqrt(scale)
    if scale < 1.0:
        scale = 1.0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(d):
            for j in range(i + 1, d):
                off += a[i, j] * a[i, j]
        if sqrt(2.0 * off) < tol * scale:
            return 0
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                g = fabs(apq)
                if g <= 1e-300:
                    continue
                e = 1.0 if apq > 0.0 else -1.0
                theta = (a[q, q] - a[p, p]) / (2.0 * g)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (fabs(theta) + hypot(theta, 1.0))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(d):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - s * e * y
                    a[k, q] = s * x + c * e * y
                for k in range(d):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * e * y
                    a[q, k] = s * x + c * e * y
                a[p, q] = 0.0
                a[q, p] = 0.0
    return 1


def eigh_batch(a, double tol=1e-13, int max_sweeps=60):
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] work = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = work.shape[0], d = work.shape[1], m, i
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] vecs = np.zeros((n, d, d), dtype=np.complex128)
    cdef double complex[:, :, ::1] aw = work
    cdef double complex[:, :, ::1] vw = vecs
    cdef int bad = 0
    for m in range(n):
        for i in range(d):
            vw[m, i, i] = 1.0
    with nogil:
        for m in range(n):
            bad += _herm_one(aw[m], vw[m], tol, max_sweeps)
    if bad:
        raise ArithmeticError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    w = np.real(np.diagonal(work, axis1=1, axis2=2)).copy()
    return w, vecs


def symeig_batch(a, double tol=1e-13, int max_sweeps=60):
    cdef cnp.ndarray[cnp.float64_t, ndim=3] work = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = work.shape[0], m
    cdef double[:, :, ::1] aw = work
    cdef int bad = 0
    with nogil:
        for m in range(n):
            bad += _sym_one(aw[m], tol, max_sweeps)
    if bad:
        raise ArithmeticError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    return np.diagonal(work, axis1=1, axis2=2).copy()
