# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: exact object matmul/kron and a cyclic Jacobi eigensolver.

Same functions and operation order as ``_kernels_py``; only the loop machinery
is compiled.  The exact kernels still dispatch ``+``/``*`` to the scalar
objects, so results are identical to the fallback.
"""

from libc.math cimport sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def matmul(list a, Py_ssize_t ar, Py_ssize_t ac, list b, Py_ssize_t br, Py_ssize_t bc, object zero):
    cdef list out = [zero] * (ar * bc)
    cdef Py_ssize_t i, k, j, ia, ib, io
    cdef object av, bv, cur
    for i in range(ar):
        ia = i * ac
        io = i * bc
        for k in range(ac):
            av = a[ia + k]
            if av is zero or not av:
                continue
            ib = k * bc
            for j in range(bc):
                bv = b[ib + j]
                if bv is zero or not bv:
                    continue
                cur = out[io + j]
                if cur is zero:
                    out[io + j] = av * bv
                else:
                    out[io + j] = cur + av * bv
    return out


def kron(list a, Py_ssize_t ar, Py_ssize_t ac, list b, Py_ssize_t br, Py_ssize_t bc, object zero):
    cdef Py_ssize_t rows = ar * br
    cdef Py_ssize_t cols = ac * bc
    cdef list out = [zero] * (rows * cols)
    cdef Py_ssize_t i, j, p, q, ro, bo
    cdef object av, bv
    for i in range(ar):
        for j in range(ac):
            av = a[i * ac + j]
            if av is zero or not av:
                continue
            for p in range(br):
                ro = (i * br + p) * cols + j * bc
                bo = p * bc
                for q in range(bc):
                    bv = b[bo + q]
                    if bv is zero or not bv:
                        continue
                    out[ro + q] = av * bv
    return out


def adjoint(list a, Py_ssize_t ar, Py_ssize_t ac):
    cdef list out = [None] * (ar * ac)
    cdef Py_ssize_t i, j
    for i in range(ar):
        for j in range(ac):
            out[j * ar + i] = a[i * ac + j].conjugate()
    return out


def hermitian_eigenvalues(object h, double tol):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] A = np.array(h, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = A.shape[0]
    if n == 0:
        return np.zeros(0)
    cdef Py_ssize_t i, j, p, q, k, sweep
    cdef double complex m, apq, ph, phc, akp, akq, apk, aqk
    cdef double scale, thresh, small, off, r, app, aqq, tau, t, c, s
    cdef bint converged = False
    for i in range(n):
        A[i, i] = A[i, i].real
        for j in range(i + 1, n):
            m = 0.5 * (A[i, j] + A[j, i].conjugate())
            A[i, j] = m
            A[j, i] = m.conjugate()
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag
    scale = sqrt(scale)
    if scale == 0.0:
        return np.zeros(n)
    thresh = tol * scale
    small = thresh / (2.0 * n * n)
    for sweep in range(100):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * (A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag)
        off = sqrt(off)
        if off <= thresh:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if r <= small:
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                ph = apq / r
                phc = ph.conjugate()
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * phc * akq
                    A[k, q] = s * ph * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * ph * aqk
                    A[q, k] = s * phc * apk + c * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    if not converged:
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * (A[i, j].real * A[i, j].real + A[i, j].imag * A[i, j].imag)
        off = sqrt(off)
        if off > thresh:
            raise RuntimeError("jacobi iteration did not converge in 100 sweeps")
    return np.sort(np.real(np.diag(A)))
