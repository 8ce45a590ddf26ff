"""Pure-Python kernels: exact object matmul/kron and a cyclic Jacobi eigensolver.

This module is the fallback backend; ``_kernels_cy`` is the compiled twin with
the same functions and the same operation order, selected in ``backend``.
"""

import math

import numpy as np

BACKEND = "python"


def matmul(a, ar, ac, b, br, bc, zero):
    """Multiply row-major flat lists ``a`` (ar x ac) and ``b`` (br x bc).

    Entries are arbitrary Python objects supporting ``+`` and ``*``.  Entries
    identical to ``zero`` are skipped, so unit-like matrices multiply in time
    proportional to their support.
    """
    out = [zero] * (ar * bc)
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


def kron(a, ar, ac, b, br, bc, zero):
    """Kronecker product of flat lists; (i,j) block of the result is a[i,j]*b."""
    rows = ar * br
    cols = ac * bc
    out = [zero] * (rows * cols)
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


def adjoint(a, ar, ac):
    """Conjugate transpose of a flat list of objects with ``conjugate()``."""
    out = [None] * (ar * ac)
    for i in range(ar):
        for j in range(ac):
            out[j * ar + i] = a[i * ac + j].conjugate()
    return out


def hermitian_eigenvalues(h, tol):
    """Eigenvalues of a Hermitian complex matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius mass drops below
    ``tol * ||h||_F``.  Deterministic: fixed pivot order, no pivot search.
    Returns eigenvalues sorted ascending.
    """
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    A = [[complex(a[i, j]) for j in range(n)] for i in range(n)]
    # symmetrize deterministically; the diagonal of a Hermitian matrix is real
    for i in range(n):
        A[i][i] = complex(A[i][i].real, 0.0)
        for j in range(i + 1, n):
            m = 0.5 * (A[i][j] + A[j][i].conjugate())
            A[i][j] = m
            A[j][i] = m.conjugate()
    scale = math.sqrt(sum(abs(A[i][j]) ** 2 for i in range(n) for j in range(n)))
    if scale == 0.0:
        return np.zeros(n)
    thresh = tol * scale
    small = thresh / (2.0 * n * n)
    converged = False
    for _ in range(100):
        off = math.sqrt(sum(2.0 * abs(A[i][j]) ** 2 for i in range(n) for j in range(i + 1, n)))
        if off <= thresh:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                r = abs(apq)
                if r <= small:
                    A[p][q] = 0.0
                    A[q][p] = 0.0
                    continue
                app = A[p][p].real
                aqq = A[q][q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ph = apq / r
                phc = ph.conjugate()
                for k in range(n):
                    akp = A[k][p]
                    akq = A[k][q]
                    A[k][p] = c * akp - s * phc * akq
                    A[k][q] = s * ph * akp + c * akq
                for k in range(n):
                    apk = A[p][k]
                    aqk = A[q][k]
                    A[p][k] = c * apk - s * ph * aqk
                    A[q][k] = s * phc * apk + c * aqk
                A[p][q] = 0.0
                A[q][p] = 0.0
                A[p][p] = complex(A[p][p].real, 0.0)
                A[q][q] = complex(A[q][q].real, 0.0)
    if not converged:
        off = math.sqrt(sum(2.0 * abs(A[i][j]) ** 2 for i in range(n) for j in range(i + 1, n)))
        if off > thresh:
            raise RuntimeError("jacobi iteration did not converge in 100 sweeps")
    return np.sort(np.array([A[i][i].real for i in range(n)]))
