# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Cyclic Jacobi eigensolver for small complex Hermitian matrices.

Each rotation first absorbs the phase of the pivot entry, then applies the
classical symmetric Jacobi rotation with the small-angle root, so the
off-diagonal mass drops monotonically and the sweep loop converges
quadratically.  Sized for the dimensions this package meets (<= 16);
correctness does not depend on that limit.
"""

from libc.math cimport fabs, sqrt

import numpy as np


def eigh_cdouble(a):
    """Eigenvalues (descending) and eigenvector columns of Hermitian ``a``.

    The input is assumed Hermitian; only its lower/upper consistency up to
    roundoff matters because both triangles are updated explicitly.
    """
    a_arr = np.array(a, dtype=np.complex128, order="C", copy=True)
    if a_arr.ndim != 2 or a_arr.shape[0] != a_arr.shape[1]:
        raise ValueError("expected a square matrix")
    cdef double complex[:, ::1] m = a_arr
    cdef Py_ssize_t n = m.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = v_arr

    cdef Py_ssize_t p, q, k, sweep
    cdef double g, g2, app, aqq, tau, t, c, s, off2, fro2, sgn
    cdef double complex apq, ph, sp, cp, x, y
    cdef bint converged = False

    for sweep in range(100):
        off2 = 0.0
        fro2 = 0.0
        for p in range(n):
            fro2 += m[p, p].real * m[p, p].real + m[p, p].imag * m[p, p].imag
            for q in range(p + 1, n):
                g2 = m[p, q].real * m[p, q].real + m[p, q].imag * m[p, q].imag
                off2 += g2
        fro2 += 2.0 * off2
        if off2 == 0.0 or off2 <= 2.5e-31 * fro2:
            converged = True
            break
        for p in range(n):
            for q in range(p + 1, n):
                apq = m[p, q]
                g = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if g == 0.0:
                    continue
                app = m[p, p].real
                aqq = m[q, q].real
                # unit phase making the pivot entry real positive
                ph = apq.conjugate() / g
                tau = (aqq - app) / (2.0 * g)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                sp = s * ph
                cp = c * ph
                for k in range(n):
                    x = m[k, p]
                    y = m[k, q]
                    m[k, p] = c * x - sp * y
                    m[k, q] = s * x + cp * y
                for k in range(n):
                    x = m[p, k]
                    y = m[q, k]
                    m[p, k] = c * x - sp.conjugate() * y
                    m[q, k] = s * x + cp.conjugate() * y
                for k in range(n):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - sp * y
                    v[k, q] = s * x + cp * y
                m[p, q] = 0.0
                m[q, p] = 0.0
                m[p, p] = m[p, p].real
                m[q, q] = m[q, q].real
    if not converged:
        raise RuntimeError("Jacobi sweep limit reached; matrix may not be Hermitian")

    w_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] w = w_arr
    for p in range(n):
        w[p] = m[p, p].real
    order = np.argsort(-w_arr, kind="stable")
    return w_arr[order], np.ascontiguousarray(v_arr[:, order])
