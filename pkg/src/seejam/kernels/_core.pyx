# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the hot kernels (see ``pure.py`` for the reference
numpy implementations and the docstrings)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fabs, hypot, sin, sqrt

from seejam.errors import NumericsError

cnp.import_array()

BACKEND_NAME = "compiled"


def jacobi_eigh(a, double tol=1e-12, int max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] am = np.array(a, dtype=np.complex128, order="C")
    cdef int n = am.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] vm = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([am[0, 0].real]), vm

    cdef double fro = 0.0, off, diag_sq, total_sq
    cdef int i, j, p, q, sweep
    cdef double complex apq, c1, s1, tp, tq
    cdef double app, aqq, aapq, tau, t, cr
    cdef bint converged = False

    for i in range(n):
        for j in range(n):
            fro += (am[i, j].real * am[i, j].real + am[i, j].imag * am[i, j].imag)
    fro = sqrt(fro)
    if fro == 0.0:
        return np.zeros(n), vm

    for sweep in range(max_sweeps):
        total_sq = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    total_sq += (am[i, j].real * am[i, j].real
                                 + am[i, j].imag * am[i, j].imag)
        off = sqrt(total_sq)
        if off <= tol * fro:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = am[p, q]
                aapq = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if aapq <= 1e-300:
                    continue
                app = am[p, p].real
                aqq = am[q, q].real
                # phase-transform the block to real symmetric, then use the
                # stable small-tangent Jacobi rotation
                tau = (aqq - app) / (2.0 * aapq)
                if tau == 0.0:
                    t = 1.0
                elif tau > 0.0:
                    t = -1.0 / (tau + hypot(1.0, tau))
                else:
                    t = 1.0 / (-tau + hypot(1.0, tau))
                cr = 1.0 / sqrt(1.0 + t * t)
                c1 = cr
                s1 = (t * cr / aapq) * apq.conjugate()
                # rows: [p,q] <- rot^H @ rows
                for j in range(n):
                    tp = am[p, j]
                    tq = am[q, j]
                    am[p, j] = c1.conjugate() * tp + s1.conjugate() * tq
                    am[q, j] = -s1 * tp + c1 * tq
                # cols: [p,q] <- cols @ rot
                for i in range(n):
                    tp = am[i, p]
                    tq = am[i, q]
                    am[i, p] = tp * c1 + tq * s1
                    am[i, q] = -tp * s1.conjugate() + tq * c1.conjugate()
                    tp = vm[i, p]
                    tq = vm[i, q]
                    vm[i, p] = tp * c1 + tq * s1
                    vm[i, q] = -tp * s1.conjugate() + tq * c1.conjugate()
                am[p, q] = 0.0
                am[q, p] = 0.0
    else:
        total_sq = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    total_sq += (am[i, j].real * am[i, j].real
                                 + am[i, j].imag * am[i, j].imag)
        off = sqrt(total_sq)
        converged = off <= tol * fro

    if not converged:
        raise NumericsError(
            f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
            f"(off-diagonal {off:.3e}, target {tol * fro:.3e})"
        )
    w = np.real(np.diag(am))
    order = np.argsort(w)[::-1]
    return w[order], np.asarray(vm)[:, order]


def beam_gains(dirs, rot_positions, w, double wavenumber):
    """Squared beamformed gains |g(u_i)^H w|^2 for a batch of directions."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] d = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] p = np.ascontiguousarray(rot_positions,
                                                                     dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] wv = np.ascontiguousarray(w,
                                                                         dtype=np.complex128)
    cdef int m = d.shape[0]
    cdef int n = p.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef int i, j
    cdef double ph, sr, si, cj, sj, wr, wi
    for i in range(m):
        sr = 0.0
        si = 0.0
        for j in range(n):
            ph = wavenumber * (d[i, 0] * p[0, j] + d[i, 1] * p[1, j] + d[i, 2] * p[2, j])
            cj = cos(ph)
            sj = sin(ph)
            wr = wv[j].real
            wi = wv[j].imag
            # exp(i ph) * conj(w_j)
            sr += cj * wr + sj * wi
            si += sj * wr - cj * wi
        out[i] = sr * sr + si * si
    return out


def min_beam_gain(dirs, rot_positions, w, double wavenumber):
    """Minimum of ``beam_gains`` over the direction batch."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = beam_gains(dirs, rot_positions, w, wavenumber)
    cdef int m = g.shape[0]
    cdef int i
    cdef double best = g[0]
    for i in range(1, m):
        if g[i] < best:
            best = g[i]
    return float(best)
