"""Numpy implementations of the hot kernels.

These mirror the compiled extension in ``_core.pyx``; the package selects
one backend at import time (see ``kernels.__init__``).
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericsError

BACKEND_NAME = "pure"


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Eigendecomposition of a Hermitian matrix by the cyclic Jacobi method.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues in descending
    order and eigenvectors as unitary columns. Raises ``NumericsError`` if
    the off-diagonal norm has not dropped below ``tol * ||A||_F`` after
    ``max_sweeps`` sweeps.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a[0, 0].real]), v
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros(n), v
    def _off(m):
        # direct off-diagonal norm; the ||A||^2 - ||diag||^2 shortcut loses
        # all accuracy to cancellation once the matrix is nearly diagonal
        return np.linalg.norm(m - np.diag(np.diag(m)))

    converged = False
    for _ in range(max_sweeps):
        off = _off(a)
        if off <= tol * fro:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # Phase-transform the block to a real symmetric one, then use
                # the stable small-tangent Jacobi rotation.
                absa = abs(apq)
                phase = apq / absa
                tau = (aqq - app) / (2.0 * absa)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = -np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c1 = 1.0 / np.sqrt(1.0 + t * t)
                s1 = t * c1 * np.conj(phase)
                # Unitary [[c1, -conj(s1)], [s1, conj(c1)]] has columns that
                # are the two 2x2 eigenvectors.
                rot = np.array([[c1, -np.conj(s1)], [s1, np.conj(c1)]])
                rows = rot.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                cols = a[:, [p, q]] @ rot
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                vc = v[:, [p, q]] @ rot
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
                a[p, q] = 0.0
                a[q, p] = 0.0
    else:
        off = _off(a)
        converged = off <= tol * fro
    if not converged:
        raise NumericsError(
            f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
            f"(off-diagonal {off:.3e}, target {tol * fro:.3e})"
        )
    w = np.real(np.diag(a))
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def beam_gains(dirs, rot_positions, w, wavenumber):
    """Squared beamformed array gains |g(u_i)^H w|^2 for a batch of directions.

    ``dirs`` is (M, 3) of unit direction vectors already expressed in the
    frame of ``rot_positions`` (3, N), the element positions rotated into the
    global frame. ``w`` is the length-N beamformer.
    """
    phases = wavenumber * (dirs @ rot_positions)
    s = np.exp(1j * phases) @ np.conj(w)
    return np.abs(s) ** 2


def min_beam_gain(dirs, rot_positions, w, wavenumber):
    """Minimum of ``beam_gains`` over the direction batch."""
    return float(np.min(beam_gains(dirs, rot_positions, w, wavenumber)))
