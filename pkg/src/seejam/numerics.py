"""Dense complex linear algebra and projection primitives.

Everything here is a pure function of its inputs; RNG state is always passed
explicitly (one stream per (run seed, slot), see :func:`stream_rng`).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import ValidationError

MAX_EIG_DIM = 64


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # unitary columns, aligned with eigenvalues


def check_hermitian(a, tol=1e-12):
    """Validate that ``a`` is square, finite and Hermitian entrywise."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise ValidationError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > tol * scale:
        raise ValidationError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return np.asarray(a, dtype=np.complex128)


def eig_hermitian(a, tol=1e-12, max_sweeps=100) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix (dimension <= 64).

    Cyclic Jacobi; eigenvalues returned in descending order.
    """
    a = check_hermitian(a)
    if a.shape[0] > MAX_EIG_DIM:
        raise ValidationError(f"dimension {a.shape[0]} exceeds cap {MAX_EIG_DIM}")
    w, v = kernels.jacobi_eigh(a, tol, max_sweeps)
    return EigenDecomposition(np.asarray(w), np.asarray(v))


def project_capped_simplex(y, cap):
    """Euclidean projection of a real vector onto {x >= 0, sum(x) <= cap}."""
    if cap <= 0:
        raise ValidationError("cap must be positive")
    y = np.asarray(y, dtype=float)
    clipped = np.maximum(y, 0.0)
    if clipped.sum() <= cap:
        return clipped
    # Sorted-threshold projection onto the scaled simplex {x >= 0, sum = cap}.
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - cap
    ks = np.arange(1, len(y) + 1)
    cond = u - css / ks > 0
    k = ks[cond][-1]
    theta = css[k - 1] / k
    return np.maximum(y - theta, 0.0)


def project_psd_trace(a, trace_cap):
    """Frobenius-nearest Hermitian PSD matrix with trace <= ``trace_cap``.

    Eigenvalues are projected onto the capped simplex; eigenvectors are kept.
    """
    if trace_cap <= 0:
        raise ValidationError("trace_cap must be positive")
    w, v = eig_hermitian(a)
    w_proj = project_capped_simplex(w, trace_cap)
    out = (v * w_proj) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def stream_rng(seed, *stream):
    """Deterministic per-(run, slot, ...) RNG stream."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, stream)])


def sample_complex_gaussian(n, rng):
    """n i.i.d. circularly-symmetric complex Gaussian entries, unit variance."""
    if n < 1:
        raise ValidationError("dimension must be >= 1")
    if not isinstance(rng, np.random.Generator):
        rng = stream_rng(rng)
    re = rng.standard_normal(n)
    im = rng.standard_normal(n)
    return (re + 1j * im) / np.sqrt(2.0)


def project_ball(x, center, radius):
    """Nearest point of the closed ball ||y - center|| <= radius."""
    if radius < 0:
        raise ValidationError("radius must be non-negative")
    x = np.asarray(x, dtype=float)
    center = np.asarray(center, dtype=float)
    d = x - center
    dist = float(np.linalg.norm(d))
    if dist <= radius:
        return x.copy()
    if dist == 0.0:
        return center.copy()
    return center + d * (radius / dist)
