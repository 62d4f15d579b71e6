"""Kernel backend selection.

The hot kernels (Hermitian Jacobi eigensolver, batched steering gains) exist
twice: a Cython extension (``_core``) and a numpy fallback (``pure``). The
compiled backend is used when available; set ``SEEJAM_PURE=1`` to force the
fallback (used by the benchmark and for debugging).
"""

import os

from . import pure

if os.environ.get("SEEJAM_PURE", "") == "1":
    _impl = pure
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = pure

BACKEND_NAME = _impl.BACKEND_NAME
jacobi_eigh = _impl.jacobi_eigh
beam_gains = _impl.beam_gains
min_beam_gain = _impl.min_beam_gain

__all__ = ["BACKEND_NAME", "jacobi_eigh", "beam_gains", "min_beam_gain", "pure"]
