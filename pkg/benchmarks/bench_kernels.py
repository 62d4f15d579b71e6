"""Compare the compiled kernel core against the numpy fallback.

Usage: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from seejam import kernels
from seejam.kernels import pure

try:
    from seejam.kernels import _core
except ImportError:
    _core = None


def _time(fn, *args, repeat=50):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    backends = [("pure", pure)]
    if _core is not None:
        backends.append(("compiled", _core))
    else:
        print("compiled extension not available; benchmarking fallback only")
    print(f"active backend: {kernels.BACKEND_NAME}\n")

    x = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    herm = x + x.conj().T
    print("jacobi_eigh, 16x16 Hermitian:")
    for name, mod in backends:
        print(f"  {name:9s} {1e6 * _time(mod.jacobi_eigh, herm):10.1f} us")

    dirs = rng.normal(size=(4097, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    pos = rng.normal(size=(3, 16))
    w = rng.normal(size=16) + 1j * rng.normal(size=16)
    k = 586.43
    print("min_beam_gain, 4097 directions x 16 elements:")
    for name, mod in backends:
        print(f"  {name:9s} {1e6 * _time(mod.min_beam_gain, dirs, pos, w, k):10.1f} us")

    if _core is not None:
        w1, v1 = pure.jacobi_eigh(herm)
        w2, v2 = _core.jacobi_eigh(herm)
        g1 = pure.beam_gains(dirs, pos, w, k)
        g2 = _core.beam_gains(dirs, pos, w, k)
        print("\nagreement: eigenvalues %.2e, gains %.2e"
              % (np.max(np.abs(w1 - w2)), np.max(np.abs(g1 - g2))))


if __name__ == "__main__":
    main()
