import subprocess
import sys

import numpy as np
import pytest

from seejam import kernels
from seejam.errors import NumericsError
from seejam.kernels import pure


def random_hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return x + x.conj().T


def random_batch(rng, m, n):
    dirs = rng.normal(size=(m, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    pos = rng.normal(size=(3, n)) * 0.005
    w = rng.normal(size=n) + 1j * rng.normal(size=n)
    w /= np.linalg.norm(w)
    return dirs, pos, w


def test_backend_exports():
    assert kernels.BACKEND_NAME in ("pure", "compiled")
    for name in ("jacobi_eigh", "beam_gains", "min_beam_gain"):
        assert callable(getattr(kernels, name))


def test_jacobi_backends_agree():
    rng = np.random.default_rng(0)
    for n in (2, 5, 16):
        a = random_hermitian(rng, n)
        w_act, v_act = kernels.jacobi_eigh(a.copy())
        w_ref, v_ref = pure.jacobi_eigh(a.copy())
        assert np.allclose(w_act, w_ref, atol=1e-10)
        # eigenvectors may differ by phase; compare the reconstructions
        r_act = v_act @ np.diag(w_act) @ v_act.conj().T
        r_ref = v_ref @ np.diag(w_ref) @ v_ref.conj().T
        assert np.allclose(r_act, r_ref, atol=1e-10)


def test_jacobi_reconstruction_both_backends():
    rng = np.random.default_rng(1)
    for impl in (kernels, pure):
        for _ in range(20):
            a = random_hermitian(rng, 12)
            w, v = impl.jacobi_eigh(a.copy())
            assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - a) \
                <= 1e-9 * np.linalg.norm(a)


def test_jacobi_degenerate_spectrum_both_backends():
    # repeated eigenvalues are the classic accuracy trap
    rng = np.random.default_rng(2)
    x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    q, _ = np.linalg.qr(x)
    a = q @ np.diag([3.0, 3.0, 3.0, 1.0, 1.0, -2.0]) @ q.conj().T
    a = (a + a.conj().T) / 2
    for impl in (kernels, pure):
        w, v = impl.jacobi_eigh(a.copy())
        assert np.allclose(np.sort(w), [-2, 1, 1, 3, 3, 3], atol=1e-9)
        assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - a) <= 1e-9 * np.linalg.norm(a)


def test_jacobi_nonconvergence_raises():
    rng = np.random.default_rng(3)
    a = random_hermitian(rng, 8)
    with pytest.raises(NumericsError):
        pure.jacobi_eigh(a, max_sweeps=0)


def test_beam_gains_backends_agree():
    rng = np.random.default_rng(4)
    dirs, pos, w = random_batch(rng, 200, 16)
    g_act = kernels.beam_gains(dirs, pos, w, 586.0)
    g_ref = pure.beam_gains(dirs, pos, w, 586.0)
    assert np.allclose(g_act, g_ref, rtol=1e-12, atol=1e-15)
    assert kernels.min_beam_gain(dirs, pos, w, 586.0) == pytest.approx(
        pure.min_beam_gain(dirs, pos, w, 586.0), rel=1e-12
    )


def test_beam_gains_matches_direct_formula():
    rng = np.random.default_rng(5)
    dirs, pos, w = random_batch(rng, 20, 8)
    k = 500.0
    got = kernels.beam_gains(dirs, pos, w, k)
    for i in range(20):
        g = np.exp(1j * k * (dirs[i] @ pos))
        assert got[i] == pytest.approx(np.abs(np.vdot(w, g)) ** 2, rel=1e-12)


def test_pure_env_var_forces_fallback():
    code = (
        "import os; os.environ['SEEJAM_PURE'] = '1'; "
        "from seejam import kernels; print(kernels.BACKEND_NAME)"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "pure"
