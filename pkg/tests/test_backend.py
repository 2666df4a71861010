"""The compiled kernels and their numpy fallback must agree."""
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swkb import _backend
from swkb.catalog import coulomb_radial, square_well
from swkb.oracle import default_grid, tridiagonal

compiled = _backend.compiled_kernels
python = _backend.python_kernels
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _eigen_args(entry, n=5):
    grid = default_grid(entry, n)
    diag, off2 = tridiagonal(entry, grid)
    off = math.sqrt(off2[0])
    lo, hi = float(diag.min()) - 2 * off, float(diag.max()) + 2 * off
    norm = max(abs(lo), abs(hi))
    return (diag, off2, n, lo, hi, 2 * np.finfo(float).eps, 1e-15 * norm), norm


@needs_compiled
@pytest.mark.parametrize("factory", [square_well, coulomb_radial])
def test_eigenvalue_parity(factory):
    args, norm = _eigen_args(factory())
    a = np.asarray(compiled.lowest_eigenvalues(*args))
    b = np.asarray(python.lowest_eigenvalues(*args))
    assert np.max(np.abs(a - b)) <= 1e-13 * norm


@needs_compiled
@given(st.floats(-5.0, 5.0))
def test_sturm_count_parity(lam):
    diag = np.linspace(-3.0, 3.0, 200)
    off2 = np.full(199, 0.49)
    assert compiled.sturm_count(diag, off2, lam) == python.sturm_count(diag, off2, lam)


def test_sturm_count_exact_zero_pivot():
    # eigenvalues of [[0, 1], [1, 0]] are -1 and 1
    for k in (python, compiled):
        if k is None:
            continue
        assert k.sturm_count(np.zeros(2), np.ones(1), 0.0) == 1
        assert k.sturm_count(np.zeros(2), np.ones(1), 1.5) == 2


@needs_compiled
@given(st.integers(1, 20_000), st.floats(1e-4, 2.0))
def test_oscillating_sum_parity(k_max, scale):
    rng = np.random.default_rng(k_max)
    frac = rng.random(64)
    damp = rng.random(64) * scale
    a = np.asarray(compiled.oscillating_sum(frac, damp, k_max, 1e-20))
    b = np.asarray(python.oscillating_sum(frac, damp, k_max, 1e-20))
    assert np.max(np.abs(a - b)) <= 1e-9 * (1 + np.max(np.abs(b)))


def test_oscillating_sum_closed_form():
    # no damping, frac = 1/2: sum of (-1)^k for k = 1..K
    for k in (python, compiled):
        if k is None:
            continue
        out = np.asarray(k.oscillating_sum(np.array([0.5]), np.array([0.0]), 7, 0.0))
        assert out[0] == pytest.approx(-1.0, abs=1e-12)


def test_backend_flag():
    assert _backend.BACKEND in ("compiled", "python")
    assert _backend.kernels is (compiled or python)


def test_forced_python_backend():
    env = dict(os.environ, SWKB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from swkb._backend import BACKEND; print(BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_pure_python_path_end_to_end(monkeypatch):
    """Square-well trace peaks and square-well oracle with the fallback kernels."""
    import swkb.oracle as oracle
    import swkb.trace as trace
    monkeypatch.setattr(oracle, "kernels", python)
    monkeypatch.setattr(trace, "kernels", python)
    curve = trace.density_curve(square_well(), 0.5, 35.0, 3500, 0.05, 10_000)
    peaks = trace.extract_peaks(curve, 4.0)
    assert np.allclose(peaks.energies, [3, 8, 15, 24, 35], atol=0.025)
    lv = oracle.fd_spectrum(square_well(), oracle.GridSpec(0.0, math.pi, 2000), n_levels=3)
    assert np.allclose(lv, [0, 3, 8], rtol=1e-4, atol=1e-5)
