import numpy as np
import pytest

from chbsim import _fallback, kernels

try:
    from chbsim import _kernels
except ImportError:  # extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if _kernels is not None:
        assert kernels.BACKEND == "cython" or __import__("os").environ.get("CHBSIM_PURE_PYTHON")


@needs_ext
def test_rl_fill_agrees():
    rng = np.random.default_rng(7)
    lengths = rng.integers(1, 400, size=60).astype(np.int64)
    volts = rng.choice([-300.0, -100.0, 0.0, 200.0], size=60)
    a, fa = _kernels.rl_fill(lengths, volts, 10.0, 1e-4, 1e6, 0.3)
    b, fb = _fallback.rl_fill(lengths, volts, 10.0, 1e-4, 1e6, 0.3)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-12)
    assert fa == pytest.approx(fb, rel=1e-13, abs=1e-12)


@needs_ext
def test_harmonic_sums_agree():
    rng = np.random.default_rng(3)
    x = rng.normal(size=5000)
    a1, b1 = _kernels.harmonic_sums(x, 200)
    a2, b2 = _fallback.harmonic_sums(x, 200)
    assert np.allclose(a1, a2, atol=1e-9) and np.allclose(b1, b2, atol=1e-9)


def test_fallback_rl_fill_closed_form():
    out, final = _fallback.rl_fill(np.array([3, 2]), np.array([100.0, 0.0]), 10.0, 1e-5, 1e6, 0.0)
    tau = 1e-6
    first = 10 * (1 - np.exp(-np.arange(3) * 1e-6 / tau))
    end1 = 10 * (1 - np.exp(-3))
    second = end1 * np.exp(-np.arange(2) * 1e-6 / tau)
    assert np.allclose(out, np.concatenate([first, second]), rtol=1e-14)
    assert final == pytest.approx(end1 * np.exp(-2), rel=1e-14)
