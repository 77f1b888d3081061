import subprocess
import sys

import numpy as np
import pytest

from wignerflow import kernels


def test_apply_phase_matches_numpy():
    # the jitted multiply may contract to FMA, so agreement is to rounding
    # error, not bitwise
    rng = np.random.default_rng(0)
    a = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    phase = np.exp(1j * rng.standard_normal((64, 64)))
    via_kernel = a.copy()
    via_numpy = a.copy()
    kernels.apply_phase(via_kernel, phase)
    kernels.apply_phase_numpy(via_numpy, phase)
    assert np.abs(via_kernel - via_numpy).max() < 1e-14
    assert np.abs(via_numpy - a * phase).max() == 0.0


def test_gaussian_field_matches_numpy():
    rng = np.random.default_rng(1)
    x = rng.uniform(-5, 5, (32, 48))
    p = rng.uniform(-5, 5, (32, 48))
    args = (x, p, 0.5, -0.25, 1.2, 0.8, 1.0 / np.pi)
    assert np.abs(kernels.gaussian_field(*args)
                  - kernels.gaussian_field_numpy(*args)).max() < 1e-15


def test_numpy_fallback_env_flag():
    """WIGNERFLOW_NO_NUMBA must select the pure-numpy kernels at import."""
    code = (
        "import os; os.environ['WIGNERFLOW_NO_NUMBA'] = '1'\n"
        "from wignerflow import kernels\n"
        "assert not kernels.USE_NUMBA\n"
        "assert kernels.apply_phase is kernels.apply_phase_numpy\n"
        "assert kernels.gaussian_field is kernels.gaussian_field_numpy\n"
    )
    subprocess.run([sys.executable, "-c", code], check=True)


@pytest.mark.skipif(not kernels.USE_NUMBA, reason="numba path disabled")
def test_propagation_agrees_across_kernel_paths(tmp_path):
    """Each kernel path is individually bit-deterministic; across paths the
    dynamics agree to accumulated rounding error (the jitted complex multiply
    may use FMA contraction)."""
    code = (
        "import os, sys, numpy as np\n"
        "if sys.argv[1] == 'numpy': os.environ['WIGNERFLOW_NO_NUMBA'] = '1'\n"
        "import wignerflow as wf\n"
        "h = wf.QuadraticHamiltonian.oscillator(1.0, 1.0)\n"
        "g = wf.make_grid(128, 128, (-8.0, 8.0), (-8.0, 8.0))\n"
        "s = wf.gaussian_wigner(g, h, (0.5, 0.0))\n"
        "plan = wf.PropagationPlan(h, 0.01, 0.5)\n"
        "out = wf.propagate(s, plan)[-1][0].values\n"
        "np.save(sys.argv[2], out)\n"
    )
    for mode in ("numba", "numpy"):
        subprocess.run([sys.executable, "-c", code, mode,
                        str(tmp_path / f"{mode}.npy")], check=True)
    a = np.load(tmp_path / "numba.npy")
    b = np.load(tmp_path / "numpy.npy")
    assert np.linalg.norm(a - b) / np.linalg.norm(b) < 1e-12
