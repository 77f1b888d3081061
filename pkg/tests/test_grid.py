import numpy as np
import pytest

import wignerflow as wf
from wignerflow.errors import ConfigurationError, StateConstructionError


def test_make_grid_rejects_non_power_of_two():
    with pytest.raises(ConfigurationError, match="powers of two"):
        wf.make_grid(100, 128, (-8, 8), (-8, 8))
    with pytest.raises(ConfigurationError, match="powers of two"):
        wf.make_grid(128, 4, (-8, 8), (-8, 8))


def test_make_grid_rejects_bad_extents():
    with pytest.raises(ConfigurationError, match="extents"):
        wf.make_grid(64, 64, (8, -8), (-8, 8))
    with pytest.raises(ConfigurationError, match="extents"):
        wf.make_grid(64, 64, (-8, 8), (np.nan, 8))


def test_grid_lattices():
    g = wf.make_grid(64, 128, (-8.0, 8.0), (-4.0, 4.0))
    assert g.dx == pytest.approx(0.25)
    assert g.dp == pytest.approx(0.0625)
    assert g.x[0] == -8.0 and g.x[-1] == pytest.approx(8.0 - g.dx)
    assert g.p[0] == -4.0 and g.p[-1] == pytest.approx(4.0 - g.dp)
    # conjugate lattices follow the FFT layout scaled by 2*pi
    assert g.lambda_values[0] == 0.0
    assert g.lambda_values[1] == pytest.approx(2 * np.pi / 16.0)
    assert g.dlambda == pytest.approx(2 * np.pi / 16.0)
    assert g.dtheta == pytest.approx(2 * np.pi / 8.0)
    assert g.cell_area == pytest.approx(g.dx * g.dp)
    assert g.is_symmetric()
    assert not wf.make_grid(64, 64, (-8, 9), (-8, 8)).is_symmetric()


def test_grid_arrays_are_read_only():
    g = wf.make_grid(16, 16, (-2, 2), (-2, 2))
    with pytest.raises(ValueError):
        g.x[0] = 1.0


def test_oscillator_signs():
    inv = wf.QuadraticHamiltonian.oscillator(2.0, 3.0, inverted=True)
    conf = wf.QuadraticHamiltonian.oscillator(2.0, 3.0, inverted=False)
    assert inv.c == pytest.approx(-9.0) and inv.kind == "inverted"
    assert conf.c == pytest.approx(9.0) and conf.kind == "confining"
    assert inv.omega() == pytest.approx(3.0)
    assert conf.omega() == pytest.approx(3.0)
    assert wf.QuadraticHamiltonian(m=1.0).kind == "free"
    assert wf.QuadraticHamiltonian(m=1.0, b=2.0).kind == "linear"


def test_hamiltonian_energy():
    h = wf.QuadraticHamiltonian(m=2.0, a=1.0, b=0.5, c=-0.25)
    assert h.potential(2.0) == pytest.approx(-1.0 + 1.0 - 1.0)
    assert h.energy(2.0, 4.0) == pytest.approx(16.0 / 4.0 - 1.0)
    with pytest.raises(ConfigurationError):
        wf.QuadraticHamiltonian(m=-1.0)


def test_gaussian_profile_moments():
    prof = wf.GaussianProfile(1.0, 0.0, m=1.0, omega=1.0, hbar=1.0)
    assert prof.sigma_x2 == pytest.approx(0.5)
    assert prof.sigma_p2 == pytest.approx(0.5)
    assert prof(1.0, 0.0) == pytest.approx(1.0 / np.pi)
    refl = prof.reflected()
    assert (refl.x0, refl.p0) == (-1.0, 0.0)


def test_gaussian_wigner_normalized(small_state):
    assert small_state.norm() == pytest.approx(1.0, abs=1e-12)
    assert small_state.values.real.min() >= 0.0
    assert small_state.profile is not None


def test_gaussian_wigner_margin_violation():
    g = wf.make_grid(64, 64, (-4.0, 4.0), (-4.0, 4.0))
    h = wf.QuadraticHamiltonian.oscillator(1.0, 1.0)
    with pytest.raises(StateConstructionError, match="x_max"):
        wf.gaussian_wigner(g, h, (1.0, 0.0))


def test_gaussian_wigner_needs_curvature():
    g = wf.make_grid(64, 64, (-8.0, 8.0), (-8.0, 8.0))
    with pytest.raises(StateConstructionError, match="omega"):
        wf.gaussian_wigner(g, wf.QuadraticHamiltonian(m=1.0), (0.0, 0.0))


def test_phase_state_shape_check():
    g = wf.make_grid(16, 32, (-2, 2), (-2, 2))
    with pytest.raises(ConfigurationError, match="shape"):
        wf.PhaseState(g, np.zeros((16, 16)), wf.Representation.W)
