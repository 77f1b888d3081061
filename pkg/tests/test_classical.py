import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import wignerflow as wf
from wignerflow.classical import (MAX_OMEGA_T, apply_flow, flow_map,
                                  hamiltonian_direct, hamiltonian_reciprocal)
from wignerflow.errors import DomainError

coords = st.floats(-5.0, 5.0, allow_nan=False)
times = st.floats(-3.0, 3.0, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(x0=coords, p0=coords, t=times)
def test_direct_energy_conserved(x0, p0, t):
    pt = wf.newton_trajectory(x0, p0, 1.0, 1.0, t)
    assert pt.space == "direct"
    assert pt.energy == pytest.approx(
        hamiltonian_direct(x0, p0, 1.0, 1.0), abs=1e-11)


@settings(max_examples=50, deadline=None)
@given(l0=coords, t0=coords, t=times)
def test_reciprocal_energy_conserved(l0, t0, t):
    pt = wf.reciprocal_trajectory(l0, t0, 1.0, 1.0, t)
    assert pt.space == "reciprocal"
    assert pt.energy == pytest.approx(
        hamiltonian_reciprocal(l0, t0, 1.0, 1.0), abs=1e-11)


def test_trajectory_closed_forms():
    pt = wf.newton_trajectory(1.0, 0.0, 1.0, 1.0, 0.5)
    assert pt.coords[0] == pytest.approx(np.cosh(0.5))
    assert pt.coords[1] == pytest.approx(np.sinh(0.5))
    rt = wf.reciprocal_trajectory(1.0, 0.0, 1.0, 1.0, 0.5)
    assert rt.coords[0] == pytest.approx(np.cosh(0.5))
    assert rt.coords[1] == pytest.approx(-np.sinh(0.5))


def test_overflow_guard():
    with pytest.raises(DomainError, match="overflow"):
        wf.newton_trajectory(1.0, 0.0, 1.0, 1.0, MAX_OMEGA_T + 1.0)
    with pytest.raises(DomainError, match="overflow"):
        wf.reciprocal_trajectory(1.0, 0.0, 1.0, 2.0, MAX_OMEGA_T)


@pytest.mark.parametrize("h", [
    wf.QuadraticHamiltonian.oscillator(1.0, 1.0, inverted=True),
    wf.QuadraticHamiltonian.oscillator(2.0, 0.7, inverted=False),
    wf.QuadraticHamiltonian(m=1.5, b=0.3),
    wf.QuadraticHamiltonian(m=1.0, a=1.0, b=0.5, c=-0.5),
])
def test_flow_group_property(h):
    for t, s in [(0.4, 0.9), (1.2, -0.5), (-0.3, -0.6)]:
        mt, _ = flow_map(h, t)
        ms, _ = flow_map(h, s)
        mts, _ = flow_map(h, t + s)
        assert np.abs(mt @ ms - mts).max() < 1e-12
        assert np.linalg.det(mt) == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("h", [
    wf.QuadraticHamiltonian.oscillator(1.0, 1.0),
    wf.QuadraticHamiltonian(m=2.0, b=1.0),
    wf.QuadraticHamiltonian(m=1.0, b=-0.4, c=0.5),
])
def test_apply_flow_inverts(h):
    x = np.linspace(-2, 2, 7)
    p = np.linspace(-1, 1, 7)
    xf, pf = apply_flow(h, 0.8, x, p)
    xb, pb = apply_flow(h, -0.8, xf, pf)
    assert np.abs(xb - x).max() < 1e-12
    assert np.abs(pb - p).max() < 1e-12


def test_flow_fixed_point_with_linear_term():
    # with b != 0 the hyperbolic fixed point shifts to x* = -b/(2c)
    h = wf.QuadraticHamiltonian(m=1.0, b=1.0, c=-0.5)
    xs = -h.b / (2 * h.c)
    xf, pf = apply_flow(h, 1.3, xs, 0.0)
    assert xf == pytest.approx(xs, abs=1e-12)
    assert pf == pytest.approx(0.0, abs=1e-12)


def test_characteristics_oracle_identity(small_state, io_hamiltonian):
    same = wf.characteristics_oracle(small_state, io_hamiltonian, 0.0)
    assert np.abs(same.values - small_state.values).max() < 1e-12


def test_characteristics_oracle_needs_profile(small_state, io_hamiltonian):
    bare = wf.PhaseState(small_state.grid, small_state.values,
                         wf.Representation.W)
    with pytest.raises(ValueError, match="profile"):
        wf.characteristics_oracle(bare, io_hamiltonian, 1.0)


def test_generator_conservation_report(small_state, io_hamiltonian):
    rep = wf.generator_conservation_check(
        small_state, io_hamiltonian, t_grid=[0.0, 0.5, 1.0], n_seeds=20,
        rng=np.random.default_rng(7))
    assert rep.n_seeds == 20
    assert rep.times == (0.0, 0.5, 1.0)
    assert rep.max_direct_deviation < 1e-10
    assert rep.max_reciprocal_deviation < 1e-10


def test_generator_conservation_rejects_free(small_state):
    with pytest.raises(DomainError, match="omega"):
        wf.generator_conservation_check(small_state,
                                        wf.QuadraticHamiltonian(m=1.0), [0.5])
