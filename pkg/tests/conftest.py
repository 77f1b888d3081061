"""Shared fixtures. The two benchmark propagations are session-scoped so the
acceptance criteria that inspect them run the dynamics only once."""
import numpy as np
import pytest

import wignerflow as wf


@pytest.fixture(scope="session")
def io_hamiltonian():
    return wf.QuadraticHamiltonian.oscillator(1.0, 1.0, inverted=True)


class BenchmarkRun:
    """One propagated benchmark: initial state, plan, snapshots, records."""

    def __init__(self, center, n, half, dt=0.01, t_final=1.5):
        self.hamiltonian = wf.QuadraticHamiltonian.oscillator(1.0, 1.0, inverted=True)
        self.grid = wf.make_grid(n, n, (-half, half), (-half, half))
        self.initial = wf.gaussian_wigner(self.grid, self.hamiltonian, center)
        self.plan = wf.PropagationPlan(
            self.hamiltonian, dt, t_final,
            snapshot_times=tuple(np.round(np.arange(0.0, t_final + dt / 2, 0.25), 10)))
        self.results = wf.propagate(self.initial, self.plan)
        self.snapshots = [s for s, _r in self.results]
        self.records = [r for _s, r in self.results]


@pytest.fixture(scope="session")
def run_e1():
    """Center (1, 0): E = -0.5, 512^2 lattice on [-16, 16)^2."""
    return BenchmarkRun((1.0, 0.0), 512, 16.0)


@pytest.fixture(scope="session")
def run_e2():
    """Center (4, 0): E = -8, 1024^2 lattice on [-24, 24)^2."""
    return BenchmarkRun((4.0, 0.0), 1024, 24.0)


@pytest.fixture()
def small_state(io_hamiltonian):
    grid = wf.make_grid(128, 128, (-8.0, 8.0), (-8.0, 8.0))
    return wf.gaussian_wigner(grid, io_hamiltonian, (0.5, 0.25))


def rel_l2(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))
