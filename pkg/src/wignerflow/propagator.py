"""Spectral split-operator propagation of Wigner states under quadratic
Hamiltonians.

Each step is the symmetric kick-drift-kick sequence: a half potential phase
applied in (x, theta), a full kinetic phase in (lambda, p), and a second half
potential phase. For a quadratic Hamiltonian both factors are exact shears of
the bilinear flow, and with the effective shear times

    tau   = tanh(omega*dt/2)/omega   (c < 0;  tan for c > 0;  dt/2 for c = 0)
    kappa = sinh(omega*dt)/(m*omega) (c < 0;  sin for c > 0;  dt/m for c = 0)

the composed step reproduces the closed-form classical flow map exactly, so
the only residual error is spectral truncation / periodic wrap-around. The
coefficients reduce to the plain Strang values (dt/2, dt/m) to O(dt^3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analysis, kernels
from .classical import flow_map
from .errors import ConfigurationError, InstabilityError
from .grid import (SIGMA_MARGIN, GaussianProfile, PhaseGrid, PhaseState,
                   QuadraticHamiltonian, Representation)

#: lattice mass inside the boundary band above which a snapshot is in error
MASS_LOSS_LIMIT = 1e-6


def split_shear_times(hamiltonian: QuadraticHamiltonian, dt: float) -> tuple[float, float]:
    """Effective (kick, drift) shear times making one step exact."""
    m, c = hamiltonian.m, hamiltonian.c
    if c == 0.0:
        return dt / 2.0, dt / m
    w = hamiltonian.omega()
    if c < 0:
        return math.tanh(w * dt / 2.0) / w, math.sinh(w * dt) / (m * w)
    return math.tan(w * dt / 2.0) / w, math.sin(w * dt) / (m * w)


class _Stepper:
    """Precomputed phase arrays for repeated steps of fixed dt."""

    def __init__(self, grid: PhaseGrid, hamiltonian: QuadraticHamiltonian, dt: float):
        tau, kappa = split_shear_times(hamiltonian, dt)
        b, c = hamiltonian.b, hamiltonian.c
        grad_v = b + 2.0 * c * grid.x  # potential gradient on the x lattice
        theta = grid.theta_values[:, np.newaxis]
        lam = grid.lambda_values[np.newaxis, :]
        self.kick_half = np.exp(1j * tau * grad_v[np.newaxis, :] * theta)
        self.drift = np.exp(-1j * kappa * grid.p[:, np.newaxis] * lam)

    def advance(self, values: np.ndarray) -> np.ndarray:
        f = np.fft.fft(values, axis=0)
        kernels.apply_phase(f, self.kick_half)
        values = np.fft.ifft(f, axis=0)
        f = np.fft.fft(values, axis=1)
        kernels.apply_phase(f, self.drift)
        values = np.fft.ifft(f, axis=1)
        f = np.fft.fft(values, axis=0)
        kernels.apply_phase(f, self.kick_half)
        return np.fft.ifft(f, axis=0)


def step(state: PhaseState, hamiltonian: QuadraticHamiltonian, dt: float) -> PhaseState:
    """Advance a Wigner state by one split step of length dt."""
    if state.representation is not Representation.W:
        raise ValueError("propagation requires representation W")
    if dt == 0.0:
        return state.copy()
    values = _Stepper(state.grid, hamiltonian, dt).advance(state.values)
    if not np.isfinite(values).all():
        raise InstabilityError("non-finite values after a single step")
    return PhaseState(state.grid, values, Representation.W, state.time + dt, state.hbar)


@dataclass
class PropagationPlan:
    """Fixed-step propagation schedule with snapshot times.

    Snapshot times are rounded to the nearest step; the rounding residues are
    recorded.
    """

    hamiltonian: QuadraticHamiltonian
    dt: float
    t_final: float
    snapshot_times: tuple = ()
    hbar: float = 1.0
    n_steps: int = field(init=False)
    snapshot_steps: tuple = field(init=False)
    rounding_residues: tuple = field(init=False)

    def __post_init__(self):
        if not (self.dt > 0 and self.t_final > 0 and self.dt <= self.t_final * (1 + 1e-12)):
            raise ConfigurationError(f"need 0 < dt <= t_final, got dt={self.dt}, t_final={self.t_final}")
        self.n_steps = int(round(self.t_final / self.dt))
        if not self.snapshot_times:
            self.snapshot_times = (0.0, self.t_final)
        steps = []
        residues = []
        for t in self.snapshot_times:
            if t < -1e-12 or t > self.t_final * (1 + 1e-12):
                raise ConfigurationError(f"snapshot time {t} outside [0, {self.t_final}]")
            k = min(int(round(t / self.dt)), self.n_steps)
            steps.append(k)
            residues.append(t - k * self.dt)
        order = np.argsort(steps, kind="stable")
        self.snapshot_steps = tuple(int(steps[i]) for i in order)
        self.rounding_residues = tuple(float(residues[i]) for i in order)
        if len(set(self.snapshot_steps)) != len(self.snapshot_steps):
            raise ConfigurationError("snapshot times collapse onto the same step")


def check_support(profile: GaussianProfile, hamiltonian: QuadraticHamiltonian,
                  grid: PhaseGrid, plan: PropagationPlan) -> None:
    """Refuse plans whose 5-sigma Gaussian envelope reaches the boundary.

    The envelope is propagated in closed form (center through the flow map,
    covariance through M C M^T) and checked at every step time.
    """
    c0 = np.array([profile.x0, profile.p0])
    cov0 = np.diag([profile.sigma_x2, profile.sigma_p2])
    for k in range(plan.n_steps + 1):
        t = k * plan.dt
        mat, ref = flow_map(hamiltonian, t)
        if hamiltonian.c == 0:
            center = mat @ c0 + ref
        else:
            center = ref + mat @ (c0 - ref)
        cov = mat @ cov0 @ mat.T
        rx = SIGMA_MARGIN * math.sqrt(cov[0, 0])
        rp = SIGMA_MARGIN * math.sqrt(cov[1, 1])
        if (center[0] - rx < grid.x_min or center[0] + rx > grid.x_max
                or center[1] - rp < grid.p_min or center[1] + rp > grid.p_max):
            raise ConfigurationError(
                f"5-sigma support leaves the grid at t = {t:.6g} (< t_final = "
                f"{plan.t_final:g}); enlarge the domain or shorten the run"
            )


def boundary_band_mass(state: PhaseState) -> float:
    """|W| mass inside the outermost lattice band, a wrap-around proxy."""
    w = np.abs(state.values.real)
    band = max(2, state.grid.nx // 128, state.grid.np // 128)
    mask = np.zeros_like(w, dtype=bool)
    mask[:band, :] = mask[-band:, :] = True
    mask[:, :band] = mask[:, -band:] = True
    return float(w[mask].sum() * state.grid.cell_area)


def propagate(state: PhaseState, plan: PropagationPlan, incidence: str = "from_right"):
    """Run the plan, returning [(snapshot PhaseState, DiagnosticsRecord), ...].

    Snapshots keep the analytic profile only at t = 0 (it describes the
    initial instant only).
    """
    if state.representation is not Representation.W:
        raise ValueError("propagation requires representation W")
    if state.profile is not None:
        check_support(state.profile, plan.hamiltonian, state.grid, plan)
    stepper = _Stepper(state.grid, plan.hamiltonian, plan.dt)
    values = state.values.copy()
    results = []

    def snapshot(k: int):
        snap = PhaseState(state.grid, values.copy(), Representation.W,
                          time=k * plan.dt, hbar=state.hbar,
                          profile=state.profile if k == 0 else None)
        band = boundary_band_mass(snap)
        if band > MASS_LOSS_LIMIT:
            raise InstabilityError(
                f"mass {band:g} in the boundary band at step {k} exceeds {MASS_LOSS_LIMIT:g}"
            )
        results.append((snap, analysis.diagnostics(snap, plan.hamiltonian, incidence,
                                                   mass_outside_margin=band)))

    pending = list(plan.snapshot_steps)
    if pending and pending[0] == 0:
        snapshot(0)
        pending.pop(0)
    for k in range(1, plan.n_steps + 1):
        values = stepper.advance(values)
        if not np.isfinite(values).all():
            raise InstabilityError(f"non-finite values at step {k}")
        if pending and pending[0] == k:
            snapshot(k)
            pending.pop(0)
    return results
