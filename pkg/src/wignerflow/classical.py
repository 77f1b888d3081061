"""Closed-form classical mechanics of the inverted oscillator in both the
direct (x, p) and the reciprocal (lambda, theta) phase space, plus the exact
characteristics oracle used to cross-check the spectral propagator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .grid import PhaseState, QuadraticHamiltonian, Representation

#: hyperbolic flows overflow double precision well before this; refuse earlier
MAX_OMEGA_T = 30.0


def hamiltonian_direct(x, p, m: float, omega: float):
    """H = p^2/(2m) - m*omega^2*x^2/2."""
    return p**2 / (2.0 * m) - 0.5 * m * omega**2 * x**2


def hamiltonian_reciprocal(lam, theta, m: float, omega: float):
    """HH = lambda^2/(2m) - m*omega^2*theta^2/2, conserved along Eq.-of-motion
    flows in the reciprocal plane."""
    return lam**2 / (2.0 * m) - 0.5 * m * omega**2 * theta**2


@dataclass(frozen=True)
class TrajectoryPoint:
    space: str  # "direct" or "reciprocal"
    coords: tuple
    t: float
    energy: float


def _check_omega_t(omega: float, t: float) -> None:
    if abs(omega * t) > MAX_OMEGA_T:
        raise DomainError(f"|omega*t| = {abs(omega * t):g} exceeds {MAX_OMEGA_T:g} (overflow)")


def newton_trajectory(x0: float, p0: float, m: float, omega: float, t: float) -> TrajectoryPoint:
    """Hyperbolic trajectory of the inverted oscillator."""
    _check_omega_t(omega, t)
    ch, sh = np.cosh(omega * t), np.sinh(omega * t)
    x = x0 * ch + p0 * sh / (m * omega)
    p = m * omega * x0 * sh + p0 * ch
    return TrajectoryPoint("direct", (float(x), float(p)), float(t),
                           float(hamiltonian_direct(x, p, m, omega)))


def reciprocal_trajectory(lambda0: float, theta0: float, m: float, omega: float,
                          t: float) -> TrajectoryPoint:
    """Characteristic trajectory of the ambiguity-function transport equation."""
    _check_omega_t(omega, t)
    ch, sh = np.cosh(omega * t), np.sinh(omega * t)
    lam = lambda0 * ch - m * omega * theta0 * sh
    theta = -lambda0 * sh / (m * omega) + theta0 * ch
    return TrajectoryPoint("reciprocal", (float(lam), float(theta)), float(t),
                           float(hamiltonian_reciprocal(lam, theta, m, omega)))


def flow_map(hamiltonian: QuadraticHamiltonian, t: float):
    """Affine phase-space flow of a quadratic Hamiltonian.

    Returns (M, z_star) with z(t) = z_star + M @ (z0 - z_star); z_star is the
    equilibrium (shifted by b when c != 0). For c = 0 the flow is the free /
    uniformly accelerated map and z_star carries the drift terms instead.
    """
    m, b, c = hamiltonian.m, hamiltonian.b, hamiltonian.c
    if c < 0:
        w = hamiltonian.omega()
        _check_omega_t(w, t)
        ch, sh = np.cosh(w * t), np.sinh(w * t)
        M = np.array([[ch, sh / (m * w)], [m * w * sh, ch]])
        z_star = np.array([-b / (2.0 * c), 0.0])
        return M, z_star
    if c > 0:
        w = hamiltonian.omega()
        cs, sn = np.cos(w * t), np.sin(w * t)
        M = np.array([[cs, sn / (m * w)], [-m * w * sn, cs]])
        z_star = np.array([-b / (2.0 * c), 0.0])
        return M, z_star
    # c == 0: x += p t/m - b t^2/(2m), p += -b t; encode as M plus offset
    M = np.array([[1.0, t / m], [0.0, 1.0]])
    offset = np.array([-b * t**2 / (2.0 * m), -b * t])
    return M, offset


def apply_flow(hamiltonian: QuadraticHamiltonian, t: float, x, p):
    """Apply the closed-form flow to coordinate arrays."""
    M, ref = flow_map(hamiltonian, t)
    if hamiltonian.c == 0:
        xn = M[0, 0] * x + M[0, 1] * p + ref[0]
        pn = M[1, 0] * x + M[1, 1] * p + ref[1]
    else:
        xs, ps = x - ref[0], p - ref[1]
        xn = M[0, 0] * xs + M[0, 1] * ps + ref[0]
        pn = M[1, 0] * xs + M[1, 1] * ps + ref[1]
    return xn, pn


def characteristics_oracle(initial: PhaseState, hamiltonian: QuadraticHamiltonian,
                           t: float) -> PhaseState:
    """Exact transport of a Gaussian Wigner state: evaluate the analytic
    initial profile at back-propagated lattice points (no interpolation)."""
    if initial.representation is not Representation.W:
        raise ValueError("characteristics oracle requires representation W")
    if initial.profile is None:
        raise ValueError("characteristics oracle needs a state with an analytic Gaussian profile")
    X, P = initial.grid.meshgrid()
    xb, pb = apply_flow(hamiltonian, -t, X, P)
    prof = initial.profile
    ax = prof.m * prof.omega / prof.hbar          # 1/(2 sigma_x^2)
    ap = 1.0 / (prof.hbar * prof.m * prof.omega)  # 1/(2 sigma_p^2)
    values = kernels.gaussian_field(xb, pb, prof.x0, prof.p0, ax, ap,
                                    1.0 / (np.pi * prof.hbar))
    return PhaseState(initial.grid, values.astype(np.complex128), Representation.W,
                      time=initial.time + t, hbar=initial.hbar)


@dataclass(frozen=True)
class ConservationReport:
    max_direct_deviation: float
    max_reciprocal_deviation: float
    n_seeds: int
    times: tuple


def generator_conservation_check(state: PhaseState, hamiltonian: QuadraticHamiltonian,
                                 t_grid, n_seeds: int = 100,
                                 rng: np.random.Generator | None = None) -> ConservationReport:
    """Check that H is constant along direct flows and HH along reciprocal
    flows, the observable consequence of the shared generator of motion."""
    if rng is None:
        rng = np.random.default_rng(0)
    g = state.grid
    m, w = hamiltonian.m, hamiltonian.omega()
    if w == 0.0:
        raise DomainError("conservation check needs omega != 0")
    xs = rng.uniform(g.x_min / 2, g.x_max / 2, n_seeds)
    ps = rng.uniform(g.p_min / 2, g.p_max / 2, n_seeds)
    lam_max = float(np.max(np.abs(g.lambda_values)))
    th_max = float(np.max(np.abs(g.theta_values)))
    ls = rng.uniform(-lam_max / 2, lam_max / 2, n_seeds)
    ts = rng.uniform(-th_max / 2, th_max / 2, n_seeds)
    max_dir = 0.0
    max_rec = 0.0
    for i in range(n_seeds):
        e_dir = hamiltonian_direct(xs[i], ps[i], m, w)
        e_rec = hamiltonian_reciprocal(ls[i], ts[i], m, w)
        for t in t_grid:
            pt = newton_trajectory(xs[i], ps[i], m, w, t)
            max_dir = max(max_dir, abs(pt.energy - e_dir))
            rt = reciprocal_trajectory(ls[i], ts[i], m, w, t)
            max_rec = max(max_rec, abs(rt.energy - e_rec))
    return ConservationReport(max_dir, max_rec, n_seeds, tuple(float(t) for t in t_grid))
