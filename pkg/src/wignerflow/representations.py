"""Transforms between the W, B, Z, A representations.

Conjugate pairs are lambda <-> x (axis 1) and theta <-> p (axis 0). The
forward transforms are Riemann sums of

    B(x, theta) = int W e^{-i p theta} dp
    Z(lambda, p) = int W e^{-i x lambda} dx
    A(lambda, theta) = int W e^{-i(lambda x + p theta)} dx dp

with no 2*pi prefactor, so A(0, 0) equals the total mass of W; each inverse
carries the matching 1/(2*pi). Under this convention the cell-area-weighted
L2 norm picks up a factor 2*pi per transformed axis, which `l2_norm` divides
out so every representation change is an isometry.
"""
from __future__ import annotations

import numpy as np

from .errors import NormalizationError
from .grid import PhaseGrid, PhaseState, Representation

# (p-axis transformed, x-axis transformed)
_AXIS_STATUS = {
    Representation.W: (False, False),
    Representation.B: (True, False),
    Representation.Z: (False, True),
    Representation.A: (True, True),
}


def _forward(values: np.ndarray, axis: int, grid: PhaseGrid) -> np.ndarray:
    if axis == 1:
        d, conj, c0 = grid.dx, grid.lambda_values, grid.x_min
        phase = np.exp(-1j * conj * c0)[np.newaxis, :]
    else:
        d, conj, c0 = grid.dp, grid.theta_values, grid.p_min
        phase = np.exp(-1j * conj * c0)[:, np.newaxis]
    return d * phase * np.fft.fft(values, axis=axis)


def _inverse(values: np.ndarray, axis: int, grid: PhaseGrid) -> np.ndarray:
    if axis == 1:
        d, conj, c0 = grid.dx, grid.lambda_values, grid.x_min
        phase = np.exp(1j * conj * c0)[np.newaxis, :]
    else:
        d, conj, c0 = grid.dp, grid.theta_values, grid.p_min
        phase = np.exp(1j * conj * c0)[:, np.newaxis]
    return np.fft.ifft(values * phase, axis=axis) / d


def to_representation(state: PhaseState, target: Representation) -> PhaseState:
    """Re-express `state` in `target`; identity if already there."""
    if not np.isfinite(state.values).all():
        raise ValueError("state contains non-finite values")
    if target == state.representation:
        return state.copy()
    have = _AXIS_STATUS[state.representation]
    want = _AXIS_STATUS[target]
    values = state.values
    for axis_flag, axis in ((0, 0), (1, 1)):
        if have[axis] == want[axis]:
            continue
        if want[axis]:
            values = _forward(values, axis, state.grid)
        else:
            values = _inverse(values, axis, state.grid)
    return PhaseState(state.grid, values, target, state.time, state.hbar, state.profile)


def l2_norm(state: PhaseState) -> float:
    """Cell-area-weighted L2 norm, with 1/(2*pi) per reciprocal axis so the
    value is invariant under representation changes."""
    g = state.grid
    p_rec, x_rec = _AXIS_STATUS[state.representation]
    d0 = g.dtheta if p_rec else g.dp
    d1 = g.dlambda if x_rec else g.dx
    scale = (2.0 * np.pi) ** (int(p_rec) + int(x_rec))
    total = float(np.sum(np.abs(state.values) ** 2)) * d0 * d1 / scale
    return float(np.sqrt(total))


def blokhintsev_from_wavefunction(psi: np.ndarray, grid: PhaseGrid,
                                  hbar: float = 1.0) -> PhaseState:
    """B(x, theta) = psi(x - hbar*theta/2) * conj(psi(x + hbar*theta/2)).

    The half-theta shifts are evaluated by spectral (band-limited)
    interpolation on a zero-padded lattice of twice the domain width: the
    largest shift equals the domain width itself, so without padding the
    shifted copies would wrap around and corrupt B at large theta.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (grid.nx,):
        raise NormalizationError(f"psi must have shape ({grid.nx},), got {psi.shape}")
    nrm = float(np.sum(np.abs(psi) ** 2) * grid.dx)
    if abs(nrm - 1.0) > 1e-8:
        raise NormalizationError(f"psi is not normalized on the lattice: |psi|^2 dx = {nrm!r}")
    padded = np.concatenate([psi, np.zeros(grid.nx, dtype=np.complex128)])
    kx = 2.0 * np.pi * np.fft.fftfreq(2 * grid.nx, grid.dx)
    shifts = hbar * grid.theta_values / 2.0  # one shift per theta row
    psi_hat = np.fft.fft(padded)
    # row k holds psi evaluated at x -/+ shifts[k]; keep the original window
    minus = np.fft.ifft(psi_hat[np.newaxis, :] * np.exp(-1j * np.outer(shifts, kx)),
                        axis=1)[:, :grid.nx]
    plus = np.fft.ifft(psi_hat[np.newaxis, :] * np.exp(1j * np.outer(shifts, kx)),
                       axis=1)[:, :grid.nx]
    values = minus * np.conj(plus)
    return PhaseState(grid, values, Representation.B, time=0.0, hbar=float(hbar))


def degenerate_partner(state: PhaseState) -> PhaseState:
    """Point-reflected partner W'(x, p) = W(-x, -p).

    On a symmetric periodic lattice the reflection is an exact index
    permutation, and A of the partner is the complex conjugate of A of the
    original.
    """
    if state.representation is not Representation.W:
        raise ValueError("degenerate_partner requires representation W")
    if not state.grid.is_symmetric():
        raise ValueError("degenerate_partner requires extents symmetric about the origin")
    values = np.roll(state.values[::-1, ::-1], shift=(1, 1), axis=(0, 1))
    profile = state.profile.reflected() if state.profile is not None else None
    return PhaseState(state.grid, values, Representation.W, state.time, state.hbar, profile)
