"""Diagnostics on Wigner states: purity, moments, uncertainty, Hudson
positivity, separatrix-quadrant decomposition and transmission/reflection
weights.

All integrals are cell-area Riemann sums; for smooth periodic spectral data
these are spectrally accurate.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, fields
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .grid import PhaseState, QuadraticHamiltonian, Representation


def _require_w(state: PhaseState) -> np.ndarray:
    if state.representation is not Representation.W:
        raise ValueError("diagnostic requires representation W")
    return state.values.real


def norm(state: PhaseState) -> float:
    return float(_require_w(state).sum() * state.grid.cell_area)


def purity(state: PhaseState) -> float:
    """2*pi*hbar * int W^2 dx dp; equals 1 for pure states."""
    w = _require_w(state)
    return float(2.0 * np.pi * state.hbar * np.sum(w**2) * state.grid.cell_area)


def mean_energy(state: PhaseState, hamiltonian: QuadraticHamiltonian) -> float:
    w = _require_w(state)
    X, P = state.grid.meshgrid()
    return float(np.sum(w * hamiltonian.energy(X, P)) * state.grid.cell_area)


def first_moments(state: PhaseState) -> tuple[float, float]:
    w = _require_w(state)
    cell = state.grid.cell_area
    n = float(w.sum() * cell)
    mx = float(np.sum(w * state.grid.x[np.newaxis, :]) * cell) / n
    mp = float(np.sum(w * state.grid.p[:, np.newaxis]) * cell) / n
    return mx, mp


class QuadrantWeights(NamedTuple):
    upper: float
    lower: float
    left: float
    right: float


def _band_limited_upsample(w: np.ndarray, factor: int) -> np.ndarray:
    """Fourier zero-pad interpolation of a real periodic field onto a lattice
    refined by `factor` along both axes."""
    if factor == 1:
        return w
    n0, n1 = w.shape
    spec = np.fft.fftshift(np.fft.fft2(w))
    out = np.zeros((n0 * factor, n1 * factor), dtype=np.complex128)
    r0 = (n0 * factor - n0) // 2
    r1 = (n1 * factor - n1) // 2
    out[r0:r0 + n0, r1:r1 + n1] = spec
    return np.fft.ifft2(np.fft.ifftshift(out)).real * factor**2


def _frac_above_line(x1, x2, p1, p2, slope):
    """Exact area fraction of {p > slope*x} inside boxes with x1 >= 0."""
    xlo = np.clip(p1 / slope, x1, x2)
    xhi = np.clip(p2 / slope, x1, x2)
    area = (xlo - x1) * (p2 - p1) + p2 * (xhi - xlo) - slope * (xhi**2 - xlo**2) / 2.0
    return area / ((x2 - x1) * (p2 - p1))


@functools.lru_cache(maxsize=4)
def _wedge_fractions(nx, np_, x_min, x_max, p_min, p_max, slope, factor):
    """Per-cell area fractions of the four separatrix quadrants on the
    refined lattice. Each cell's fractions sum to one exactly."""
    dx = (x_max - x_min) / (nx * factor)
    dp = (p_max - p_min) / (np_ * factor)
    x = x_min + dx * np.arange(nx * factor)
    p = p_min + dp * np.arange(np_ * factor)
    x1 = np.broadcast_to(x - dx / 2, (np_ * factor, nx * factor)).copy()
    x2 = np.broadcast_to(x + dx / 2, (np_ * factor, nx * factor)).copy()
    p1 = np.broadcast_to((p - dp / 2)[:, np.newaxis], x1.shape).copy()
    p2 = np.broadcast_to((p + dp / 2)[:, np.newaxis], x1.shape).copy()
    pos = x1 >= 0
    neg = x2 <= 0
    strad = ~(pos | neg)

    fu = np.zeros_like(x1)
    fd = np.zeros_like(x1)
    # region above p = slope*|x| and region below p = -slope*|x|
    fu[pos] = _frac_above_line(x1[pos], x2[pos], p1[pos], p2[pos], slope)
    fu[neg] = _frac_above_line(-x2[neg], -x1[neg], p1[neg], p2[neg], slope)
    fd[pos] = _frac_above_line(x1[pos], x2[pos], -p2[pos], -p1[pos], slope)
    fd[neg] = _frac_above_line(-x2[neg], -x1[neg], -p2[neg], -p1[neg], slope)
    rem = 1.0 - fu - fd
    fr = np.where(pos, rem, 0.0)
    fl = np.where(neg, rem, 0.0)
    if strad.any():
        # column straddling x = 0: evaluate each half-cell and recombine
        wl = -x1[strad]
        wr = x2[strad]
        zero = np.zeros_like(wl)
        fu_l = _frac_above_line(zero, wl, p1[strad], p2[strad], slope)
        fu_r = _frac_above_line(zero, wr, p1[strad], p2[strad], slope)
        fd_l = _frac_above_line(zero, wl, -p2[strad], -p1[strad], slope)
        fd_r = _frac_above_line(zero, wr, -p2[strad], -p1[strad], slope)
        tot = wl + wr
        fu[strad] = (fu_l * wl + fu_r * wr) / tot
        fd[strad] = (fd_l * wl + fd_r * wr) / tot
        fr[strad] = (1.0 - fu_r - fd_r) * wr / tot
        fl[strad] = (1.0 - fu_l - fd_l) * wl / tot
    for arr in (fu, fd, fl, fr):
        arr.setflags(write=False)
    return fu, fd, fl, fr


def _auto_refine(nx: int, np_: int) -> int:
    # refine the lattice up to 2048 points per axis (memory-bounded)
    return min(4, max(1, 2048 // max(nx, np_)))


def quadrant_decomposition(state: PhaseState, hamiltonian: QuadraticHamiltonian,
                           refine: int | None = None) -> QuadrantWeights:
    """Weights of W over the four regions bounded by the separatrices
    p = +/- m*omega*x.

    W is band-limited, so it is first Fourier-upsampled by `refine`
    (auto-chosen by default), then paired with the exact per-cell area
    fractions of each wedge; boundary cells contribute fractionally, which
    realizes the measure-zero separatrix tie-break in the refinement limit.
    """
    if hamiltonian.c >= 0:
        raise DomainError("quadrant decomposition needs c < 0 (separatrices)")
    w = _require_w(state)
    g = state.grid
    if refine is None:
        refine = _auto_refine(g.nx, g.np)
    mw = hamiltonian.m * hamiltonian.omega()
    fu, fd, fl, fr = _wedge_fractions(g.nx, g.np, g.x_min, g.x_max,
                                      g.p_min, g.p_max, mw, refine)
    fine = _band_limited_upsample(w, refine)
    cell = g.cell_area / refine**2
    return QuadrantWeights(
        upper=float(np.sum(fine * fu) * cell),
        lower=float(np.sum(fine * fd) * cell),
        left=float(np.sum(fine * fl) * cell),
        right=float(np.sum(fine * fr) * cell),
    )


class TransmissionReflection(NamedTuple):
    transmitted: float
    reflected: float
    leakage: float


def transmission_reflection(state: PhaseState, hamiltonian: QuadraticHamiltonian,
                            incidence: str = "from_right") -> TransmissionReflection:
    """Over-barrier (H > 0) weight as the transmission coefficient and the
    incidence-side (H < 0) weight as reflection; the far-side negative-energy
    weight is reported separately as leakage, so T + R + leakage = norm."""
    q = quadrant_decomposition(state, hamiltonian)
    t = q.upper + q.lower
    if incidence == "from_right":
        return TransmissionReflection(t, q.right, q.left)
    if incidence == "from_left":
        return TransmissionReflection(t, q.left, q.right)
    raise ValueError(f"incidence must be 'from_right' or 'from_left', got {incidence!r}")


def covariance_and_uncertainty(state: PhaseState, hbar: float | None = None):
    """Second central moments by quadrature and the uncertainty flag
    det(cov) >= hbar^2/4 - 1e-9."""
    if hbar is None:
        hbar = state.hbar
    w = _require_w(state)
    cell = state.grid.cell_area
    n = float(w.sum() * cell)
    X, P = state.grid.meshgrid()
    mx = float(np.sum(w * X) * cell) / n
    mp = float(np.sum(w * P) * cell) / n
    sxx = float(np.sum(w * (X - mx) ** 2) * cell) / n
    spp = float(np.sum(w * (P - mp) ** 2) * cell) / n
    sxp = float(np.sum(w * (X - mx) * (P - mp)) * cell) / n
    cov = np.array([[sxx, sxp], [sxp, spp]])
    ok = bool(np.linalg.det(cov) >= hbar**2 / 4.0 - 1e-9)
    return cov, ok


def hudson_check(state: PhaseState) -> float:
    """Lattice minimum of W; significantly negative values flag non-Gaussian
    (interference-carrying) states."""
    return float(_require_w(state).min())


@dataclass
class DiagnosticsRecord:
    """One CSV row of per-snapshot diagnostics."""

    time: float
    norm: float
    purity: float
    mean_x: float
    mean_p: float
    energy: float
    cov_xx: float
    cov_xp: float
    cov_pp: float
    min_value: float
    weight_upper: float
    weight_lower: float
    weight_left: float
    weight_right: float
    transmitted: float
    reflected: float
    mass_outside_margin: float

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(f.name for f in fields(cls))

    def csv_row(self) -> str:
        return ",".join(f"{getattr(self, f.name):.17g}" for f in fields(self))


def diagnostics(state: PhaseState, hamiltonian: QuadraticHamiltonian,
                incidence: str = "from_right",
                mass_outside_margin: float = 0.0) -> DiagnosticsRecord:
    cov, _ = covariance_and_uncertainty(state)
    mx, mp = first_moments(state)
    if hamiltonian.c < 0:
        q = quadrant_decomposition(state, hamiltonian)
        tr = transmission_reflection(state, hamiltonian, incidence)
        quad = (q.upper, q.lower, q.left, q.right, tr.transmitted, tr.reflected)
    else:
        quad = (np.nan,) * 6
    return DiagnosticsRecord(
        time=state.time,
        norm=norm(state),
        purity=purity(state),
        mean_x=mx,
        mean_p=mp,
        energy=mean_energy(state, hamiltonian),
        cov_xx=cov[0, 0],
        cov_xp=cov[0, 1],
        cov_pp=cov[1, 1],
        min_value=hudson_check(state),
        weight_upper=quad[0],
        weight_lower=quad[1],
        weight_left=quad[2],
        weight_right=quad[3],
        transmitted=quad[4],
        reflected=quad[5],
        mass_outside_margin=mass_outside_margin,
    )
