"""Phase-space lattice, quadratic Hamiltonians, and Gaussian initial states.

The lattice is periodic with the right endpoint excluded, so the conjugate
(lambda, theta) lattice is the standard FFT frequency layout scaled by 2*pi.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, StateConstructionError

#: Gaussian initial states must keep this many standard deviations of
#: clearance to every grid boundary.
SIGMA_MARGIN = 5.0


class Representation(enum.Enum):
    """The four Hilbert-phase-space representations of a state."""

    W = "W"  # (x, p): Wigner function, real
    B = "B"  # (x, theta): double-configuration-space (Blokhintsev)
    Z = "Z"  # (lambda, p): double-momentum-space
    A = "A"  # (lambda, theta): ambiguity function


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform periodic (x, p) lattice together with its FFT-conjugate lattice."""

    nx: int
    np: int
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    dx: float = field(init=False)
    dp: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    p: np.ndarray = field(init=False, repr=False)
    lambda_values: np.ndarray = field(init=False, repr=False)
    theta_values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        dx = (self.x_max - self.x_min) / self.nx
        dp = (self.p_max - self.p_min) / self.np
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dp", dp)
        object.__setattr__(self, "x", self.x_min + dx * np.arange(self.nx))
        object.__setattr__(self, "p", self.p_min + dp * np.arange(self.np))
        object.__setattr__(self, "lambda_values", 2.0 * np.pi * np.fft.fftfreq(self.nx, dx))
        object.__setattr__(self, "theta_values", 2.0 * np.pi * np.fft.fftfreq(self.np, dp))
        for arr in (self.x, self.p, self.lambda_values, self.theta_values):
            arr.setflags(write=False)

    @property
    def dlambda(self) -> float:
        return 2.0 * np.pi / (self.nx * self.dx)

    @property
    def dtheta(self) -> float:
        return 2.0 * np.pi / (self.np * self.dp)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dp

    def is_symmetric(self) -> bool:
        """True when both extents are symmetric about the origin."""
        return self.x_min == -self.x_max and self.p_min == -self.p_max

    def meshgrid(self):
        """Return (X, P) arrays of shape (np, nx)."""
        return np.meshgrid(self.x, self.p)


def make_grid(nx: int, np_: int, x_extent, p_extent) -> PhaseGrid:
    """Build a PhaseGrid; sizes must be powers of two >= 8."""
    for name, n in (("nx", nx), ("np", np_)):
        if not isinstance(n, (int, np.integer)) or n < 8 or not _is_power_of_two(int(n)):
            raise ConfigurationError(f"{name}={n!r}: grid sizes must be powers of two >= 8")
    x_min, x_max = map(float, x_extent)
    p_min, p_max = map(float, p_extent)
    if not (np.isfinite([x_min, x_max, p_min, p_max]).all() and x_min < x_max and p_min < p_max):
        raise ConfigurationError(
            f"degenerate or inverted extents: x=({x_min}, {x_max}), p=({p_min}, {p_max})"
        )
    return PhaseGrid(int(nx), int(np_), x_min, x_max, p_min, p_max)


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """H = p^2/(2m) - a + b*x + c*x^2.

    The inverted oscillator is the special case a = b = 0, c = -m*omega^2/2;
    a confining oscillator has c > 0.
    """

    m: float
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.m) and self.m > 0):
            raise ConfigurationError(f"mass must be positive, got {self.m!r}")

    @classmethod
    def oscillator(cls, m: float, omega: float, inverted: bool = True) -> "QuadraticHamiltonian":
        c = 0.5 * m * omega**2
        return cls(m=m, c=-c if inverted else c)

    def omega(self) -> float:
        """Repulsion (c < 0) or confinement (c > 0) parameter sqrt(2|c|/m)."""
        return float(np.sqrt(2.0 * abs(self.c) / self.m))

    @property
    def kind(self) -> str:
        if self.c < 0:
            return "inverted"
        if self.c > 0:
            return "confining"
        return "free" if self.b == 0 else "linear"

    def potential(self, x):
        return -self.a + self.b * x + self.c * x**2

    def energy(self, x, p):
        return p**2 / (2.0 * self.m) + self.potential(x)


@dataclass(frozen=True)
class GaussianProfile:
    """Closed-form minimum-uncertainty Gaussian Wigner function.

    W(x, p) = (1/(pi*hbar)) * exp(-(m*omega^2*(x-x0)^2 + (p-p0)^2/m) / (hbar*omega))
    """

    x0: float
    p0: float
    m: float
    omega: float
    hbar: float

    @property
    def sigma_x2(self) -> float:
        return self.hbar / (2.0 * self.m * self.omega)

    @property
    def sigma_p2(self) -> float:
        return self.hbar * self.m * self.omega / 2.0

    def __call__(self, x, p):
        u = self.m * self.omega**2 * (x - self.x0) ** 2 + (p - self.p0) ** 2 / self.m
        return np.exp(-u / (self.hbar * self.omega)) / (np.pi * self.hbar)

    def reflected(self) -> "GaussianProfile":
        return GaussianProfile(-self.x0, -self.p0, self.m, self.omega, self.hbar)


@dataclass
class PhaseState:
    """Complex 2-D field over a PhaseGrid, tagged with its representation.

    values has shape (np, nx): first index runs over the momentum-like
    coordinate (p or theta), second over the position-like one (x or lambda).
    """

    grid: PhaseGrid
    values: np.ndarray
    representation: Representation
    time: float = 0.0
    hbar: float = 1.0
    profile: GaussianProfile | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.np, self.grid.nx):
            raise ConfigurationError(
                f"values shape {self.values.shape} does not match grid ({self.grid.np}, {self.grid.nx})"
            )

    def real_values(self) -> np.ndarray:
        """Real part; meaningful for representation W (imaginary part is noise)."""
        return self.values.real

    def norm(self) -> float:
        """Riemann-sum total mass. For W this is the integral of W dx dp."""
        return float(self.values.sum().real * self._cell())

    def _cell(self) -> float:
        g = self.grid
        d0 = g.dtheta if self.representation in (Representation.B, Representation.A) else g.dp
        d1 = g.dlambda if self.representation in (Representation.Z, Representation.A) else g.dx
        return d0 * d1

    def copy(self) -> "PhaseState":
        return PhaseState(self.grid, self.values.copy(), self.representation,
                          self.time, self.hbar, self.profile)


def gaussian_wigner(grid: PhaseGrid, hamiltonian: QuadraticHamiltonian,
                    center, hbar: float = 1.0) -> PhaseState:
    """Gaussian Wigner state matched to the curvature |c| of the Hamiltonian."""
    if hamiltonian.c == 0:
        raise StateConstructionError("Gaussian width undefined for c = 0 (omega = 0)")
    x0, p0 = map(float, center)
    profile = GaussianProfile(x0, p0, hamiltonian.m, hamiltonian.omega(), float(hbar))
    sx = np.sqrt(profile.sigma_x2)
    sp = np.sqrt(profile.sigma_p2)
    margins = {
        "x_min": (x0 - SIGMA_MARGIN * sx) - grid.x_min,
        "x_max": grid.x_max - (x0 + SIGMA_MARGIN * sx),
        "p_min": (p0 - SIGMA_MARGIN * sp) - grid.p_min,
        "p_max": grid.p_max - (p0 + SIGMA_MARGIN * sp),
    }
    for boundary, slack in margins.items():
        if slack < 0:
            raise StateConstructionError(
                f"Gaussian at ({x0}, {p0}) violates the {SIGMA_MARGIN:g}-sigma margin "
                f"at boundary {boundary} by {-slack:g}"
            )
    X, P = grid.meshgrid()
    return PhaseState(grid, profile(X, P).astype(np.complex128),
                      Representation.W, time=0.0, hbar=float(hbar), profile=profile)
