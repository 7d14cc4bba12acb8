"""Time integration of the derivative NLS flow and of its gauged variant.

Spatial discretization is pseudospectral: the dispersive part i*d^2/dx^2 is
diagonal in Fourier space and handled exactly; nonlinear products are formed
in physical space and dealiased by the 2/3 rule. The default integrator is
integrating-factor RK4 (classical RK4 in the variable exp(-t*symbol)*u_hat);
ETDRK4 with contour-quadrature coefficients is available as an alternative.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import Field, TorusGrid

DEALIAS_CHOICES = ("two_thirds", "none")
INTEGRATOR_CHOICES = ("ifrk4", "etdrk4")
EQUATION_CHOICES = ("dnls1", "dnls2")


class SimulationError(RuntimeError):
    """Base for abnormal simulation termination; carries the hit time and the
    partial trajectory recorded so far."""

    def __init__(self, message: str, t: float, partial: "Trajectory | None" = None):
        super().__init__(message)
        self.t = t
        self.partial = partial


class NonFiniteError(SimulationError):
    """A sample became NaN/Inf (numerical blowup or instability)."""


class BlowupGuardError(SimulationError):
    """The H^1 seminorm exceeded the configured guard threshold.

    A guard hit is reported, never claimed to be mathematical blowup.
    """

    def __init__(self, message: str, t: float, h1dot: float,
                 partial: "Trajectory | None" = None):
        super().__init__(message, t, partial)
        self.h1dot = h1dot


class CflWarning(UserWarning):
    """Advective step-size heuristic dt <= 0.5/(k_max * max|u|^2) violated."""


@dataclass(frozen=True)
class SimConfig:
    """Time-stepping parameters for one simulation."""

    dt: float
    T: float
    record_stride: int = 1
    dealias: str = "two_thirds"
    integrator: str = "ifrk4"
    equation: str = "dnls1"
    beta: float = 0.75
    seed: int = 0
    guard_factor: float = 1e3

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if self.dt > self.T:
            raise ValueError(f"dt = {self.dt} exceeds horizon T = {self.T}")
        if int(self.record_stride) < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")
        if self.dealias not in DEALIAS_CHOICES:
            raise ValueError(f"dealias must be one of {DEALIAS_CHOICES}, got {self.dealias!r}")
        if self.integrator not in INTEGRATOR_CHOICES:
            raise ValueError(f"integrator must be one of {INTEGRATOR_CHOICES}, got {self.integrator!r}")
        if self.equation not in EQUATION_CHOICES:
            raise ValueError(f"equation must be one of {EQUATION_CHOICES}, got {self.equation!r}")
        if not np.isfinite(self.beta):
            raise ValueError("beta must be finite")
        if not self.guard_factor > 0:
            raise ValueError("guard_factor must be positive")


@dataclass(frozen=True)
class Trajectory:
    """Recorded frames (t_i, Field) of one simulation, t_0 = 0, t strictly
    increasing, all frames on one grid."""

    frames: tuple
    config: SimConfig | None = None

    def __post_init__(self):
        if not self.frames:
            raise ValueError("trajectory must contain at least one frame")
        grid = self.frames[0][1].grid
        t_prev = None
        for t, f in self.frames:
            if f.grid != grid:
                raise ValueError("all frames must share one grid")
            if t_prev is not None and not t > t_prev:
                raise ValueError("frame times must be strictly increasing")
            t_prev = t
        if self.frames[0][0] != 0.0:
            raise ValueError("first frame must be at t = 0")

    @property
    def grid(self) -> TorusGrid:
        return self.frames[0][1].grid

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.frames])


def dispersion_symbol(grid: TorusGrid) -> np.ndarray:
    """Per-mode multiplier of the linear part i*d^2/dx^2, FFT order."""
    return -1j * grid.k ** 2


def _dealias_mask(grid: TorusGrid, dealias: str) -> np.ndarray:
    if dealias == "two_thirds":
        return grid.dealias_keep
    if dealias == "none":
        return np.ones(grid.N, dtype=bool)
    raise ValueError(f"dealias must be one of {DEALIAS_CHOICES}, got {dealias!r}")


def _nl_dnls1(grid: TorusGrid, mask: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Spectral nonlinear term d/dx(|u|^2 u) of the ungauged flow."""
    u = np.fft.ifft(F)
    cubic = np.fft.fft(np.abs(u) ** 2 * u)
    cubic[~mask] = 0.0
    return grid._ik * cubic


def _quartic_integral(grid: TorusGrid, F: np.ndarray) -> float:
    """Exact int |v|^4 from the raw spectrum via the 2x padded grid."""
    N = grid.N
    F2 = np.zeros(2 * N, dtype=np.complex128)
    F2[: N // 2] = F[: N // 2]
    F2[2 * N - N // 2 :] = F[N // 2 :]
    v2 = 2.0 * np.fft.ifft(F2)
    return float(np.sum(np.abs(v2) ** 4) * (grid.L / (2 * N)))


def _nl_dnls2(grid: TorusGrid, mask: np.ndarray, beta: float, mu_val: float,
              F: np.ndarray) -> np.ndarray:
    """Spectral nonlinear term of the gauged flow (everything except i*v_xx)."""
    N = grid.N
    v = np.fft.ifft(F)
    vx = np.fft.ifft(grid._ik * F)
    absq = np.abs(v) ** 2
    # Nonlocal coefficient: (beta/L) int [2 Im(v conj(v_x)) + (3/2-2b)|v|^4] + b^2 mu^2
    im_mom = -(grid.L / N ** 2) * float(np.sum(grid._ik.imag * np.abs(F) ** 2))
    psi_val = beta / grid.L * (2.0 * im_mom + (1.5 - 2.0 * beta) * _quartic_integral(grid, F))
    psi_val += beta * beta * mu_val * mu_val
    nl = (
        2.0 * (1.0 - beta) * absq * vx
        + (1.0 - 2.0 * beta) * v * v * np.conj(vx)
        - 1j * (beta * mu_val * absq * v
                + beta * (0.5 - beta) * absq ** 2 * v
                - psi_val * v)
    )
    out = np.fft.fft(nl)
    out[~mask] = 0.0
    return out


def _make_nonlinear(grid: TorusGrid, config: SimConfig,
                    mu_val: float) -> Callable[[np.ndarray], np.ndarray]:
    mask = _dealias_mask(grid, config.dealias)
    # At beta = 0 the gauged flow coincides with the ungauged one; sharing the
    # kernel makes the identity exact discretely, not just analytically.
    if config.equation == "dnls1" or (config.equation == "dnls2"
                                      and config.beta == 0.0):
        return lambda F: _nl_dnls1(grid, mask, F)
    return lambda F: _nl_dnls2(grid, mask, config.beta, mu_val, F)


def _ifrk4_step(F: np.ndarray, dt: float, nl: Callable, E1: np.ndarray,
                E2: np.ndarray) -> np.ndarray:
    """One integrating-factor RK4 step; E1 = exp(symbol*dt/2), E2 = E1^2."""
    a = nl(F)
    b = nl(E1 * (F + 0.5 * dt * a))
    c = nl(E1 * F + 0.5 * dt * b)
    d = nl(E2 * F + dt * E1 * c)
    return E2 * F + (dt / 6.0) * (E2 * a + 2.0 * E1 * (b + c) + d)


def _etdrk4_coeffs(symbol: np.ndarray, dt: float, n_contour: int = 32):
    """ETDRK4 update coefficients via contour quadrature around symbol*dt.

    The symbol is complex (purely imaginary here), so the contour mean is kept
    complex rather than projected to its real part.
    """
    lc = symbol * dt
    r = np.exp(2j * np.pi * (np.arange(n_contour) + 0.5) / n_contour)
    LR = lc[:, None] + r[None, :]
    expLR = np.exp(LR)
    Q = dt * ((np.exp(LR / 2.0) - 1.0) / LR).mean(axis=1)
    f1 = dt * ((-4.0 - LR + expLR * (4.0 - 3.0 * LR + LR ** 2)) / LR ** 3).mean(axis=1)
    f2 = dt * ((2.0 + LR + expLR * (LR - 2.0)) / LR ** 3).mean(axis=1)
    f3 = dt * ((-4.0 - 3.0 * LR - LR ** 2 + expLR * (4.0 - LR)) / LR ** 3).mean(axis=1)
    E = np.exp(lc)
    E2 = np.exp(lc / 2.0)
    return E, E2, Q, f1, f2, f3


def _etdrk4_step(F: np.ndarray, nl: Callable, coeffs) -> np.ndarray:
    E, E2, Q, f1, f2, f3 = coeffs
    Nv = nl(F)
    a = E2 * F + Q * Nv
    Na = nl(a)
    b = E2 * F + Q * Na
    Nb = nl(b)
    c = E2 * a + Q * (2.0 * Nb - Nv)
    Nc = nl(c)
    return E * F + f1 * Nv + 2.0 * f2 * (Na + Nb) + f3 * Nc


def rhs_dnls1(u: Field, dealias: str = "two_thirds") -> Field:
    """Full right-hand side du/dt = i*u_xx + d/dx(|u|^2 u)."""
    grid = u.grid
    F = np.fft.fft(u.values)
    mask = _dealias_mask(grid, dealias)
    total = dispersion_symbol(grid) * F + _nl_dnls1(grid, mask, F)
    return Field(grid, np.fft.ifft(total))


def rhs_dnls2(v: Field, beta: float, mu_val: float,
              dealias: str = "two_thirds") -> Field:
    """Full right-hand side of the gauged flow,

    dv/dt = i*v_xx - i*[ 2(1-b) i |v|^2 v_x + (1-2b) i v^2 conj(v_x)
            + b*mu*|v|^2 v + b(1/2-b)|v|^4 v - psi(v) v ].
    """
    if mu_val < 0:
        raise ValueError("mu_val must be nonnegative")
    grid = v.grid
    F = np.fft.fft(v.values)
    mask = _dealias_mask(grid, dealias)
    total = dispersion_symbol(grid) * F + _nl_dnls2(grid, mask, beta, mu_val, F)
    return Field(grid, np.fft.ifft(total))


def step(f: Field, dt: float, rhs: Callable[[Field], Field],
         linear_symbol: np.ndarray) -> Field:
    """One integrating-factor RK4 step.

    rhs evaluates the nonlinear part only (as a Field operation); the linear
    part, diagonal in Fourier space with the given per-mode multiplier, is
    propagated exactly.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    grid = f.grid

    def nl(F: np.ndarray) -> np.ndarray:
        g = Field(grid, np.fft.ifft(F))
        return np.fft.fft(rhs(g).values)

    E1 = np.exp(0.5 * dt * np.asarray(linear_symbol))
    F1 = _ifrk4_step(np.fft.fft(f.values), dt, nl, E1, E1 * E1)
    return Field(grid, np.fft.ifft(F1))


def _h1dot_from_spectrum(grid: TorusGrid, F: np.ndarray) -> float:
    return math.sqrt(grid.L / grid.N ** 2 * float(np.sum(np.abs(grid._ik * F) ** 2)))


def simulate(u0: Field, config: SimConfig) -> Trajectory:
    """Advance u0 over ceil(T/dt) steps, recording every record_stride-th frame
    (the initial and final frames always included).

    Raises NonFiniteError on NaN/Inf samples and BlowupGuardError when the
    H^1 seminorm exceeds guard_factor times its initial value; both carry the
    hit time and the partial trajectory.
    """
    grid = u0.grid
    n_steps = max(1, math.ceil(config.T / config.dt - 1e-9))
    stride = int(config.record_stride)
    mu_val = float(np.sum(np.abs(u0.values) ** 2) * grid.dx) / grid.L

    kmax = float(np.max(np.abs(grid.k)))
    sup_sq = float(np.max(np.abs(u0.values) ** 2))
    if sup_sq > 0 and config.dt > 0.5 / (kmax * sup_sq):
        warnings.warn(
            f"dt = {config.dt:g} exceeds the advective heuristic "
            f"0.5/(k_max*max|u|^2) = {0.5 / (kmax * sup_sq):g}",
            CflWarning, stacklevel=2)

    nl = _make_nonlinear(grid, config, mu_val)
    symbol = dispersion_symbol(grid)
    if config.integrator == "ifrk4":
        E1 = np.exp(0.5 * config.dt * symbol)
        E2 = E1 * E1
        advance = lambda F: _ifrk4_step(F, config.dt, nl, E1, E2)
    else:
        coeffs = _etdrk4_coeffs(symbol, config.dt)
        advance = lambda F: _etdrk4_step(F, nl, coeffs)

    F = np.fft.fft(u0.values)
    guard0 = _h1dot_from_spectrum(grid, F)
    guard_limit = config.guard_factor * guard0 if guard0 > 0 else math.inf

    frames = [(0.0, u0)]
    for i in range(1, n_steps + 1):
        F = advance(F)
        t = i * config.dt
        if not np.all(np.isfinite(F)):
            raise NonFiniteError(
                f"non-finite sample at t = {t:g} (numerical blowup or instability)",
                t=t, partial=Trajectory(tuple(frames), config))
        with np.errstate(over="ignore"):
            h1 = _h1dot_from_spectrum(grid, F)
        if not math.isfinite(h1):
            raise NonFiniteError(
                f"H^1 seminorm overflowed at t = {t:g} (numerical blowup or instability)",
                t=t, partial=Trajectory(tuple(frames), config))
        if h1 > guard_limit:
            raise BlowupGuardError(
                f"H^1 seminorm {h1:g} exceeded guard {guard_limit:g} at t = {t:g}",
                t=t, h1dot=h1, partial=Trajectory(tuple(frames), config))
        if i % stride == 0 or i == n_steps:
            frames.append((t, Field(grid, np.fft.ifft(F))))
    return Trajectory(tuple(frames), config)


def pde_residual(traj: Trajectory, equation: str, beta: float = 0.75,
                 mu_val: float | None = None,
                 dealias: str = "two_thirds") -> np.ndarray:
    """Per interior frame, the L^2 norm of D_t u - rhs(u), D_t the centered
    difference over the (uniform) frame spacing.

    Requires at least three uniformly spaced frames. Accuracy is limited by
    the centered difference, O(spacing^2), once the trajectory itself is
    accurate.
    """
    frames = traj.frames
    if len(frames) < 3:
        raise ValueError("pde_residual needs at least 3 recorded frames")
    times = np.array([t for t, _ in frames])
    spacings = np.diff(times)
    if np.max(np.abs(spacings - spacings[0])) > 1e-9 * spacings[0]:
        raise ValueError("pde_residual requires uniformly spaced frames")
    if equation not in EQUATION_CHOICES:
        raise ValueError(f"equation must be one of {EQUATION_CHOICES}, got {equation!r}")
    if equation == "dnls2" and mu_val is None:
        f0 = frames[0][1]
        mu_val = float(np.sum(np.abs(f0.values) ** 2) * f0.grid.dx) / f0.grid.L

    grid = traj.grid
    h = float(spacings[0])
    out = np.empty(len(frames) - 2)
    for i in range(1, len(frames) - 1):
        dt_u = (frames[i + 1][1].values - frames[i - 1][1].values) / (2.0 * h)
        if equation == "dnls1":
            r = rhs_dnls1(frames[i][1], dealias)
        else:
            r = rhs_dnls2(frames[i][1], beta, mu_val, dealias)
        diff = dt_u - r.values
        out[i - 1] = math.sqrt(float(np.sum(np.abs(diff) ** 2)) * grid.dx)
    return out
