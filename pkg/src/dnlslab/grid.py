"""Spectral grid on the circle: differentiation, antidifferentiation, quadrature, norms, shifts.

All fields live on an equispaced grid of N nodes over [0, L) and are represented
by their samples; spectral operations go through the FFT with coefficients
normalized so that f(x_j) = sum_m c_m exp(i k_m x_j), k_m = 2*pi*m/L,
m in [-N/2, N/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_NODES = 8


class TorusGrid:
    """Discretized circle of circumference L with N equispaced nodes.

    Attributes:
        L: spatial period (> 0).
        N: number of nodes (even, >= 8; powers of two recommended).
        x: node positions x_j = j*L/N, strictly increasing in [0, L).
        modes: integer mode numbers in FFT order (0..N/2-1, -N/2..-1).
        k: wavenumbers 2*pi*modes/L, FFT order.

    Instances are immutable and safe to share across concurrent tasks.
    """

    def __init__(self, L: float, N: int):
        if not np.isfinite(L) or L <= 0:
            raise ValueError(f"period L must be positive and finite, got {L}")
        N = int(N)
        if N % 2 != 0:
            raise ValueError(f"node count N must be even, got {N}")
        if N < MIN_NODES:
            raise ValueError(f"node count N must be >= {MIN_NODES}, got {N}")
        self.L = float(L)
        self.N = N
        self.x = np.arange(N) * (self.L / N)
        self.modes = np.rint(np.fft.fftfreq(N) * N).astype(int)
        self.k = (2.0 * np.pi / self.L) * self.modes
        # Odd-order derivative multiplier: Nyquist mode (m = -N/2) is unpaired,
        # so its multiplier is set to 0.
        ik = 1j * self.k
        ik[N // 2] = 0.0
        self._ik = ik
        self._dealias_keep = np.abs(self.modes) <= N // 3
        for arr in (self.x, self.modes, self.k, self._ik, self._dealias_keep):
            arr.flags.writeable = False
        self._refined: TorusGrid | None = None

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def dealias_keep(self) -> np.ndarray:
        """Boolean mask of modes kept by the 2/3 rule (|m| <= N//3)."""
        return self._dealias_keep

    @property
    def refined(self) -> "TorusGrid":
        """The 2x refinement of this grid (same L, 2N nodes), cached."""
        if self._refined is None:
            self._refined = TorusGrid(self.L, 2 * self.N)
        return self._refined

    def refine2(self, values: np.ndarray) -> np.ndarray:
        """Resample onto the 2x refined grid by zero padding the spectrum.

        Exact for the trigonometric interpolant with modes in [-N/2, N/2).
        """
        N = self.N
        F = np.fft.fft(values)
        F2 = np.zeros(2 * N, dtype=np.complex128)
        F2[: N // 2] = F[: N // 2]
        F2[2 * N - N // 2 :] = F[N // 2 :]
        return 2.0 * np.fft.ifft(F2)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TorusGrid) and self.L == other.L and self.N == other.N

    def __hash__(self) -> int:
        return hash((TorusGrid, self.L, self.N))

    def __repr__(self) -> str:
        return f"TorusGrid(L={self.L!r}, N={self.N})"


class Field:
    """One complex-valued function sampled on a TorusGrid at a fixed time.

    Samples must all be finite; the array is stored read-only.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: TorusGrid, values: np.ndarray):
        v = np.asarray(values, dtype=np.complex128)
        if v.shape != (grid.N,):
            raise ValueError(f"expected {grid.N} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field samples must be finite (no NaN/Inf)")
        v = v.copy()
        v.flags.writeable = False
        self.grid = grid
        self.values = v

    def spectrum(self) -> "Spectrum":
        return Spectrum(self.grid, np.fft.fft(self.values) / self.grid.N)

    def __repr__(self) -> str:
        return f"Field(grid={self.grid!r}, max|f|={np.max(np.abs(self.values)):.3g})"


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients of a Field, FFT mode order (see TorusGrid.modes).

    Normalization: f(x_j) = sum_m coefficients[m] * exp(i k_m x_j).
    """

    grid: TorusGrid
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.shape != (self.grid.N,):
            raise ValueError(f"expected {self.grid.N} coefficients, got shape {c.shape}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    def field(self) -> Field:
        return Field(self.grid, np.fft.ifft(self.coefficients * self.grid.N))


def deriv(f: Field) -> Field:
    """Spectral derivative d/dx; the Nyquist mode is mapped to zero."""
    F = np.fft.fft(f.values)
    return Field(f.grid, np.fft.ifft(f.grid._ik * F))


def antideriv_meanzero(g: Field) -> Field:
    """Mean-zero antiderivative I of a real-valued field.

    Satisfies dI/dx = g - mean(g) and mean(I) = 0, via the coefficient map
    c_m -> c_m/(i k_m) for m != 0 and c_0 -> 0. Rejects input whose imaginary
    part exceeds 1e-12 of its magnitude; the result is real by construction
    (sub-tolerance imaginary noise is discarded).
    """
    v = g.values
    scale = float(np.max(np.abs(v))) if v.size else 0.0
    if float(np.max(np.abs(v.imag), initial=0.0)) > 1e-12 * scale:
        raise ValueError("antideriv_meanzero expects a real-valued field")
    grid = g.grid
    mult = np.zeros(grid.N, dtype=np.complex128)
    mult[1:] = 1.0 / (1j * grid.k[1:])
    F = np.fft.fft(v.real)
    I = np.fft.ifft(F * mult).real
    return Field(grid, I.astype(np.complex128))


def integrate(f: Field) -> complex:
    """Rectangle-rule quadrature (L/N) * sum_j f(x_j); spectrally exact for
    band-limited integrands."""
    return complex(np.sum(f.values)) * (f.grid.L / f.grid.N)


def lp_norm(f: Field, p: int) -> float:
    """L^p norm for p in {2, 4, 6}.

    For p in {4, 6} the integrand |f|^p exceeds the band limit of the stored
    samples, so it is evaluated on the 2x zero-padded refinement before
    rectangle quadrature; p = 2 is already exact on the native grid.
    """
    grid = f.grid
    if p == 2:
        return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * grid.dx))
    if p in (4, 6):
        v2 = grid.refine2(f.values)
        total = np.sum(np.abs(v2) ** p) * (grid.L / (2 * grid.N))
        return float(total ** (1.0 / p))
    raise ValueError(f"unsupported p = {p}, expected one of 2, 4, 6")


def translate(f: Field, s: float) -> Field:
    """Shifted field g(x) = f(x - s), realized by spectral phase factors.

    Exact for band-limited f; s may be any real number.
    """
    F = np.fft.fft(f.values)
    return Field(f.grid, np.fft.ifft(F * np.exp(-1j * f.grid.k * s)))
