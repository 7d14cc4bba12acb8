"""Constructors for the initial-data families used in tests and scans."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .functionals import mass
from .grid import Field, TorusGrid

KINDS = ("plane_wave", "multimode", "bump")


@dataclass(frozen=True)
class DataSpec:
    """Deterministic recipe for one initial field.

    plane_wave: amplitude * exp(i k_mode x).
    multimode:  sum of amplitude_j * exp(i (k_j x + theta_j)) over the given
                modes, phases theta_j drawn from the seed.
    bump:       periodic bump amplitude * exp((cos(2 pi (x-center)/L) - 1)
                * (L/(2 pi width))^2), width in length units.

    If target_mass is set, the built field is rescaled to that mass exactly
    (shape preserved). Wavenumber indices must respect the dealiasing band
    |m| <= N//3 of the grid the field is built on.
    """

    kind: str = "plane_wave"
    amplitude: float = 1.0
    mode: int = 1
    modes: tuple[int, ...] = ()
    amplitudes: tuple[float, ...] = ()
    width: float = 0.25
    center: float = 0.0
    target_mass: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.target_mass is not None and not self.target_mass > 0:
            raise ValueError(f"target_mass must be positive, got {self.target_mass}")
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        object.__setattr__(self, "amplitudes", tuple(float(a) for a in self.amplitudes))


def _check_band(modes, grid: TorusGrid):
    band = grid.N // 3
    for m in modes:
        if abs(m) > band:
            raise ValueError(
                f"mode {m} outside the dealiasing band |m| <= {band} of N = {grid.N}")


def build(spec: DataSpec, grid: TorusGrid) -> Field:
    """Build the field described by spec on the given grid; deterministic."""
    x = grid.x
    if spec.kind == "plane_wave":
        _check_band((spec.mode,), grid)
        values = spec.amplitude * np.exp(1j * (2.0 * np.pi * spec.mode / grid.L) * x)
    elif spec.kind == "multimode":
        if not spec.modes:
            raise ValueError("multimode spec needs at least one mode")
        _check_band(spec.modes, grid)
        amps = spec.amplitudes
        if not amps:
            amps = tuple(spec.amplitude for _ in spec.modes)
        if len(amps) != len(spec.modes):
            raise ValueError("amplitudes and modes must have equal length")
        rng = np.random.default_rng(spec.seed)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=len(spec.modes))
        values = np.zeros(grid.N, dtype=np.complex128)
        for m, a, th in zip(spec.modes, amps, phases):
            values += a * np.exp(1j * ((2.0 * np.pi * m / grid.L) * x + th))
    else:
        if not spec.width > 0:
            raise ValueError(f"bump width must be positive, got {spec.width}")
        scale = (grid.L / (2.0 * np.pi * spec.width)) ** 2
        values = spec.amplitude * np.exp(
            (np.cos(2.0 * np.pi * (x - spec.center) / grid.L) - 1.0) * scale)
        values = values.astype(np.complex128)

    f = Field(grid, values)
    if spec.target_mass is not None:
        m = mass(f)
        if m == 0.0:
            raise ValueError("cannot rescale the zero field to a positive mass")
        f = Field(grid, f.values * np.sqrt(spec.target_mass / m))
    return f
