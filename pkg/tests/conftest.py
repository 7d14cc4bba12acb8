import numpy as np
import pytest

from dnlslab import Field, Spectrum, TorusGrid


@pytest.fixture
def grid2pi():
    return TorusGrid(2 * np.pi, 128)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_band_field(grid: TorusGrid, rng, band: int | None = None,
                      scale: float = 1.0) -> Field:
    """Random smooth field with modes inside the dealiasing band and an
    exponentially decaying spectral envelope."""
    if band is None:
        band = grid.N // 4
    band = min(band, grid.N // 3)
    c = np.zeros(grid.N, dtype=np.complex128)
    width = max(2.0, band / 3.0)
    for m in range(-band, band + 1):
        z = rng.standard_normal() + 1j * rng.standard_normal()
        c[m % grid.N] = scale * z * np.exp(-abs(m) / width)
    return Spectrum(grid, c).field()


def plane_wave(grid: TorusGrid, A: float = 1.0, m: int = 1) -> Field:
    return Field(grid, A * np.exp(1j * (2 * np.pi * m / grid.L) * grid.x))


def l2_dist(a: Field, b: Field) -> float:
    return float(np.sqrt(np.sum(np.abs(a.values - b.values) ** 2) * a.grid.dx))
