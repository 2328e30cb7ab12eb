"""Seeded random fields with power-law spectra."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .torus import ScalarField, TorusGrid


def spectral_support(grid: TorusGrid, mean_zero_blocks: Sequence[str]) -> np.ndarray:
    """Frequencies a generated field may occupy: no Nyquist, no zero block."""
    keep = ~grid.nyquist_mask("full") & ~grid.zero_mask("full")
    for block in mean_zero_blocks:
        keep &= ~grid.zero_mask(block)
    return keep


def random_power_law_field(grid: TorusGrid, rng: np.random.Generator, alpha: float,
                           mean_zero_blocks: Sequence[str] = ("full",)) -> ScalarField:
    """Random-phase field with spectral magnitude proportional to ``|xi|^-alpha``.

    Phases come from the transform of white noise, so conjugate symmetry (and
    a real result) is automatic. The field is scaled to unit RMS.
    """
    if alpha <= 0:
        raise ValueError("spectral decay must be positive")
    noise = np.fft.fftn(rng.standard_normal(grid.shape))
    keep = spectral_support(grid, mean_zero_blocks)
    norm = grid.block_norm("full")
    spec = np.zeros(grid.shape, dtype=complex)
    spec[keep] = noise[keep] / np.abs(noise[keep]) * norm[keep] ** (-alpha)
    values = np.fft.ifftn(spec).real
    rms = np.sqrt(np.mean(values ** 2))
    return ScalarField(grid, values / rms if rms > 0 else values)


def random_fields(grid: TorusGrid, rng: np.random.Generator, alpha: float, count: int,
                  mean_zero_blocks: Sequence[str] = ("full",)) -> list[ScalarField]:
    return [random_power_law_field(grid, rng, alpha, mean_zero_blocks) for _ in range(count)]
