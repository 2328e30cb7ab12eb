"""Riesz transforms and spectral derivatives as diagonal Fourier multipliers.

Riesz symbols are ``-i xi_j / |xi_block|`` built from the centered integer
frequencies of one parameter block ('x', 'y') or of all axes ('full').
They vanish where the block frequency is zero and wherever any axis of the
block sits at Nyquist, so every Riesz vector is either a unit vector or
zero. Derivative symbols are ``i (2 pi / N) xi`` with the Nyquist mode of
that axis zeroed. Axes are 0-based within their block.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .fields import MatrixField, VectorField
from .torus import ScalarField, TorusGrid, real_part_checked

Field = Union[ScalarField, VectorField, MatrixField]

_KINDS = ("riesz_full", "riesz_x", "riesz_y",
          "derivative_full", "derivative_x", "derivative_y")


def _check_axis(grid: TorusGrid, block: str, j: int) -> None:
    d = grid.block_dim(block)
    if not 0 <= j < d:
        raise IndexError(f"axis {j} out of range for block {block!r} of dimension {d}")


def regular_mask(grid: TorusGrid, block: str) -> np.ndarray:
    """Frequencies where the Riesz vector of ``block`` is a unit vector."""
    return ~(grid.zero_mask(block) | grid.nyquist_mask(block))


@lru_cache(maxsize=256)
def riesz_symbol(grid: TorusGrid, block: str, j: int) -> np.ndarray:
    _check_axis(grid, block, j)
    axis = grid.block_axes(block)[j]
    norm = grid.block_norm(block)
    keep = regular_mask(grid, block)
    sym = np.zeros(grid.shape, dtype=complex)
    xi = np.broadcast_to(grid.frequencies[axis], grid.shape)
    sym[keep] = -1j * xi[keep] / norm[keep]
    sym.setflags(write=False)
    return sym


@lru_cache(maxsize=256)
def derivative_symbol(grid: TorusGrid, block: str, j: int) -> np.ndarray:
    _check_axis(grid, block, j)
    axis = grid.block_axes(block)[j]
    N = grid.shape[axis]
    xi = grid.frequencies[axis]
    sym = np.where(xi == -N // 2, 0.0, 1j * (2 * np.pi / N) * xi)
    sym = np.broadcast_to(sym, grid.shape).copy()
    sym.setflags(write=False)
    return sym


def apply_multiplier(symbol: np.ndarray, values: np.ndarray, ndim: int) -> np.ndarray:
    """Multiply the spectrum over the trailing ``ndim`` axes of ``values`` by ``symbol``."""
    axes = tuple(range(values.ndim - ndim, values.ndim))
    spec = np.fft.fftn(values, axes=axes) * symbol
    return real_part_checked(np.fft.ifftn(spec, axes=axes), float(np.abs(values).max()))


def _apply(symbol: np.ndarray, f: Field) -> Field:
    out = apply_multiplier(symbol, f.values, f.grid.ndim)
    return type(f)(f.grid, out)


@dataclass(frozen=True)
class MultiplierSymbol:
    """One of the diagonal multipliers, e.g. ``MultiplierSymbol("riesz_x", 0)``."""

    kind: str
    axis: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown multiplier kind {self.kind!r}")

    @property
    def block(self) -> str:
        return self.kind.split("_", 1)[1]

    def symbol(self, grid: TorusGrid) -> np.ndarray:
        if self.block != "full" and not grid.two_parameter:
            raise ValueError(f"{self.kind} needs a two-parameter grid")
        if self.kind.startswith("riesz"):
            return riesz_symbol(grid, self.block, self.axis)
        return derivative_symbol(grid, self.block, self.axis)

    def __call__(self, f: Field) -> Field:
        return _apply(self.symbol(f.grid), f)


def riesz(j: int, f: ScalarField) -> ScalarField:
    """Riesz transform in all variables of a one-parameter grid."""
    if f.grid.two_parameter:
        raise ValueError("riesz() acts on one-parameter grids; use riesz_x/riesz_y")
    return _apply(riesz_symbol(f.grid, "full", j), f)


def riesz_x(j: int, f: ScalarField) -> ScalarField:
    if not f.grid.two_parameter:
        raise ValueError("riesz_x needs a two-parameter grid")
    return _apply(riesz_symbol(f.grid, "x", j), f)


def riesz_y(k: int, f: ScalarField) -> ScalarField:
    if not f.grid.two_parameter:
        raise ValueError("riesz_y needs a two-parameter grid")
    return _apply(riesz_symbol(f.grid, "y", k), f)


def riesz_block(block: str, j: int, f: Field) -> Field:
    """Riesz transform of any field in the given block ('full' on one-parameter grids)."""
    if block == "x" and not f.grid.two_parameter:
        block = "full"
    return _apply(riesz_symbol(f.grid, block, j), f)


def partial_derivative(axis, f: Field) -> Field:
    """Spectral partial derivative.

    ``axis`` is either an integer (an axis of the whole grid) or a pair
    ``(block, j)`` such as ``("y", 1)``.
    """
    block, j = ("full", axis) if isinstance(axis, (int, np.integer)) else axis
    if block == "x" and not f.grid.two_parameter:
        block = "full"
    return _apply(derivative_symbol(f.grid, block, int(j)), f)


def apply_to_vector(symbol: MultiplierSymbol, F: VectorField) -> VectorField:
    return symbol(F)


def apply_to_matrix(symbol: MultiplierSymbol, F: MatrixField) -> MatrixField:
    return symbol(F)
