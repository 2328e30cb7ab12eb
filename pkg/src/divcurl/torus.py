"""Discrete tori, real fields on them, and the Fourier transform contract.

A :class:`TorusGrid` is either one-parameter, ``(Z_N1 x ... x Z_Nn)``, or
two-parameter, where a second block of ``m`` axes (the "y" variables) is
appended after the ``n`` x-axes. Arrays are always laid out row-major with
the x-axes first.

The forward transform is unnormalized, the inverse carries ``1/prod(extents)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

#: imaginary residue (relative to field magnitude) silently dropped by idft
IMAG_DISCARD_TOL = 1e-10
#: imaginary residue above which idft refuses to return a real field
IMAG_ERROR_TOL = 1e-8


class GridMismatchError(ValueError):
    """Operands live on different grids."""


class RealnessError(ValueError):
    """An inverse transform produced a visibly complex field."""


@dataclass(frozen=True)
class TorusGrid:
    dims_x: tuple[int, ...]
    dims_y: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        dims_x = tuple(int(d) for d in self.dims_x)
        dims_y = None if self.dims_y is None else tuple(int(d) for d in self.dims_y)
        object.__setattr__(self, "dims_x", dims_x)
        object.__setattr__(self, "dims_y", dims_y)
        if len(dims_x) < 1:
            raise ValueError("a torus grid needs at least one x-axis")
        if dims_y is not None and len(dims_y) < 1:
            raise ValueError("dims_y must be None or non-empty")
        for d in self.shape:
            if d < 4 or d % 2:
                raise ValueError(f"grid extents must be even and >= 4, got {d}")

    @classmethod
    def cube(cls, n: int, N: int) -> "TorusGrid":
        return cls((N,) * n)

    @classmethod
    def product(cls, n: int, m: int, N: int, M: Optional[int] = None) -> "TorusGrid":
        return cls((N,) * n, (N if M is None else M,) * m)

    @property
    def n(self) -> int:
        return len(self.dims_x)

    @property
    def m(self) -> int:
        return 0 if self.dims_y is None else len(self.dims_y)

    @property
    def two_parameter(self) -> bool:
        return self.dims_y is not None

    @property
    def shape(self) -> tuple[int, ...]:
        return self.dims_x + (self.dims_y or ())

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def square(self) -> bool:
        return self.two_parameter and self.n == self.m

    def block_axes(self, block: str) -> tuple[int, ...]:
        """Array axes of ``block`` ('x', 'y' or 'full')."""
        if block == "full":
            return tuple(range(self.ndim))
        if block == "x":
            return tuple(range(self.n))
        if block == "y":
            if not self.two_parameter:
                raise ValueError("one-parameter grid has no y block")
            return tuple(range(self.n, self.ndim))
        raise ValueError(f"unknown parameter block {block!r}")

    def block_dim(self, block: str) -> int:
        return len(self.block_axes(block))

    @cached_property
    def frequencies(self) -> tuple[np.ndarray, ...]:
        """Centered integer frequencies, one broadcastable array per axis."""
        out = []
        for axis, N in enumerate(self.shape):
            k = np.fft.fftfreq(N, 1.0 / N).round().astype(np.int64)
            view = [1] * self.ndim
            view[axis] = N
            out.append(k.reshape(view))
        return tuple(out)

    def nyquist_mask(self, block: str = "full") -> np.ndarray:
        """True where some axis of ``block`` sits at its Nyquist representative."""
        mask = np.zeros(self.shape, dtype=bool)
        for a in self.block_axes(block):
            mask = mask | (self.frequencies[a] == -self.shape[a] // 2)
        return mask

    def zero_mask(self, block: str = "full") -> np.ndarray:
        """True where the whole frequency block of ``block`` vanishes."""
        mask = np.ones(self.shape, dtype=bool)
        for a in self.block_axes(block):
            mask = mask & (self.frequencies[a] == 0)
        return mask

    def block_norm(self, block: str = "full") -> np.ndarray:
        """|xi_block| in unscaled integer units."""
        sq = np.zeros(self.shape)
        for a in self.block_axes(block):
            sq = sq + self.frequencies[a].astype(float) ** 2
        return np.sqrt(sq)

    def coordinates(self, axis: int) -> np.ndarray:
        """Integer grid coordinate along ``axis``, broadcastable to the grid."""
        view = [1] * self.ndim
        view[axis] = self.shape[axis]
        return np.arange(self.shape[axis]).reshape(view)

    def to_json(self) -> dict:
        return {"dims_x": list(self.dims_x),
                "dims_y": None if self.dims_y is None else list(self.dims_y)}


def _check_same_grid(a: TorusGrid, b: TorusGrid) -> None:
    if a != b:
        raise GridMismatchError(f"grid mismatch: {a} vs {b}")


class ScalarField:
    """Real samples of a function on a :class:`TorusGrid`.

    Supports the pointwise arithmetic the operator identities are written in
    (``+``, ``-``, ``*`` with fields or scalars).
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: TorusGrid, values):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            if values.size != grid.size:
                raise ValueError(
                    f"{values.size} values do not fill a grid of shape {grid.shape}")
            values = values.reshape(grid.shape)
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @classmethod
    def zeros(cls, grid: TorusGrid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: TorusGrid, c: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(c)))

    @classmethod
    def from_function(cls, grid: TorusGrid, func) -> "ScalarField":
        """Sample ``func(*coords)`` where coords are integer grid coordinates."""
        coords = [grid.coordinates(a) for a in range(grid.ndim)]
        return cls(grid, np.broadcast_to(func(*coords), grid.shape).astype(float))

    def mean(self) -> float:
        return float(self.values.mean())

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())

    def inner(self, other: "ScalarField") -> float:
        """Grid inner product with cell measure 1/prod(extents)."""
        _check_same_grid(self.grid, other.grid)
        return float(np.mean(self.values * other.values))

    def _coerce(self, other):
        if isinstance(other, ScalarField):
            _check_same_grid(self.grid, other.grid)
            return other.values
        return other

    def __add__(self, other):
        return ScalarField(self.grid, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(self.grid, self.values - self._coerce(other))

    def __rsub__(self, other):
        return ScalarField(self.grid, self._coerce(other) - self.values)

    def __mul__(self, other):
        if hasattr(other, "grid") and not isinstance(other, ScalarField):
            return NotImplemented  # let vector/matrix/form fields broadcast
        return ScalarField(self.grid, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.grid, -self.values)

    def __repr__(self):
        return f"ScalarField(shape={self.grid.shape}, max_abs={self.max_abs():.3g})"


@dataclass(frozen=True)
class Spectrum:
    grid: TorusGrid
    coeffs: np.ndarray

    def symmetry_defect(self) -> float:
        """max |c(-xi) - conj(c(xi))|; zero for the spectrum of a real field."""
        flipped = self.coeffs
        for axis in range(self.grid.ndim):
            flipped = np.roll(np.flip(flipped, axis=axis), 1, axis=axis)
        return float(np.abs(flipped - np.conj(self.coeffs)).max())


def dft(f: ScalarField) -> Spectrum:
    return Spectrum(f.grid, np.fft.fftn(f.values))


def real_part_checked(values: np.ndarray, scale: float = 0.0) -> np.ndarray:
    """Drop the imaginary part of an inverse transform, refusing large residue.

    The residue is measured against the larger of the result's magnitude and
    ``scale`` (typically the input's magnitude), so results that cancel to
    rounding level are not mistaken for asymmetric multipliers.
    """
    scale = max(float(np.abs(values).max()) if values.size else 0.0, scale)
    if scale > 0.0:
        residue = float(np.abs(values.imag).max()) / scale
        if residue > IMAG_ERROR_TOL:
            raise RealnessError(
                f"inverse transform has imaginary residue {residue:.3e} "
                "(asymmetric multiplier?)")
    return np.ascontiguousarray(values.real)


def idft(s: Spectrum) -> ScalarField:
    return ScalarField(s.grid, real_part_checked(np.fft.ifftn(s.coeffs)))


def frequency(index: Sequence[int], grid: TorusGrid) -> tuple[int, ...]:
    """Centered representative of a multi-index, in ``[-N/2, N/2)`` per axis."""
    index = tuple(int(i) for i in index)
    if len(index) != grid.ndim:
        raise IndexError(f"index of length {len(index)} on a {grid.ndim}-axis grid")
    out = []
    for k, N in zip(index, grid.shape):
        if not 0 <= k < N:
            raise IndexError(f"index {k} outside [0, {N})")
        out.append(k if k < N // 2 else k - N)
    return tuple(out)
