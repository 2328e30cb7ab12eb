"""Vector- and matrix-valued fields stored as stacked component arrays."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .torus import GridMismatchError, ScalarField, TorusGrid


class _StackedField:
    __slots__ = ("grid", "values")
    rank = 0

    def __init__(self, grid: TorusGrid, values):
        values = np.asarray(values, dtype=float)
        if values.ndim != self.rank + grid.ndim or values.shape[self.rank:] != grid.shape:
            raise ValueError(
                f"component array of shape {values.shape} does not match grid {grid.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    def pointwise_norm(self) -> np.ndarray:
        """Euclidean / Hilbert-Schmidt magnitude at every grid point."""
        axes = tuple(range(self.rank))
        return np.sqrt(np.sum(self.values ** 2, axis=axes))

    def max_abs(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def dot(self, other) -> ScalarField:
        """Pointwise dot (Hilbert-Schmidt) product."""
        if type(other) is not type(self):
            raise TypeError("dot product needs fields of the same kind")
        if other.grid != self.grid:
            raise GridMismatchError("grid mismatch in dot product")
        if other.values.shape != self.values.shape:
            raise ValueError("component shapes differ")
        axes = tuple(range(self.rank))
        return ScalarField(self.grid, np.sum(self.values * other.values, axis=axes))

    def inner(self, other) -> float:
        return self.dot(other).mean()

    def _like(self, values):
        return type(self)(self.grid, values)

    def __add__(self, other):
        return self._like(self.values + other.values)

    def __sub__(self, other):
        return self._like(self.values - other.values)

    def __neg__(self):
        return self._like(-self.values)

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise GridMismatchError("grid mismatch in pointwise product")
            return self._like(self.values * other.values)
        return self._like(self.values * float(other))

    __rmul__ = __mul__


class VectorField(_StackedField):
    """``d`` real components on a shared grid; ``values`` has shape ``(d, *grid.shape)``."""

    rank = 1

    @classmethod
    def from_components(cls, components: Sequence[ScalarField]) -> "VectorField":
        components = list(components)
        if not components:
            raise ValueError("a vector field needs at least one component")
        grid = components[0].grid
        for c in components:
            if c.grid != grid:
                raise GridMismatchError("components live on different grids")
        return cls(grid, np.stack([c.values for c in components]))

    @classmethod
    def zeros(cls, grid: TorusGrid, d: int) -> "VectorField":
        return cls(grid, np.zeros((d,) + grid.shape))

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def component(self, j: int) -> ScalarField:
        return ScalarField(self.grid, self.values[j])

    @property
    def components(self) -> list[ScalarField]:
        return [self.component(j) for j in range(self.dim)]

    def __iter__(self) -> Iterable[ScalarField]:
        return iter(self.components)


class MatrixField(_StackedField):
    """``n x m`` real components; ``values`` has shape ``(n, m, *grid.shape)``."""

    rank = 2

    @classmethod
    def from_components(cls, rows: Sequence[Sequence[ScalarField]]) -> "MatrixField":
        grid = rows[0][0].grid
        for row in rows:
            for c in row:
                if c.grid != grid:
                    raise GridMismatchError("components live on different grids")
        return cls(grid, np.stack([np.stack([c.values for c in row]) for row in rows]))

    @classmethod
    def zeros(cls, grid: TorusGrid, n: int, m: int) -> "MatrixField":
        return cls(grid, np.zeros((n, m) + grid.shape))

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def component(self, j: int, k: int) -> ScalarField:
        return ScalarField(self.grid, self.values[j, k])

    @property
    def components(self) -> list[list[ScalarField]]:
        return [[self.component(j, k) for k in range(self.cols)] for j in range(self.rows)]

    def column(self, k: int) -> VectorField:
        """Fixed ``k``: the x-indexed vector field ``(F_jk)_j``."""
        return VectorField(self.grid, self.values[:, k])

    def row(self, j: int) -> VectorField:
        """Fixed ``j``: the y-indexed vector field ``(F_jk)_k``."""
        return VectorField(self.grid, self.values[j])
