"""Computable norms and surrogates on discrete tori.

All integrals use the cell measure ``1/prod(extents)``, so values approximate
unit-torus integrals and are comparable across resolutions.

H^1-type quantities use the Riesz characterization (``|f|_1 + sum |R_j f|_1``
and its product/mixed variants). BMO-type quantities are suprema of mean
oscillation over dyadic-sized cubes at every periodic position.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .fields import MatrixField, VectorField
from .multipliers import riesz_symbol
from .torus import ScalarField, TorusGrid

AnyField = Union[ScalarField, VectorField, MatrixField]


@dataclass(frozen=True)
class NormReport:
    name: str
    value: float
    grid: tuple
    p: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"norm value must be nonnegative, got {self.value}")

    def to_json_line(self) -> str:
        return json.dumps({"name": self.name, "value": self.value,
                           "grid": list(self.grid), "p": self.p})

    @classmethod
    def from_json_line(cls, line: str) -> "NormReport":
        d = json.loads(line)
        return cls(d["name"], d["value"], tuple(d["grid"]), d.get("p"))


def write_norm_reports(path, reports: Iterable[NormReport]) -> None:
    with open(path, "w") as fh:
        for r in reports:
            fh.write(r.to_json_line() + "\n")


def read_norm_reports(path) -> list[NormReport]:
    with open(path) as fh:
        return [NormReport.from_json_line(line) for line in fh if line.strip()]


def _magnitude(F) -> np.ndarray:
    if isinstance(F, ScalarField):
        return np.abs(F.values)
    # vector, matrix and form fields all expose their pointwise magnitude
    return F.pointwise_norm()


def lp_norm(F: AnyField, p: float = 2.0) -> float:
    """``(mean |F|^p)^(1/p)`` with the Euclidean/Hilbert-Schmidt pointwise norm.

    Forms use the Euclidean norm of their basis coefficients.
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    mag = _magnitude(F)
    if math.isinf(p):
        return float(mag.max())
    scale = float(mag.max())
    if scale == 0.0:
        return 0.0
    # factor out the maximum so large p does not overflow
    return scale * float(np.mean((mag / scale) ** p)) ** (1.0 / p)


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


# --- BMO surrogates ---------------------------------------------------------

#: cells per chunk when scanning window positions
_CHUNK_CELLS = 1 << 22


def _require_power_of_two(extents: Sequence[int]) -> None:
    for N in extents:
        if N & (N - 1):
            raise ValueError(f"dyadic BMO surrogates need power-of-two extents, got {N}")


def _cube_sides(extents: Sequence[int]) -> list[int]:
    top = min(extents)
    return [1 << s for s in range(int(math.log2(top)) + 1)]


def _max_oscillation(values: np.ndarray, window: Sequence[int]) -> float:
    """max over all periodic positions of the mean |b - mean_Q b| over a box.

    Along axes where the box spans the whole period every position sees the
    same cells, so only one position is evaluated there. Positions along the
    first axis are processed in chunks to bound memory.
    """
    pad = [(0, w - 1) if w < N else (0, 0) for w, N in zip(window, values.shape)]
    wrapped = np.pad(values, pad, mode="wrap")
    win = sliding_window_view(wrapped, tuple(window))
    axes = tuple(range(values.ndim, 2 * values.ndim))
    per_row = max(1, int(np.prod(win.shape[1:])))
    step = max(1, _CHUNK_CELLS // per_row)
    best = 0.0
    for start in range(0, win.shape[0], step):
        block = win[start:start + step]
        means = block.mean(axis=axes, keepdims=True)
        best = max(best, float(np.abs(block - means).mean(axis=axes).max()))
    return best


def _bmo_values(values: np.ndarray) -> float:
    best = 0.0
    for side in _cube_sides(values.shape):
        if side == 1:
            continue  # a single cell has no oscillation
        best = max(best, _max_oscillation(values, (side,) * values.ndim))
    return best


def bmo_norm_1p(b: ScalarField) -> float:
    """Supremum of mean oscillation over cubes of side ``2^s`` at every position."""
    if b.grid.two_parameter:
        raise ValueError("bmo_norm_1p needs a one-parameter grid")
    _require_power_of_two(b.grid.shape)
    return _bmo_values(b.values)


def _slice_bmo(values: np.ndarray, keep_axes: tuple) -> float:
    """max over frozen ``keep_axes`` of the BMO of each remaining slice."""
    moved = np.moveaxis(values, keep_axes, tuple(range(len(keep_axes))))
    frozen_shape = moved.shape[:len(keep_axes)]
    best = 0.0
    for idx in np.ndindex(*frozen_shape):
        best = max(best, _bmo_values(moved[idx]))
    return best


def little_bmo_norm(b: ScalarField) -> float:
    """max of the BMO norms of all x-slices and all y-slices."""
    grid = b.grid
    if not grid.two_parameter:
        raise ValueError("little_bmo_norm needs a two-parameter grid")
    _require_power_of_two(grid.shape)
    xa, ya = grid.block_axes("x"), grid.block_axes("y")
    return max(_slice_bmo(b.values, ya), _slice_bmo(b.values, xa))


def rect_bmo_norm(b: ScalarField) -> float:
    """Supremum of mean oscillation over rectangles ``Q1 x Q2`` at every position.

    A lower-bound surrogate only: product BMO needs Carleson-box testing over
    arbitrary open sets and is strictly larger than this rectangle quantity.
    """
    grid = b.grid
    if not grid.two_parameter:
        raise ValueError("rect_bmo_norm needs a two-parameter grid")
    _require_power_of_two(grid.shape)
    best = 0.0
    for sx, sy in product(_cube_sides(grid.dims_x), _cube_sides(grid.dims_y)):
        if sx == 1 and sy == 1:
            continue
        window = (sx,) * grid.n + (sy,) * grid.m
        best = max(best, _max_oscillation(b.values, window))
    return best


# --- H^1 surrogates ---------------------------------------------------------

def _l1(values: np.ndarray, axes=None):
    return np.mean(np.abs(values), axis=axes)


def _riesz_family_l1(values: np.ndarray, grid: TorusGrid, block: str, axes=None):
    """sum_j |R_j f|_1 for the Riesz transforms of ``block``."""
    spec = np.fft.fftn(values)
    total = 0.0
    for j in range(grid.block_dim(block)):
        rj = np.fft.ifftn(riesz_symbol(grid, block, j) * spec).real
        total = total + _l1(rj, axes)
    return total


def h1_norm_1p(f: ScalarField) -> float:
    """``|f|_1 + sum_j |R_j f|_1`` on a one-parameter grid."""
    if f.grid.two_parameter:
        raise ValueError("h1_norm_1p needs a one-parameter grid")
    return float(_l1(f.values) + _riesz_family_l1(f.values, f.grid, "full"))


def h1_norm_product(f: ScalarField) -> float:
    """Sum of the L^1 norms of f, R_j^x f, R_k^y f and R_j^x R_k^y f."""
    grid = f.grid
    if not grid.two_parameter:
        raise ValueError("h1_norm_product needs a two-parameter grid")
    spec = np.fft.fftn(f.values)
    rx = [riesz_symbol(grid, "x", j) for j in range(grid.n)]
    ry = [riesz_symbol(grid, "y", k) for k in range(grid.m)]
    symbols = [1.0] + rx + ry + [sx * sy for sx in rx for sy in ry]
    total = 0.0
    for s in symbols:
        total += float(_l1(np.fft.ifftn(s * spec).real))
    return total


def mixed_h1_norm(f: ScalarField, frozen: str = "x") -> float:
    """Average over the ``frozen`` block of the H^1 norm of each slice.

    ``frozen="x"`` realizes ``int ||f(x, .)||_{H^1} dx``; the slice H^1 norm is
    taken in the other block.
    """
    grid = f.grid
    if not grid.two_parameter:
        raise ValueError("mixed_h1_norm needs a two-parameter grid")
    if frozen not in ("x", "y"):
        raise ValueError("frozen must be 'x' or 'y'")
    active = "y" if frozen == "x" else "x"
    axes = grid.block_axes(active)
    # the Riesz transforms of the active block act slice by slice, so the
    # slice norms can be evaluated on the whole grid at once
    per_slice = _l1(f.values, axes) + _riesz_family_l1(f.values, grid, active, axes)
    return float(np.mean(per_slice))


def duality_h1_estimate(f: ScalarField, family: Sequence) -> float:
    """``max_b |<f, b>| / ||b||`` over a tested family of BMO-type symbols.

    ``family`` holds ``(b, norm)`` pairs (or objects with ``.b``/``.norm``).
    A lower-bound witness for the H^1-type norm of ``f``.
    """
    family = list(family)
    if not family:
        raise ValueError("duality estimate needs a non-empty family")
    best = 0.0
    for item in family:
        b, norm = (item.b, item.norm) if hasattr(item, "norm") else item
        b = getattr(b, "b", b)
        if norm <= 0:
            continue
        best = max(best, abs(f.inner(b)) / norm)
    return best


def upsample(f: ScalarField, factor: int = 2) -> ScalarField:
    """Band-limited interpolation by zero-padding the spectrum, axis by axis.

    A Nyquist mode is split evenly between ``+N/2`` and ``-N/2`` so the
    refined field stays real.
    """
    grid = f.grid
    new = TorusGrid(tuple(d * factor for d in grid.dims_x),
                    None if grid.dims_y is None else tuple(d * factor for d in grid.dims_y))
    spec = np.fft.fftn(f.values)
    for axis, N in enumerate(grid.shape):
        big = N * factor
        shape = list(spec.shape)
        shape[axis] = big
        out = np.zeros(shape, dtype=complex)
        take = lambda sl: spec[(slice(None),) * axis + (sl,)]  # noqa: E731
        put = lambda sl: (slice(None),) * axis + (sl,)  # noqa: E731
        half = N // 2
        out[put(slice(0, half))] = take(slice(0, half))
        out[put(slice(big - half + 1, big))] = take(slice(half + 1, N))
        out[put(half)] = 0.5 * take(half)
        out[put(big - half)] = 0.5 * take(half)
        spec = out
    spec *= new.size / grid.size
    return ScalarField(new, np.fft.ifftn(spec).real)
