"""Exterior algebra with field coefficients on discrete tori.

Multi-indices are strictly increasing tuples of 0-based axes. A
:class:`Form` stores only its nonzero basis coefficients; a
:class:`BiGradedForm` carries separate x- and y-index sets, and its wedge
multiplies the x-merge sign by the y-merge sign with no cross-block sign.
With that convention ``d_x`` and ``d_y`` commute.
"""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .leray import joint_frames
from .multipliers import derivative_symbol
from .torus import GridMismatchError, ScalarField, TorusGrid, real_part_checked

MultiIndex = tuple


def basis(dim: int, degree: int) -> list[MultiIndex]:
    """Increasing multi-indices of length ``degree`` in ``range(dim)``."""
    return list(combinations(range(dim), degree))


def merge_sign(I: Sequence[int], J: Sequence[int]) -> tuple[int, Optional[MultiIndex]]:
    """Sign and sorted index of ``dx_I ^ dx_J``; ``(0, None)`` if they overlap."""
    if set(I) & set(J):
        return 0, None
    cat = list(I) + list(J)
    inversions = sum(1 for a in range(len(cat)) for b in range(a + 1, len(cat)) if cat[a] > cat[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(cat))


def _check_index(I, degree: int, dim: int) -> MultiIndex:
    I = tuple(int(i) for i in I)
    if len(I) != degree:
        raise ValueError(f"index {I} does not have length {degree}")
    if any(a >= b for a, b in zip(I, I[1:])) or any(not 0 <= i < dim for i in I):
        raise ValueError(f"index {I} is not increasing within range({dim})")
    return I


def _accumulate(acc: dict, key, value: ScalarField) -> None:
    acc[key] = acc[key] + value if key in acc else value


def _coeff_norm(grid: TorusGrid, coeffs) -> np.ndarray:
    sq = np.zeros(grid.shape)
    for f in coeffs:
        sq += f.values ** 2
    return np.sqrt(sq)


class Form:
    """A degree-``l`` form ``sum_I f_I dx_I`` over ``dim`` x-type axes.

    On a two-parameter grid the coefficients live on the whole product grid
    while the indices refer to the x block only.
    """

    def __init__(self, grid: TorusGrid, degree: int,
                 coeffs: Optional[Mapping[MultiIndex, ScalarField]] = None,
                 dim: Optional[int] = None):
        self.grid = grid
        self.dim = grid.n if dim is None else dim
        if not 0 <= degree <= self.dim:
            raise ValueError(f"degree {degree} outside [0, {self.dim}]")
        self.degree = degree
        self.coeffs: dict[MultiIndex, ScalarField] = {}
        for I, f in (coeffs or {}).items():
            I = _check_index(I, degree, self.dim)
            if f.grid != grid:
                raise GridMismatchError("coefficient grid differs from form grid")
            self.coeffs[I] = f

    def coefficient(self, I) -> ScalarField:
        return self.coeffs.get(tuple(I), ScalarField.zeros(self.grid))

    def max_abs(self) -> float:
        return max((f.max_abs() for f in self.coeffs.values()), default=0.0)

    def pointwise_norm(self) -> np.ndarray:
        """Euclidean norm of the coefficient vector in the ``dx_I`` basis."""
        return _coeff_norm(self.grid, self.coeffs.values())

    def _combine(self, other: "Form", sign: float) -> "Form":
        if other.grid != self.grid or other.degree != self.degree or other.dim != self.dim:
            raise ValueError("forms must share grid, degree and dimension")
        out = dict(self.coeffs)
        for I, f in other.coeffs.items():
            _accumulate(out, I, sign * f)
        return Form(self.grid, self.degree, out, self.dim)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return Form(self.grid, self.degree, {I: -f for I, f in self.coeffs.items()}, self.dim)

    def __mul__(self, c):
        return Form(self.grid, self.degree, {I: f * c for I, f in self.coeffs.items()}, self.dim)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Form(degree={self.degree}, dim={self.dim}, terms={sorted(self.coeffs)})"


class BiGradedForm:
    """``sum f_{I,J} dx_I dy_J`` of bidegree ``(r, s)`` on a two-parameter grid."""

    def __init__(self, grid: TorusGrid, bidegree: tuple[int, int],
                 coeffs: Optional[Mapping[tuple[MultiIndex, MultiIndex], ScalarField]] = None):
        if not grid.two_parameter:
            raise ValueError("bi-graded forms live on two-parameter grids")
        r, s = bidegree
        if not (0 <= r <= grid.n and 0 <= s <= grid.m):
            raise ValueError(f"bidegree {bidegree} outside [0,{grid.n}] x [0,{grid.m}]")
        self.grid = grid
        self.bidegree = (r, s)
        self.coeffs: dict = {}
        for (I, J), f in (coeffs or {}).items():
            key = (_check_index(I, r, grid.n), _check_index(J, s, grid.m))
            if f.grid != grid:
                raise GridMismatchError("coefficient grid differs from form grid")
            self.coeffs[key] = f

    def coefficient(self, I, J) -> ScalarField:
        return self.coeffs.get((tuple(I), tuple(J)), ScalarField.zeros(self.grid))

    def max_abs(self) -> float:
        return max((f.max_abs() for f in self.coeffs.values()), default=0.0)

    def pointwise_norm(self) -> np.ndarray:
        return _coeff_norm(self.grid, self.coeffs.values())

    def _combine(self, other: "BiGradedForm", sign: float) -> "BiGradedForm":
        if other.grid != self.grid or other.bidegree != self.bidegree:
            raise ValueError("forms must share grid and bidegree")
        out = dict(self.coeffs)
        for key, f in other.coeffs.items():
            _accumulate(out, key, sign * f)
        return BiGradedForm(self.grid, self.bidegree, out)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return BiGradedForm(self.grid, self.bidegree, {k: -f for k, f in self.coeffs.items()})

    def __mul__(self, c):
        return BiGradedForm(self.grid, self.bidegree, {k: f * c for k, f in self.coeffs.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"BiGradedForm(bidegree={self.bidegree}, terms={sorted(self.coeffs)})"


AnyForm = Union[Form, BiGradedForm]


def wedge(u: Form, v: Form) -> Form:
    if u.grid != v.grid or u.dim != v.dim:
        raise GridMismatchError("wedge of forms on different grids")
    if u.degree + v.degree > u.dim:
        raise ValueError(f"degrees {u.degree} + {v.degree} exceed dimension {u.dim}")
    out: dict = {}
    for I, f in u.coeffs.items():
        for J, g in v.coeffs.items():
            sign, K = merge_sign(I, J)
            if sign:
                _accumulate(out, K, sign * (f * g))
    return Form(u.grid, u.degree + v.degree, out, u.dim)


def wedge_bigraded(u: BiGradedForm, v: BiGradedForm) -> BiGradedForm:
    if u.grid != v.grid:
        raise GridMismatchError("wedge of forms on different grids")
    r, s = u.bidegree[0] + v.bidegree[0], u.bidegree[1] + v.bidegree[1]
    if r > u.grid.n or s > u.grid.m:
        raise ValueError(f"bidegree overflow: ({r}, {s}) on ({u.grid.n}, {u.grid.m})")
    out: dict = {}
    for (I, J), f in u.coeffs.items():
        for (I2, J2), g in v.coeffs.items():
            sx, K = merge_sign(I, I2)
            sy, L = merge_sign(J, J2)
            if sx and sy:
                _accumulate(out, (K, L), (sx * sy) * (f * g))
    return BiGradedForm(u.grid, (r, s), out)


def complementary_pairing(u: BiGradedForm, v: BiGradedForm) -> ScalarField:
    """Top coefficient of ``u ^ v`` for complementary bidegrees, term by term.

    ``sum_{I,J} sign(I, I^c) sign(J, J^c) u_{I,J} v_{I^c,J^c}``; an independent
    route to ``top_coefficient(wedge_bigraded(u, v))``.
    """
    n, m = u.grid.n, u.grid.m
    (r, s), (r2, s2) = u.bidegree, v.bidegree
    if (r + r2, s + s2) != (n, m):
        raise ValueError("bidegrees are not complementary")
    total = ScalarField.zeros(u.grid)
    for (I, J), f in u.coeffs.items():
        Ic = tuple(i for i in range(n) if i not in I)
        Jc = tuple(j for j in range(m) if j not in J)
        g = v.coeffs.get((Ic, Jc))
        if g is not None:
            total = total + (merge_sign(I, Ic)[0] * merge_sign(J, Jc)[0]) * (f * g)
    return total


def _deriv(f: ScalarField, block: str, j: int) -> ScalarField:
    spec = np.fft.fftn(f.values) * derivative_symbol(f.grid, block, j)
    return ScalarField(f.grid, real_part_checked(np.fft.ifftn(spec), f.max_abs()))


def _x_block(grid: TorusGrid) -> str:
    return "x" if grid.two_parameter else "full"


def exterior_derivative(u: Form) -> Form:
    """``d(f dx_I) = sum_j d_j f dx_j ^ dx_I`` in the x variables.

    A top-degree input returns an empty form of the same degree (there is no
    ``(n+1)``-form to return).
    """
    if u.degree == u.dim:
        return Form(u.grid, u.degree, {}, u.dim)
    block = _x_block(u.grid)
    out: dict = {}
    for I, f in u.coeffs.items():
        for j in range(u.dim):
            sign, K = merge_sign((j,), I)
            if sign:
                _accumulate(out, K, sign * _deriv(f, block, j))
    return Form(u.grid, u.degree + 1, out, u.dim)


def d_x(u: AnyForm) -> AnyForm:
    if isinstance(u, Form):
        return exterior_derivative(u)
    r, s = u.bidegree
    if r == u.grid.n:
        return BiGradedForm(u.grid, (r, s), {})
    out: dict = {}
    for (I, J), f in u.coeffs.items():
        for j in range(u.grid.n):
            sign, K = merge_sign((j,), I)
            if sign:
                _accumulate(out, (K, J), sign * _deriv(f, "x", j))
    return BiGradedForm(u.grid, (r + 1, s), out)


def d_y(u: AnyForm, mode: str = "transplant") -> AnyForm:
    """Exterior derivative in the y variables.

    For a :class:`BiGradedForm` this raises the y-degree. For an x-indexed
    :class:`Form` on a square grid two readings exist: ``mode="transplant"``
    reads each ``dx_I`` as ``dy_I`` and returns a ``Form`` of one higher degree
    (so ``d_y u = 0`` says every ``u(x, .)`` is closed in y); ``mode="coefficient"``
    differentiates coefficients only and returns the ``(k, 1)`` bi-graded form
    ``sum d_{y_j} f_I dx_I dy_j``.
    """
    grid = u.grid
    if isinstance(u, BiGradedForm):
        r, s = u.bidegree
        if s == grid.m:
            return BiGradedForm(grid, (r, s), {})
        out: dict = {}
        for (I, J), f in u.coeffs.items():
            for k in range(grid.m):
                sign, L = merge_sign((k,), J)
                if sign:
                    _accumulate(out, (I, L), sign * _deriv(f, "y", k))
        return BiGradedForm(grid, (r, s + 1), out)
    if not grid.two_parameter:
        raise ValueError("d_y needs a two-parameter grid")
    if mode == "coefficient":
        out = {}
        for I, f in u.coeffs.items():
            for k in range(grid.m):
                _accumulate(out, (I, (k,)), _deriv(f, "y", k))
        return BiGradedForm(grid, (u.degree, 1), out)
    if mode != "transplant":
        raise ValueError(f"unknown d_y mode {mode!r}")
    if not grid.square:
        raise ValueError("transplanted d_y needs a square grid")
    if u.degree == u.dim:
        return Form(grid, u.degree, {}, u.dim)
    out = {}
    for I, f in u.coeffs.items():
        for k in range(u.dim):
            sign, K = merge_sign((k,), I)
            if sign:
                _accumulate(out, K, sign * _deriv(f, "y", k))
    return Form(grid, u.degree + 1, out, u.dim)


def top_coefficient(u: AnyForm) -> ScalarField:
    if isinstance(u, Form):
        if u.degree != u.dim:
            raise ValueError(f"degree {u.degree} is not the top degree {u.dim}")
        return u.coefficient(tuple(range(u.dim)))
    n, m = u.grid.n, u.grid.m
    if u.bidegree != (n, m):
        raise ValueError(f"bidegree {u.bidegree} is not the top bidegree {(n, m)}")
    return u.coefficient(tuple(range(n)), tuple(range(m)))


def make_closed_form(degree, potential: AnyForm) -> AnyForm:
    """Closed form built from a potential one degree lower in every block.

    ``degree`` is an int (returns ``d w``) or a pair ``(r, s)`` (returns
    ``d_x d_y w``, closed in both blocks).
    """
    if isinstance(degree, (tuple, list)):
        r, s = degree
        if r < 1 or s < 1:
            raise ValueError("closure in both blocks needs bidegree >= (1, 1)")
        if not isinstance(potential, BiGradedForm) or potential.bidegree != (r - 1, s - 1):
            raise ValueError(f"potential must be a bi-graded form of bidegree {(r - 1, s - 1)}")
        return d_x(d_y(potential))
    if degree < 1:
        raise ValueError("a closed form of degree 0 is constant; request degree >= 1")
    if not isinstance(potential, Form) or potential.degree != degree - 1:
        raise ValueError(f"potential must be a form of degree {degree - 1}")
    return exterior_derivative(potential)


# --- forms closed in both variables of a square grid --------------------------

@lru_cache(maxsize=64)
def _wedge_matrix_index(dim: int, degree: int):
    """Nonzero entries of ``e_i ^ : Lambda_{degree-1} -> Lambda_degree``."""
    rows, cols = basis(dim, degree), basis(dim, degree - 1)
    entries = []
    for c, J in enumerate(cols):
        for i in range(dim):
            sign, K = merge_sign((i,), J)
            if sign:
                entries.append((rows.index(K), c, i, sign))
    return len(rows), len(cols), entries


def _closed_projector(u: np.ndarray, degree: int) -> np.ndarray:
    """Pointwise projector onto ``u ^ Lambda_{degree-1}`` for unit vectors ``u``."""
    dim = u.shape[0]
    nr, nc, entries = _wedge_matrix_index(dim, degree)
    E = np.zeros((nr, nc) + u.shape[1:])
    for r, c, i, sign in entries:
        E[r, c] += sign * u[i]
    return np.einsum("ac...,bc...->ab...", E, E)


def uniformly_closed_projector(grid: TorusGrid, degree: int) -> np.ndarray:
    """Pointwise projector onto degree-``k`` forms closed in x and (transplanted) in y."""
    u1, u2, collinear, regular = joint_frames(grid)
    if degree == 0:
        return np.zeros((1, 1) + grid.shape)
    P1 = _closed_projector(u1, degree)
    P2 = _closed_projector(u2, degree)
    both = np.einsum("ab...,bc...->ac...", P1, P2)
    P = np.where(collinear, P1, both)
    return P * regular


def make_uniformly_closed_form(potential: Form) -> Form:
    """Degree-``k+1`` form closed in x and in y, from a degree-``k`` potential.

    Starts from ``d_x w`` and projects, frequency by frequency, onto forms
    that are also closed under the transplanted ``d_y``.
    """
    grid = potential.grid
    if not grid.square:
        raise ValueError("uniformly closed forms live on square two-parameter grids")
    seed = exterior_derivative(potential)
    degree, dim = seed.degree, seed.dim
    keys = basis(dim, degree)
    spec = np.stack([np.fft.fftn(seed.coefficient(I).values) for I in keys])
    P = uniformly_closed_projector(grid, degree)
    out_spec = np.einsum("ab...,b...->a...", P, spec)
    coeffs = {}
    for I, c in zip(keys, out_spec):
        values = real_part_checked(np.fft.ifftn(c), seed.max_abs())
        if np.any(values):
            coeffs[I] = ScalarField(grid, values)
    return Form(grid, degree, coeffs, dim)


def closure_residual(u: AnyForm, which: str = "x") -> float:
    """max |d u| relative to max |u| * pi (the largest derivative symbol)."""
    if which == "x":
        du = d_x(u)
    elif which == "y":
        du = d_y(u)
    else:
        raise ValueError("which must be 'x' or 'y'")
    scale = u.max_abs() * np.pi
    return du.max_abs() / scale if scale > 0 else du.max_abs()


def form_label(I: Sequence[int], J: Optional[Sequence[int]] = None) -> str:
    """File label such as ``dx(1,3)dy(2)`` (1-based, sorted)."""
    lab = "dx(" + ",".join(str(i + 1) for i in I) + ")"
    if J is not None:
        lab += "dy(" + ",".join(str(j + 1) for j in J) + ")"
    return lab


def parse_form_label(label: str) -> tuple[MultiIndex, Optional[MultiIndex]]:
    m = re.fullmatch(r"dx\(([\d,]*)\)(?:dy\(([\d,]*)\))?", label)
    if m is None:
        raise ValueError(f"not a form label: {label!r}")

    def parse(txt):
        return tuple(int(t) - 1 for t in txt.split(",") if t)

    return parse(m.group(1)), (None if m.group(2) is None else parse(m.group(2)))
