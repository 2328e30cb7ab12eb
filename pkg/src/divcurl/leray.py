"""Divergence, curl, Leray projections and generators of structured fields.

Every generator here is certified by construction: the fields it returns
satisfy their divergence/curl constraints up to rounding (<= 1e-10 relative),
which is what the div-curl hypotheses ask for.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .fields import MatrixField, VectorField
from .multipliers import derivative_symbol, regular_mask, riesz_symbol
from .torus import ScalarField, TorusGrid, real_part_checked

#: curl residual accepted on user-supplied "curl-free" data
USER_CURL_TOL = 1e-6
#: residual guaranteed by the generators
GENERATED_TOL = 1e-10


class HypothesisError(ValueError):
    """Input data violates a divergence/curl/mean-zero hypothesis."""


def _block(grid: TorusGrid, parameter: str) -> str:
    if parameter == "x" and not grid.two_parameter:
        return "full"
    grid.block_axes(parameter)
    return parameter


def _fft(values: np.ndarray, ndim: int) -> np.ndarray:
    return np.fft.fftn(values, axes=tuple(range(values.ndim - ndim, values.ndim)))


def _ifft_real(spec: np.ndarray, ndim: int, scale: float) -> np.ndarray:
    axes = tuple(range(spec.ndim - ndim, spec.ndim))
    return real_part_checked(np.fft.ifftn(spec, axes=axes), scale)


def _relative(residual: float, scale: float) -> float:
    return residual / scale if scale > 0 else residual


def _check_components(F: VectorField, block: str) -> int:
    d = F.grid.block_dim(block)
    if F.dim != d:
        raise ValueError(f"vector field has {F.dim} components, block {block!r} has {d} axes")
    return d


def divergence(F: VectorField, parameter: str = "full", form: str = "riesz") -> ScalarField:
    """``sum_j R_j F_j`` (form='riesz') or ``sum_j d_j F_j`` (form='derivative')."""
    block = _block(F.grid, parameter)
    d = _check_components(F, block)
    if form not in ("riesz", "derivative"):
        raise ValueError(f"unknown divergence form {form!r}")
    symbol = riesz_symbol if form == "riesz" else derivative_symbol
    spec = _fft(F.values, F.grid.ndim)
    total = sum(symbol(F.grid, block, j) * spec[j] for j in range(d))
    return ScalarField(F.grid, _ifft_real(total, F.grid.ndim, F.max_abs()))


def curl(F: VectorField, parameter: str = "full", form: str = "derivative") -> dict:
    """Antisymmetric curl ``{(i, j): d_i F_j - d_j F_i}`` for ``i < j``.

    Empty for one-dimensional blocks, where curl-freeness is vacuous.
    """
    block = _block(F.grid, parameter)
    d = _check_components(F, block)
    symbol = riesz_symbol if form == "riesz" else derivative_symbol
    spec = _fft(F.values, F.grid.ndim)
    out = {}
    for i, j in combinations(range(d), 2):
        c = symbol(F.grid, block, i) * spec[j] - symbol(F.grid, block, j) * spec[i]
        out[(i, j)] = ScalarField(F.grid, _ifft_real(c, F.grid.ndim, F.max_abs()))
    return out


def divergence_residual(F: VectorField, parameter: str = "full") -> float:
    """max |Riesz-form divergence| relative to max |F|."""
    return _relative(divergence(F, parameter).max_abs(), F.max_abs())


def curl_residual(F: VectorField, parameter: str = "full") -> float:
    """max |Riesz-form curl| relative to max |F| (0 for one-dimensional blocks)."""
    parts = curl(F, parameter, form="riesz")
    if not parts:
        return 0.0
    return _relative(max(c.max_abs() for c in parts.values()), F.max_abs())


def _project(values: np.ndarray, grid: TorusGrid, block: str, index_axis: int) -> np.ndarray:
    """Apply ``F_j + R_j sum_k R_k F_k`` along component axis ``index_axis``."""
    d = grid.block_dim(block)
    spec = np.moveaxis(_fft(values, grid.ndim), index_axis, 0)
    if spec.shape[0] != d:
        raise ValueError(f"{spec.shape[0]} components, block {block!r} has {d} axes")
    syms = [riesz_symbol(grid, block, j) for j in range(d)]
    rdiv = sum(syms[k] * spec[k] for k in range(d))
    out = np.stack([spec[j] + syms[j] * rdiv for j in range(d)])
    return _ifft_real(np.moveaxis(out, 0, index_axis), grid.ndim, float(np.abs(values).max()))


def leray_project(F: VectorField, parameter: str = "full") -> VectorField:
    block = _block(F.grid, parameter)
    return VectorField(F.grid, _project(F.values, F.grid, block, 0))


def leray_project_x(F: VectorField) -> VectorField:
    return leray_project(F, "x")


def leray_project_y(F: VectorField) -> VectorField:
    return leray_project(F, "y")


def _require_mean_zero(phi: ScalarField, axes: tuple[int, ...], what: str) -> None:
    means = phi.values.mean(axis=axes)
    scale = max(phi.max_abs(), 1e-300)
    if np.abs(means).max() > GENERATED_TOL * scale and np.abs(means).max() > 1e-14:
        raise HypothesisError(f"potential is not mean-zero {what}")


def make_curl_free_1p(phi: ScalarField) -> VectorField:
    """``B_j = R_j phi`` on a one-parameter grid."""
    if phi.grid.two_parameter:
        raise ValueError("make_curl_free_1p needs a one-parameter grid")
    _require_mean_zero(phi, tuple(range(phi.grid.ndim)), "")
    spec = np.fft.fftn(phi.values)
    comps = [riesz_symbol(phi.grid, "full", j) * spec for j in range(phi.grid.n)]
    return VectorField(phi.grid, _ifft_real(np.stack(comps), phi.grid.ndim, phi.max_abs()))


def recover_potential_1p(B: VectorField) -> ScalarField:
    """``phi = -sum_j R_j B_j``, the inverse of :func:`make_curl_free_1p`."""
    if B.grid.two_parameter:
        raise ValueError("recover_potential_1p needs a one-parameter grid")
    res = curl_residual(B)
    if res > USER_CURL_TOL:
        raise HypothesisError(f"input is not curl-free (relative curl {res:.2e})")
    return -divergence(B, "full")


def make_bi_curl_free(phi: ScalarField) -> MatrixField:
    """``B_jk = R_j^x R_k^y phi``."""
    grid = phi.grid
    if not grid.two_parameter:
        raise ValueError("make_bi_curl_free needs a two-parameter grid")
    _require_mean_zero(phi, grid.block_axes("x"), "in x")
    _require_mean_zero(phi, grid.block_axes("y"), "in y")
    spec = np.fft.fftn(phi.values)
    rx = [riesz_symbol(grid, "x", j) for j in range(grid.n)]
    ry = [riesz_symbol(grid, "y", k) for k in range(grid.m)]
    comps = np.stack([np.stack([rx[j] * ry[k] * spec for k in range(grid.m)])
                      for j in range(grid.n)])
    return MatrixField(grid, _ifft_real(comps, grid.ndim, phi.max_abs()))


def make_bi_div_free(G: MatrixField) -> MatrixField:
    """x-Leray projection of every column followed by y-Leray of every row.

    The two projections act on different indices, so they commute and the
    result is divergence-free in both parameters.
    """
    grid = G.grid
    if not grid.two_parameter:
        raise ValueError("make_bi_div_free needs a two-parameter grid")
    vals = _project(G.values, grid, "x", 0)
    vals = _project(vals, grid, "y", 1)
    return MatrixField(grid, vals)


@lru_cache(maxsize=64)
def joint_frames(grid: TorusGrid):
    """Orthonormal frame of ``span{xi, eta}`` on a square two-parameter grid.

    Returns ``(u1, u2, collinear, regular)``: ``u1 = xi/|xi|``; ``u2`` is the
    unit component of ``eta/|eta|`` orthogonal to ``u1`` (zero where ``xi`` and
    ``eta`` are collinear); ``regular`` marks frequencies where both blocks
    are nonzero and Nyquist-free. Collinearity is decided on the integer
    frequencies, so it is exact.
    """
    if not grid.square:
        raise ValueError("joint frames need a square two-parameter grid")
    n = grid.n
    regular = regular_mask(grid, "x") & regular_mask(grid, "y")
    xi = np.stack([np.broadcast_to(grid.frequencies[a], grid.shape) for a in grid.block_axes("x")])
    eta = np.stack([np.broadcast_to(grid.frequencies[a], grid.shape) for a in grid.block_axes("y")])
    collinear = np.ones(grid.shape, dtype=bool)
    for i, j in combinations(range(n), 2):
        collinear &= (xi[i] * eta[j] - xi[j] * eta[i]) == 0
    with np.errstate(invalid="ignore", divide="ignore"):
        a = np.where(regular, xi / np.linalg.norm(xi, axis=0), 0.0)
        b = np.where(regular, eta / np.linalg.norm(eta, axis=0), 0.0)
        w = b - np.sum(a * b, axis=0) * a
        keep = regular & ~collinear
        u2 = np.where(keep, w / np.where(keep, np.linalg.norm(w, axis=0), 1.0), 0.0)
    for arr in (a, u2, collinear, regular):
        arr.setflags(write=False)
    return a, u2, collinear, regular


def _apply_pointwise_matrix(P: np.ndarray, values: np.ndarray, grid: TorusGrid) -> np.ndarray:
    spec = _fft(values, grid.ndim)
    return _ifft_real(np.einsum("ij...,j...->i...", P, spec), grid.ndim,
                      float(np.abs(values).max()))


def uniform_div_free_symbol(grid: TorusGrid) -> np.ndarray:
    """Projector onto vectors orthogonal to both xi and eta (regular frequencies only)."""
    u1, u2, _, regular = joint_frames(grid)
    eye = np.eye(grid.n).reshape((grid.n, grid.n) + (1,) * grid.ndim)
    P = eye - u1[:, None] * u1[None, :] - u2[:, None] * u2[None, :]
    return P * regular


def uniform_curl_free_symbol(grid: TorusGrid) -> np.ndarray:
    """Projector onto vectors parallel to both xi and eta (nonzero only when collinear)."""
    u1, _, collinear, regular = joint_frames(grid)
    return u1[:, None] * u1[None, :] * (collinear & regular)


def make_uniform_div_free(G: VectorField) -> VectorField:
    """Vector field on a square grid that is divergence-free in x and in y.

    ``leray_project_x`` and ``leray_project_y`` do not commute on fields whose
    x and y constraints share one index, so their composition is not enough;
    this projects onto the joint kernel frequency by frequency.
    """
    _check_components(G, "x")
    return VectorField(G.grid, _apply_pointwise_matrix(uniform_div_free_symbol(G.grid),
                                                       G.values, G.grid))


def make_uniform_curl_free(G: VectorField) -> VectorField:
    """Vector field on a square grid that is curl-free in x and in y."""
    _check_components(G, "x")
    return VectorField(G.grid, _apply_pointwise_matrix(uniform_curl_free_symbol(G.grid),
                                                       G.values, G.grid))
