"""Commutators with multiplication by ``b`` and the proof-identity checkers.

``[b, T] f = b * T(f) - T(b * f)`` with pointwise grid products (no
dealiasing): the identities checked here are exact algebraic identities at
grid level, so residuals measure rounding only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .fields import MatrixField, VectorField
from .leray import HypothesisError, divergence, leray_project, make_bi_curl_free, \
    make_curl_free_1p
from .multipliers import riesz_block, riesz_x, riesz_y
from .torus import GridMismatchError, ScalarField

#: residual of a proof identity above which the computation is declared broken
IDENTITY_ERROR_TOL = 1e-8
#: hypothesis residual tolerated by the checkers
HYPOTHESIS_TOL = 1e-8

BMO_CLASSES = ("bmo_1p", "bmo_product", "bmo_little")


class IdentityViolation(RuntimeError):
    """A proof identity failed by more than rounding."""

    def __init__(self, display: str, residual: float):
        super().__init__(f"identity {display!r} violated: residual {residual:.3e}")
        self.display = display
        self.residual = residual


@dataclass(frozen=True)
class SymbolFunction:
    """A mean-zero multiplier ``b`` tagged with the BMO-type class it is tested in."""

    b: ScalarField
    declared_class: str = "bmo_1p"

    def __post_init__(self):
        if self.declared_class not in BMO_CLASSES:
            raise ValueError(f"unknown BMO class {self.declared_class!r}")
        scale = max(self.b.max_abs(), 1.0)
        if abs(self.b.mean()) > 1e-12 * scale:
            raise ValueError("symbol functions are normalized to mean zero; "
                             "use SymbolFunction.normalized")

    @classmethod
    def normalized(cls, b: ScalarField, declared_class: str = "bmo_1p") -> "SymbolFunction":
        return cls(b - b.mean(), declared_class)

    @property
    def grid(self):
        return self.b.grid


Symbol = Union[SymbolFunction, ScalarField]


def _field(b: Symbol) -> ScalarField:
    return b.b if isinstance(b, SymbolFunction) else b


def _same_grid(*fields) -> None:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError("operands live on different grids")


def commutator_riesz(b: Symbol, j: int, f: ScalarField, parameter: str = "full") -> ScalarField:
    b = _field(b)
    _same_grid(b, f)
    R = lambda g: riesz_block(parameter, j, g)  # noqa: E731
    return b * R(f) - R(b * f)


def commutator_double_riesz(b: Symbol, j: int, k: int, F, parameter: str = "full"):
    """``[b, R_j R_k]`` in one parameter block."""
    b = _field(b)
    _same_grid(b, F)
    RR = lambda g: riesz_block(parameter, j, riesz_block(parameter, k, g))  # noqa: E731
    return b * RR(F) - RR(b * F)


def iterated_commutator(b: Symbol, j: int, k: int, f: ScalarField) -> ScalarField:
    """``[[b, R_j^x], R_k^y] f`` via its four-term expansion."""
    b = _field(b)
    _same_grid(b, f)
    Rx = lambda g: riesz_x(j, g)  # noqa: E731
    Ry = lambda g: riesz_y(k, g)  # noqa: E731
    return b * Rx(Ry(f)) - Rx(b * Ry(f)) - Ry(b * Rx(f)) + Rx(Ry(b * f))


def nested_iterated_commutator(b: Symbol, j: int, k: int, f: ScalarField) -> ScalarField:
    """Same operator as :func:`iterated_commutator`, built by nesting commutators."""
    inner = lambda g: commutator_riesz(b, j, g, "x")  # noqa: E731
    return inner(riesz_y(k, f)) - riesz_y(k, inner(f))


def _relative(residual: float, scale: float) -> float:
    if scale == 0.0:
        return residual
    return residual / scale


def commutator_projection_paths(b: Symbol, F: VectorField, parameter: str = "full"):
    """``[b, P]F`` computed directly and by the component formula.

    Returns ``(direct, formula, relative_residual)`` where the formula path is
    ``sum_k [b, R_j R_k] F_k`` for component ``j``.
    """
    b = _field(b)
    _same_grid(b, F)
    direct = b * leray_project(F, parameter) - leray_project(b * F, parameter)
    block = "full" if parameter == "x" and not F.grid.two_parameter else parameter
    comps = []
    for j in range(F.dim):
        total = ScalarField.zeros(F.grid)
        for k in range(F.dim):
            total = total + commutator_double_riesz(b, j, k, F.component(k), block)
        comps.append(total)
    formula = VectorField.from_components(comps)
    scale = b.max_abs() * F.max_abs()
    residual = _relative((direct - formula).max_abs(), scale)
    return direct, formula, residual


def commutator_projection(b: Symbol, F: VectorField, parameter: str = "full") -> VectorField:
    direct, _, residual = commutator_projection_paths(b, F, parameter)
    if residual > IDENTITY_ERROR_TOL:
        raise IdentityViolation("[b,P]F_j = sum_k [b,R_jR_k](F_k)", residual)
    return direct


def _require(residual: float, what: str) -> None:
    if residual > HYPOTHESIS_TOL:
        raise HypothesisError(f"{what} (relative residual {residual:.2e})")


def check_decomposition_1p(E: VectorField, B: VectorField, phi: ScalarField) -> float:
    """Relative max-norm residual of ``E.B = sum_j E_j R_j phi + phi R_j E_j``."""
    _same_grid(E, B, phi)
    _require(_relative(divergence(E).max_abs(), E.max_abs()), "E is not divergence-free")
    _require(_relative((B - make_curl_free_1p(phi)).max_abs(), phi.max_abs()),
             "B is not (R_j phi)_j")
    lhs = E.dot(B)
    rhs = ScalarField.zeros(E.grid)
    for j in range(E.dim):
        rhs = rhs + E.component(j) * riesz_block("full", j, phi) \
            + phi * riesz_block("full", j, E.component(j))
    scale = E.max_abs() * max(B.max_abs(), phi.max_abs())
    return _relative((lhs - rhs).max_abs(), scale)


def check_decomposition_2p(E: MatrixField, B: MatrixField, phi: ScalarField) -> dict:
    """Residuals of the four-term expansion of ``E.B`` and its three cancellations.

    Keys: ``main`` (the expanded identity), ``mixed`` (``phi sum R^x R^y E``),
    ``x_cancel`` (``sum_k R_k^y phi sum_j R_j^x E_jk``) and ``y_cancel``
    (``sum_j R_j^x phi sum_k R_k^y E_jk``). All relative to
    ``max|E| * max(|B|, |phi|)``.
    """
    _same_grid(E, B, phi)
    grid = E.grid
    n, m = E.rows, E.cols
    # hypotheses: per-column x-divergence and per-row y-divergence vanish
    div_x = max(divergence(E.column(k), "x").max_abs() for k in range(m))
    div_y = max(divergence(E.row(j), "y").max_abs() for j in range(n))
    _require(_relative(max(div_x, div_y), E.max_abs()), "E is not bi-divergence-free")
    _require(_relative((B - make_bi_curl_free(phi)).max_abs(), phi.max_abs()),
             "B is not (R_j^x R_k^y phi)_jk")

    Rx_phi = [riesz_x(j, phi) for j in range(n)]
    Ry_phi = [riesz_y(k, phi) for k in range(m)]
    zero = ScalarField.zeros(grid)
    main_rhs = zero
    mixed = zero
    x_cancel = zero
    y_cancel = zero
    for j in range(n):
        for k in range(m):
            Ejk = E.component(j, k)
            RxE = riesz_x(j, Ejk)
            RyE = riesz_y(k, Ejk)
            RxRyE = riesz_x(j, RyE)
            main_rhs = main_rhs + Ejk * riesz_x(j, Ry_phi[k]) + phi * RxRyE \
                + Rx_phi[j] * RyE + Ry_phi[k] * RxE
            mixed = mixed + phi * RxRyE
            x_cancel = x_cancel + RxE * Ry_phi[k]
            y_cancel = y_cancel + RyE * Rx_phi[j]
    scale = E.max_abs() * max(B.max_abs(), phi.max_abs())
    return {
        "main": _relative((E.dot(B) - main_rhs).max_abs(), scale),
        "mixed": _relative(mixed.max_abs(), scale),
        "x_cancel": _relative(x_cancel.max_abs(), scale),
        "y_cancel": _relative(y_cancel.max_abs(), scale),
    }


def _pairing_residual(lhs: float, rhs: float, scale: float) -> float:
    diff = abs(lhs - rhs)
    return _relative(diff, max(abs(lhs), abs(rhs), scale))


def check_pairing_identity(E, B, phi: ScalarField, b: Symbol) -> float:
    """Relative gap between ``<E.B, b>`` and the commutator pairing.

    One-parameter vector fields use ``sum_j <[b, R_j] E_j, phi>``; matrix
    fields use ``sum_jk <[[b, R_j^x], R_k^y] E_jk, phi>``.
    """
    b = _field(b)
    _same_grid(E, B, phi, b)
    lhs = E.dot(B).inner(b)
    if isinstance(E, MatrixField):
        rhs = sum(iterated_commutator(b, j, k, E.component(j, k)).inner(phi)
                  for j in range(E.rows) for k in range(E.cols))
    else:
        rhs = sum(commutator_riesz(b, j, E.component(j), "full").inner(phi)
                  for j in range(E.dim))
    scale = float(np.mean(np.abs(b.values) * E.pointwise_norm() * B.pointwise_norm()))
    return _pairing_residual(lhs, rhs, scale)


def check_projection_pairing(E: VectorField, B: VectorField, b: Symbol,
                             parameter: str = "full") -> float:
    """Slice-wise gap between ``int E.B b`` and ``int [b, P]E . B`` over one block.

    For a two-parameter grid the integrals run over the ``parameter`` block
    with the other block frozen; the worst slice is reported.
    """
    b = _field(b)
    _same_grid(E, B, b)
    grid = E.grid
    block = "full" if parameter == "x" and not grid.two_parameter else parameter
    axes = grid.block_axes(block)
    comm = commutator_projection(b, E, parameter)
    lhs = np.mean(E.dot(B).values * b.values, axis=axes)
    rhs = np.mean(comm.dot(B).values, axis=axes)
    scale = np.mean(np.abs(b.values) * E.pointwise_norm() * B.pointwise_norm(), axis=axes)
    den = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), scale)
    diff = np.abs(lhs - rhs)
    rel = np.where(den > 0, diff / np.where(den > 0, den, 1.0), diff)
    return float(np.max(rel))
