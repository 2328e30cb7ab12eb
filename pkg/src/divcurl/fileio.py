"""JSON field files: ``{"dims_x", "dims_y", "components", "data"}``.

``data`` holds one flat row-major list of doubles per component label.
"""
from __future__ import annotations

import json
import re
from typing import Mapping

import numpy as np

from .exterior import BiGradedForm, Form, form_label, parse_form_label
from .fields import MatrixField, VectorField
from .torus import ScalarField, TorusGrid


def dumps_fields(grid: TorusGrid, components: Mapping[str, ScalarField]) -> str:
    labels = list(components)
    for f in components.values():
        if f.grid != grid:
            raise ValueError("all components must live on the file's grid")
    doc = {
        "dims_x": list(grid.dims_x),
        "dims_y": None if grid.dims_y is None else list(grid.dims_y),
        "components": labels,
        "data": [components[lab].values.ravel(order="C").tolist() for lab in labels],
    }
    return json.dumps(doc)


def loads_fields(text: str) -> tuple[TorusGrid, dict[str, ScalarField]]:
    doc = json.loads(text)
    grid = TorusGrid(tuple(doc["dims_x"]),
                     None if doc.get("dims_y") is None else tuple(doc["dims_y"]))
    labels, data = doc["components"], doc["data"]
    if len(labels) != len(data):
        raise ValueError("component labels and data arrays differ in number")
    out = {}
    for lab, flat in zip(labels, data):
        arr = np.asarray(flat, dtype=float)
        if arr.size != grid.size:
            raise ValueError(f"component {lab!r} has {arr.size} values, grid needs {grid.size}")
        out[lab] = ScalarField(grid, arr.reshape(grid.shape))
    return grid, out


def save_fields(path, grid: TorusGrid, components: Mapping[str, ScalarField]) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_fields(grid, components))


def load_fields(path) -> tuple[TorusGrid, dict[str, ScalarField]]:
    with open(path) as fh:
        return loads_fields(fh.read())


def vector_components(F: VectorField, name: str) -> dict[str, ScalarField]:
    return {f"{name}_{j + 1}": F.component(j) for j in range(F.dim)}


def matrix_components(F: MatrixField, name: str) -> dict[str, ScalarField]:
    if F.rows > 9 or F.cols > 9:
        raise ValueError("E_jk labels support at most 9 rows and columns")
    return {f"{name}_{j + 1}{k + 1}": F.component(j, k)
            for j in range(F.rows) for k in range(F.cols)}


def collect_vector(components: Mapping[str, ScalarField], name: str):
    """Rebuild ``name_1 .. name_d`` into a VectorField (None if absent)."""
    pat = re.compile(rf"{re.escape(name)}_(\d)")
    found = {int(m.group(1)): f for lab, f in components.items() if (m := pat.fullmatch(lab))}
    if not found:
        return None
    return VectorField.from_components([found[j] for j in range(1, len(found) + 1)])


def collect_matrix(components: Mapping[str, ScalarField], name: str):
    pat = re.compile(rf"{re.escape(name)}_(\d)(\d)")
    found = {(int(m.group(1)), int(m.group(2))): f
             for lab, f in components.items() if (m := pat.fullmatch(lab))}
    if not found:
        return None
    n = max(j for j, _ in found)
    m = max(k for _, k in found)
    return MatrixField.from_components([[found[(j, k)] for k in range(1, m + 1)]
                                       for j in range(1, n + 1)])


def form_components(u) -> dict[str, ScalarField]:
    if isinstance(u, BiGradedForm):
        return {form_label(I, J): f for (I, J), f in sorted(u.coeffs.items())}
    return {form_label(I): f for I, f in sorted(u.coeffs.items())}


def form_from_components(grid: TorusGrid, components: Mapping[str, ScalarField], degree):
    """Inverse of :func:`form_components`; ``degree`` is an int or ``(r, s)``."""
    if isinstance(degree, (tuple, list)):
        coeffs = {}
        for lab, f in components.items():
            I, J = parse_form_label(lab)
            coeffs[(I, () if J is None else J)] = f
        return BiGradedForm(grid, tuple(degree), coeffs)
    coeffs = {parse_form_label(lab)[0]: f for lab, f in components.items()}
    return Form(grid, degree, coeffs)
