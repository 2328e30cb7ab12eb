"""
Divergence-free and curl-free data
==================================

The Leray projection ``F_j + R_j sum_k R_k F_k`` removes the gradient part
of a vector field. Combining projections in two blocks of variables yields
matrix fields that are divergence-free along every row and every column.
"""

import numpy as np

from divcurl import (MatrixField, TorusGrid, VectorField, divergence, leray_project_x,
                     make_bi_curl_free, make_bi_div_free, make_uniform_curl_free,
                     make_uniform_div_free)
from divcurl.leray import curl_residual, divergence_residual
from divcurl.random_fields import random_power_law_field

rng = np.random.default_rng(1)
grid = TorusGrid.product(2, 2, 8)

F = VectorField.from_components([random_power_law_field(grid, rng, 2.5) for _ in range(2)])
P = leray_project_x(F)
print("x-divergence before:", divergence(F, "x").max_abs())
print("x-divergence after: ", divergence(P, "x").max_abs())
print("projecting twice changes it by", (leray_project_x(P) - P).max_abs())

G = MatrixField(grid, rng.standard_normal((2, 2) + grid.shape))
E = make_bi_div_free(G)
phi = random_power_law_field(grid, rng, 2.5, ("x", "y"))
B = make_bi_curl_free(phi)
print("column x-divergence:", max(divergence_residual(E.column(k), "x") for k in range(2)))
print("row y-divergence:   ", max(divergence_residual(E.row(j), "y") for j in range(2)))

# On a square grid a vector field can be divergence-free in x and in y at once.
E = make_uniform_div_free(F)
B = make_uniform_curl_free(VectorField.from_components(
    [random_power_law_field(grid, rng, 2.5, ("x", "y")) for _ in range(2)]))
for p in ("x", "y"):
    print(f"parameter {p}: div E {divergence_residual(E, p):.1e}, curl B {curl_residual(B, p):.1e}")
