"""
Differential forms with spectral coefficients
=============================================

Forms store one field per increasing multi-index. The wedge product merges
indices with the sign of the sorting shuffle, and the exterior derivative
uses spectral partial derivatives, so d(d u) vanishes to rounding.
"""

import numpy as np

from divcurl import (BiGradedForm, Form, TorusGrid, d_x, d_y, exterior_derivative,
                     make_closed_form, top_coefficient, wedge, wedge_bigraded)
from divcurl.exterior import basis, closure_residual, form_label
from divcurl.random_fields import random_power_law_field

rng = np.random.default_rng(4)
grid = TorusGrid.cube(3, 8)
u = Form(grid, 1, {I: random_power_law_field(grid, rng, 2.0) for I in basis(3, 1)})
v = Form(grid, 1, {I: random_power_law_field(grid, rng, 2.0) for I in basis(3, 1)})
print("|u^v + v^u| =", (wedge(u, v) + wedge(v, u)).max_abs())
print("|d d u| =", exterior_derivative(exterior_derivative(u)).max_abs())

product = TorusGrid.product(2, 2, 8)
w = BiGradedForm(product, (0, 0), {((), ()): random_power_law_field(product, rng, 2.0, ("x", "y"))})
E = make_closed_form((1, 1), w)
print("E has terms", [form_label(I, J) for I, J in sorted(E.coeffs)])
print("closure in x and y:", closure_residual(E, "x"), closure_residual(E, "y"))
print("d_x d_y = d_y d_x:", (d_x(d_y(w)) - d_y(d_x(w))).max_abs())
top = top_coefficient(wedge_bigraded(E, E))
print("E ^ E top coefficient max:", top.max_abs())
