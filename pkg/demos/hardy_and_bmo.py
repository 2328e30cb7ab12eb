"""
Hardy and BMO surrogates
========================

H^1 norms are computed from the Riesz characterization; BMO norms are the
largest mean oscillation over dyadic-sized boxes at every periodic position.
"""

import numpy as np

from divcurl import (ScalarField, TorusGrid, bmo_norm_1p, h1_norm_1p, h1_norm_product,
                     little_bmo_norm, lp_norm, mixed_h1_norm, rect_bmo_norm)
from divcurl.norms import upsample
from divcurl.random_fields import random_power_law_field

spike = np.zeros(8)
spike[3] = 1.0
print("BMO of a unit spike on 8 cells:", bmo_norm_1p(ScalarField(TorusGrid.cube(1, 8), spike)))

rng = np.random.default_rng(3)
grid = TorusGrid.cube(2, 16)
f = random_power_law_field(grid, rng, 2.0)
print("L1:", lp_norm(f, 1), " H1 surrogate:", h1_norm_1p(f))
print("H1 surrogate after refining to 32^2:", h1_norm_1p(upsample(f)))

product = TorusGrid.product(1, 1, 16)
g = random_power_law_field(product, rng, 1.5, ("x", "y"))
print("product H1:", h1_norm_product(g))
print("mixed H1 (x frozen / y frozen):", mixed_h1_norm(g, "x"), mixed_h1_norm(g, "y"))
print("rectangle BMO:", rect_bmo_norm(g), " little bmo:", little_bmo_norm(g))
