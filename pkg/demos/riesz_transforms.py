"""
Riesz transforms on a discrete torus
====================================

A Riesz transform is the Fourier multiplier ``-i xi_j / |xi|``. In one
dimension it is the Hilbert transform, which turns cosines into sines.
"""

import numpy as np

from divcurl import ScalarField, TorusGrid, riesz, riesz_x, riesz_y

# A cosine sampled at four points goes to the matching sine.
line = TorusGrid.cube(1, 4)
wave = ScalarField(line, [1.0, 0.0, -1.0, 0.0])
print("R[cos] =", riesz(0, wave).values)

# In several dimensions the squares add up to minus the identity on
# mean-zero fields without Nyquist content.
grid = TorusGrid.cube(2, 16)
rng = np.random.default_rng(0)
spec = np.fft.fftn(rng.standard_normal(grid.shape))
spec[grid.nyquist_mask() | grid.zero_mask()] = 0
f = ScalarField(grid, np.fft.ifftn(spec).real)
total = riesz(0, riesz(0, f)) + riesz(1, riesz(1, f))
print("max |R1^2 f + R2^2 f + f| =", (total + f).max_abs())

# Two-parameter grids have one family of transforms per block of variables.
product = TorusGrid.product(1, 1, 8)
cc = ScalarField.from_function(product, lambda x, y: np.cos(2 * np.pi * x / 8) * np.cos(2 * np.pi * y / 8))
ss = riesz_y(0, riesz_x(0, cc))
print("R^x R^y [cos cos] at (2, 2) =", round(float(ss.values[2, 2]), 12), "(sin sin = 1)")
