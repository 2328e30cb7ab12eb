import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from divcurl.torus import (GridMismatchError, RealnessError, ScalarField, Spectrum,
                           TorusGrid, dft, frequency, idft, real_part_checked)


def naive_dft(values):
    """Direct summation of sum_x f(x) exp(-2 pi i x.xi / N)."""
    shape = values.shape
    out = np.zeros(shape, dtype=complex)
    coords = list(itertools.product(*[range(N) for N in shape]))
    for xi in coords:
        phase = sum(x_i * k_i / N for x_i, k_i, N in zip(np.array(coords).T, xi, shape))
        out[xi] = np.sum(values[tuple(np.array(coords).T)] * np.exp(-2j * np.pi * phase))
    return out


class TestGrid:
    def test_one_parameter_shape(self):
        g = TorusGrid.cube(3, 8)
        assert g.shape == (8, 8, 8)
        assert not g.two_parameter
        assert g.m == 0 and g.n == 3

    def test_product_axes_order(self):
        g = TorusGrid.product(2, 1, 8, 4)
        assert g.shape == (8, 8, 4)
        assert g.block_axes("x") == (0, 1)
        assert g.block_axes("y") == (2,)
        assert g.block_axes("full") == (0, 1, 2)

    @pytest.mark.parametrize("dims", [(7,), (2,), (8, 5)])
    def test_rejects_bad_extents(self, dims):
        with pytest.raises(ValueError):
            TorusGrid(dims)

    def test_frequencies_centered(self):
        g = TorusGrid.cube(1, 8)
        assert list(g.frequencies[0]) == [0, 1, 2, 3, -4, -3, -2, -1]

    def test_frequency_lookup(self):
        g = TorusGrid.product(1, 1, 8, 4)
        assert frequency((5, 3), g) == (-3, -1)
        with pytest.raises(IndexError):
            frequency((8, 0), g)

    def test_nyquist_mask_counts(self):
        g = TorusGrid.cube(2, 8)
        # rows or columns with a component equal to -4
        assert g.nyquist_mask().sum() == 8 + 8 - 1

    def test_square(self):
        assert TorusGrid.product(2, 2, 8).square
        assert not TorusGrid.product(2, 1, 8).square
        assert TorusGrid.product(2, 2, 8, 4).square  # square means m == n


class TestTransform:
    @pytest.mark.parametrize("dims", [((8,), None), ((8, 8), None), ((4, 4), (4,))])
    def test_matches_direct_summation(self, dims, rng):
        g = TorusGrid(*dims)
        f = ScalarField(g, rng.standard_normal(g.shape))
        np.testing.assert_allclose(dft(f).coeffs, naive_dft(f.values), atol=1e-10)

    def test_roundtrip(self, rng):
        g = TorusGrid.product(1, 2, 8, 4)
        f = ScalarField(g, rng.standard_normal(g.shape))
        np.testing.assert_allclose(idft(dft(f)).values, f.values, atol=1e-13)

    def test_parseval(self, rng):
        g = TorusGrid.cube(2, 16)
        f = ScalarField(g, rng.standard_normal(g.shape))
        c = dft(f).coeffs
        assert np.isclose(np.sum(f.values ** 2), np.sum(np.abs(c) ** 2) / g.size)

    def test_real_spectrum_is_symmetric(self, rng):
        g = TorusGrid.cube(3, 4)
        f = ScalarField(g, rng.standard_normal(g.shape))
        assert dft(f).symmetry_defect() < 1e-12

    def test_asymmetric_spectrum_rejected(self):
        g = TorusGrid.cube(1, 8)
        c = np.zeros(8, dtype=complex)
        c[1] = 8.0
        with pytest.raises(RealnessError):
            idft(Spectrum(g, c))

    def test_realness_relative_to_scale(self):
        tiny = np.full(4, 1e-18) + 1e-18j
        with pytest.raises(RealnessError):
            real_part_checked(tiny)
        assert np.allclose(real_part_checked(tiny, scale=1.0), 1e-18)


class TestScalarField:
    def test_values_read_only(self):
        f = ScalarField.zeros(TorusGrid.cube(1, 4))
        with pytest.raises(ValueError):
            f.values[0] = 1.0

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ScalarField(TorusGrid.cube(1, 4), [0.0, np.nan, 0.0, 0.0])

    def test_grid_mismatch(self):
        a = ScalarField.zeros(TorusGrid.cube(1, 4))
        b = ScalarField.zeros(TorusGrid.cube(1, 8))
        with pytest.raises(GridMismatchError):
            a + b

    def test_from_function_uses_integer_coordinates(self):
        g = TorusGrid.cube(2, 4)
        f = ScalarField.from_function(g, lambda i, j: i + 10 * j)
        assert f.values[2, 3] == 32

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=8, max_size=8),
           st.floats(-10, 10))
    def test_arithmetic(self, data, c):
        g = TorusGrid.cube(1, 8)
        f = ScalarField(g, data)
        np.testing.assert_allclose((f * c - f).values, np.array(data) * (c - 1), atol=1e-9)
        assert (f - f).max_abs() == 0
        assert np.isclose(f.inner(f), np.mean(np.square(data)))
