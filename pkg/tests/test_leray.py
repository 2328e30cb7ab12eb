import numpy as np
import pytest

from divcurl.fields import MatrixField, VectorField
from divcurl.leray import (HypothesisError, curl, curl_residual, divergence,
                           divergence_residual, joint_frames, leray_project,
                           leray_project_x, leray_project_y, make_bi_curl_free,
                           make_bi_div_free, make_curl_free_1p, make_uniform_curl_free,
                           make_uniform_div_free, recover_potential_1p)
from divcurl.leray import _project
from divcurl.multipliers import riesz, riesz_symbol, riesz_x, riesz_y
from divcurl.torus import ScalarField, TorusGrid

from conftest import clean_field, rel


def random_vector(grid, rng, d, blocks=("full",)):
    return VectorField.from_components([clean_field(grid, rng, blocks) for _ in range(d)])


class TestDivergenceCurl:
    def test_riesz_form_matches_sum(self, rng):
        g = TorusGrid.cube(3, 8)
        F = random_vector(g, rng, 3)
        direct = sum((riesz(j, F.component(j)) for j in range(3)), ScalarField.zeros(g))
        assert rel(divergence(F).values, direct.values) < 1e-12

    def test_constant_field(self):
        g = TorusGrid.cube(2, 8)
        F = VectorField.from_components([ScalarField.constant(g, 1.0), ScalarField.constant(g, -2.0)])
        assert divergence(F).max_abs() < 1e-14
        assert all(c.max_abs() < 1e-14 for c in curl(F).values())

    def test_gradient_type_is_curl_free(self, rng):
        g = TorusGrid.cube(3, 8)
        B = make_curl_free_1p(clean_field(g, rng))
        assert curl_residual(B) < 1e-10

    def test_rotational_field_has_curl(self):
        g = TorusGrid.cube(2, 8)
        w = lambda t: np.sin(2 * np.pi * t / 8)  # noqa: E731
        F = VectorField.from_components([ScalarField.from_function(g, lambda x, y: -w(y)),
                                         ScalarField.from_function(g, lambda x, y: w(x))])
        assert divergence(F, form="derivative").max_abs() < 1e-14
        c = curl(F)[(0, 1)]
        expect = (2 * np.pi / 8) * ScalarField.from_function(
            g, lambda x, y: np.cos(2 * np.pi * x / 8) + np.cos(2 * np.pi * y / 8)).values
        np.testing.assert_allclose(c.values, expect, atol=1e-13)

    def test_unknown_form(self, rng):
        with pytest.raises(ValueError):
            divergence(random_vector(TorusGrid.cube(2, 8), rng, 2), form="fancy")


class TestProjection:
    grid = TorusGrid.product(2, 2, 8)

    def test_idempotent(self, rng):
        F = random_vector(self.grid, rng, 2)
        P = leray_project_x(F)
        assert rel(leray_project_x(P).values, P.values) < 1e-12
        assert divergence_residual(P, "x") < 1e-12

    def test_self_adjoint(self, rng):
        F, G = random_vector(self.grid, rng, 2), random_vector(self.grid, rng, 2)
        assert abs(leray_project_x(F).inner(G) - F.inner(leray_project_x(G))) < 1e-12

    def test_orthogonal_to_gradients(self, rng):
        F = random_vector(self.grid, rng, 2)
        phi = clean_field(self.grid, rng, ("x",))
        grad = VectorField.from_components([riesz_x(j, phi) for j in range(2)])
        P = leray_project_x(F)
        bound = np.sqrt(P.inner(P) * grad.inner(grad))
        assert abs(P.inner(grad)) <= 1e-10 * bound

    def test_annihilates_gradients(self, rng):
        phi = clean_field(self.grid, rng, ("y",))
        grad = VectorField.from_components([riesz_y(k, phi) for k in range(2)])
        assert leray_project_y(grad).max_abs() < 1e-12 * grad.max_abs()

    def test_fixes_divergence_free(self, rng):
        E = leray_project_x(random_vector(self.grid, rng, 2))
        assert rel(leray_project_x(E).values, E.values) < 1e-12

    def test_matrix_projections_commute(self, rng):
        G = MatrixField(self.grid, rng.standard_normal((2, 2) + self.grid.shape))
        xy = _project(_project(G.values, self.grid, "x", 0), self.grid, "y", 1)
        yx = _project(_project(G.values, self.grid, "y", 1), self.grid, "x", 0)
        assert np.abs(xy - yx).max() < 1e-12

    def test_vector_projections_need_not_commute(self, rng):
        # both projections act on the same index; I - aa^T and I - bb^T do
        # not commute unless a and b are parallel or orthogonal
        F = random_vector(self.grid, rng, 2)
        xy = leray_project_x(leray_project_y(F))
        yx = leray_project_y(leray_project_x(F))
        assert (xy - yx).max_abs() > 1e-3

    def test_one_parameter_full(self, rng):
        g = TorusGrid.cube(3, 8)
        F = random_vector(g, rng, 3)
        assert rel(leray_project(F, "x").values, leray_project(F, "full").values) == 0


class TestOneParameterPotentials:
    def test_cosine(self):
        g = TorusGrid.cube(1, 8)
        phi = ScalarField.from_function(g, lambda x: np.cos(2 * np.pi * x / 8))
        B = make_curl_free_1p(phi)
        np.testing.assert_allclose(B.component(0).values, np.sin(2 * np.pi * np.arange(8) / 8),
                                   atol=1e-14)

    def test_zero(self):
        g = TorusGrid.cube(2, 8)
        assert make_curl_free_1p(ScalarField.zeros(g)).max_abs() == 0
        assert recover_potential_1p(VectorField.zeros(g, 2)).max_abs() == 0

    def test_recovery(self, rng):
        g = TorusGrid.cube(3, 8)
        phi = clean_field(g, rng)
        assert rel(recover_potential_1p(make_curl_free_1p(phi)).values, phi.values) < 1e-12

    def test_recovery_from_spectral_oracle(self, rng):
        # build B from an explicit gradient: B_j = d_j psi / |grad|, i.e. R_j phi
        # with phi = |D| psi written directly in frequency space
        g = TorusGrid.cube(2, 8)
        psi = clean_field(g, rng)
        spec = np.fft.fftn(psi.values)
        comps = [np.fft.ifftn(riesz_symbol(g, "full", j) * spec).real for j in range(2)]
        B = VectorField(g, np.stack(comps))
        assert rel(recover_potential_1p(B).values, psi.values) < 1e-12

    def test_rejects_mean(self, rng):
        g = TorusGrid.cube(2, 8)
        with pytest.raises(HypothesisError):
            make_curl_free_1p(clean_field(g, rng) + 1.0)

    def test_rejects_rotational(self, rng):
        g = TorusGrid.cube(2, 8)
        E = leray_project(random_vector(g, rng, 2))
        with pytest.raises(HypothesisError):
            recover_potential_1p(E)


class TestTwoParameterGenerators:
    def test_separable(self):
        g = TorusGrid.product(1, 1, 8)
        c = lambda t: np.cos(2 * np.pi * t / 8)  # noqa: E731
        s = lambda t: np.sin(2 * np.pi * t / 8)  # noqa: E731
        B = make_bi_curl_free(ScalarField.from_function(g, lambda x, y: c(x) * c(y)))
        expect = ScalarField.from_function(g, lambda x, y: s(x) * s(y))
        assert rel(B.component(0, 0).values, expect.values) < 1e-12

    def test_recovery_identity(self, rng):
        g = TorusGrid.product(2, 2, 8)
        phi = clean_field(g, rng, ("x", "y"))
        B = make_bi_curl_free(phi)
        total = sum((riesz_x(j, riesz_y(k, B.component(j, k))) for j in range(2) for k in range(2)),
                    ScalarField.zeros(g))
        assert rel(total.values, phi.values) < 1e-12

    def test_bi_div_free_residuals(self, rng):
        g = TorusGrid.product(2, 2, 8)
        E = make_bi_div_free(MatrixField(g, rng.standard_normal((2, 2) + g.shape)))
        assert max(divergence_residual(E.column(k), "x") for k in range(2)) < 1e-10
        assert max(divergence_residual(E.row(j), "y") for j in range(2)) < 1e-10

    def test_bi_div_free_fixes_range(self, rng):
        g = TorusGrid.product(2, 2, 8)
        E = make_bi_div_free(MatrixField(g, rng.standard_normal((2, 2) + g.shape)))
        assert rel(make_bi_div_free(E).values, E.values) < 1e-10

    def test_gradients_annihilated(self, rng):
        g = TorusGrid.product(2, 2, 8)
        B = make_bi_curl_free(clean_field(g, rng, ("x", "y")))
        assert make_bi_div_free(B).max_abs() < 1e-12 * B.max_abs()

    def test_requires_mean_zero_per_block(self, rng):
        g = TorusGrid.product(1, 1, 8)
        f = ScalarField.from_function(g, lambda x, y: np.cos(2 * np.pi * x / 8))
        with pytest.raises(HypothesisError):
            make_bi_curl_free(f)


class TestUniformGenerators:
    grid = TorusGrid.product(2, 2, 8)

    def test_frames_orthonormal(self):
        u1, u2, collinear, regular = joint_frames(self.grid)
        n1 = np.sum(u1 * u1, axis=0)
        assert np.allclose(n1[regular], 1.0)
        assert np.allclose(np.sum(u1 * u2, axis=0), 0.0)
        assert np.allclose(np.sum(u2 * u2, axis=0)[regular & ~collinear], 1.0)

    def test_div_free_both(self, rng):
        E = make_uniform_div_free(random_vector(self.grid, rng, 2, ("x", "y")))
        for p in ("x", "y"):
            assert divergence_residual(E, p) < 1e-10

    def test_curl_free_both(self, rng):
        B = make_uniform_curl_free(random_vector(self.grid, rng, 2, ("x", "y")))
        assert B.max_abs() > 0
        for p in ("x", "y"):
            assert curl_residual(B, p) < 1e-10

    def test_three_dimensional(self, rng):
        g = TorusGrid.product(3, 3, 4)
        E = make_uniform_div_free(random_vector(g, rng, 3, ("x", "y")))
        B = make_uniform_curl_free(random_vector(g, rng, 3, ("x", "y")))
        assert E.max_abs() > 0 and B.max_abs() > 0
        for p in ("x", "y"):
            assert divergence_residual(E, p) < 1e-10
            assert curl_residual(B, p) < 1e-10

    def test_needs_square(self, rng):
        with pytest.raises(ValueError):
            joint_frames(TorusGrid.product(2, 1, 8))
