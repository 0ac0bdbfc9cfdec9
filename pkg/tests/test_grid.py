"""Discrete operators: hand-evaluated stencils, adjointness, dense oracle."""

import numpy as np
import pytest

from bhrestore import (
    GradientField,
    HessianField,
    ShapeMismatchError,
    aniso_l1,
    divergence,
    divergence_h,
    gradient,
    group_l1,
    hessian,
    inner_product,
    l2_norm,
)
from oracles import (
    divergence_h_matrix,
    divergence_matrix,
    gradient_matrix,
    hessian_matrix,
)

SHAPES = [(1, 1), (1, 7), (7, 1), (2, 2), (8, 13), (16, 16), (31, 17)]


def random_fields(rng, shape):
    u = rng.standard_normal(shape)
    v = GradientField(rng.standard_normal(shape), rng.standard_normal(shape))
    w = HessianField(*(rng.standard_normal(shape) for _ in range(4)))
    return u, v, w


class TestGradient:
    def test_constant_image_vanishes(self):
        for shape in SHAPES:
            g = gradient(np.full(shape, 3.7))
            assert not g.p1.any() and not g.p2.any()

    def test_two_by_two_hand_case(self):
        g = gradient([[0.0, 1.0], [2.0, 3.0]])
        np.testing.assert_array_equal(g.p1, [[1.0, 0.0], [1.0, 0.0]])
        np.testing.assert_array_equal(g.p2, [[2.0, 2.0], [0.0, 0.0]])

    def test_column_ramp(self):
        u = np.tile(np.arange(5.0), (4, 1))
        g = gradient(u)
        expected = np.ones((4, 5))
        expected[:, -1] = 0.0
        np.testing.assert_array_equal(g.p1, expected)
        assert not g.p2.any()

    def test_trailing_boundary_zero(self, rng):
        for shape in SHAPES:
            g = gradient(rng.standard_normal(shape))
            assert not g.p1[:, -1].any()
            assert not g.p2[-1, :].any()

    def test_linearity(self, rng):
        u, up = rng.standard_normal((8, 13)), rng.standard_normal((8, 13))
        a, b = 2.25, -0.5
        combo = gradient(a * u + b * up)
        ref = a * gradient(u) + b * gradient(up)
        for got, want in zip(combo.planes, ref.planes):
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-14)


class TestHessian:
    def test_constant_image_vanishes(self):
        for shape in SHAPES:
            h = hessian(np.full(shape, -1.25))
            assert not any(q.any() for q in h.planes)

    def test_column_ramp_3x4(self):
        u = np.tile(np.arange(1.0, 5.0), (3, 1))
        h = hessian(u)
        expected_q11 = np.zeros((3, 4))
        expected_q11[:, 0] = 1.0
        expected_q11[:, -1] = -1.0
        np.testing.assert_array_equal(h.q11, expected_q11)
        assert not h.q22.any() and not h.q12.any() and not h.q21.any()

    def test_two_by_two_hand_case(self):
        h = hessian([[0.0, 1.0], [2.0, 3.0]])
        np.testing.assert_array_equal(h.q11, [[1.0, -1.0], [1.0, -1.0]])
        np.testing.assert_array_equal(h.q22, [[2.0, 2.0], [-2.0, -2.0]])
        # the single interior-rule entry evaluates to u22 - u21 - u12 + u11 = 0
        assert not h.q12.any() and not h.q21.any()

    def test_boundary_zeros(self, rng):
        for shape in SHAPES:
            h = hessian(rng.standard_normal(shape))
            assert not h.q12[-1, :].any() and not h.q12[:, 0].any()
            assert not h.q21[0, :].any() and not h.q21[:, -1].any()

    def test_linearity(self, rng):
        u, up = rng.standard_normal((8, 13)), rng.standard_normal((8, 13))
        combo = hessian(1.5 * u - 3.0 * up)
        ref = 1.5 * hessian(u) - 3.0 * hessian(up)
        for got, want in zip(combo.planes, ref.planes):
            np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-14)


class TestDivergence:
    def test_zero_field(self):
        assert not divergence(GradientField.zeros((4, 5))).any()
        assert not divergence_h(HessianField.zeros((4, 5))).any()

    def test_unit_impulse_cases(self):
        v = GradientField([[1.0, 0.0], [0.0, 0.0]], np.zeros((2, 2)))
        np.testing.assert_array_equal(divergence(v), [[1.0, -1.0], [0.0, 0.0]])
        v = GradientField(np.zeros((2, 2)), [[1.0, 0.0], [0.0, 0.0]])
        np.testing.assert_array_equal(divergence(v), [[1.0, 0.0], [-1.0, 0.0]])

    def test_divh_interior_impulse(self):
        w11 = np.zeros((3, 3))
        w11[1, 1] = 1.0
        out = divergence_h(HessianField(w11, *(np.zeros((3, 3)) for _ in range(3))))
        np.testing.assert_array_equal(out[1], [1.0, -2.0, 1.0])
        assert not out[0].any() and not out[2].any()

    @pytest.mark.parametrize("shape", [(1, 7), (8, 13), (16, 16), (31, 17)])
    def test_adjointness_random(self, rng, shape):
        for _ in range(100):
            u, v, w = random_fields(rng, shape)
            gu, hu = gradient(u), hessian(u)
            lhs = inner_product(-divergence(v), u)
            rhs = inner_product(v, gu)
            assert abs(lhs - rhs) <= 1e-12 * (l2_norm(v) * l2_norm(gu) + 1.0)
            lhs = inner_product(divergence_h(w), u)
            rhs = inner_product(w, hu)
            assert abs(lhs - rhs) <= 1e-12 * (l2_norm(w) * l2_norm(hu) + 1.0)

    def test_dense_matrix_oracle(self):
        for n in range(1, 7):
            for m in range(1, 8):
                g = gradient_matrix(n, m)
                d = divergence_matrix(n, m)
                np.testing.assert_allclose(g.T, -d, atol=1e-12)
                h = hessian_matrix(n, m)
                dh = divergence_h_matrix(n, m)
                np.testing.assert_allclose(h.T, dh, atol=1e-12)


class TestNorms:
    def test_l2_image(self):
        assert l2_norm(np.array([[3.0, 0.0], [0.0, 4.0]])) == 5.0

    def test_group_l1_gradient_field(self):
        v = GradientField(np.full((2, 2), 3.0), np.full((2, 2), 4.0))
        assert group_l1(v) == pytest.approx(20.0, abs=1e-12)

    def test_zero_operands(self):
        z = np.zeros((3, 4))
        assert l2_norm(z) == 0.0
        assert group_l1(GradientField.zeros((3, 4))) == 0.0
        assert aniso_l1(HessianField.zeros((3, 4))) == 0.0

    def test_group_l1_positive_iff_nonzero(self, rng):
        w = HessianField(*(rng.standard_normal((5, 6)) for _ in range(4)))
        assert group_l1(w) > 0.0

    def test_aniso_l1(self):
        v = GradientField([[1.0, -2.0]], [[0.5, 0.0]])
        assert aniso_l1(v) == pytest.approx(3.5, abs=1e-15)

    def test_inner_product_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            inner_product(np.zeros((2, 3)), np.zeros((3, 2)))
        with pytest.raises(ShapeMismatchError):
            inner_product(GradientField.zeros((2, 2)), np.zeros((2, 2)))
