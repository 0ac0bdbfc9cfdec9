"""Forward operators: kernels, adjointness, mask semantics."""

import numpy as np
import pytest

from bhrestore import (
    CircularBlurOp,
    IdentityOp,
    MaskOp,
    ShapeMismatchError,
    gaussian_kernel,
    inner_product,
)


class TestGaussianKernel:
    def test_near_delta_for_tiny_sigma(self):
        k = gaussian_kernel(0.05, radius=1)
        assert k[1, 1] > 0.999

    def test_point_symmetry(self):
        k = gaussian_kernel(1.7, radius=4)
        np.testing.assert_array_equal(k, k[::-1, ::-1])

    def test_normalised(self):
        for sigma in (0.5, 2.0, 4.0):
            assert abs(gaussian_kernel(sigma).sum() - 1.0) <= 1e-12

    def test_default_radius(self):
        assert gaussian_kernel(2.0).shape == (13, 13)

    def test_rejects_bad_sigma(self):
        with pytest.raises(ValueError):
            gaussian_kernel(0.0)
        with pytest.raises(ValueError):
            gaussian_kernel(-1.0)


class TestIdentity:
    def test_apply_is_identity(self, rng):
        u = rng.random((5, 7))
        op = IdentityOp()
        np.testing.assert_array_equal(op.apply(u), u)
        np.testing.assert_array_equal(op.adjoint(u), u)


class TestCircularBlur:
    def test_constant_preserved(self):
        op = CircularBlurOp(gaussian_kernel(2.0))
        u = np.full((9, 11), 0.37)
        np.testing.assert_allclose(op.apply(u), u, atol=1e-12)

    def test_mean_preserved(self, rng):
        op = CircularBlurOp(gaussian_kernel(1.3, radius=3))
        u = rng.random((12, 10))
        assert abs(op.apply(u).mean() - u.mean()) <= 1e-12

    def test_symmetric_kernel_self_adjoint(self, rng):
        op = CircularBlurOp(gaussian_kernel(1.5))
        u = rng.random((8, 9))
        np.testing.assert_allclose(op.adjoint(u), op.apply(u), atol=1e-12)

    def test_adjointness(self, rng):
        op = CircularBlurOp(gaussian_kernel(2.0, radius=4))
        for _ in range(20):
            u, y = rng.random((9, 11)), rng.random((9, 11))
            lhs = inner_product(op.apply(u), y)
            rhs = inner_product(u, op.adjoint(y))
            assert abs(lhs - rhs) <= 1e-12 * (abs(lhs) + 1.0)

    def test_circular_wrap(self):
        # an impulse at a corner must leak to the opposite edges
        op = CircularBlurOp(gaussian_kernel(1.0, radius=2))
        u = np.zeros((6, 6))
        u[0, 0] = 1.0
        out = op.apply(u)
        assert out[-1, 0] > 0 and out[0, -1] > 0 and out[-1, -1] > 0

    def test_rejects_bad_kernels(self):
        with pytest.raises(ValueError):
            CircularBlurOp(np.ones((2, 2)) / 4.0)  # even size
        with pytest.raises(ValueError):
            CircularBlurOp(np.ones((3, 3)))  # not normalised
        with pytest.raises(ValueError):
            CircularBlurOp(np.array([[1.5, -0.5, 0.0]]))  # not square


class TestMask:
    def test_all_ones_is_identity(self, rng):
        u = rng.random((4, 6))
        op = MaskOp(np.ones((4, 6)))
        np.testing.assert_array_equal(op.apply(u), u)

    def test_adjoint_equals_apply(self, rng):
        mask = (rng.random((7, 5)) > 0.4).astype(float)
        op = MaskOp(mask)
        u = rng.random((7, 5))
        np.testing.assert_array_equal(op.apply(u), op.adjoint(u))

    def test_idempotent(self, rng):
        mask = (rng.random((7, 5)) > 0.4).astype(float)
        op = MaskOp(mask)
        u = rng.random((7, 5))
        once = op.apply(u)
        np.testing.assert_array_equal(op.apply(once), once)

    def test_adjointness(self, rng):
        mask = (rng.random((9, 11)) > 0.5).astype(float)
        op = MaskOp(mask)
        u, y = rng.random((9, 11)), rng.random((9, 11))
        lhs = inner_product(op.apply(u), y)
        rhs = inner_product(u, op.adjoint(y))
        assert abs(lhs - rhs) <= 1e-12 * (abs(lhs) + 1.0)

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            MaskOp(np.full((3, 3), 0.5))

    def test_shape_mismatch(self):
        op = MaskOp(np.ones((3, 3)))
        with pytest.raises(ShapeMismatchError):
            op.apply(np.zeros((4, 4)))
