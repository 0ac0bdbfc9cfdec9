"""Forward operators: identity, circular Gaussian blur, inpainting mask.

Every operator is immutable after construction and exposes ``apply`` and
``adjoint``, which are linear and mutually adjoint.  The blur uses direct
stencil summation with periodic wrap (no FFT) so results are reproducible
bit for bit.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from .grid import ShapeMismatchError, as_image


def gaussian_kernel(sigma: float, radius: int | None = None) -> np.ndarray:
    """Normalised Gaussian stencil on a (2*radius+1)^2 grid.

    ``radius`` defaults to ceil(3*sigma).
    """
    sigma = float(sigma)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if radius is None:
        radius = math.ceil(3.0 * sigma)
    radius = int(radius)
    if radius < 1:
        raise ValueError(f"radius must be a positive integer, got {radius}")
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-(x[:, None] ** 2 + x[None, :] ** 2) / (2.0 * sigma * sigma))
    return g / g.sum()


class ForwardOp:
    """Base class; subclasses implement ``apply`` and ``adjoint``."""

    def _check(self, u) -> np.ndarray:
        return as_image(u)

    def apply(self, u) -> np.ndarray:
        raise NotImplementedError

    def adjoint(self, y) -> np.ndarray:
        raise NotImplementedError


class IdentityOp(ForwardOp):
    """T = Id (denoising)."""

    def apply(self, u):
        return self._check(u).copy()

    adjoint = apply


class CircularBlurOp(ForwardOp):
    """Circular (periodic) 2-D convolution with a normalised kernel."""

    def __init__(self, kernel):
        kernel = np.ascontiguousarray(kernel, dtype=np.float64)
        if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1]:
            raise ValueError("kernel must be square")
        if kernel.shape[0] % 2 != 1:
            raise ValueError("kernel size must be odd")
        if np.any(kernel < 0) or abs(kernel.sum() - 1.0) > 1e-12:
            raise ValueError("kernel entries must be >= 0 and sum to 1")
        self.kernel = kernel

    def apply(self, u):
        return ndimage.convolve(self._check(u), self.kernel, mode="wrap")

    def adjoint(self, y):
        # circular correlation: exact adjoint of the wrapped convolution
        return ndimage.correlate(self._check(y), self.kernel, mode="wrap")


class MaskOp(ForwardOp):
    """T u = u on known pixels (mask 1), 0 on the inpainting domain."""

    def __init__(self, mask):
        mask = np.ascontiguousarray(mask, dtype=np.float64)
        if mask.ndim != 2:
            raise ValueError("mask must be 2-D")
        if not np.all((mask == 0.0) | (mask == 1.0)):
            raise ValueError("mask entries must be exactly 0 or 1")
        self.mask = mask

    def _check(self, u):
        u = as_image(u)
        if u.shape != self.mask.shape:
            raise ShapeMismatchError(
                f"image shape {u.shape} does not match mask shape {self.mask.shape}"
            )
        return u

    def apply(self, u):
        return self._check(u) * self.mask

    adjoint = apply
