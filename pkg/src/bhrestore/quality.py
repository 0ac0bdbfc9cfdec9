"""Image quality metrics: PSNR and SSIM on unit-range images."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .grid import ShapeMismatchError, as_image


@dataclass(frozen=True)
class SsimParams:
    """Standard SSIM constants for dynamic range L = 1."""

    window_size: int = 11
    sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    data_range: float = 1.0

    def __post_init__(self):
        if self.window_size % 2 != 1 or self.window_size < 3:
            raise ValueError("window size must be odd and >= 3")
        if self.k1 <= 0 or self.k2 <= 0 or self.sigma <= 0:
            raise ValueError("sigma, K1 and K2 must be positive")


def _pair(test, reference):
    test = as_image(test)
    reference = as_image(reference)
    if test.shape != reference.shape:
        raise ShapeMismatchError(
            f"shapes differ: {test.shape} vs {reference.shape}"
        )
    return test, reference


def psnr(test, reference) -> float:
    """10 log10(1 / MSE) in dB; +inf for identical images."""
    test, reference = _pair(test, reference)
    mse = float(np.mean((test - reference) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def _window1d(params: SsimParams) -> np.ndarray:
    r = params.window_size // 2
    x = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-(x * x) / (2.0 * params.sigma * params.sigma))
    return g / g.sum()


def _smooth(img, win) -> np.ndarray:
    out = correlate1d(img, win, axis=0, mode="constant")
    return correlate1d(out, win, axis=1, mode="constant")


def ssim(test, reference, params: SsimParams = SsimParams()) -> float:
    """Mean structural similarity with a Gaussian window.

    The local map is averaged over the region where the full window fits
    (no boundary padding enters the score), so images must be at least
    window_size in both dimensions.  Symmetric in its arguments and
    exactly 1.0 for identical inputs.
    """
    x, y = _pair(test, reference)
    r = params.window_size // 2
    n, m = x.shape
    if n < params.window_size or m < params.window_size:
        raise ValueError(
            f"image {x.shape} smaller than the {params.window_size}x"
            f"{params.window_size} SSIM window"
        )
    win = _window1d(params)
    mu_x = _smooth(x, win)
    mu_y = _smooth(y, win)
    sxx = _smooth(x * x, win) - mu_x * mu_x
    syy = _smooth(y * y, win) - mu_y * mu_y
    sxy = _smooth(x * y, win) - mu_x * mu_y
    c1 = (params.k1 * params.data_range) ** 2
    c2 = (params.k2 * params.data_range) ** 2
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * sxy + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (sxx + syy + c2)
    ssim_map = num / den
    return float(np.mean(ssim_map[r : n - r, r : m - r]))
