"""Deterministic synthetic test images and seeded noise models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import as_image


@dataclass(frozen=True)
class NoiseSpec:
    """Noise model: kind 'gaussian' (level = variance) or 'impulse'
    (level = density of replaced pixels)."""

    kind: str
    level: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("gaussian", "impulse"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "gaussian" and self.level < 0:
            raise ValueError("variance must be >= 0")
        if self.kind == "impulse" and not 0.0 <= self.level <= 1.0:
            raise ValueError("density must be in [0, 1]")


def make_geometric(height: int, width: int) -> np.ndarray:
    """Piecewise-affine grayscale test image in [0, 1].

    Flat background with a bright disc, a mid-gray rectangle, a dark
    disc and a linear-gradient band crossing the middle rows, so the
    middle-row slice contains both a constant and a strictly increasing
    linear segment.
    """
    if height < 16 or width < 16:
        raise ValueError("geometric image needs height and width >= 16")
    n, m = height, width
    ii, jj = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
    img = np.full((n, m), 0.2)

    # linear-gradient band across the vertical middle, rising along j
    r0, r1 = round(0.20 * n), round(0.80 * n)
    c0, c1 = round(0.42 * m), round(0.82 * m)
    ramp = 0.05 + 0.90 * (np.arange(c0, c1) - c0) / max(c1 - c0 - 1, 1)
    img[r0:r1, c0:c1] = ramp

    # bright disc, upper left
    cy, cx, rad = 0.28 * n, 0.18 * m, 0.16 * min(n, m)
    img[(ii - cy) ** 2 + (jj - cx) ** 2 <= rad * rad] = 0.95

    # dark disc, upper right
    cy, cx, rad = 0.22 * n, 0.90 * m, 0.10 * min(n, m)
    img[(ii - cy) ** 2 + (jj - cx) ** 2 <= rad * rad] = 0.05

    # rectangle, lower left
    img[round(0.62 * n) : round(0.88 * n), round(0.06 * m) : round(0.30 * m)] = 0.55
    return img


def make_stripe(height: int, width: int, angle: int = 0, gap_fraction: float = 0.3):
    """Binary stripe image plus an inpainting mask with a central gap.

    ``angle`` is 0 (horizontal stripe) or 45 (diagonal: pixel (i, j) lies
    on the stripe iff |i - j - offset| <= halfwidth).  The mask zeroes a
    central column band of width round(gap_fraction * width); mask value
    1 marks a known pixel.
    """
    if not 0.0 < gap_fraction < 1.0:
        raise ValueError("gap_fraction must lie in (0, 1)")
    n, m = height, width
    ii, jj = np.meshgrid(np.arange(n), np.arange(m), indexing="ij")
    halfwidth = max(2, round(0.07 * n))
    if angle == 0:
        on_stripe = np.abs(ii - (n - 1) / 2.0) <= halfwidth
    elif angle == 45:
        offset = (n - m) / 2.0
        on_stripe = np.abs(ii - jj - offset) <= halfwidth
    else:
        raise ValueError("angle must be 0 or 45")
    stripe = on_stripe.astype(np.float64)

    mask = np.ones((n, m))
    gap = int(round(gap_fraction * m))
    if gap > 0:
        c0 = (m - gap) // 2
        mask[:, c0 : c0 + gap] = 0.0
    return stripe, mask


def add_noise(u, spec: NoiseSpec) -> np.ndarray:
    """Apply the seeded noise model; output is clamped to [0, 1]."""
    u = as_image(u)
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "gaussian":
        noisy = u + rng.normal(0.0, np.sqrt(spec.level), size=u.shape)
    else:
        hits = rng.random(u.shape) < spec.level
        values = rng.random(u.shape)
        noisy = np.where(hits, values, u)
    return np.clip(noisy, 0.0, 1.0)
