"""Closed-form shrinkage (proximal) operators for the splitting subproblems.

``shrink_vector`` solves  min_x ||x||_2 + (1/(2t)) ||x - a||_2^2  for t > 0;
the scalar and field variants apply the same rule componentwise or
pixelwise.  The a = 0 case is resolved to 0 (the unique minimiser) and
there is no epsilon-regularised division: the implementation branches on
||a|| <= t, which also makes t = 0 an exact identity.
"""

from __future__ import annotations

import numpy as np

from .backend import kernels as _k
from .grid import GradientField, HessianField


def _check_threshold(t: float) -> float:
    t = float(t)
    if not (t >= 0.0) or not np.isfinite(t):
        raise ValueError(f"shrink threshold must be finite and >= 0, got {t}")
    return t


def shrink_vector(a, t: float) -> np.ndarray:
    """Shrink a small vector: max(||a|| - t, 0) * a / ||a||, 0 at a = 0."""
    t = _check_threshold(t)
    a = np.asarray(a, dtype=np.float64)
    mag = float(np.sqrt(np.sum(a * a)))
    if mag <= t:
        return np.zeros_like(a)
    return ((mag - t) / mag) * a


def shrink_scalar(a: float, t: float) -> float:
    """Soft-threshold a scalar, preserving its sign."""
    t = _check_threshold(t)
    a = float(a)
    if a > t:
        return a - t
    if a < -t:
        return a + t
    return 0.0


def shrink_field_iso(x, t: float):
    """Apply :func:`shrink_vector` to the 2- or 4-vector at every pixel."""
    t = _check_threshold(t)
    if isinstance(x, GradientField):
        return GradientField(*_k.shrink_pair(x.p1, x.p2, t))
    if isinstance(x, HessianField):
        return HessianField(*_k.shrink_quad(*x.planes, t))
    raise TypeError(f"expected GradientField or HessianField, got {type(x)!r}")


def shrink_field_aniso(x, t: float):
    """Apply :func:`shrink_scalar` to every component plane independently."""
    t = _check_threshold(t)
    if isinstance(x, GradientField):
        return GradientField(*(_k.soft_threshold(p, t) for p in x.planes))
    if isinstance(x, HessianField):
        return HessianField(*(_k.soft_threshold(p, t) for p in x.planes))
    raise TypeError(f"expected GradientField or HessianField, got {type(x)!r}")
