"""Pure-NumPy stencil and shrinkage kernels (reference backend).

These routines define the exact semantics that the compiled backend in
``_kernels_cy`` must reproduce; the per-pixel arithmetic is written so the
two backends agree bitwise.  All functions take C-contiguous float64 arrays,
allocate fresh outputs and never mutate their inputs.

Boundary conventions: the gradient uses forward differences that are zero
on the trailing column/row; the two divergences are the exact negative
adjoint / adjoint of the gradient and Hessian stencils, so

    <-divergence(v), u> == <v, gradient(u)>
    <divergence_h(w), u> == <w, hessian(u)>

hold up to rounding for all shapes, including degenerate 1xM and Nx1 grids.
"""

from __future__ import annotations

import numpy as np


def gradient(u):
    """Forward differences of ``u``: p1 along columns, p2 along rows.

    p1(i, m-1) = 0 and p2(n-1, j) = 0 (trailing boundary).
    """
    p1 = np.zeros_like(u)
    p2 = np.zeros_like(u)
    p1[:, :-1] = u[:, 1:] - u[:, :-1]
    p2[:-1, :] = u[1:, :] - u[:-1, :]
    return p1, p2


def divergence(v1, v2):
    """Discrete divergence, the negative adjoint of :func:`gradient`."""
    out = np.zeros_like(v1)
    out[:, :-1] += v1[:, :-1]
    out[:, 1:] -= v1[:, :-1]
    out[:-1, :] += v2[:-1, :]
    out[1:, :] -= v2[:-1, :]
    return out


def hessian(u):
    """Discrete Hessian planes (q11, q22, q12, q21).

    q11/q22 are second differences along columns/rows with one-sided
    first differences on the first/last column/row; q12/q21 are mixed
    differences, zero on their respective boundary row and column.
    """
    n, m = u.shape
    q11 = np.zeros_like(u)
    q22 = np.zeros_like(u)
    q12 = np.zeros_like(u)
    q21 = np.zeros_like(u)
    if m >= 2:
        q11[:, 1:-1] = u[:, 2:] - 2.0 * u[:, 1:-1] + u[:, :-2]
        q11[:, 0] = u[:, 1] - u[:, 0]
        q11[:, -1] = u[:, -2] - u[:, -1]
    if n >= 2:
        q22[1:-1, :] = u[2:, :] - 2.0 * u[1:-1, :] + u[:-2, :]
        q22[0, :] = u[1, :] - u[0, :]
        q22[-1, :] = u[-2, :] - u[-1, :]
    q12[:-1, 1:] = u[1:, 1:] - u[1:, :-1] - u[:-1, 1:] + u[:-1, :-1]
    q21[1:, :-1] = u[1:, 1:] - u[:-1, 1:] - u[1:, :-1] + u[:-1, :-1]
    return q11, q22, q12, q21


def divergence_h(w11, w22, w12, w21):
    """Second divergence, the exact adjoint of :func:`hessian`.

    The q11/q22 stencils are symmetric, so their adjoints reuse the same
    stencil; the mixed terms scatter each interior block to its four
    neighbouring positions (the transpose of the q12/q21 gather).
    """
    n, m = w11.shape
    out = np.zeros_like(w11)
    if m >= 2:
        out[:, 1:-1] += w11[:, 2:] - 2.0 * w11[:, 1:-1] + w11[:, :-2]
        out[:, 0] += w11[:, 1] - w11[:, 0]
        out[:, -1] += w11[:, -2] - w11[:, -1]
    if n >= 2:
        out[1:-1, :] += w22[2:, :] - 2.0 * w22[1:-1, :] + w22[:-2, :]
        out[0, :] += w22[1, :] - w22[0, :]
        out[-1, :] += w22[-2, :] - w22[-1, :]
    blk = w12[:-1, 1:]
    out[1:, 1:] += blk
    out[1:, :-1] -= blk
    out[:-1, 1:] -= blk
    out[:-1, :-1] += blk
    blk = w21[1:, :-1]
    out[1:, 1:] += blk
    out[:-1, 1:] -= blk
    out[1:, :-1] -= blk
    out[:-1, :-1] += blk
    return out


def shrink_pair(a1, a2, t):
    """Pixelwise 2-vector shrinkage: max(|a|-t, 0) * a / |a|, 0 at a = 0."""
    mag = np.sqrt(a1 * a1 + a2 * a2)
    scale = np.zeros_like(mag)
    live = mag > t
    scale[live] = (mag[live] - t) / mag[live]
    return scale * a1, scale * a2


def shrink_quad(a1, a2, a3, a4, t):
    """Pixelwise 4-vector shrinkage (same rule as :func:`shrink_pair`)."""
    mag = np.sqrt(a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4)
    scale = np.zeros_like(mag)
    live = mag > t
    scale[live] = (mag[live] - t) / mag[live]
    return scale * a1, scale * a2, scale * a3, scale * a4


def soft_threshold(a, t):
    """Elementwise scalar soft-thresholding with threshold ``t >= 0``."""
    return np.where(a > t, a - t, np.where(a < -t, a + t, 0.0))
