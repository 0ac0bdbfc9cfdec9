"""Independent oracles shared by the unit and acceptance tests.

Everything here deliberately avoids the code paths it checks: operators
are assembled into explicit dense matrices column by column, shrinkage is
re-derived by dense grid search over the proximal objective, and the
first-order-only split Bregman loop is written out longhand.
"""

from __future__ import annotations

import numpy as np

from bhrestore import (
    GradientField,
    HessianField,
    cg_solve,
    divergence,
    divergence_h,
    gradient,
    hessian,
    shrink_field_iso,
)


def gradient_matrix(n, m):
    """Dense (2nm, nm) matrix of the gradient, built from unit images."""
    size = n * m
    g = np.zeros((2 * size, size))
    for k in range(size):
        e = np.zeros(size)
        e[k] = 1.0
        f = gradient(e.reshape(n, m))
        g[:size, k] = f.p1.ravel()
        g[size:, k] = f.p2.ravel()
    return g


def divergence_matrix(n, m):
    """Dense (nm, 2nm) matrix of the divergence, built from unit fields."""
    size = n * m
    d = np.zeros((size, 2 * size))
    for k in range(2 * size):
        planes = np.zeros(2 * size)
        planes[k] = 1.0
        f = GradientField(planes[:size].reshape(n, m), planes[size:].reshape(n, m))
        d[:, k] = divergence(f).ravel()
    return d


def hessian_matrix(n, m):
    size = n * m
    h = np.zeros((4 * size, size))
    for k in range(size):
        e = np.zeros(size)
        e[k] = 1.0
        f = hessian(e.reshape(n, m))
        for p, plane in enumerate(f.planes):
            h[p * size : (p + 1) * size, k] = plane.ravel()
    return h


def divergence_h_matrix(n, m):
    size = n * m
    d = np.zeros((size, 4 * size))
    for k in range(4 * size):
        planes = np.zeros(4 * size)
        planes[k] = 1.0
        f = HessianField(*(planes[p * size : (p + 1) * size].reshape(n, m) for p in range(4)))
        d[:, k] = divergence_h(f).ravel()
    return d


class ShrinkSearch2D:
    """Dense grid search for min_x |x|_2 + (1/(2t)) |x - a|_2^2 on 2-vectors.

    The grid covers [-limit, limit]^2 with the given step; the quadratic
    term is expanded so each case costs a few vectorised passes over
    precomputed grids.
    """

    def __init__(self, limit=1.05, step=0.001):
        axis = np.arange(-limit, limit + step / 2, step)
        x, y = np.meshgrid(axis, axis, indexing="ij")
        self.axis = axis
        self.x = x
        self.y = y
        self.r = np.sqrt(x * x + y * y)
        self.sq = x * x + y * y

    def minimize(self, a, t):
        c = 1.0 / (2.0 * t)
        obj = self.r + c * self.sq
        obj -= (2.0 * c * a[0]) * self.x
        obj -= (2.0 * c * a[1]) * self.y
        flat = int(np.argmin(obj))
        i, j = np.unravel_index(flat, obj.shape)
        return np.array([self.axis[i], self.axis[j]])


class ShrinkSearch1D:
    """Dense grid search for the scalar problem min_x |x| + (1/(2t))(x-a)^2."""

    def __init__(self, limit=1.55, step=0.001):
        self.axis = np.arange(-limit, limit + step / 2, step)

    def minimize(self, a, t):
        obj = np.abs(self.axis) + (self.axis - a) ** 2 / (2.0 * t)
        return self.axis[int(np.argmin(obj))]


def rof_split_bregman(u0, op, cfg, iterate_hook=None):
    """Dedicated first-order (TV-only) split Bregman path.

    The second-order stream is absent altogether; this is the reference
    the beta = 0 runs of the full driver must reproduce iterate for
    iterate.
    """
    u = u0.copy()
    shape = u0.shape
    v = GradientField.zeros(shape)
    b1 = GradientField.zeros(shape)
    tstar_u0 = op.adjoint(u0)
    lam = cfg.lam

    def system(x):
        out = op.adjoint(op.apply(x))
        out = out - lam * divergence(gradient(x))
        return out

    iterates = []
    for _ in range(cfg.max_outer):
        rhs = tstar_u0 + lam * divergence(b1 - v)
        u_new = cg_solve(system, rhs, u, cfg.max_cg_iters, cfg.cg_tol).x
        gu = gradient(u_new)
        v = shrink_field_iso(b1 + gu, cfg.alpha / lam)
        b1 = b1 + gu - v
        diff = np.sqrt(np.sum((u_new - u) ** 2))
        norm = np.sqrt(np.sum(u_new**2))
        u = u_new
        iterates.append(u.copy())
        if iterate_hook is not None:
            iterate_hook(u)
        if norm > 0 and diff / norm < cfg.residual_tol:
            break
    return u, iterates
