"""Grid types and the discrete differential operators.

Images are plain 2-D float64 arrays with 1-based (row i, column j)
indexing in all documentation; storage is row-major.  ``GradientField``
and ``HessianField`` are thin containers of same-shaped planes with
elementwise arithmetic, used both for derivatives of an image and for
the splitting/Bregman variables of the solvers.
"""

from __future__ import annotations

import numpy as np

from .backend import kernels as _k


class ShapeMismatchError(ValueError):
    """Operands do not share the required grid shape."""


def as_image(u) -> np.ndarray:
    """Coerce ``u`` to a C-contiguous float64 2-D array."""
    arr = np.ascontiguousarray(u, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeMismatchError(f"expected a 2-D image, got shape {arr.shape}")
    return arr


class GradientField:
    """Pair of same-shaped planes (p1, p2)."""

    __slots__ = ("p1", "p2")

    def __init__(self, p1, p2):
        p1 = as_image(p1)
        p2 = as_image(p2)
        if p1.shape != p2.shape:
            raise ShapeMismatchError("gradient field planes must share shape")
        self.p1 = p1
        self.p2 = p2

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape), np.zeros(shape))

    @property
    def shape(self):
        return self.p1.shape

    @property
    def planes(self):
        return (self.p1, self.p2)

    def copy(self):
        return GradientField(self.p1.copy(), self.p2.copy())

    def __add__(self, other):
        return GradientField(self.p1 + other.p1, self.p2 + other.p2)

    def __sub__(self, other):
        return GradientField(self.p1 - other.p1, self.p2 - other.p2)

    def __mul__(self, scalar):
        return GradientField(self.p1 * scalar, self.p2 * scalar)

    __rmul__ = __mul__


class HessianField:
    """Quadruple of same-shaped planes (q11, q22, q12, q21)."""

    __slots__ = ("q11", "q22", "q12", "q21")

    def __init__(self, q11, q22, q12, q21):
        planes = tuple(as_image(q) for q in (q11, q22, q12, q21))
        if any(q.shape != planes[0].shape for q in planes[1:]):
            raise ShapeMismatchError("hessian field planes must share shape")
        self.q11, self.q22, self.q12, self.q21 = planes

    @classmethod
    def zeros(cls, shape):
        z = np.zeros(shape)
        return cls(z.copy(), z.copy(), z.copy(), z)

    @property
    def shape(self):
        return self.q11.shape

    @property
    def planes(self):
        return (self.q11, self.q22, self.q12, self.q21)

    def copy(self):
        return HessianField(*(q.copy() for q in self.planes))

    def __add__(self, other):
        return HessianField(*(a + b for a, b in zip(self.planes, other.planes)))

    def __sub__(self, other):
        return HessianField(*(a - b for a, b in zip(self.planes, other.planes)))

    def __mul__(self, scalar):
        return HessianField(*(q * scalar for q in self.planes))

    __rmul__ = __mul__


def gradient(u) -> GradientField:
    """Forward-difference gradient with zero trailing column/row."""
    return GradientField(*_k.gradient(as_image(u)))


def hessian(u) -> HessianField:
    """Discrete Hessian with one-sided boundary rules for q11/q22."""
    return HessianField(*_k.hessian(as_image(u)))


def divergence(v: GradientField) -> np.ndarray:
    """Negative adjoint of :func:`gradient`: <-div v, u> = <v, grad u>."""
    return _k.divergence(v.p1, v.p2)


def divergence_h(w: HessianField) -> np.ndarray:
    """Adjoint of :func:`hessian`: <divH w, u> = <w, H u>."""
    return _k.divergence_h(*w.planes)


def _plane_list(x):
    if isinstance(x, (GradientField, HessianField)):
        return x.planes
    return (as_image(x),)


def l2_norm(x) -> float:
    """Euclidean norm of an image or of all planes of a field."""
    return float(np.sqrt(sum(np.sum(p * p) for p in _plane_list(x))))


def group_l1(x) -> float:
    """Sum over pixels of the Euclidean norm of the plane vector."""
    planes = _plane_list(x)
    sq = planes[0] * planes[0]
    for p in planes[1:]:
        sq = sq + p * p
    return float(np.sum(np.sqrt(sq)))


def aniso_l1(x) -> float:
    """Sum of componentwise absolute values over all planes."""
    return float(sum(np.sum(np.abs(p)) for p in _plane_list(x)))


def inner_product(x, y) -> float:
    """Euclidean inner product of two images or two same-kind fields."""
    px, py = _plane_list(x), _plane_list(y)
    if len(px) != len(py) or any(a.shape != b.shape for a, b in zip(px, py)):
        raise ShapeMismatchError("inner product operands must share shape")
    return float(sum(np.einsum("ij,ij->", a, b) for a, b in zip(px, py)))
