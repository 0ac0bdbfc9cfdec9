# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stencil and shrinkage kernels.

Per-pixel arithmetic mirrors the NumPy reference backend in
``_kernels_np`` term for term (same evaluation order), so the two
backends produce identical bits for identical inputs.
"""

import numpy as np

from libc.math cimport sqrt


def gradient(double[:, ::1] u):
    cdef Py_ssize_t n = u.shape[0], m = u.shape[1]
    p1_arr = np.zeros((n, m))
    p2_arr = np.zeros((n, m))
    cdef double[:, ::1] p1 = p1_arr
    cdef double[:, ::1] p2 = p2_arr
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m - 1):
            p1[i, j] = u[i, j + 1] - u[i, j]
    for i in range(n - 1):
        for j in range(m):
            p2[i, j] = u[i + 1, j] - u[i, j]
    return p1_arr, p2_arr


def divergence(double[:, ::1] v1, double[:, ::1] v2):
    cdef Py_ssize_t n = v1.shape[0], m = v1.shape[1]
    out_arr = np.zeros((n, m))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n):
        for j in range(m):
            acc = 0.0
            if j < m - 1:
                acc = acc + v1[i, j]
            if j > 0:
                acc = acc - v1[i, j - 1]
            if i < n - 1:
                acc = acc + v2[i, j]
            if i > 0:
                acc = acc - v2[i - 1, j]
            out[i, j] = acc
    return out_arr


def hessian(double[:, ::1] u):
    cdef Py_ssize_t n = u.shape[0], m = u.shape[1]
    q11_arr = np.zeros((n, m))
    q22_arr = np.zeros((n, m))
    q12_arr = np.zeros((n, m))
    q21_arr = np.zeros((n, m))
    cdef double[:, ::1] q11 = q11_arr
    cdef double[:, ::1] q22 = q22_arr
    cdef double[:, ::1] q12 = q12_arr
    cdef double[:, ::1] q21 = q21_arr
    cdef Py_ssize_t i, j
    if m >= 2:
        for i in range(n):
            for j in range(1, m - 1):
                q11[i, j] = u[i, j + 1] - 2.0 * u[i, j] + u[i, j - 1]
            q11[i, 0] = u[i, 1] - u[i, 0]
            q11[i, m - 1] = u[i, m - 2] - u[i, m - 1]
    if n >= 2:
        for i in range(1, n - 1):
            for j in range(m):
                q22[i, j] = u[i + 1, j] - 2.0 * u[i, j] + u[i - 1, j]
        for j in range(m):
            q22[0, j] = u[1, j] - u[0, j]
            q22[n - 1, j] = u[n - 2, j] - u[n - 1, j]
    for i in range(n - 1):
        for j in range(1, m):
            q12[i, j] = u[i + 1, j] - u[i + 1, j - 1] - u[i, j] + u[i, j - 1]
    for i in range(1, n):
        for j in range(m - 1):
            q21[i, j] = u[i, j + 1] - u[i - 1, j + 1] - u[i, j] + u[i - 1, j]
    return q11_arr, q22_arr, q12_arr, q21_arr


def divergence_h(double[:, ::1] w11, double[:, ::1] w22,
                 double[:, ::1] w12, double[:, ::1] w21):
    cdef Py_ssize_t n = w11.shape[0], m = w11.shape[1]
    out_arr = np.zeros((n, m))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n):
        for j in range(m):
            acc = 0.0
            if m >= 2:
                if j == 0:
                    acc = acc + (w11[i, 1] - w11[i, 0])
                elif j == m - 1:
                    acc = acc + (w11[i, m - 2] - w11[i, m - 1])
                else:
                    acc = acc + (w11[i, j + 1] - 2.0 * w11[i, j] + w11[i, j - 1])
            if n >= 2:
                if i == 0:
                    acc = acc + (w22[1, j] - w22[0, j])
                elif i == n - 1:
                    acc = acc + (w22[n - 2, j] - w22[n - 1, j])
                else:
                    acc = acc + (w22[i + 1, j] - 2.0 * w22[i, j] + w22[i - 1, j])
            # scattered transpose of the q12 gather
            if i > 0 and j > 0:
                acc = acc + w12[i - 1, j]
            if i > 0 and j < m - 1:
                acc = acc - w12[i - 1, j + 1]
            if i < n - 1 and j > 0:
                acc = acc - w12[i, j]
            if i < n - 1 and j < m - 1:
                acc = acc + w12[i, j + 1]
            # scattered transpose of the q21 gather
            if i > 0 and j > 0:
                acc = acc + w21[i, j - 1]
            if i < n - 1 and j > 0:
                acc = acc - w21[i + 1, j - 1]
            if i > 0 and j < m - 1:
                acc = acc - w21[i, j]
            if i < n - 1 and j < m - 1:
                acc = acc + w21[i + 1, j]
            out[i, j] = acc
    return out_arr


def shrink_pair(double[:, ::1] a1, double[:, ::1] a2, double t):
    cdef Py_ssize_t n = a1.shape[0], m = a1.shape[1]
    o1_arr = np.zeros((n, m))
    o2_arr = np.zeros((n, m))
    cdef double[:, ::1] o1 = o1_arr
    cdef double[:, ::1] o2 = o2_arr
    cdef Py_ssize_t i, j
    cdef double mag, scale
    for i in range(n):
        for j in range(m):
            mag = sqrt(a1[i, j] * a1[i, j] + a2[i, j] * a2[i, j])
            if mag > t:
                scale = (mag - t) / mag
                o1[i, j] = scale * a1[i, j]
                o2[i, j] = scale * a2[i, j]
    return o1_arr, o2_arr


def shrink_quad(double[:, ::1] a1, double[:, ::1] a2,
                double[:, ::1] a3, double[:, ::1] a4, double t):
    cdef Py_ssize_t n = a1.shape[0], m = a1.shape[1]
    o1_arr = np.zeros((n, m))
    o2_arr = np.zeros((n, m))
    o3_arr = np.zeros((n, m))
    o4_arr = np.zeros((n, m))
    cdef double[:, ::1] o1 = o1_arr
    cdef double[:, ::1] o2 = o2_arr
    cdef double[:, ::1] o3 = o3_arr
    cdef double[:, ::1] o4 = o4_arr
    cdef Py_ssize_t i, j
    cdef double mag, scale
    for i in range(n):
        for j in range(m):
            mag = sqrt(a1[i, j] * a1[i, j] + a2[i, j] * a2[i, j]
                       + a3[i, j] * a3[i, j] + a4[i, j] * a4[i, j])
            if mag > t:
                scale = (mag - t) / mag
                o1[i, j] = scale * a1[i, j]
                o2[i, j] = scale * a2[i, j]
                o3[i, j] = scale * a3[i, j]
                o4[i, j] = scale * a4[i, j]
    return o1_arr, o2_arr, o3_arr, o4_arr


def soft_threshold(double[:, ::1] a, double t):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    out_arr = np.zeros((n, m))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            if a[i, j] > t:
                out[i, j] = a[i, j] - t
            elif a[i, j] < -t:
                out[i, j] = a[i, j] + t
    return out_arr
