# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise integrand kernels (hot loops of the angular integrals).

Same contract as the pure-numpy reference in ``_kernels_py``: pairs at chord
distance <= eps contribute zero.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()

BACKEND_NAME = "compiled"


def pair_product_sum(
    const double[:, ::1] nodes_k,
    const double[::1] weights_k,
    const double[:, ::1] nodes_s,
    const double[::1] weights_s,
    double coef,
    const double[::1] k0_hat,
    int n_exp,
    double sign,
    double eps,
):
    cdef Py_ssize_t nk = nodes_k.shape[0]
    cdef Py_ssize_t ns = nodes_s.shape[0]
    cdef Py_ssize_t i, j
    cdef double kx, ky, kz, dx, dy, dz, d2, d, val, row, total
    cdef double ax = k0_hat[0], ay = k0_hat[1], az = k0_hat[2]
    cdef double[::1] ws_exp = np.empty(ns)
    cdef double[::1] sx = np.ascontiguousarray(nodes_s[:, 0])
    cdef double[::1] sy = np.ascontiguousarray(nodes_s[:, 1])
    cdef double[::1] sz = np.ascontiguousarray(nodes_s[:, 2])

    for j in range(ns):
        ws_exp[j] = weights_s[j] * exp(coef * (sx[j] * ax + sy[j] * ay + sz[j] * az))

    total = 0.0
    for i in range(nk):
        kx = nodes_k[i, 0]
        ky = nodes_k[i, 1]
        kz = nodes_k[i, 2]
        row = 0.0
        for j in range(ns):
            dx = kx + sign * sx[j]
            dy = ky + sign * sy[j]
            dz = kz + sign * sz[j]
            d2 = dx * dx + dy * dy + dz * dz
            d = sqrt(d2)
            if d <= eps:
                continue
            val = 1.0 / d if n_exp == 1 else 1.0 / d2
            row += val * ws_exp[j]
        total += weights_k[i] * exp(coef * (kx * ax + ky * ay + kz * az)) * row
    return total


def pair_values(
    const double[:, ::1] dirs_k,
    const double[:, ::1] dirs_s,
    double coef,
    const double[::1] k0_hat,
    int n_exp,
    double sign,
    double eps,
):
    cdef Py_ssize_t m = dirs_k.shape[0]
    cdef Py_ssize_t i
    cdef double dx, dy, dz, d2, d, dot
    cdef double ax = k0_hat[0], ay = k0_hat[1], az = k0_hat[2]
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr

    for i in range(m):
        dx = dirs_k[i, 0] + sign * dirs_s[i, 0]
        dy = dirs_k[i, 1] + sign * dirs_s[i, 1]
        dz = dirs_k[i, 2] + sign * dirs_s[i, 2]
        d2 = dx * dx + dy * dy + dz * dz
        d = sqrt(d2)
        if d <= eps:
            out[i] = 0.0
            continue
        dot = (
            (dirs_k[i, 0] + dirs_s[i, 0]) * ax
            + (dirs_k[i, 1] + dirs_s[i, 1]) * ay
            + (dirs_k[i, 2] + dirs_s[i, 2]) * az
        )
        out[i] = exp(coef * dot) / (d if n_exp == 1 else d2)
    return out_arr
