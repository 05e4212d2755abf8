# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernel.

One fused pass over (marks x particles); avoids the large temporaries the
NumPy fallback needs. Summation over particles is in fixed index order, so
results are independent of scheduling.
"""

from libc.math cimport exp, M_PI

import numpy as np


def mark_scores(const double[::1] mark_x, const double[::1] mark_y,
                const long long[::1] mark_color,
                const double[::1] inv_class_size,
                const double[::1] part_x, const double[::1] part_y,
                const long long[::1] part_color, const double[::1] part_bias,
                double sigma_x, double sigma_y):
    """Total mixture weight contributed by all particles to every mark.

    Same contract as ``nextmark._kernels_py.mark_scores``.
    """
    cdef Py_ssize_t n = mark_x.shape[0]
    cdef Py_ssize_t m = part_x.shape[0]
    cdef double ax = 1.0 / (2.0 * sigma_x * sigma_x)
    cdef double ay = 1.0 / (2.0 * sigma_y * sigma_y)
    cdef double gauss_norm = 1.0 / (2.0 * M_PI * sigma_x * sigma_y)

    out = np.zeros(n, dtype=np.float64)
    coef_arr = np.empty(m, dtype=np.float64)
    bucket_arr = np.zeros(inv_class_size.shape[0], dtype=np.float64)
    cdef double[::1] ov = out
    cdef double[::1] coef = coef_arr
    cdef double[::1] bucket = bucket_arr
    cdef Py_ssize_t i, j
    cdef double s, dx, dy, mx, my

    for i in range(m):
        coef[i] = part_bias[i] * gauss_norm
        bucket[part_color[i]] += (1.0 - part_bias[i]) * inv_class_size[part_color[i]]

    for j in range(n):
        mx = mark_x[j]
        my = mark_y[j]
        s = 0.0
        for i in range(m):
            dx = mx - part_x[i]
            dy = my - part_y[i]
            s += coef[i] * exp(-(dx * dx * ax + dy * dy * ay))
        ov[j] = s + bucket[mark_color[j]]
    return out
