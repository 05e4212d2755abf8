"""Pure-NumPy scoring kernel (fallback when the compiled extension is absent).

Mathematically identical to ``nextmark._core.mark_scores``; results may
differ from the compiled kernel by float rounding only (different summation
and exp implementations), never by more than a few ulp relative.
"""

from __future__ import annotations

import math

import numpy as np

# particles per chunk; keeps the (chunk, n_marks) scratch arrays cache-sized
_CHUNK = 128


def mark_scores(mark_x, mark_y, mark_color, inv_class_size,
                part_x, part_y, part_color, part_bias,
                sigma_x, sigma_y):
    """Total mixture weight contributed by all particles to every mark.

    For mark j this is

        sum_i  b_i * N(mx_j; px_i, sx^2) * N(my_j; py_i, sy^2)
             + (1 - b_i) * [color_j == color_i] / |class(color_j)|

    with ``inv_class_size[c]`` holding 1/|class c| (0 for an empty class).
    Returns a float64 array over marks.
    """
    n = mark_x.shape[0]
    m = part_x.shape[0]
    ax = 1.0 / (2.0 * sigma_x * sigma_x)
    ay = 1.0 / (2.0 * sigma_y * sigma_y)
    gauss_norm = 1.0 / (2.0 * math.pi * sigma_x * sigma_y)

    coef = part_bias * gauss_norm
    scores = np.zeros(n, dtype=np.float64)
    scratch = np.empty((min(_CHUNK, m), n), dtype=np.float64)
    work = np.empty_like(scratch)
    for lo in range(0, m, _CHUNK):
        hi = min(lo + _CHUNK, m)
        k = hi - lo
        e = scratch[:k]
        w = work[:k]
        np.subtract(mark_x[None, :], part_x[lo:hi, None], out=e)
        np.multiply(e, e, out=e)
        np.multiply(e, ax, out=e)
        np.subtract(mark_y[None, :], part_y[lo:hi, None], out=w)
        np.multiply(w, w, out=w)
        np.multiply(w, ay, out=w)
        np.add(e, w, out=e)
        np.negative(e, out=e)
        np.exp(e, out=e)
        scores += coef[lo:hi] @ e

    # Color side: each particle spreads (1-b)/|class| over its class's marks.
    bucket = np.bincount(part_color,
                         weights=(1.0 - part_bias) * inv_class_size[part_color],
                         minlength=inv_class_size.shape[0])
    scores += bucket[mark_color]
    return scores
