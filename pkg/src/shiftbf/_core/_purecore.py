"""Pure-numpy implementations of the hot line kernels.

Same contracts as the compiled `_fastcore`; used as the fallback backend.
All functions take a C-contiguous (m, n) float64 array and operate along
rows; 2-D filters are built on top by a row pass plus a transposed pass.
"""

import numpy as np

BACKEND_NAME = "python"


def running_max_lines(a, radius):
    """Windowed running maximum along each row, windows clamped at the ends.

    out[i, j] = max(a[i, max(0, j-radius) : j+radius+1]).

    Two-pass scheme over partitions of width W = 2*radius + 1: with
    replicate padding, every output window is full-width and equals
    max(right_max[start], left_max[end]) of at most two adjacent partitions.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    m, n = a.shape
    radius = int(radius)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return a.copy()
    w = 2 * radius + 1
    padded = ((n + 2 * radius + w - 1) // w) * w
    idx = np.clip(np.arange(padded) - radius, 0, n - 1)
    q = a[:, idx].reshape(m, padded // w, w)
    left = np.maximum.accumulate(q, axis=2).reshape(m, padded)
    right = np.maximum.accumulate(q[:, :, ::-1], axis=2)[:, :, ::-1].reshape(m, padded)
    return np.maximum(right[:, :n], left[:, 2 * radius:2 * radius + n])


def window_sum_lines(a, radius):
    """Sum over the clamped window [j-radius, j+radius] along each row."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    n = a.shape[1]
    radius = int(radius)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return a.copy()
    c = np.cumsum(a, axis=1)
    hi = np.minimum(np.arange(n) + radius, n - 1)
    lo = np.arange(n) - radius
    out = c[:, hi].copy()
    inner = lo >= 1
    out[:, inner] -= c[:, lo[inner] - 1]
    return out


def max_filter_1d_counted(seq, radius):
    """Reference scalar engine for one line; returns (out, comparison count).

    Mirrors `running_max_lines` exactly so the comparison count measures the
    production recursion: one max per padded sample in each directional pass
    (first sample of every partition is free) plus one combining max per
    output sample.
    """
    seq = np.ascontiguousarray(seq, dtype=np.float64)
    n = seq.shape[0]
    radius = int(radius)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return seq.copy(), 0
    w = 2 * radius + 1
    padded = ((n + 2 * radius + w - 1) // w) * w
    q = [seq[min(max(j - radius, 0), n - 1)] for j in range(padded)]
    comparisons = 0
    left = [0.0] * padded
    right = [0.0] * padded
    for j in range(padded):
        if j % w == 0:
            left[j] = q[j]
        else:
            comparisons += 1
            left[j] = left[j - 1] if left[j - 1] > q[j] else q[j]
    for j in range(padded - 1, -1, -1):
        if j % w == w - 1:
            right[j] = q[j]
        else:
            comparisons += 1
            right[j] = right[j + 1] if right[j + 1] > q[j] else q[j]
    out = np.empty(n)
    for j in range(n):
        comparisons += 1
        rj = right[j]
        lj = left[j + 2 * radius]
        out[j] = rj if rj > lj else lj
    return out, comparisons
