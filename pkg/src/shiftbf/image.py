"""Image representation and synthetic test images.

An image is a 2-D float64 numpy array, row-major, all samples finite.
"""

import numpy as np

from .errors import InvalidParameterError


def as_image(a) -> np.ndarray:
    """Validate and convert to the canonical 2-D float64 representation."""
    img = np.asarray(a, dtype=np.float64)
    if img.ndim != 2:
        raise InvalidParameterError(f"image must be 2-D, got shape {img.shape}")
    if img.size == 0:
        raise InvalidParameterError("image must be non-empty")
    if not np.isfinite(img).all():
        raise InvalidParameterError("image contains non-finite samples")
    return np.ascontiguousarray(img)


def checkerboard(height=256, width=256, square=32, low=0.0, high=255.0) -> np.ndarray:
    """Alternating squares of intensity `low` and `high`."""
    if height < 1 or width < 1 or square < 1:
        raise InvalidParameterError("checkerboard dimensions must be positive")
    ii, jj = np.indices((height, width))
    cells = (ii // square + jj // square) % 2
    return np.where(cells == 1, float(high), float(low))


def impulse(height, width, value=1.0) -> np.ndarray:
    """Zero image with a single `value` sample at the center."""
    img = np.zeros((height, width))
    img[height // 2, width // 2] = value
    return img


def offset_slices(n, d):
    """Aligned (source, destination) slices for a shift of `d` on an axis
    of length `n`, or None when the overlap is empty: dest[i] pairs with
    source[i] = i + d."""
    if abs(d) >= n:
        return None
    src = slice(max(0, d), n + min(0, d))
    dst = slice(max(0, -d), n - max(0, d))
    return src, dst
