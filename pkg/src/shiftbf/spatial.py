"""Constant-time linear spatial smoothing.

Three modes, all preserving constants exactly at the borders by
renormalizing over the clamped window:

* Box(radius): running-sum mean, O(1) per pixel in the radius;
* IteratedBox(sigma_s, passes): repeated box passes whose accumulated
  variance matches sigma_s^2, the O(1) Gaussian stand-in;
* FirGaussian(sigma_s, radius): truncated sampled-Gaussian convolution,
  the accuracy oracle (O(radius) per pixel).
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _core
from .errors import InvalidParameterError
from .image import as_image, offset_slices


@dataclass(frozen=True)
class Box:
    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise InvalidParameterError("box radius must be >= 0")


@dataclass(frozen=True)
class IteratedBox:
    sigma_s: float
    passes: int = 3

    def __post_init__(self):
        if self.sigma_s <= 0:
            raise InvalidParameterError("sigma_s must be positive")
        if self.passes < 1:
            raise InvalidParameterError("passes must be >= 1")


@dataclass(frozen=True)
class FirGaussian:
    sigma_s: float
    radius: int

    def __post_init__(self):
        if self.sigma_s <= 0:
            raise InvalidParameterError("sigma_s must be positive")
        if self.radius < 1:
            raise InvalidParameterError("radius must be >= 1")


SpatialMode = Union[Box, IteratedBox, FirGaussian]


def _window_counts(n, radius):
    i = np.arange(n)
    return np.minimum(i + radius, n - 1) - np.maximum(i - radius, 0) + 1.0


def box_filter(img, radius) -> np.ndarray:
    """Mean over the clamped (2r+1)^2 window via separable running sums."""
    f = as_image(img)
    radius = int(radius)
    if radius < 0:
        raise InvalidParameterError("radius must be >= 0")
    if radius == 0:
        return f.copy()
    sums = _core.window_sum_lines(f, radius)
    sums = np.ascontiguousarray(_core.window_sum_lines(
        np.ascontiguousarray(sums.T), radius).T)
    area = np.outer(_window_counts(f.shape[0], radius),
                    _window_counts(f.shape[1], radius))
    return sums / area


def extended_box_params(sigma_s, passes):
    """Radius and fractional endpoint weight for one smoothing pass.

    A plain box of radius r has variance r(r+1)/3, so integer radii can
    miss sigma_s^2/passes by far more than the rounding step suggests
    (worst near small radii). Giving the two samples just outside the box
    a weight alpha in [0, 1) interpolates continuously between the
    radius-r and radius-(r+1) boxes, so each pass matches the target
    variance exactly while keeping the running-sum structure.
    """
    if sigma_s <= 0:
        raise InvalidParameterError("sigma_s must be positive")
    if passes < 1:
        raise InvalidParameterError("passes must be >= 1")
    v = sigma_s * sigma_s / passes
    r = int(math.floor(math.sqrt(3.0 * v + 0.25) - 0.5))
    second_moment = r * (r + 1) * (2 * r + 1) / 3.0
    alpha = ((v * (2 * r + 1) - second_moment)
             / (2.0 * (r + 1) ** 2 - 2.0 * v))
    return r, alpha


def box_radius_for_sigma(sigma_s, passes) -> int:
    """Base integer radius of one pass (endpoint weights may extend it by 1)."""
    return extended_box_params(sigma_s, passes)[0]


def iterated_box_gaussian(img, sigma_s, passes=3) -> np.ndarray:
    """Gaussian-like smoothing from `passes` extended-box filters.

    The accumulated impulse-response variance equals sigma_s^2 per axis.
    """
    out = as_image(img)
    r, alpha = extended_box_params(sigma_s, passes)
    for _ in range(passes):
        out = _extended_box_2d(out, r, alpha)
    return out


def _extended_box_lines(a, r, alpha):
    n = a.shape[1]
    num = _core.window_sum_lines(a, r)
    den = _window_counts(n, r)
    if alpha > 0.0:
        den = den.copy()
        for step in (r + 1, -(r + 1)):
            pair = offset_slices(n, step)
            if pair is None:
                continue
            src, dst = pair
            num[:, dst] += alpha * a[:, src]
            den[dst] += alpha
    return num / den


def _extended_box_2d(img, r, alpha):
    out = _extended_box_lines(img, r, alpha)
    return np.ascontiguousarray(
        _extended_box_lines(np.ascontiguousarray(out.T), r, alpha).T)


def fir_gaussian(img, sigma_s, radius) -> np.ndarray:
    """Separable sampled-Gaussian smoothing, renormalized per clamped window."""
    if sigma_s <= 0:
        raise InvalidParameterError("sigma_s must be positive")
    if radius < 1:
        raise InvalidParameterError("radius must be >= 1")
    f = as_image(img)
    taps = gaussian_taps(sigma_s, radius)
    out = _fir_lines(f, taps, radius)
    out = np.ascontiguousarray(_fir_lines(np.ascontiguousarray(out.T), taps, radius).T)
    return out


def gaussian_taps(sigma_s, radius) -> np.ndarray:
    k = np.arange(-radius, radius + 1, dtype=np.float64)
    return np.exp(-(k * k) / (2.0 * sigma_s * sigma_s))


def _fir_lines(a, taps, radius):
    n = a.shape[1]
    num = np.zeros_like(a)
    den = np.zeros(n)
    for k in range(-radius, radius + 1):
        pair = offset_slices(n, k)
        if pair is None:
            continue
        src, dst = pair
        w = taps[k + radius]
        num[:, dst] += w * a[:, src]
        den[dst] += w
    return num / den


def apply_spatial(img, mode: SpatialMode) -> np.ndarray:
    if isinstance(mode, Box):
        return box_filter(img, mode.radius)
    if isinstance(mode, IteratedBox):
        return iterated_box_gaussian(img, mode.sigma_s, mode.passes)
    if isinstance(mode, FirGaussian):
        return fir_gaussian(img, mode.sigma_s, mode.radius)
    raise InvalidParameterError(f"unknown spatial mode {mode!r}")


def support_radius(mode: SpatialMode) -> int:
    """Radius beyond which the mode's effective kernel is identically zero."""
    if isinstance(mode, Box):
        return mode.radius
    if isinstance(mode, IteratedBox):
        r, alpha = extended_box_params(mode.sigma_s, mode.passes)
        return mode.passes * (r + (1 if alpha > 0 else 0))
    if isinstance(mode, FirGaussian):
        return mode.radius
    raise InvalidParameterError(f"unknown spatial mode {mode!r}")


def spatial_weight_table(mode: SpatialMode, radius=None) -> np.ndarray:
    """Explicit (2R+1)^2 window weights for direct (brute-force) filters.

    Unnormalized; direct bilateral-type filters divide matching weighted
    sums so any common scale cancels. IteratedBox has no per-window weight
    table (its border renormalization happens between passes), so it is
    rejected here.
    """
    if isinstance(mode, Box):
        r = mode.radius if radius is None else int(radius)
        return np.ones((2 * r + 1, 2 * r + 1))
    if isinstance(mode, FirGaussian):
        r = mode.radius if radius is None else int(radius)
        taps = gaussian_taps(mode.sigma_s, r)
        return np.outer(taps, taps)
    raise InvalidParameterError(
        "direct filtering supports Box and FirGaussian spatial modes only")
