"""Edge-preserving bilateral filtering in constant time per pixel.

The fast path rewrites the range kernel as a truncated sum of cosines.
Each cosine splits across the intensity difference by the angle-difference
identity, turning the bilateral sum into a fixed number of *linear*
smoothings of auxiliary images:

    numerator   += d_n * (cos(w_n f) * S[f cos(w_n f)] + sin(w_n f) * S[f sin(w_n f)])
    denominator += d_n * (cos(w_n f) * S[cos(w_n f)]   + sin(w_n f) * S[sin(w_n f)])

where S is any constant-time spatial smoother. Terms with frequencies
+w and -w contribute identically, so only half are evaluated. The direct
O(R^2)-per-pixel evaluation is kept as the oracle and baseline.
"""

import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import InvalidParameterError
from .image import as_image, offset_slices
from .kernels import (
    Expansion,
    KernelFamily,
    KernelPlan,
    eval_truncated_kernel,
    polynomial_coefficient_table,
    raised_cosine_expansion,
    select_plan,
)
from .maxfilter import compute_T
from .spatial import (
    IteratedBox,
    SpatialMode,
    apply_spatial,
    spatial_weight_table,
    support_radius,
)


@dataclass(frozen=True)
class FilterParams:
    """Bilateral filter configuration.

    `spatial` defaults to a 3-pass iterated box matching sigma_s. The
    window radius (used for the dynamic-range scan and by direct filters)
    defaults to the spatial mode's support, which is about 3*sigma_s for
    the default mode. `fixed_T` overrides the computed dynamic range, e.g.
    to reproduce worst-case full-range behavior.
    """

    sigma_s: float
    sigma_r: float
    epsilon: float = 0.0
    spatial: Optional[SpatialMode] = None
    family: KernelFamily = KernelFamily.RAISED_COSINE
    window_radius: Optional[int] = None
    fixed_T: Optional[float] = None
    truncation: str = "auto"

    def __post_init__(self):
        if self.sigma_s <= 0:
            raise InvalidParameterError("sigma_s must be positive")
        if self.sigma_r <= 0:
            raise InvalidParameterError("sigma_r must be positive")
        if not 0 <= self.epsilon < 1:
            raise InvalidParameterError("epsilon must lie in [0, 1)")
        if self.window_radius is not None and self.window_radius < 1:
            raise InvalidParameterError("window_radius must be >= 1")

    def resolved_spatial(self) -> SpatialMode:
        return self.spatial if self.spatial is not None else IteratedBox(self.sigma_s)

    def resolved_radius(self) -> int:
        if self.window_radius is not None:
            return self.window_radius
        return max(1, support_radius(self.resolved_spatial()))


class ShiftableResult(NamedTuple):
    image: np.ndarray
    plan: KernelPlan
    fallback_pixels: int


def gaussian_range(sigma_r) -> Callable:
    """Vectorized Gaussian range kernel of width sigma_r."""
    if sigma_r <= 0:
        raise InvalidParameterError("sigma_r must be positive")
    inv = 1.0 / (2.0 * sigma_r * sigma_r)

    def kernel(s):
        s = np.asarray(s, dtype=np.float64)
        return np.exp(-(s * s) * inv)

    return kernel


def expansion_range(expansion: Expansion) -> Callable:
    """Range kernel evaluating the truncated cosine expansion itself."""
    return lambda s: eval_truncated_kernel(expansion, s)


def polynomial_range(plan: KernelPlan) -> Callable:
    """Range kernel (1 - s^2 / (2 N sigma_r^2))^N for the polynomial family."""
    a = 2.0 * plan.N * plan.sigma_r ** 2

    def kernel(s):
        s = np.asarray(s, dtype=np.float64)
        return (1.0 - (s * s) / a) ** plan.N

    return kernel


def shiftable_bf(img, params: FilterParams) -> ShiftableResult:
    """Constant-time bilateral filter; returns (image, plan, fallback count).

    Pipeline: scan the dynamic range T over the spatial window, pick the
    kernel order and truncation, then accumulate one pair of smoothed
    auxiliary images per retained frequency. Pixels whose normalizer is
    driven non-positive by aggressive truncation fall back to their input
    value and are counted.
    """
    f = as_image(img)
    if params.family is KernelFamily.POLYNOMIAL:
        return shiftable_bf_poly(img, params)
    mode = params.resolved_spatial()
    radius = params.resolved_radius()
    T = float(params.fixed_T) if params.fixed_T is not None else compute_T(f, radius)
    plan = select_plan(T, params.sigma_r, params.epsilon, params.family,
                       params.truncation)
    expansion = raised_cosine_expansion(plan)
    num, den = _accumulate_cosine_terms(f, expansion, lambda im: apply_spatial(im, mode))
    out, fallbacks = _divide_with_fallback(num, den, f)
    return ShiftableResult(out, plan, fallbacks)


def _accumulate_cosine_terms(f, expansion, smooth):
    """Streaming accumulation of the numerator/denominator images.

    Peak auxiliary storage is a handful of images regardless of the order.
    Symmetric +/- frequency pairs are folded: cos is even and sin odd, so
    both terms of a pair contribute the same images.
    """
    num = np.zeros_like(f)
    den = np.zeros_like(f)
    N = expansion.plan.N
    for weight, freq, index in zip(expansion.weights, expansion.frequencies,
                                   expansion.indices):
        if 2 * index > N:
            break  # mirror partner of an already folded term
        scale = weight if 2 * index == N else 2.0 * weight
        theta = freq * f
        gc = np.cos(theta)
        gs = np.sin(theta)
        fc_bar = smooth(f * gc)
        fs_bar = smooth(f * gs)
        gc_bar = smooth(gc)
        gs_bar = smooth(gs)
        num += scale * (gc * fc_bar + gs * fs_bar)
        den += scale * (gc * gc_bar + gs * gs_bar)
    return num, den


def shiftable_bf_poly(img, params: FilterParams) -> ShiftableResult:
    """Constant-time bilateral filter with the polynomial range family.

    Requires intensities normalized to [0, 1]: the pipeline smooths the
    monomial images f^k up to degree 2N+1, which overflow on a raw
    [0, 255] scale. Truncation does not apply to this family (M = 0).
    """
    f = as_image(img)
    if float(f.min()) < -1e-9 or float(f.max()) > 1.0 + 1e-9:
        raise InvalidParameterError(
            "polynomial family requires intensities normalized to [0, 1]")
    mode = params.resolved_spatial()
    radius = params.resolved_radius()
    T = float(params.fixed_T) if params.fixed_T is not None else compute_T(f, radius)
    plan = select_plan(T, params.sigma_r, params.epsilon,
                       KernelFamily.POLYNOMIAL, params.truncation)
    table = polynomial_coefficient_table(plan)  # raises above the order cap
    degree = 2 * plan.N
    num = np.zeros_like(f)
    den = np.zeros_like(f)
    power = np.ones_like(f)
    prev_coeff = None
    for k in range(degree + 2):
        smoothed = apply_spatial(power, mode)
        if prev_coeff is not None:
            num += prev_coeff * smoothed
        if k <= degree:
            coeff = np.polynomial.polynomial.polyval(f, table[k])
            den += coeff * smoothed
            prev_coeff = coeff
        else:
            prev_coeff = None
        if k <= degree:
            power = power * f
    out, fallbacks = _divide_with_fallback(num, den, f)
    return ShiftableResult(out, plan, fallbacks)


def direct_bf(img, spatial: SpatialMode, range_kernel: Callable,
              radius: Optional[int] = None) -> np.ndarray:
    """Brute-force bilateral filter over the clamped window; oracle/baseline.

    `range_kernel` must accept numpy arrays (applied to whole difference
    images, one window offset at a time). Spatial weights follow the
    mode's effective kernel: uniform for Box, sampled Gaussian for
    FirGaussian. Pixels with a non-positive normalizer (possible only for
    kernels that are not strictly positive) fall back to the input.
    """
    f = as_image(img)
    if radius is None:
        radius = support_radius(spatial)
    radius = int(radius)
    weights = spatial_weight_table(spatial, radius)
    h, w = f.shape
    num = np.zeros_like(f)
    den = np.zeros_like(f)
    for dy in range(-radius, radius + 1):
        row = offset_slices(h, dy)
        if row is None:
            continue
        ys, yd = row
        for dx in range(-radius, radius + 1):
            wsp = weights[dy + radius, dx + radius]
            col = offset_slices(w, dx)
            if wsp == 0.0 or col is None:
                continue
            xs, xd = col
            neighbor = f[ys, xs]
            wr = wsp * range_kernel(neighbor - f[yd, xd])
            num[yd, xd] += wr * neighbor
            den[yd, xd] += wr
    out, _ = _divide_with_fallback(num, den, f)
    return out


def _divide_with_fallback(num, den, fallback):
    """Pixel-wise num/den; non-positive normalizers take the fallback value."""
    bad = ~(den > 0.0)
    n_bad = int(np.count_nonzero(bad))
    if n_bad:
        warnings.warn(
            f"{n_bad} pixel(s) had a non-positive normalizer; input values kept",
            RuntimeWarning, stacklevel=3)
        safe = np.where(bad, 1.0, den)
        out = num / safe
        out[bad] = fallback[bad]
        return out, n_bad
    return num / den, 0
