"""Coarse non-local means over a small set of patch offsets.

Similarity between pixels is measured on a handful of patch samples
f(x + u_1), ..., f(x + u_p) with a separable (diagonal) multivariate
Gaussian range kernel. Each component factor is expanded in cosines like
the bilateral filter; the product of the per-component expansions becomes
a tensor-product sum over multi-indices, each contributing one batch of
spatially smoothed auxiliary images. The overall term count scales as the
product of the per-component retained orders, so two guards apply: a
per-component order cap and a global multi-index budget.
"""

import itertools
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .bilateral import _divide_with_fallback, gaussian_range
from .errors import InvalidParameterError, TermBudgetError
from .image import as_image, offset_slices
from .kernels import KernelPlan, eval_truncated_kernel, raised_cosine_expansion, select_plan
from .maxfilter import compute_T
from .spatial import SpatialMode, apply_spatial, spatial_weight_table

DEFAULT_COMPONENT_ORDER_CAP = 10
DEFAULT_TERM_BUDGET = 10_000


@dataclass(frozen=True)
class PatchSpec:
    """Patch offsets (first must be the origin) and per-component widths."""

    offsets: Tuple[Tuple[int, int], ...]
    sigmas: Tuple[float, ...]

    def __post_init__(self):
        offsets = tuple((int(dy), int(dx)) for dy, dx in self.offsets)
        sigmas = tuple(float(s) for s in self.sigmas)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "sigmas", sigmas)
        p = len(offsets)
        if p == 0 or p > 3:
            raise InvalidParameterError("patch must have 1 to 3 offsets")
        if len(sigmas) != p:
            raise InvalidParameterError("need one sigma per patch offset")
        if offsets[0] != (0, 0):
            raise InvalidParameterError("first patch offset must be the origin")
        if len(set(offsets)) != p:
            raise InvalidParameterError("patch offsets must be distinct")
        if any(s <= 0 for s in sigmas):
            raise InvalidParameterError("patch sigmas must be positive")

    @property
    def size(self) -> int:
        return len(self.offsets)

    @property
    def max_offset_norm(self) -> int:
        return max(max(abs(dy), abs(dx)) for dy, dx in self.offsets)


class NlmResult(NamedTuple):
    image: np.ndarray
    plans: Tuple[KernelPlan, ...]
    fallback_pixels: int


def _shifted_copy(f, offset):
    """f(x + u) with replicate padding at the borders."""
    h, w = f.shape
    dy, dx = offset
    rows = np.clip(np.arange(h) + dy, 0, h - 1)
    cols = np.clip(np.arange(w) + dx, 0, w - 1)
    return f[np.ix_(rows, cols)]


def coarse_nlm_shiftable(img, patch: PatchSpec, spatial: SpatialMode, radius: int,
                         epsilon: float, truncation: str = "auto",
                         max_component_order: int = DEFAULT_COMPONENT_ORDER_CAP,
                         term_budget: int = DEFAULT_TERM_BUDGET) -> NlmResult:
    """Constant-time coarse non-local means.

    The dynamic range T is scanned once over windows of radius
    `radius + max offset norm`, which bounds every per-component intensity
    difference, and shared by all components. With a single origin offset
    this degenerates to the bilateral filter.
    """
    f = as_image(img)
    radius = int(radius)
    if radius < 0:
        raise InvalidParameterError("radius must be >= 0")
    T = compute_T(f, radius + patch.max_offset_norm)
    plans = tuple(select_plan(T, s, epsilon, truncation=truncation)
                  for s in patch.sigmas)
    for j, plan in enumerate(plans):
        if plan.retained_terms > max_component_order:
            raise TermBudgetError(
                f"patch component {j} retains {plan.retained_terms} terms after "
                f"truncation, above the per-component cap of {max_component_order}")
    total_terms = 1
    for plan in plans:
        total_terms *= plan.retained_terms
    if total_terms > term_budget:
        raise TermBudgetError(
            f"tensor expansion needs {total_terms} multi-index terms, "
            f"exceeding the term budget of {term_budget}")

    p = patch.size
    # Per component: trig images of every retained frequency, built once.
    per_component = []
    for plan, offset in zip(plans, patch.offsets):
        expansion = raised_cosine_expansion(plan)
        fj = f if offset == (0, 0) else _shifted_copy(f, offset)
        terms = [(w, np.cos(om * fj), np.sin(om * fj))
                 for w, om in zip(expansion.weights, expansion.frequencies)]
        per_component.append(terms)

    smooth = lambda im: apply_spatial(im, spatial)
    num = np.zeros_like(f)
    den = np.zeros_like(f)
    for combo in itertools.product(*per_component):
        weight = 1.0
        for w, _, _ in combo:
            weight *= w
        contrib_num = np.zeros_like(f)
        contrib_den = np.zeros_like(f)
        for mask in range(1 << p):
            aux = np.ones_like(f)
            for j, (_, cos_img, sin_img) in enumerate(combo):
                aux = aux * (sin_img if (mask >> j) & 1 else cos_img)
            contrib_num += aux * smooth(f * aux)
            contrib_den += aux * smooth(aux)
        num += weight * contrib_num
        den += weight * contrib_den
    out, fallbacks = _divide_with_fallback(num, den, f)
    return NlmResult(out, plans, fallbacks)


def direct_nlm(img, patch: PatchSpec, spatial: SpatialMode, radius: int,
               range_kernels="gaussian") -> np.ndarray:
    """Literal windowed evaluation of coarse non-local means; test oracle.

    `range_kernels` is "gaussian" (per-component Gaussians of the patch
    sigmas) or a sequence of vectorized callables, one per component, e.g.
    truncated expansions for exact comparisons against the fast path.
    """
    f = as_image(img)
    radius = int(radius)
    if range_kernels == "gaussian":
        kernels: Sequence[Callable] = [gaussian_range(s) for s in patch.sigmas]
    else:
        kernels = list(range_kernels)
        if len(kernels) != patch.size:
            raise InvalidParameterError("need one range kernel per patch offset")
    weights = spatial_weight_table(spatial, radius)
    shifted = [f if off == (0, 0) else _shifted_copy(f, off) for off in patch.offsets]
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
            wr = np.full(f[yd, xd].shape, wsp)
            for fj, kernel in zip(shifted, kernels):
                wr = wr * kernel(fj[yd, xd] - fj[ys, xs])
            num[yd, xd] += wr * f[ys, xs]
            den[yd, xd] += wr
    out, _ = _divide_with_fallback(num, den, f)
    return out


def expansion_range_for(plan: KernelPlan) -> Callable:
    """Vectorized truncated-expansion kernel matching one NLM component."""
    expansion = raised_cosine_expansion(plan)
    return lambda s: eval_truncated_kernel(expansion, s)
