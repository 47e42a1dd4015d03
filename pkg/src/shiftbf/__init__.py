"""Constant-time edge-preserving image filtering with shiftable range kernels.

Public surface:

* `shiftable_bf` / `direct_bf`: fast and brute-force bilateral filters;
* `coarse_nlm_shiftable` / `direct_nlm`: coarse non-local means;
* `kernels`: range-kernel orders, truncation rules and expansions;
* `max_filter_1d` / `max_filter_2d` / `compute_T`: O(1) windowed maxima
  and exact dynamic-range estimation;
* `box_filter` / `iterated_box_gaussian` / `fir_gaussian`: spatial smoothers;
* `load_pgm` / `save_pgm`, `metrics`: I/O and comparison helpers.

Everything operates on 2-D float64 numpy arrays. All filters are pure
functions of their inputs and safe to call concurrently.
"""

from ._core import available_backends, backend_name, use_backend
from .bilateral import (
    FilterParams,
    ShiftableResult,
    direct_bf,
    expansion_range,
    gaussian_range,
    polynomial_range,
    shiftable_bf,
    shiftable_bf_poly,
)
from .errors import (
    InvalidParameterError,
    PgmParseError,
    ShiftBFError,
    TermBudgetError,
    UnsupportedOrderError,
)
from .image import as_image, checkerboard, impulse
from .kernels import (
    Expansion,
    ExpansionTerm,
    KernelFamily,
    KernelPlan,
    eval_gaussian,
    eval_truncated_kernel,
    order_threshold,
    polynomial_shift_coefficients,
    raised_cosine_expansion,
    select_plan,
    truncation_index_chernoff,
    truncation_index_exact,
)
from .maxfilter import brute_force_T, compute_T, max_filter_1d, max_filter_2d
from .metrics import Metrics, metrics
from .nlm import NlmResult, PatchSpec, coarse_nlm_shiftable, direct_nlm
from .pgmio import PgmHeader, inspect_pgm, load_pgm, save_pgm
from .spatial import (
    Box,
    FirGaussian,
    IteratedBox,
    box_filter,
    fir_gaussian,
    iterated_box_gaussian,
)

__version__ = "0.1.0"
