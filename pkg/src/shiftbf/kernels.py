"""Shiftable approximations of the Gaussian range kernel.

The Gaussian g(s) = exp(-s^2 / 2*sigma_r^2) on an intensity interval
[-T, T] is approximated by either of two shiftable families:

* raised cosine: cos(s / (sqrt(N) * sigma_r)) ** N, which expands into a
  binomially weighted sum of N + 1 cosines and therefore splits any
  translate into N + 1 fixed basis functions;
* polynomial: (1 - s^2 / (2 * N * sigma_r^2)) ** N, whose translates stay
  inside the span of the monomials s^0 .. s^(2N).

Both families are positive and monotone on [-T, T] once the order N
reaches a threshold that grows like (T / sigma_r)^2. For narrow kernels
the binomial weights concentrate near the center of the expansion, so the
tails can be dropped within a total weight tolerance `epsilon`, either by
exact cumulative sums or by a closed-form binomial-tail bound.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import InvalidParameterError, UnsupportedOrderError

# Table coefficient for the raised-cosine order threshold. Kept at the
# 3-digit value (not 4/pi^2 = 0.40528...) so the published threshold table
# reproduces exactly; the difference is < 0.1% of N.
RC_ORDER_COEFF = 0.405
POLY_ORDER_COEFF = 0.5

# Monomials above degree 2*30 are numerically useless in float64 even on
# [0, 1]-normalized intensities.
POLYNOMIAL_ORDER_CAP = 30


class KernelFamily(Enum):
    RAISED_COSINE = "cosine"
    POLYNOMIAL = "poly"


@dataclass(frozen=True)
class KernelPlan:
    """A fully determined range-kernel approximation.

    N is the kernel order, M the number of terms dropped from each tail of
    the cosine expansion (0 for the polynomial family), epsilon the total
    tail weight allowed to be dropped.
    """

    family: KernelFamily
    sigma_r: float
    T: float
    N: int
    M: int
    epsilon: float

    def __post_init__(self):
        if self.sigma_r <= 0:
            raise InvalidParameterError("sigma_r must be positive")
        if self.T < 0:
            raise InvalidParameterError("T must be non-negative")
        if self.N < 1:
            raise InvalidParameterError("order N must be >= 1")
        if not 0 <= self.epsilon < 1:
            raise InvalidParameterError("epsilon must lie in [0, 1)")
        if self.M < 0 or 2 * self.M >= self.N:
            raise InvalidParameterError("need 0 <= 2M < N")
        if self.epsilon == 0 and self.M != 0:
            raise InvalidParameterError("M must be 0 when epsilon is 0")

    @property
    def retained_terms(self) -> int:
        return self.N - 2 * self.M + 1

    @property
    def dropped_fraction(self) -> float:
        return 2 * self.M / (self.N + 1)


@dataclass(frozen=True)
class ExpansionTerm:
    weight: float
    frequency: float
    index: int


@dataclass(frozen=True)
class Expansion:
    """Truncated cosine expansion: sum_n weight_n * cos(frequency_n * s)."""

    plan: KernelPlan
    weights: np.ndarray = field(repr=False)
    frequencies: np.ndarray = field(repr=False)
    indices: np.ndarray = field(repr=False)

    @property
    def terms(self):
        return [ExpansionTerm(float(w), float(f), int(n))
                for w, f, n in zip(self.weights, self.frequencies, self.indices)]

    @property
    def retained_mass(self) -> float:
        return float(self.weights.sum())


def order_threshold(T, sigma_r, family=KernelFamily.RAISED_COSINE, mode="ceil") -> int:
    """Smallest valid kernel order for dynamic range T and width sigma_r.

    `mode="ceil"` (default) never under-estimates fractional thresholds and
    is what the filtering pipeline uses; `mode="round"` rounds to nearest
    and exists to reproduce the published threshold table.
    """
    if sigma_r <= 0:
        raise InvalidParameterError("sigma_r must be positive")
    if T < 0:
        raise InvalidParameterError("T must be non-negative")
    coeff = RC_ORDER_COEFF if family is KernelFamily.RAISED_COSINE else POLY_ORDER_COEFF
    x = coeff * (T / sigma_r) ** 2
    if mode == "ceil":
        n = math.ceil(x)
    elif mode == "round":
        n = math.floor(x + 0.5)
    else:
        raise InvalidParameterError(f"unknown rounding mode {mode!r}")
    return max(1, n)


def truncation_index_exact(N, epsilon) -> int:
    """Smallest M with sum_{n=0}^{M+1} C(N,n) 2^-N > epsilon/2.

    Cumulative binomial sums are kept as exact integers (incremental ratio
    updates, no factorials), so the answer is exact for any N.
    """
    _check_order_and_tolerance(N, epsilon)
    if epsilon == 0:
        return 0
    threshold = Fraction(epsilon) / 2 * (1 << N)
    c = 1  # C(N, 0)
    cum = 1
    for m in range(0, (N - 1) // 2 + 1):
        c = c * (N - m) // (m + 1)  # C(N, m+1)
        if cum + c > threshold:
            return m
        cum += c
    # epsilon < 1 guarantees the threshold is crossed by the median term
    raise AssertionError("unreachable: cumulative mass exceeds 1/2")


def truncation_index_chernoff(N, epsilon) -> int:
    """Closed-form truncation index from the binomial tail bound.

    Solves exp(-(N - 2M)^2 / 4N) = epsilon/2 for M; conservative (never
    drops more than the exact rule, up to rounding), cheap for large N.
    """
    _check_order_and_tolerance(N, epsilon)
    if epsilon == 0:
        raise InvalidParameterError(
            "epsilon must be positive for the tail-bound rule; use M=0 for epsilon=0")
    raw = math.floor((N - math.sqrt(4.0 * N * math.log(2.0 / epsilon))) / 2.0)
    return max(0, min(raw, (N - 1) // 2))


def select_plan(T, sigma_r, epsilon, family=KernelFamily.RAISED_COSINE,
                truncation="auto") -> KernelPlan:
    """Pick order and truncation for a target Gaussian of width sigma_r.

    `truncation` chooses the rule for M: "auto" switches on sigma_r (no
    truncation above 40, exact cumulative sums in (10, 40], tail bound at
    or below 10, where N is large and exact sums get pointlessly long);
    "exact", "chernoff" and "none" force a rule.
    """
    if not 0 <= epsilon < 1:
        raise InvalidParameterError("epsilon must lie in [0, 1)")
    N = order_threshold(T, sigma_r, family, mode="ceil")
    if epsilon == 0 or family is KernelFamily.POLYNOMIAL or truncation == "none":
        M = 0
    elif truncation == "auto":
        if sigma_r > 40:
            M = 0
        elif sigma_r > 10:
            M = truncation_index_exact(N, epsilon)
        else:
            M = truncation_index_chernoff(N, epsilon)
    elif truncation == "exact":
        M = truncation_index_exact(N, epsilon)
    elif truncation == "chernoff":
        M = truncation_index_chernoff(N, epsilon)
    else:
        raise InvalidParameterError(f"unknown truncation rule {truncation!r}")
    M = min(M, (N - 1) // 2)
    return KernelPlan(family=family, sigma_r=float(sigma_r), T=float(T),
                      N=N, M=M, epsilon=float(epsilon))


def binomial_weights(N, lo, hi) -> np.ndarray:
    """C(N, n) / 2^N for n in [lo, hi], each correctly rounded to float64.

    Computed from exact integers via the ratio recurrence
    C(N, n+1) = C(N, n) * (N - n) / (n + 1); safe for N in the thousands.
    """
    if not 0 <= lo <= hi <= N:
        raise InvalidParameterError("need 0 <= lo <= hi <= N")
    denom = 1 << N
    c = math.comb(N, lo)
    out = np.empty(hi - lo + 1)
    for i, n in enumerate(range(lo, hi + 1)):
        out[i] = c / denom
        c = c * (N - n) // (n + 1)
    return out


def raised_cosine_expansion(plan: KernelPlan) -> Expansion:
    """Retained terms of the cosine expansion for `plan`.

    Term n in [M, N-M] has weight C(N,n)/2^N and frequency
    (2n - N) / (sqrt(N) * sigma_r); frequencies come in symmetric pairs
    with equal weights.
    """
    if plan.family is not KernelFamily.RAISED_COSINE:
        raise InvalidParameterError("expansion defined for the raised-cosine family")
    n = np.arange(plan.M, plan.N - plan.M + 1)
    weights = binomial_weights(plan.N, plan.M, plan.N - plan.M)
    freqs = (2 * n - plan.N) / (math.sqrt(plan.N) * plan.sigma_r)
    return Expansion(plan=plan, weights=weights, frequencies=freqs, indices=n)


def eval_truncated_kernel(expansion: Expansion, s):
    """Evaluate sum_n d_n cos(w_n s); `s` may be a scalar or an array."""
    s_arr = np.asarray(s, dtype=np.float64)
    res = np.cos(np.multiply.outer(s_arr, expansion.frequencies)) @ expansion.weights
    return float(res) if np.isscalar(s) or s_arr.ndim == 0 else res


def eval_gaussian(s, sigma_r):
    """Target range kernel exp(-s^2 / (2 sigma_r^2))."""
    if sigma_r <= 0:
        raise InvalidParameterError("sigma_r must be positive")
    s_arr = np.asarray(s, dtype=np.float64)
    res = np.exp(-(s_arr * s_arr) / (2.0 * sigma_r * sigma_r))
    return float(res) if np.isscalar(s) or s_arr.ndim == 0 else res


def polynomial_coefficient_table(plan: KernelPlan) -> np.ndarray:
    """Coefficient table A with phi(s - tau) = sum_k (sum_j A[k, j] tau^j) s^k.

    Built by raising the base quadratic 1 - (s - tau)^2 / (2 N sigma_r^2)
    to the N-th power with iterated bivariate polynomial multiplication.
    Shape (2N+1, 2N+1): row k holds the tau-polynomial of the s^k
    coefficient.
    """
    if plan.family is not KernelFamily.POLYNOMIAL:
        raise InvalidParameterError("coefficient table defined for the polynomial family")
    if plan.N > POLYNOMIAL_ORDER_CAP:
        raise UnsupportedOrderError(
            f"polynomial order {plan.N} above the stability cap {POLYNOMIAL_ORDER_CAP}; "
            "use the raised-cosine family for narrow kernels")
    a = 2.0 * plan.N * plan.sigma_r ** 2
    base = np.zeros((3, 3))
    base[0, 0] = 1.0
    base[0, 2] = -1.0 / a
    base[1, 1] = 2.0 / a
    base[2, 0] = -1.0 / a
    table = np.ones((1, 1))
    for _ in range(plan.N):
        table = _conv2_full(table, base)
    return table


def polynomial_shift_coefficients(plan: KernelPlan, tau) -> np.ndarray:
    """Coefficients c_k(tau), k = 0..2N, of the shifted polynomial kernel."""
    table = polynomial_coefficient_table(plan)
    powers = np.power(float(tau), np.arange(table.shape[1]))
    return table @ powers


def _conv2_full(p, q):
    out = np.zeros((p.shape[0] + q.shape[0] - 1, p.shape[1] + q.shape[1] - 1))
    for i in range(q.shape[0]):
        for j in range(q.shape[1]):
            if q[i, j] != 0.0:
                out[i:i + p.shape[0], j:j + p.shape[1]] += q[i, j] * p
    return out


def _check_order_and_tolerance(N, epsilon):
    if N < 1:
        raise InvalidParameterError("order N must be >= 1")
    if not 0 <= epsilon < 1:
        raise InvalidParameterError("epsilon must lie in [0, 1)")
