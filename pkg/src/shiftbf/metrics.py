"""Image comparison metrics."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .image import as_image


@dataclass(frozen=True)
class Metrics:
    mse: float
    mse_db: float  # 10*log10(mse); -inf sentinel when mse == 0
    max_abs: float


def metrics(a, b) -> Metrics:
    """MSE, MSE in dB and max absolute difference between two images."""
    x = as_image(a)
    y = as_image(b)
    if x.shape != y.shape:
        raise InvalidParameterError(f"shape mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    mse = float(np.mean(diff * diff))
    mse_db = 10.0 * math.log10(mse) if mse > 0 else float("-inf")
    return Metrics(mse=mse, mse_db=mse_db, max_abs=float(np.abs(diff).max()))
