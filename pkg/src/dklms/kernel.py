"""Gaussian RBF kernel evaluation and data-driven bandwidth selection."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateDataError, ShapeError


@dataclass(frozen=True)
class KernelParams:
    """Kernel spread sigma, in input-space distance units."""

    sigma: float

    def __post_init__(self):
        # the negated comparison also rejects NaN
        if not self.sigma > 0:
            raise ConfigError(f"kernel.sigma: must be > 0, got {self.sigma!r}")


def gaussian_kernel(x, y, params):
    """Evaluate exp(-||x - y||^2 / sigma^2).

    The squared distance is computed once, so swapping the arguments gives
    the same value bit for bit. Note the plain sigma^2 denominator, there is
    no factor of two.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ShapeError(f"gaussian_kernel: shapes {x.shape} and {y.shape} differ")
    diff = x.ravel() - y.ravel()
    return float(np.exp(-np.dot(diff, diff) / (params.sigma * params.sigma)))


def silverman_bandwidth(samples):
    """Pick sigma = 1.06 * sbar * N^(-1/5) from a pilot sample.

    sbar is the per-coordinate sample standard deviation (ddof=1) averaged
    over coordinates and N is the sample count. Scalar samples may be given
    as a flat array.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ShapeError(f"silverman_bandwidth: expected 2-d samples, got {arr.ndim}-d")
    n = arr.shape[0]
    if n < 2:
        raise DegenerateDataError("silverman_bandwidth: need at least 2 samples")
    sbar = float(np.mean(np.std(arr, axis=0, ddof=1)))
    if not sbar > 0:
        raise DegenerateDataError("silverman_bandwidth: samples have zero spread")
    return KernelParams(sigma=1.06 * sbar * n ** (-0.2))
