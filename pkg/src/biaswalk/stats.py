"""Log-binned conditional means, distribution estimators, and power-law fits.

The measurement protocol is shared by every consumer in the package: curves
are binned on logarithmically spaced separators d(i) = base**i, each bin is
summarized by the arithmetic mean of its values at the geometric-mean
abscissa sqrt(d(i) * d(i+1)), and exponents come from unweighted ordinary
least squares on the log-log points of the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BinnedCurve",
    "PowerLawFit",
    "InsufficientDataError",
    "binned_conditional_mean",
    "curve_from_points",
    "ccdf",
    "ccdf_tail_exponent",
    "fit_powerlaw",
    "loglog_correlation",
]


class InsufficientDataError(ValueError):
    """Raised when a fit is requested on fewer than three usable bins."""


@dataclass(frozen=True)
class BinnedCurve:
    """A log-binned conditional mean y(x).

    separators[i], separators[i+1] bound bin i; abscissa[i] is their
    geometric mean. Empty bins are omitted, so len(abscissa) can be smaller
    than len(separators) - 1 would suggest.
    """

    separators: np.ndarray
    abscissa: np.ndarray
    mean: np.ndarray
    count: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.separators) <= 0):
            raise ValueError("bin separators must be strictly increasing")


@dataclass(frozen=True)
class PowerLawFit:
    """OLS fit y = 10**intercept * x**exponent over a curve's log-log points."""

    exponent: float
    intercept: float
    k_min: float
    r_squared: float
    bin_count: int
    k_max: float | None = None


def binned_conditional_mean(keys, values, base: float = 2.0) -> BinnedCurve:
    """Mean of `values` conditioned on `keys`, in log-spaced key bins.

    Bin i covers [base**i, base**(i+1)); every sample lands in exactly one
    bin. Keys must be >= 1 (degree-like).
    """
    keys = np.asarray(keys, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if keys.size == 0:
        raise ValueError("empty input")
    if keys.shape != values.shape:
        raise ValueError("keys and values must have the same length")
    if keys.min() < 1:
        raise ValueError("keys must be >= 1")
    if base <= 1:
        raise ValueError("bin base must be > 1")

    lo = math.floor(math.log(keys.min()) / math.log(base))
    hi = math.ceil(math.log(keys.max()) / math.log(base) + 1e-12)
    if base ** hi <= keys.max():
        hi += 1
    seps = base ** np.arange(lo, hi + 1)
    # right-open bins [seps[i], seps[i+1]); digitize returns the right index
    idx = np.digitize(keys, seps, right=False) - 1
    nbins = len(seps) - 1
    cnt = np.bincount(idx, minlength=nbins)
    tot = np.bincount(idx, weights=values, minlength=nbins)
    occupied = cnt > 0
    ab = np.sqrt(seps[:-1] * seps[1:])[occupied]
    mean = tot[occupied] / cnt[occupied]
    return BinnedCurve(separators=seps, abscissa=ab, mean=mean,
                       count=cnt[occupied])


def curve_from_points(x, y, counts=None) -> BinnedCurve:
    """Wrap already-aggregated (x, y) points as a curve so they can be fit.

    Used for CCDF tails and other per-degree series that are not produced by
    the binning path. Separators are synthesized around the points.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size == 0:
        raise ValueError("empty input")
    order = np.argsort(x)
    x, y = x[order], y[order]
    if counts is None:
        cnt = np.ones(x.size, dtype=np.int64)
    else:
        cnt = np.asarray(counts, dtype=np.int64)[order]
    seps = np.concatenate([[x[0] * 0.5], np.sqrt(x[:-1] * x[1:]), [x[-1] * 2.0]])
    return BinnedCurve(separators=seps, abscissa=x, mean=y, count=cnt)


def ccdf(degrees) -> tuple[np.ndarray, np.ndarray]:
    """Complementary cumulative fraction P(K >= k) at each occupied k.

    Returns (k, p) with k the sorted unique degrees; p is monotone
    non-increasing and p[0] == 1.
    """
    degrees = np.asarray(degrees)
    if degrees.size == 0:
        raise ValueError("empty input")
    uniq, cnt = np.unique(degrees, return_counts=True)
    # P(K >= uniq[j]) = 1 - (count of strictly smaller) / n
    below = np.concatenate([[0], np.cumsum(cnt)[:-1]])
    p = 1.0 - below / degrees.size
    return uniq.astype(np.float64), p


def fit_powerlaw(curve: BinnedCurve, k_min: float = 8.0,
                 k_max: float | None = None) -> PowerLawFit:
    """OLS slope of log10(mean) against log10(abscissa) over selected bins.

    Bins qualify when abscissa >= k_min (and <= k_max when given) and the
    mean is positive; zero-mean bins cannot enter a log fit.
    """
    sel = (curve.abscissa >= k_min) & (curve.mean > 0)
    if k_max is not None:
        sel &= curve.abscissa <= k_max
    n = int(sel.sum())
    if n < 3:
        raise InsufficientDataError(
            f"power-law fit needs >= 3 usable bins, got {n} "
            f"(k_min={k_min}, k_max={k_max})")
    lx = np.log10(curve.abscissa[sel])
    ly = np.log10(curve.mean[sel])
    slope, intercept = np.polyfit(lx, ly, 1)
    pred = slope * lx + intercept
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return PowerLawFit(exponent=float(slope), intercept=float(intercept),
                       k_min=float(k_min), r_squared=r2, bin_count=n,
                       k_max=None if k_max is None else float(k_max))


def ccdf_tail_exponent(degrees, decades: float = 2.0) -> PowerLawFit:
    """Log-log slope of the degree CCDF over its top `decades` decades."""
    k, p = ccdf(degrees)
    kmax = k[-1]
    lo = kmax / 10.0 ** decades
    return fit_powerlaw(curve_from_points(k, p), k_min=lo)


def loglog_correlation(a, b) -> float:
    """Pearson correlation of log10(a) vs log10(b) over positive pairs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    sel = (a > 0) & (b > 0)
    if sel.sum() < 2:
        raise InsufficientDataError("correlation needs >= 2 positive pairs")
    return float(np.corrcoef(np.log10(a[sel]), np.log10(b[sel]))[0, 1])
