"""Streaming moments, confidence intervals and least-squares fits.

Variances are population variances (divide by the count). Kurtosis is raw
``m4 / m2**2``, so a normal sample gives 3, not 0.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from gridlinks.errors import DegenerateDesign, DegenerateSample


@dataclass
class SampleSummary:
    """Count, mean, central power sums m2..m4, range and a histogram.

    ``m2``, ``m3``, ``m4`` are sums of powered deviations from the mean, not
    averages. Summaries merge exactly like concatenating the samples.
    """

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    m3: float = 0.0
    m4: float = 0.0
    min: float = math.inf
    max: float = -math.inf
    bin_width: float = 1.0
    histogram: Counter = field(default_factory=Counter)

    def _bin(self, x: float) -> float:
        b = math.floor(x / self.bin_width) * self.bin_width
        return int(b) if float(b).is_integer() else b

    def push(self, x: float) -> None:
        n1 = self.count
        n = n1 + 1
        delta = x - self.mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * n1
        self.mean += delta_n
        self.m4 += term1 * delta_n2 * (n * n - 3 * n + 3) + 6 * delta_n2 * self.m2 - 4 * delta_n * self.m3
        self.m3 += term1 * delta_n * (n - 2) - 3 * delta_n * self.m2
        self.m2 += term1
        self.count = n
        self.min = min(self.min, x)
        self.max = max(self.max, x)
        self.histogram[self._bin(x)] += 1

    def extend(self, values) -> None:
        """Fold in a batch, computed two-pass and merged."""
        arr = np.asarray(values, dtype=float)
        if arr.size == 0:
            return
        self._absorb(SampleSummary.from_values(arr, self.bin_width))

    @classmethod
    def from_values(cls, values, bin_width: float = 1.0) -> SampleSummary:
        arr = np.asarray(values, dtype=float)
        s = cls(bin_width=bin_width)
        if arr.size == 0:
            return s
        mean = float(arr.mean())
        dev = arr - mean
        d2 = dev * dev
        s.count = int(arr.size)
        s.mean = mean
        s.m2 = float(d2.sum())
        s.m3 = float((d2 * dev).sum())
        s.m4 = float((d2 * d2).sum())
        s.min = float(arr.min())
        s.max = float(arr.max())
        bins = np.floor(arr / bin_width) * bin_width
        keys, counts = np.unique(bins, return_counts=True)
        for k, c in zip(keys.tolist(), counts.tolist()):
            s.histogram[int(k) if float(k).is_integer() else k] += c
        return s

    def _absorb(self, other: SampleSummary) -> None:
        if other.count == 0:
            return
        if self.count == 0:
            self.count, self.mean = other.count, other.mean
            self.m2, self.m3, self.m4 = other.m2, other.m3, other.m4
            self.min, self.max = other.min, other.max
            self.histogram = Counter(other.histogram)
            return
        na, nb = self.count, other.count
        n = na + nb
        delta = other.mean - self.mean
        d_n = delta / n
        m2 = self.m2 + other.m2 + delta * d_n * na * nb
        m3 = (
            self.m3
            + other.m3
            + delta * d_n * d_n * na * nb * (na - nb)
            + 3 * d_n * (na * other.m2 - nb * self.m2)
        )
        m4 = (
            self.m4
            + other.m4
            + delta * d_n**3 * na * nb * (na * na - na * nb + nb * nb)
            + 6 * d_n * d_n * (na * na * other.m2 + nb * nb * self.m2)
            + 4 * d_n * (na * other.m3 - nb * self.m3)
        )
        self.mean = (na * self.mean + nb * other.mean) / n
        self.count, self.m2, self.m3, self.m4 = n, m2, m3, m4
        self.min = min(self.min, other.min)
        self.max = max(self.max, other.max)
        self.histogram.update(other.histogram)

    def copy(self) -> SampleSummary:
        s = SampleSummary(**{k: getattr(self, k) for k in ("count", "mean", "m2", "m3", "m4", "min", "max", "bin_width")})
        s.histogram = Counter(self.histogram)
        return s

    @property
    def variance(self) -> float:
        return self.m2 / self.count if self.count else math.nan

    @property
    def fourth_moment(self) -> float:
        """Fourth central moment ``m4 / count``."""
        return self.m4 / self.count if self.count else math.nan

    @property
    def third_moment(self) -> float:
        return self.m3 / self.count if self.count else math.nan


def accumulate(s: SampleSummary, x: float) -> SampleSummary:
    out = s.copy()
    out.push(x)
    return out


def merge(a: SampleSummary, b: SampleSummary) -> SampleSummary:
    if a.bin_width != b.bin_width:
        raise ValueError("cannot merge summaries with different histogram bin widths")
    out = a.copy()
    out._absorb(b)
    return out


def kurtosis(s: SampleSummary) -> float:
    if s.count < 4:
        raise DegenerateSample(f"kurtosis needs at least 4 values, got {s.count}")
    if s.m2 <= 0:
        raise DegenerateSample("kurtosis of a constant sample is undefined")
    return s.count * s.m4 / (s.m2 * s.m2)


def mean_ci95(s: SampleSummary) -> tuple[float, float]:
    """Normal-approximation interval ``mean +/- 1.96 * sqrt(variance / count)``."""
    if s.count < 30:
        raise DegenerateSample(f"confidence interval needs at least 30 values, got {s.count}")
    half = 1.96 * math.sqrt(s.variance / s.count)
    return s.mean - half, s.mean + half


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    residual_std_error: float

    def predict(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float)


def ols_fit(x, y, force_zero_intercept: bool = False) -> FitResult:
    """Least-squares line through (x, y).

    With ``force_zero_intercept`` the slope is ``sum(x*y) / sum(x*x)``. R^2 is
    always ``1 - SSR / SST`` with SST centred on the mean of y, so a forced fit
    can land below 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DegenerateDesign("x and y must be 1-d and the same length")
    m = x.size
    if m < 2:
        raise DegenerateDesign("need at least 2 points")
    if force_zero_intercept:
        sxx = float(np.dot(x, x))
        if sxx == 0:
            raise DegenerateDesign("all x are zero")
        slope = float(np.dot(x, y)) / sxx
        intercept = 0.0
        dof = m - 1
    else:
        xm, ym = x.mean(), y.mean()
        dx = x - xm
        sxx = float(np.dot(dx, dx))
        if sxx == 0:
            raise DegenerateDesign("all x are equal")
        slope = float(np.dot(dx, y - ym)) / sxx
        intercept = float(ym - slope * xm)
        dof = m - 2
    resid = y - (intercept + slope * x)
    ssr = float(np.dot(resid, resid))
    sst = float(np.dot(y - y.mean(), y - y.mean()))
    r2 = 1.0 - ssr / sst if sst > 0 else 1.0
    rse = math.sqrt(ssr / dof) if dof > 0 else 0.0
    return FitResult(slope, intercept, r2, m, rse)
