"""Gauss measure, its two-dimensional extension, and census diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats as _st

from .cf import PeriodicWord, orbit_points

__all__ = [
    "EmpiricalSample",
    "gauss_cdf",
    "gauss_quantile",
    "gauss_integral",
    "pair_measure",
    "ks_distance",
    "sample_points",
    "sample_pairs",
    "pair_discrepancy",
    "pair_distribution_check",
    "mean_return_time",
    "MEAN_RETURN_LIMIT",
]

LOG2 = math.log(2.0)
MEAN_RETURN_LIMIT = math.pi ** 2 / (3.0 * LOG2)


@dataclass(frozen=True)
class EmpiricalSample:
    points: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.size and (pts.min() <= 0 or pts.max() >= 1):
            raise ValueError("sample points must lie in (0, 1)")
        object.__setattr__(self, "points", pts)
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != pts.shape or np.any(w <= 0):
                raise ValueError("weights must be positive and match the points")
            object.__setattr__(self, "weights", w)

    def __len__(self):
        return int(self.points.size)


def gauss_cdf(x):
    """log(1 + x)/log 2 on [0, 1]."""
    arr = np.asarray(x, dtype=float)
    if np.any((arr < 0) | (arr > 1)):
        raise ValueError("gauss_cdf is defined on [0, 1]")
    out = np.log1p(arr) / LOG2
    return float(out) if out.ndim == 0 else out


def gauss_quantile(u):
    return np.expm1(np.asarray(u, dtype=float) * LOG2)


def gauss_integral(f_coeffs: Sequence[float]) -> float:
    """Integral of the polynomial sum c_k x^k against the Gauss measure.

    With I_k = int_0^1 x^k/(1+x) dx one has I_k = r_k + (-1)^k log 2, where
    r_0 = 0 and r_k = 1/k - r_{k-1}; the log 2 parts are collected exactly.
    """
    rational = []
    log_part = 0.0
    r = 0.0
    for k, c in enumerate(f_coeffs):
        if k > 0:
            r = 1.0 / k - r
        rational.append(c * r)
        log_part += c if k % 2 == 0 else -c
    return (math.fsum(rational) + log_part * LOG2) / LOG2


def pair_measure(a: float, b: float) -> float:
    """Mass of [0, a] x [0, b] under dx dy / (log 2 (1 + x y)^2)."""
    return math.log1p(a * b) / LOG2


def ks_distance(sample) -> float:
    """Kolmogorov-Smirnov distance between the sample and the Gauss measure."""
    pts = sample.points if isinstance(sample, EmpiricalSample) else np.asarray(sample, float)
    if pts.size == 0:
        raise ValueError("empty sample")
    if isinstance(sample, EmpiricalSample) and sample.weights is not None:
        order = np.argsort(pts)
        x = pts[order]
        w = sample.weights[order] / sample.weights.sum()
        hi = np.cumsum(w)
        lo = hi - w
        F = gauss_cdf(x)
        return float(max(np.max(hi - F), np.max(F - lo)))
    return float(_st.kstest(pts, gauss_cdf).statistic)


def _records(census, T):
    t_max = getattr(census, "t_max", None)
    if t_max is not None and T > t_max * (1 + 1e-12):
        raise ValueError(f"census is complete only to T = {t_max}")
    return [r for r in getattr(census, "records", census) if r.length <= T]


def sample_points(census, T: float, lk_abs: int | None = None, odd: bool = False) -> EmpiricalSample:
    """Orbit points of Q_n^+(T) (|Alt| = lk_abs), of Q_odd(T), or of Q(T)."""
    pts: list[float] = []
    for r in _records(census, T):
        if odd and not r.inert:
            continue
        if lk_abs is not None and abs(r.alt) != abs(lk_abs):
            continue
        pts.extend(r.points())
    return EmpiricalSample(np.array(pts))


def sample_pairs(census, T: float, lk_abs: int | None = None) -> np.ndarray:
    """Pairs (x, -1/conj(x)) over the selected orbit points, shape (n, 2)."""
    out = []
    for r in _records(census, T):
        if lk_abs is not None and abs(r.alt) != abs(lk_abs):
            continue
        for p in orbit_points(PeriodicWord(r.canonical_word)):
            out.append((p.value(), p.partner()))
    return np.array(out, dtype=float).reshape(-1, 2)


def pair_discrepancy(pairs: np.ndarray, grid: int = 16) -> float:
    """Largest gap between empirical and exact mass over anchored boxes.

    The boxes are [0, i/grid] x [0, j/grid] for 1 <= i, j <= grid.
    """
    pairs = np.asarray(pairs, dtype=float)
    if pairs.size == 0:
        raise ValueError("no pairs")
    edges = np.arange(1, grid + 1) / grid
    ix = np.clip(np.ceil(pairs[:, 0] * grid).astype(int), 1, grid) - 1
    iy = np.clip(np.ceil(pairs[:, 1] * grid).astype(int), 1, grid) - 1
    hist = np.zeros((grid, grid))
    np.add.at(hist, (ix, iy), 1.0)
    emp = hist.cumsum(0).cumsum(1) / len(pairs)
    exact = np.log1p(np.outer(edges, edges)) / LOG2
    return float(np.max(np.abs(emp - exact)))


def pair_distribution_check(census, T: float, lk_abs: int | None = None, grid: int = 16) -> float:
    return pair_discrepancy(sample_pairs(census, T, lk_abs), grid)


def mean_return_time(census, T: float) -> float:
    """Total length of primitive geodesics divided by the number of points.

    An even orbit stands for two geodesics of its length, an odd orbit for
    one; each orbit contributes its period to the point count.
    """
    recs = _records(census, T)
    if not recs:
        raise ValueError(f"no orbits of length <= {T}")
    total = math.fsum(r.length * r.geodesic_multiplicity for r in recs)
    points = sum(r.period for r in recs)
    return total / points
