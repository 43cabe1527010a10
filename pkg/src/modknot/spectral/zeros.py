"""Dominant zero of the twisted determinant, residues, and theta-continuity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .operator import EigenvalueTrackingError, leading_eigenvalue, twisted_square

__all__ = [
    "Estimate",
    "dominant_eigenvalue",
    "find_dominant_zero",
    "residue",
    "eigenvalue_shift",
    "continuity_exponent",
]


@dataclass(frozen=True)
class Estimate:
    value: float
    error: float

    def __float__(self):
        return float(self.value)


class _Follower:
    """Evaluate the dominant eigenvalue of L^theta L^-theta along a path."""

    # beyond this parameter step the previous value is no useful seed
    reach = 0.02

    def __init__(self, theta, f_coeffs, N):
        self.theta = theta
        self.f = f_coeffs
        self.N = N
        self.last = None
        self.at = None

    def __call__(self, s, w=0.0):
        T, _ = twisted_square(s, w, self.theta, self.f, self.N)
        near = self.at is not None and abs(s - self.at[0]) + abs(w - self.at[1]) <= self.reach
        lam = leading_eigenvalue(T, seed=self.last if near else None)
        self.last = lam
        self.at = (s, w)
        return lam


def dominant_eigenvalue(s, theta=0.0, w=0.0, f_coeffs=(1.0,), N=24):
    """Dominant eigenvalue of the truncated L^theta L^-theta at (s, w)."""
    T, _ = twisted_square(s, w, theta, f_coeffs, N)
    return leading_eigenvalue(T)


def _zero(theta, N, bracket, xtol):
    follow = _Follower(theta, (1.0,), N)
    lo, hi = bracket
    g = lambda s: follow(s).real - 1.0
    glo, ghi = g(lo), g(hi)
    if glo * ghi > 0:
        raise ValueError(f"no sign change of lambda - 1 on [{lo}, {hi}] at theta={theta}")
    return brentq(g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


def find_dominant_zero(theta, N=24, bracket=(0.76, 1.05), xtol=1e-12):
    """Real s where the dominant eigenvalue of L^theta L^-theta equals 1.

    The truncation error is estimated by repeating the solve at order N + 8.
    """
    lo, hi = bracket
    if not (0.75 < lo < hi <= 1.05):
        raise ValueError("bracket must lie in (3/4, 1.05]")
    if abs(theta) >= 1.0 / 12:
        raise ValueError("|theta| must be below 1/12")
    s0 = _zero(theta, N, bracket, xtol)
    s1 = _zero(theta, N + 8, bracket, xtol)
    return Estimate(s0, abs(s1 - s0) + xtol)


def _central(fn, x, h):
    """Richardson-extrapolated central difference and its error estimate."""
    d1 = (fn(x + h) - fn(x - h)) / (2 * h)
    d2 = (fn(x + h / 2) - fn(x - h / 2)) / h
    return (4 * d2 - d1) / 3, abs(d2 - d1)


def residue(theta, f_coeffs=(1.0,), N=24, h=1e-4, s_theta=None):
    """``-(d lambda/dw) / (d lambda/ds)`` at the dominant zero, w = 0.

    lambda decreases in s, so the minus sign makes the quotient positive.
    """
    if s_theta is None:
        s_theta = find_dominant_zero(theta, N).value
    follow = _Follower(theta, tuple(f_coeffs), N)
    follow(s_theta)
    lw, ew = _central(lambda w: follow(s_theta, w), 0.0, h)
    follow(s_theta)
    ls, es = _central(lambda s: follow(s, 0.0), s_theta, h)
    if abs(ls) < 1e-12:
        raise ArithmeticError("d lambda/ds vanishes at the zero")
    r = -lw / ls
    err = abs(r) * (ew / abs(lw) + es / abs(ls)) if lw != 0 else ew / abs(ls)
    return Estimate(float(r.real), float(err + abs(r.imag)))


def eigenvalue_shift(theta, s=0.95, N=24):
    """``|lambda_theta(s, 0) - lambda_0(s, 0)|`` for the dominant eigenvalue."""
    return abs(dominant_eigenvalue(s, theta, N=N) - dominant_eigenvalue(s, 0.0, N=N))


def continuity_exponent(thetas=(1e-4, 1e-3, 1e-2), s=0.95, N=24):
    """Least-squares slope of log shift against log theta, with the shifts."""
    shifts = np.array([eigenvalue_shift(t, s, N) for t in thetas])
    slope = np.polyfit(np.log(thetas), np.log(shifts), 1)[0]
    return float(slope), shifts
