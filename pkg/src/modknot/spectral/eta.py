"""Orbit-weighted Dirichlet series, from the determinant and from a census.

eta(s) = sum over periodic points x of f(x) sum_k 2 cos(pi k theta Alt(x)) e^{-k l(x) s}

The determinant route differentiates log det(I - L^theta L^-theta) in the
weight w; the census route sums the series over enumerated orbits.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from ..cf import PeriodicWord, orbit_values
from .determinant import fredholm_det
from .zeros import Estimate

__all__ = ["eta_tilde", "eta_via_determinant", "eta_via_census", "eta_odd_via_census",
           "census_tail_bound"]

_POLE_GUARD = 1e-8


def _log_det(s, w, theta, f, N):
    z = fredholm_det(s, w, theta, f, N)
    if abs(z) < _POLE_GUARD:
        raise ArithmeticError(f"determinant {abs(z):.3g} at s={s}: too close to a zero")
    return complex(np.log(z))


def eta_tilde(s, theta=0.0, f_coeffs=(1.0,), N=24, h=1e-4):
    """-d/dw log det(I - L^theta L^-theta) at w = 0, Richardson-corrected."""
    g = lambda w: _log_det(s, w, theta, f_coeffs, N)
    d1 = (g(h) - g(-h)) / (2 * h)
    d2 = (g(h / 2) - g(-h / 2)) / h
    return -(4 * d2 - d1) / 3, abs(d2 - d1)


def eta_via_determinant(s, theta=0.0, f_coeffs=(1.0,), N=24, h=1e-4):
    """eta(s) = eta_tilde(s) - eta_tilde(s + 1)."""
    if complex(s).real <= 0.75:
        raise ValueError("eta_via_determinant needs Re(s) > 3/4")
    a, ea = eta_tilde(s, theta, f_coeffs, N, h)
    b, eb = eta_tilde(s + 1, theta, f_coeffs, N, h)
    val = a - b
    return Estimate(complex(val) if abs(val.imag) > 1e-12 else float(val.real), ea + eb)


def _orbit_weight(f, word) -> float:
    if callable(f):
        return math.fsum(f(x) for x in orbit_values(PeriodicWord(word)))
    coeffs = list(f)
    if len(coeffs) == 1:
        return coeffs[0] * len(word)
    return math.fsum(P.polyval(np.array(orbit_values(PeriodicWord(word))), coeffs))


def _geometric(z, k_max):
    """sum_{k=1}^{k_max} z^k, all k when k_max is None."""
    if k_max is None:
        return z / (1 - z)
    return z * (1 - z ** k_max) / (1 - z)


def census_tail_bound(s, T, fmax=1.0, odd=False):
    """Rough size of the orbits beyond T.

    Point counts grow like (3 log 2/pi^2) e^{l} (e^{l/2} for odd points),
    so the omitted part of the series is about that density integrated
    against e^{-l Re(s)} from T on, doubled for the cosine weights.
    """
    sig = complex(s).real
    dens = 3 * math.log(2) / math.pi ** 2
    if odd:
        rate = sig / 2 - 0.5
    else:
        rate = sig - 1.0
    if rate <= 0:
        return math.inf
    return 2.0 * 2.0 * fmax * dens * math.exp(-rate * T) / rate


def eta_via_census(s, theta, f_coeffs, census, T_max, k_max="all"):
    """Partial sum of the series over orbits of length <= T_max.

    Parameters
    ----------
    f_coeffs : sequence or callable
        Polynomial coefficients, or any function on (0, 1).
    k_max : "all", "auto" or int
        Repetitions per orbit: all of them (closed form), up to
        ceil(T_max / l), or a fixed number.

    Returns an :class:`Estimate` whose error is the tail estimate.
    """
    s = complex(s)
    if s.real <= 1:
        raise ValueError("the census series converges only for Re(s) > 1")
    t_max = getattr(census, "t_max", None)
    if t_max is not None and T_max > t_max * (1 + 1e-12):
        raise ValueError(f"census is complete only to T = {t_max}")
    total = 0j
    fmax = 0.0
    for r in getattr(census, "records", census):
        if r.length > T_max:
            continue
        F = _orbit_weight(f_coeffs, r.canonical_word)
        fmax = max(fmax, abs(F) / r.period)
        km = None if k_max == "all" else (math.ceil(T_max / r.length) if k_max == "auto" else int(k_max))
        decay = np.exp(-r.length * s)
        if r.alt == 0 or theta == 0:
            total += F * 2.0 * _geometric(decay, km)
        else:
            ph = np.exp(1j * math.pi * theta * r.alt)
            total += F * (_geometric(ph * decay, km) + _geometric(np.conj(ph) * decay, km))
    err = census_tail_bound(s, T_max, fmax or 1.0)
    val = complex(total)
    return Estimate(val.real if abs(val.imag) < 1e-14 * max(1.0, abs(val)) else val, err)


def eta_odd_via_census(s, f_coeffs, census, T_max, k_max="all"):
    """2 sum over odd-period points of f(x) sum_{k odd} e^{-k l(x) s/2}."""
    s = complex(s)
    if s.real <= 1:
        raise ValueError("the census series converges only for Re(s) > 1")
    total = 0j
    fmax = 0.0
    for r in getattr(census, "records", census):
        if r.length > T_max or not r.inert:
            continue
        F = _orbit_weight(f_coeffs, r.canonical_word)
        fmax = max(fmax, abs(F) / r.period)
        q = np.exp(-r.length * s / 2)
        if k_max == "all":
            total += 2.0 * F * q / (1 - q * q)
        else:
            km = math.ceil(2 * T_max / r.length) if k_max == "auto" else int(k_max)
            total += 2.0 * F * sum(q ** k for k in range(1, km + 1, 2))
    err = census_tail_bound(s, T_max, fmax or 1.0, odd=True)
    val = complex(total)
    return Estimate(val.real if abs(val.imag) < 1e-14 * max(1.0, abs(val)) else val, err)
