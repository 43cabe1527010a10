"""Tails of Lerch-type series ``sum_{a >= start} exp(i*pi*theta*a) * a**(-tau)``.

The untwisted case (theta = 0) is a Hurwitz zeta tail and is summed with
Euler-Maclaurin.  For theta != 0 the geometric weight q = exp(i*pi*theta)
is handled by Abel-Boole summation: with F(t) = 1/(1 - q e^t) = sum F_k t^k,

    sum_{m >= 0} q^m g(m) = sum_k F_k g^(k)(0),

which converges once the base point is large compared to 1/(pi*|theta|).
Both routes take complex exponents.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import bernoulli, gammaln

__all__ = ["lerch_tail"]

_EM_TERMS = 12
_B2K = bernoulli(2 * _EM_TERMS)[2::2]  # B_2, B_4, ..., B_2K
_EM_COEF = np.array([_B2K[k - 1] / math.factorial(2 * k) for k in range(1, _EM_TERMS + 1)])

_ABEL_RATIO = 0.07
_DIRECT_CAP = 50_000_000
_BOOLE_TERMS = 60


def _rising(tau, k):
    """Pochhammer symbol (tau)_k for complex tau, k small."""
    out = np.ones_like(tau)
    for i in range(k):
        out = out * (tau + i)
    return out


def _direct(tau, theta, start, stop):
    """sum_{a=start}^{stop-1} q^a a^{-tau}, column-wise over tau."""
    if stop <= start:
        return np.zeros_like(tau)
    out = np.zeros_like(tau)
    chunk = 1 << 18
    for lo in range(start, stop, chunk):
        a = np.arange(lo, min(stop, lo + chunk), dtype=float)
        loga = np.log(a)
        if theta == 0:
            w = None
        else:
            w = np.exp(1j * math.pi * theta * a)
        for i, t in enumerate(tau):
            terms = np.exp(-t * loga)
            if w is not None:
                terms = terms * w
            out[i] += terms[::-1].sum()
    return out


def _euler_maclaurin(tau, base):
    """sum_{a >= base} a^{-tau} and an error estimate (Re tau > 1)."""
    x = float(base)
    val = x ** (1 - tau) / (tau - 1) + 0.5 * x ** (-tau)
    err = np.zeros(tau.shape)
    for k in range(1, _EM_TERMS + 1):
        term = _EM_COEF[k - 1] * _rising(tau, 2 * k - 1) * x ** (-tau - 2 * k + 1)
        val = val + term
        err = np.abs(term)
    return val, err


def _boole_coefficients(q, kmax):
    """Taylor coefficients of 1/(1 - q e^t) about t = 0."""
    inv_fact = np.exp(-gammaln(np.arange(kmax + 1) + 1.0))
    F = np.zeros(kmax + 1, dtype=complex)
    F[0] = 1.0 / (1.0 - q)
    for k in range(1, kmax + 1):
        F[k] = q * np.dot(F[k - 1::-1], inv_fact[1:k + 1]) / (1.0 - q)
    return F


def _abel_boole(t, theta, base, tol):
    """sum_{a >= base} q^a a^{-t} for one complex exponent t.

    The series in derivatives is asymptotic; it is cut at its smallest term.
    """
    q = complex(math.cos(math.pi * theta), math.sin(math.pi * theta))
    x = float(base)
    F = _boole_coefficients(q, _BOOLE_TERMS)
    deriv = x ** (-t)  # g^(k)(0) for g(m) = (x + m)^(-t)
    total = F[0] * deriv
    prev = abs(total)
    err = prev
    for k in range(1, _BOOLE_TERMS + 1):
        deriv = -deriv * (t + k - 1) / x
        term = F[k] * deriv
        mag = abs(term)
        if mag > prev:
            break
        total += term
        err = mag
        if mag <= tol * abs(total):
            break
        prev = mag
    return q ** base * total, err


def lerch_tail(tau, theta: float, start: int, tol: float = 1e-15):
    """Sum ``exp(i*pi*theta*a) * a**(-tau)`` over integers ``a >= start``.

    Parameters
    ----------
    tau : complex or array_like
        Exponents, ``Re(tau) > 1``.
    theta : float
        Twist, ``|theta| < 1``.
    start : int
        First summation index (``>= 1``).
    tol : float
        Relative target accuracy of the acceleration step.

    Returns
    -------
    values, errors : ndarray
        Complex tail sums and an estimate of their absolute error.
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=complex))
    if np.any(tau.real <= 1):
        raise ValueError("lerch_tail needs Re(tau) > 1")
    if not -1 < theta < 1:
        raise ValueError("theta must lie in (-1, 1)")
    start = int(start)
    if start < 1:
        raise ValueError("start must be >= 1")

    if theta == 0:
        base = max(start, 64)
        head = _direct(tau, 0.0, start, base)
        tail, err = _euler_maclaurin(tau, base)
        return head + tail, err + 1e-16 * np.abs(head)

    dist = 2.0 * abs(math.sin(math.pi * theta / 2))  # |1 - q|
    vals = np.empty_like(tau)
    errs = np.empty(tau.shape)
    for i, t in enumerate(tau):
        need = int(math.ceil(max(abs(t), 4.0) / (_ABEL_RATIO * dist)))
        base = max(start, need)
        # steep exponents: the plain tail drops below tol long before base
        sig = t.real
        plain = math.exp((sig * math.log(start) - math.log(tol * (sig - 1.0))) / (sig - 1.0))
        if plain < base:
            stop = max(start + 1, int(math.ceil(plain)))
            vals[i] = _direct(np.array([t]), theta, start, stop)[0]
            errs[i] = stop ** (1.0 - sig) / (sig - 1.0)
            continue
        if base > _DIRECT_CAP:
            raise ArithmeticError(f"twisted tail at theta={theta} needs {base} direct terms")
        head = _direct(np.array([t]), theta, start, base)[0]
        tail, err = _abel_boole(t, theta, base, tol)
        vals[i] = head + tail
        errs[i] = err + 1e-16 * abs(head)
    return vals, errs
