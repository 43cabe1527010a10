"""Operator traces summed over periodic words.

For a word a = (a_1, ..., a_n) let mu be the dominant eigenvalue of
B_{a_1} ... B_{a_n}.  The composite branch of n transfer-operator factors
has trace

    mu^(-2s) / (1 - (-1)^n mu^(-2)) * exp(w * sum of f over the orbit),

and the factors alternate in twist, -theta first, so the word carries the
phase exp(i pi theta Alt(a)) with Alt(a) = sum_j (-1)^j a_j.  For n = 1 this
is the trace of L^(-theta), for n = 2 the trace of L^theta L^(-theta).

The sum runs exactly over the cube [1, D]^n.  Regions where exactly one
digit exceeds D are summed analytically: in t = 1/a the summand is
t^(2s) times a function analytic near t = 0, which is fitted by a polynomial
and paired with Lerch tails.  Regions with two or more large digits are
bounded, not summed.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from numpy.polynomial import polynomial as P

from .lerch import lerch_tail

__all__ = ["trace_via_words"]

_CHUNK = 1 << 20


def _product(factors):
    """Multiply a list of (e00, e01, e10, e11) array quadruples."""
    p00, p01, p10, p11 = factors[0]
    for q00, q01, q10, q11 in factors[1:]:
        p00, p01, p10, p11 = (p00 * q00 + p01 * q10, p00 * q01 + p01 * q11,
                              p10 * q00 + p11 * q10, p10 * q01 + p11 * q11)
    return p00, p01, p10, p11


def _fixed_point(m):
    """Attracting fixed point of z -> (p z + q)/(r z + u), cancellation-free."""
    p, q, r, u = m
    disc = np.sqrt((p - u) ** 2 + 4.0 * q * r)
    diff = p - u
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(diff >= 0, (diff + disc) / (2.0 * r), 2.0 * q / (disc - diff))
    return out


def _reduced_terms(factors, scale, n, s, w, f):
    """Summand divided by scale^(2s); ``scale`` is t for a scaled factor, else 1."""
    m = _product(factors)
    tr = m[0] + m[3]
    det = (-1.0) ** n * scale ** 2
    mu = 0.5 * (tr + np.sqrt(tr * tr - 4.0 * det))
    val = np.exp(-2.0 * s * np.log(mu)) / (1.0 - (-1.0) ** n * (scale / mu) ** 2)
    if w != 0:
        fsum = 0.0
        for r in range(n):
            x = _fixed_point(_product(factors[r:] + factors[:r]))
            fsum = fsum + P.polyval(x, f)
        val = val * np.exp(w * fsum)
    return val


def _digit_factor(a):
    one = np.ones_like(a)
    return (np.zeros_like(a), one, one, a)


def _cube(n, D, s, w, theta, f):
    """Exact sum over [1, D]^n, chunked along the leading digits."""
    total = 0j
    inner = max(1, n - 1)
    rest = np.arange(1, D + 1, dtype=float)
    if n == 1:
        grids = [rest]
        a = grids[0]
        vals = _reduced_terms([_digit_factor(a)], 1.0, 1, s, w, f)
        return complex(np.sum(vals[::-1] * np.exp(-1j * math.pi * theta * a[::-1])))
    tail_grid = np.stack(np.meshgrid(*([rest] * (n - 1)), indexing="ij"), -1).reshape(-1, n - 1)
    del inner
    for a0 in range(D, 0, -1):
        digits = np.concatenate([np.full((tail_grid.shape[0], 1), float(a0)), tail_grid], axis=1)
        total += _weighted_sum(digits, n, s, w, theta, f)
    return total


def _weighted_sum(digits, n, s, w, theta, f):
    signs = (-1.0) ** np.arange(1, n + 1)
    alt = digits @ signs
    factors = [_digit_factor(digits[:, j]) for j in range(n)]
    vals = _reduced_terms(factors, 1.0, n, s, w, f)
    if theta:
        vals = vals * np.exp(1j * math.pi * theta * alt)
    return complex(np.sum(vals))


def _one_large(n, D, s, w, theta, f, degree):
    """Sum over words with exactly one digit > D; returns (value, error)."""
    nodes = 0.5 * (1.0 - np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1)))
    check = np.linspace(0.05, 1.0, 7)
    V = np.vander(nodes, degree + 1, increasing=True)
    Vinv = np.linalg.inv(V)
    Vc = np.vander(check, degree + 1, increasing=True)
    taus = 2.0 * s + np.arange(degree + 1)
    total = 0j
    err = 0.0
    rest = np.arange(1, D + 1, dtype=float)
    others = (np.stack(np.meshgrid(*([rest] * (n - 1)), indexing="ij"), -1).reshape(-1, n - 1)
              if n > 1 else np.zeros((1, 0)))
    for pos in range(n):
        sign = (-1.0) ** (pos + 1)
        lam, lam_err = lerch_tail(taus, sign * theta, D + 1)
        dk = float(D) ** np.arange(degree + 1)
        moments = lam * dk
        other_idx = [j for j in range(n) if j != pos]
        other_signs = np.array([(-1.0) ** (j + 1) for j in other_idx])
        phase = np.exp(1j * math.pi * theta * (others @ other_signs)) if n > 1 else np.ones(1)

        def sample(u):
            t = u / D
            cols = []
            for tt in np.atleast_1d(t):
                factors = []
                for j in range(n):
                    if j == pos:
                        z = np.zeros(others.shape[0])
                        factors.append((z, z + tt, z + tt, z + 1.0))
                    else:
                        factors.append(_digit_factor(others[:, other_idx.index(j)]))
                cols.append(_reduced_terms(factors, tt, n, s, w, f))
            return np.stack(cols, axis=1)  # (#others, #u)

        G = sample(nodes)
        coef = G @ Vinv.T  # monomial coefficients in u, per row
        resid = np.max(np.abs(coef @ Vc.T - sample(check)))
        row_sums = coef @ moments
        total += complex(np.sum(phase * row_sums))
        scale = float(np.sum(np.abs(coef[:, 0])))
        err += resid * others.shape[0] * abs(moments[0]) + scale * float(np.max(lam_err * dk))
    return total, err


def trace_via_words(n, s, w=0.0, theta=0.0, f_coeffs=(1.0,), digit_cap=None, *,
                    budget=4_000_000, fit_degree=10, return_error=False):
    """Trace of the alternating n-fold transfer-operator product by word sums.

    Parameters
    ----------
    n : int
        Number of operator factors, 1 to 3.
    s, w : complex
        Spectral and weight parameters, ``Re(s) > 1/2``.
    theta : float
        Twist.
    f_coeffs : sequence
        Polynomial test function, coefficients of ``1, x, x**2, ...``.
    digit_cap : int, optional
        Cube size D for the exact part; default ``budget**(1/n)``.
    return_error : bool
        Also return an estimate of the absolute error.
    """
    if n not in (1, 2, 3):
        raise ValueError("n must be 1, 2 or 3")
    s = complex(s)
    w = complex(w)
    if s.real <= 0.5:
        raise ValueError("word sums need Re(s) > 1/2")
    f = np.asarray(f_coeffs, dtype=complex)
    D = int(digit_cap) if digit_cap else int(round(budget ** (1.0 / n)))
    if n == 1:
        D = min(D, 1_000_000)
    D = max(D, 16)
    exact = _cube(n, D, s, w, theta, f)
    tail, err = _one_large(n, D, s, w, theta, f, fit_degree)
    if n >= 2:
        # two or more digits beyond D
        sig = 2.0 * s.real
        big = D ** (1.0 - sig) / (sig - 1.0)
        small = 1.0 + 1.0 / (sig - 1.0)
        bound = sum(math.comb(n, k) * big ** k * small ** (n - k) for k in range(2, n + 1))
        err += bound * math.exp(abs(w) * n * float(np.sum(np.abs(f))))
    value = exact + tail
    if return_error:
        return value, err
    return value
