"""Truncations of the twisted Gauss-map transfer operator.

The operator acts on functions holomorphic on the disc |z - 1| < 3/2 by

    (L g)(z) = sum_{a >= 1} exp(i pi a theta) chi(1/(a+z)) g(1/(a+z)),
    chi(u) = u^(2s) exp(w f(u)),

and is represented in the Taylor basis (z - 1)^j.  Column j of the matrix
holds the Taylor coefficients of the image of (z - 1)^j, extracted by a
discrete Fourier transform on the circle |z - 1| = rho.

The a-sum is done directly for a < cutoff.  Beyond the cutoff the summand is
expanded in u = 1/(a+z) and then in z/a, which reduces the tail to scalar
sums ``sum_{a >= cutoff} q^a a^(-tau)`` (see :mod:`.lerch`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .lerch import lerch_tail

__all__ = [
    "OperatorTruncation",
    "SpectralResult",
    "NuclearityError",
    "TailConvergenceError",
    "EigenvalueTrackingError",
    "build_operator",
    "twisted_square",
    "leading_eigenvalue",
    "spectrum",
]


class NuclearityError(ValueError):
    """Raised when Re(s) <= 1/2, where the operator is not nuclear."""


class TailConvergenceError(ArithmeticError):
    """Raised when the a-sum tail cannot be brought below the tolerance."""


class EigenvalueTrackingError(ArithmeticError):
    """Raised when the followed eigenvalue stops being the dominant one."""


@dataclass(frozen=True)
class OperatorTruncation:
    order: int
    s: complex
    w: complex
    theta: float
    f_coeffs: tuple
    matrix: np.ndarray = field(repr=False)
    tail_method: str
    cutoff: int
    entry_error: float

    def eigenvalues(self):
        return spectrum(self.matrix).eigenvalues


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    leading: complex
    entry_error: float = 0.0

    @property
    def subleading(self):
        return self.eigenvalues[1]


def spectrum(matrix, entry_error=0.0):
    ev = np.linalg.eigvals(matrix)
    ev = ev[np.argsort(-np.abs(ev), kind="stable")]
    return SpectralResult(eigenvalues=ev, leading=complex(ev[0]), entry_error=entry_error)


def _series_exp(coeffs, order):
    """Power series of exp(p(u)) with p(0) = 0, truncated after u^order."""
    p = np.zeros(order + 1, dtype=complex)
    n = min(len(coeffs), order + 1)
    p[:n] = coeffs[:n]
    p[0] = 0.0
    e = np.zeros(order + 1, dtype=complex)
    e[0] = 1.0
    k = np.arange(order + 1)
    for m in range(1, order + 1):
        e[m] = np.dot(k[1:m + 1] * p[1:m + 1], e[m - 1::-1][:m]) / m
    return e


def _tail_series(order, w, f, nterms):
    """Coefficients G[j, p] of exp(w f(u)) (u - 1)^j in powers of u."""
    scaled = w * np.asarray(f, dtype=complex)
    base = _series_exp(scaled, nterms - 1) * np.exp(scaled[0])
    G = np.zeros((order, nterms), dtype=complex)
    G[0] = base
    for j in range(1, order):
        G[j, 1:] = G[j - 1, :-1]
        G[j] -= G[j - 1]
    return G


def build_operator(s, w=0.0, theta=0.0, f_coeffs=(1.0,), N=24, tol=1e-12, *,
                   cutoff=64, rho=1.0, points=None):
    """Build the N x N Taylor-basis matrix of the twisted transfer operator.

    Parameters
    ----------
    s, w : complex
        Spectral parameter (``Re(s) > 1/2``) and weight of the test function.
    theta : float
        Twist; the a-th branch carries the phase ``exp(i*pi*a*theta)``.
    f_coeffs : sequence
        Test-function polynomial, coefficients of ``1, x, x**2, ...``.
    N : int
        Truncation order (number of Taylor coefficients kept).
    tol : float
        Target absolute accuracy of the matrix entries.
    cutoff : int
        First index of the analytically summed a-tail.
    rho : float
        Radius of the extraction circle about z = 1.
    points : int, optional
        Number of extraction points; defaults to ``max(4 N, 64)``.
    """
    s = complex(s)
    w = complex(w)
    theta = float(theta)
    if s.real <= 0.5:
        raise NuclearityError(f"transfer operator is not nuclear at Re(s) = {s.real}")
    if N < 2:
        raise ValueError("truncation order must be at least 2")
    if not -1 < theta < 1:
        raise ValueError("theta must lie in (-1, 1)")
    f = np.asarray(f_coeffs, dtype=complex)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("f_coeffs must be a non-empty 1-d sequence")
    M = int(points) if points else max(4 * N, 64)
    A = int(cutoff)
    if A < 8:
        raise ValueError("cutoff must be at least 8")

    nodes = np.exp(2j * np.pi * np.arange(M) / M)
    z = 1.0 + rho * nodes
    vals = np.zeros((M, N), dtype=complex)

    # direct part, a = 1 .. A-1
    a = np.arange(1, A, dtype=float)[:, None]
    apz = a + z[None, :]
    u = 1.0 / apz
    weight = np.exp(-2.0 * s * np.log(apz))
    if theta:
        weight = weight * np.exp(1j * np.pi * theta * a)
    if w != 0:
        weight = weight * np.exp(w * P.polyval(u, f))
    um1 = u - 1.0
    term = weight
    for j in range(N):
        vals[:, j] = term.sum(axis=0)
        term = term * um1

    # tail, a >= A:  sum_p G[j,p] sum_a q^a (a+z)^(-2s-p)
    zmax = float(np.max(np.abs(z)))
    decay = 1.0 / (A - 1.0 if rho > 1 else float(A))
    bound0 = A ** (1.0 - 2.0 * s.real) / (2.0 * s.real - 1.0)
    nterms = N + 60
    G = _tail_series(N, w, f, nterms)
    mags = np.max(np.abs(G), axis=0) * decay ** np.arange(nterms) * bound0
    keep = np.nonzero(mags > tol * 1e-3)[0]
    nP = int(keep[-1]) + 2 if keep.size else 1
    if nP >= nterms:
        raise TailConvergenceError("u-expansion of the a-tail did not converge")
    G = G[:, :nP]

    ratio = zmax / A
    sig_max = 2.0 * abs(s) + nP
    K = 1
    coef = 1.0
    while True:
        coef *= (sig_max + K - 1) / K * ratio
        if coef < 1e-18 or K > 200:
            break
        K += 1
    if K > 200:
        raise TailConvergenceError("z-expansion of the a-tail did not converge")

    taus = 2.0 * s + np.arange(nP + K + 1)
    lam, lam_err = lerch_tail(taus, theta, A, tol=1e-16)
    zpow = z[:, None] ** np.arange(K + 1)[None, :]
    H = np.zeros((M, nP), dtype=complex)
    for p in range(nP):
        sigma = 2.0 * s + p
        binom = np.ones(K + 1, dtype=complex)
        for k in range(1, K + 1):
            binom[k] = binom[k - 1] * (-(sigma + k - 1)) / k
        H[:, p] = zpow @ (binom * lam[p:p + K + 1])
    vals += H @ G.T

    coeffs = np.fft.fft(vals, axis=0) / M
    coeffs /= (rho ** np.arange(M))[:, None]
    matrix = coeffs[:N, :]
    alias = float(np.max(np.abs(coeffs[M // 2, :]))) * rho ** (M // 2)
    lerch_err = float(np.max(np.abs(G))) * float(np.max(lam_err)) * (1 + zmax) ** K
    entry_error = max(alias, lerch_err, 1e-16 * float(np.max(np.abs(matrix))))
    method = "euler-maclaurin" if theta == 0 else "abel-boole"
    return OperatorTruncation(order=N, s=s, w=w, theta=theta, f_coeffs=tuple(f_coeffs),
                              matrix=matrix, tail_method=method, cutoff=A,
                              entry_error=entry_error)


def twisted_square(s, w=0.0, theta=0.0, f_coeffs=(1.0,), N=24, tol=1e-12, **kw):
    """Matrix of L^theta L^(-theta) and its entry-error estimate.

    For real s and w the second factor is the entrywise conjugate of the
    first, so the product has a real dominant eigenvalue.
    """
    plus = build_operator(s, w, theta, f_coeffs, N, tol, **kw)
    minus = plus if theta == 0 else build_operator(s, w, -theta, f_coeffs, N, tol, **kw)
    scale = max(float(np.max(np.abs(plus.matrix))), 1.0)
    err = 2.0 * N * scale * max(plus.entry_error, minus.entry_error)
    return plus.matrix @ minus.matrix, err


def leading_eigenvalue(matrix, seed=None, rtol=1e-9):
    """Dominant eigenvalue, optionally continued from a nearby value ``seed``.

    With a seed the eigenvalue closest to it is chosen, and it must still be
    of maximal modulus; otherwise :class:`EigenvalueTrackingError` is raised.
    """
    ev = np.linalg.eigvals(matrix)
    top = float(np.max(np.abs(ev)))
    if seed is None:
        return complex(ev[int(np.argmax(np.abs(ev)))])
    pick = ev[int(np.argmin(np.abs(ev - seed)))]
    if abs(pick) < top * (1.0 - rtol):
        raise EigenvalueTrackingError(
            f"followed eigenvalue {pick:.6g} is no longer dominant (|max| = {top:.6g})")
    return complex(pick)
