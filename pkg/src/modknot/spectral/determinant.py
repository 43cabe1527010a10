"""Fredholm determinants of the truncated transfer operators."""

from __future__ import annotations

import numpy as np

from .operator import build_operator, twisted_square

__all__ = ["fredholm_det", "zeta_plus", "zeta_minus", "zeta_product"]


def fredholm_det(s, w=0.0, theta=0.0, f_coeffs=(1.0,), N=24, tol=1e-12):
    """``det(I - L^theta L^(-theta))`` for the order-N truncation."""
    T, _ = twisted_square(s, w, theta, f_coeffs, N, tol)
    return complex(np.linalg.det(np.eye(N) - T))


def zeta_minus(s, w=0.0, f_coeffs=(1.0,), N=24, tol=1e-12):
    """``det(I - L_s)``; vanishes at s = 1 where L has eigenvalue 1."""
    L = build_operator(s, w, 0.0, f_coeffs, N, tol).matrix
    return complex(np.linalg.det(np.eye(N) - L))


def zeta_plus(s, w=0.0, f_coeffs=(1.0,), N=24, tol=1e-12):
    """``det(I + L_s)``."""
    L = build_operator(s, w, 0.0, f_coeffs, N, tol).matrix
    return complex(np.linalg.det(np.eye(N) + L))


def zeta_product(s, w=0.0, f_coeffs=(1.0,), N=24, tol=1e-12):
    """Return ``(Z^- Z^+, det(I - L^2))`` from one truncation of L.

    The two agree identically in exact arithmetic; comparing them checks the
    linear algebra rather than the truncation.
    """
    L = build_operator(s, w, 0.0, f_coeffs, N, tol).matrix
    I = np.eye(N)
    prod = np.linalg.det(I - L) * np.linalg.det(I + L)
    return complex(prod), complex(np.linalg.det(I - L @ L))
