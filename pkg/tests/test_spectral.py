import math

import mpmath
import numpy as np
import pytest

from modknot.census import CensusFile, enumerate_orbits
from modknot.spectral import (EigenvalueTrackingError, NuclearityError, build_operator,
                              continuity_exponent, dominant_eigenvalue, eta_odd_via_census,
                              eta_via_census, eta_via_determinant, find_dominant_zero,
                              fredholm_det, leading_eigenvalue, lerch_tail, residue, spectrum,
                              trace_via_words, twisted_square, zeta_minus, zeta_plus,
                              zeta_product)
from modknot.stats import gauss_integral

LOG2 = math.log(2)
RES0 = 6 * LOG2 / math.pi ** 2
# second eigenvalue of the Gauss-Kuzmin-Wirsing operator (Wirsing's constant)
WIRSING = -0.3036630028987326


def mp_lerch_tail(tau, theta, start):
    q = mpmath.expjpi(theta)
    with mpmath.workdps(30):
        if theta == 0:
            return complex(mpmath.zeta(tau, start))
        return complex(q ** start * mpmath.lerchphi(q, tau, start))


def fixed_point_trace(s, theta=0.0):
    """sum_a phase(a) x_a^(2s) / (1 + x_a^2), x_a = [0; a, a, ...]."""
    def term(a):
        x = (-a + mpmath.sqrt(a * a + 4)) / 2
        return mpmath.expjpi(theta * a) * x ** (2 * s) / (1 + x * x)
    # the default acceleration is off by about 1e-6 for the slowly decaying untwisted sum
    method = "euler-maclaurin" if theta == 0 else "r+s"
    with mpmath.workdps(30):
        return complex(mpmath.nsum(term, [1, mpmath.inf], method=method))


class TestLerch:
    @pytest.mark.parametrize("tau", [2.0, 3.5, 2.5 + 1.0j, 7.0])
    @pytest.mark.parametrize("theta,start", [(0.0, 1), (0.0, 80), (0.3, 5), (0.05, 64), (-0.05, 64)])
    def test_against_mpmath(self, tau, theta, start):
        val, err = lerch_tail(tau, theta, start)
        ref = mp_lerch_tail(tau, theta, start)
        assert abs(val[0] - ref) <= max(1e-13, 1e-12 * abs(ref))
        assert err[0] < 1e-10

    def test_vectorized(self):
        vals, _ = lerch_tail([2.0, 3.0], 0.0, 10)
        assert vals.shape == (2,)

    def test_validation(self):
        with pytest.raises(ValueError):
            lerch_tail(1.0, 0.0, 1)
        with pytest.raises(ValueError):
            lerch_tail(2.0, 1.0, 1)
        with pytest.raises(ValueError):
            lerch_tail(2.0, 0.0, 0)


class TestOperator:
    def test_gauss_density_is_fixed(self):
        op = build_operator(1.0, N=24)
        # Taylor coefficients of 1/(1 + z) about z = 1
        h = np.array([(-1) ** j / 2 ** (j + 1) for j in range(24)])
        assert np.max(np.abs((op.matrix @ h - h)[:12])) < 1e-6

    def test_wirsing_constant(self):
        ev = spectrum(build_operator(1.0, N=32).matrix).eigenvalues
        assert abs(ev[0] - 1) < 1e-9
        assert abs(ev[1] - WIRSING) < 1e-8

    def test_tail_route_against_direct_sum(self):
        a = build_operator(1.3, 0.0, 0.07, N=12, cutoff=64).matrix
        b = build_operator(1.3, 0.0, 0.07, N=12, cutoff=4000).matrix
        assert np.max(np.abs(a - b)) < 1e-9

    def test_weight_derivative_of_trace(self):
        # d/dw Tr L at w = 0 weights each fixed point x_a by f(x_a) = x_a
        h = 1e-5
        tr = lambda w: np.trace(build_operator(1.5, w, 0.0, (0.0, 1.0), 30).matrix)
        fd = (tr(h) - tr(-h)) / (2 * h)

        def term(a):
            x = (-a + mpmath.sqrt(a * a + 4)) / 2
            return x ** 4 / (1 + x * x)
        with mpmath.workdps(30):
            ref = float(mpmath.nsum(term, [1, mpmath.inf], method="euler-maclaurin"))
        assert abs(fd - ref) < 1e-8

    def test_nuclearity_guard(self):
        with pytest.raises(NuclearityError):
            build_operator(0.5)

    def test_twisted_square_untwisted(self):
        L = build_operator(1.5, N=16).matrix
        sq, _ = twisted_square(1.5, 0.0, 0.0, (1.0,), 16)
        assert np.max(np.abs(sq - L @ L)) < 1e-14

    def test_leading_eigenvalue_tracking(self):
        L = build_operator(1.0, N=20).matrix
        assert abs(leading_eigenvalue(L, seed=1.0) - 1) < 1e-6
        with pytest.raises(EigenvalueTrackingError):
            leading_eigenvalue(L, seed=-0.3)


class TestDeterminants:
    def test_zeros_at_one(self):
        assert abs(zeta_minus(1.0)) < 1e-8
        assert abs(zeta_plus(1.0)) > 1.0
        assert abs(fredholm_det(1.0)) < 1e-8

    @pytest.mark.parametrize("s", [1.0, 1.5, 0.9 + 2j])
    def test_product_identity(self, s):
        prod, direct = zeta_product(s)
        assert abs(prod - direct) < 1e-12 * max(1.0, abs(direct))


class TestTraces:
    @pytest.mark.parametrize("s", [1.2, 1.5, 2.0])
    def test_against_fixed_point_formula(self, s):
        assert abs(trace_via_words(1, s) - fixed_point_trace(s)) < 1e-9

    def test_twisted_fixed_point_formula(self):
        # n = 1 carries the -theta phase
        assert abs(trace_via_words(1, 1.5, 0.0, 0.05) - fixed_point_trace(1.5, -0.05)) < 1e-9

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_against_matrix(self, n):
        L = build_operator(1.5, N=30).matrix
        ref = np.trace(np.linalg.matrix_power(L, n))
        assert abs(trace_via_words(n, 1.5) - ref) < 1e-6

    def test_error_estimate(self):
        val, err = trace_via_words(2, 1.5, return_error=True)
        assert err < 1e-8


class TestZerosAndResidues:
    def test_untwisted_zero(self):
        z = find_dominant_zero(0.0)
        assert abs(z.value - 1) < 1e-7 and z.error < 1e-6

    def test_validation(self):
        with pytest.raises(ValueError):
            find_dominant_zero(0.1)
        with pytest.raises(ValueError):
            find_dominant_zero(0.0, bracket=(0.5, 1.0))

    def test_dominant_eigenvalue_at_zero_is_one(self):
        assert abs(dominant_eigenvalue(0.94, 0.02) - 1) < 1e-6

    @pytest.mark.parametrize("f", [(1.0,), (0.0, 1.0), (0.0, 0.0, 1.0), (1.0, -2.0, 1.0)])
    def test_residue_closed_form(self, f):
        assert abs(residue(0.0, f).value - RES0 * gauss_integral(f)) < 1e-6

    def test_residue_positive_and_continuous(self):
        r0 = residue(0.0).value
        r1 = residue(1e-3).value
        assert r1 > 0 and abs(r1 - r0) < 0.05

    def test_continuity_exponent(self):
        slope, shifts = continuity_exponent()
        assert 0.3 < slope < 1.5
        assert np.all(np.diff(shifts) > 0)


class TestEta:
    def test_tiny_census_closed_form(self):
        c = CensusFile(2.0, enumerate_orbits(2.0), {})
        ell = 2 * math.acosh(1.5)
        q = math.exp(-2 * ell)
        assert eta_via_census(2.0, 0.0, (1.0,), c, 2.0).value == pytest.approx(2 * q / (1 - q), rel=1e-14)
        assert eta_via_census(2.0, 0.0, (1.0,), c, 2.0, k_max=1).value == pytest.approx(2 * q, rel=1e-14)
        h = math.exp(-ell)
        assert eta_odd_via_census(2.0, (1.0,), c, 2.0).value == pytest.approx(2 * h / (1 - h * h), rel=1e-14)
        assert eta_odd_via_census(2.0, (1.0,), c, 2.0, k_max=1).value == pytest.approx(2 * h, rel=1e-14)

    def test_callable_weight(self):
        c = CensusFile(4.0, enumerate_orbits(4.0), {})
        a = eta_via_census(2.0, 0.0, (0.0, 1.0), c, 4.0).value
        b = eta_via_census(2.0, 0.0, lambda x: x, c, 4.0).value
        assert a == pytest.approx(b, rel=1e-14)

    def test_determinant_route_close_to_census(self, census14):
        det = eta_via_determinant(2.0)
        cen = eta_via_census(2.0, 0.0, (1.0,), census14, 14.0)
        assert abs(det.value - cen.value) < cen.error

    def test_guards(self):
        with pytest.raises(ValueError):
            eta_via_determinant(0.7)
        with pytest.raises(ValueError):
            eta_via_census(1.0, 0.0, (1.0,), [], 2.0)
