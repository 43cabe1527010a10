import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from modknot.cf import (PeriodicWord, QuadraticSurd, alt_sum, b_product, extended_gauss_map,
                        gauss_map_real, gauss_map_surd, geodesic_length, geodesic_length_trace,
                        least_rotation, length_from_trace, minimal_period, orbit_geometry,
                        orbit_points, orbit_return_time, orbit_values, r0, return_time,
                        surd_from_word, trace_even)

words = st.lists(st.integers(1, 20), min_size=1, max_size=10).map(PeriodicWord)
primitive = words.filter(lambda w: w.is_primitive)


def cf_digits(x, n):
    """First n partial quotients of x in (0, 1), in high precision."""
    out = []
    with mpmath.workdps(200):
        for _ in range(n):
            x = 1 / x
            a = int(mpmath.floor(x))
            out.append(a)
            x -= a
    return out


class TestPeriodicWord:
    def test_validation(self):
        with pytest.raises(ValueError):
            PeriodicWord(())
        with pytest.raises(ValueError):
            PeriodicWord((1, 0))

    def test_parse_and_str(self):
        assert PeriodicWord.parse("1,2") == PeriodicWord((1, 2))
        assert str(PeriodicWord((3, 1))) == "3,1"

    def test_primitive_root(self):
        assert PeriodicWord((2, 1, 2, 1)).primitive_root() == (PeriodicWord((2, 1)), 2)
        assert minimal_period(PeriodicWord((1, 2, 1, 2))) == (PeriodicWord((1, 2)), 2)
        assert not PeriodicWord((1, 1)).is_primitive

    def test_even_expansion(self):
        assert PeriodicWord((1,)).even_expansion() == PeriodicWord((1, 1))
        assert PeriodicWord((1, 2)).even_expansion() == PeriodicWord((1, 2))
        assert PeriodicWord((1, 2, 3)).even_expansion() == PeriodicWord((1, 2, 3, 1, 2, 3))

    def test_least_rotation(self):
        assert least_rotation((3, 1, 2)) == (1, 2, 3)
        # rotations by two positions keep the parity of indices
        assert least_rotation((3, 1, 2, 1), 2) == (2, 1, 3, 1)

    @given(words)
    def test_canonical_is_rotation_invariant(self, w):
        assert all(w.rotate(k).canonical() == w.canonical() for k in range(len(w)))


class TestSurd:
    def test_known_words(self):
        assert surd_from_word(PeriodicWord((1, 2))) == QuadraticSurd(-1, 3, 1)
        assert surd_from_word(PeriodicWord((1,))) == QuadraticSurd(-1, 5, 2)
        assert surd_from_word(PeriodicWord((2,))) == QuadraticSurd(-1, 2, 1)
        assert surd_from_word(PeriodicWord((1,))).value() == pytest.approx((math.sqrt(5) - 1) / 2)

    def test_normalization(self):
        # (2 + 2 sqrt 3)/4 must reduce to (1 + sqrt 3)/2
        assert QuadraticSurd(2, 12, 4) == QuadraticSurd(1, 3, 2)
        with pytest.raises(ValueError):
            QuadraticSurd(0, 4, 1)

    @given(primitive)
    def test_expansion_reproduces_word(self, w):
        x = surd_from_word(w)
        assert x.is_reduced()
        assert cf_digits(x.mp_value(220), 3 * len(w)) == list(w) * 3

    @given(primitive)
    def test_float_value_accuracy(self, w):
        x = surd_from_word(w)
        assert abs(x.value() - float(x.mp_value())) <= 4e-16

    @given(primitive)
    def test_shift_walks_the_orbit(self, w):
        x = surd_from_word(w)
        y, v = gauss_map_surd(x, w)
        assert v == w.rotate(1)
        assert y == surd_from_word(v)
        assert abs(gauss_map_real(x.value()) - y.value()) < 1e-9

    @given(primitive)
    def test_fixed_by_b_product(self, w):
        assert surd_from_word(w).satisfies(b_product(tuple(w)))

    def test_partner(self):
        x = surd_from_word(PeriodicWord((1, 2)))
        assert x.partner() == pytest.approx(-1 / x.conjugate_value())
        assert 0 < x.partner() < 1


class TestAltAndLength:
    def test_alt(self):
        assert alt_sum(PeriodicWord((1, 3))) == 2
        assert alt_sum(PeriodicWord((3, 1))) == -2
        assert alt_sum(PeriodicWord((1, 2, 3))) == 0
        with pytest.raises(ValueError):
            alt_sum(PeriodicWord((1, 1)))

    def test_lengths(self):
        assert geodesic_length(PeriodicWord((1,))) == pytest.approx(1.9248473002384139, abs=1e-13)
        assert geodesic_length(PeriodicWord((1, 2))) == pytest.approx(2.633915793849633, abs=1e-13)
        assert geodesic_length(PeriodicWord((2,))) == pytest.approx(3.5254943480781717, abs=1e-13)
        assert trace_even(PeriodicWord((1,))) == 3
        assert length_from_trace(3) == pytest.approx(2 * math.acosh(1.5))

    def test_huge_trace(self):
        tr = 10 ** 400
        assert length_from_trace(tr) == pytest.approx(2 * 400 * math.log(10), rel=1e-15)

    @settings(max_examples=300)
    @given(primitive)
    def test_dual_length(self, w):
        assert abs(geodesic_length(w) - geodesic_length_trace(w)) < 1e-9

    @given(primitive)
    def test_telescoping(self, w):
        assert orbit_return_time(w) == pytest.approx(geodesic_length(w), abs=1e-10)

    def test_orbit_geometry(self):
        g = orbit_geometry(PeriodicWord((1, 2)))
        assert g.alt == 1 and g.parity == "even" and len(g.orbit_points) == 2
        assert sorted(orbit_values(PeriodicWord((1, 2)))) == pytest.approx(
            sorted(p.value() for p in orbit_points(PeriodicWord((1, 2)))))


class TestExtendedMap:
    def test_extended_map(self):
        x, y = 0.7, 0.3
        x1, y1 = extended_gauss_map(x, y)
        assert x1 == pytest.approx(1 / 0.7 - 1)
        assert y1 == pytest.approx(1 / 1.3)
        assert r0(0.5, 0.5) == pytest.approx(math.log(2))

    def test_rational_hit(self):
        with pytest.raises(ValueError):
            return_time(0.5, 0.5)
