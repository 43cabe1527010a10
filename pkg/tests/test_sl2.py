import random
from fractions import Fraction
from math import floor

import pytest
from hypothesis import given, settings, strategies as st

from modknot.cf import PeriodicWord, alt_sum, surd_from_word
from modknot.sl2 import (B, I, IntMatrix2, S, SUWord, T, U, ba_factorize, classify_symmetry,
                         conjugacy_class_key, dedekind_sum, matrix_to_su_word, rademacher,
                         rademacher_dedekind, reversal_reciprocal, square_root_det_minus_one,
                         word_to_matrix)

primitive_even = (st.lists(st.integers(1, 9), min_size=1, max_size=4)
                  .map(lambda d: PeriodicWord(d + d[:1] if len(d) % 2 else d))
                  .filter(lambda w: w.is_primitive and len(w) % 2 == 0))
primitive = st.lists(st.integers(1, 9), min_size=1, max_size=7).map(PeriodicWord).filter(
    lambda w: w.is_primitive)


def dedekind_direct(h, k):
    """Defining sum with sawtooth ((x)), in exact arithmetic."""
    def saw(x):
        return Fraction(0) if x.denominator == 1 else x - floor(x) - Fraction(1, 2)
    return sum(saw(Fraction(r, k)) * saw(Fraction(h * r, k)) for r in range(1, k))


def random_sl2(rng, steps=6):
    g = I
    for _ in range(steps):
        g = g @ rng.choice([S, U, U.inverse(), T, T.inverse()])
    return g


class TestMatrices:
    def test_generators(self):
        assert S @ S == -I
        assert U @ U @ U in (I, -I)
        assert (U @ S).proj_eq(T)
        assert B(3).det == -1
        assert IntMatrix2(((1, 2), (3, 7))) == IntMatrix2(1, 2, 3, 7)

    def test_word_to_matrix(self):
        assert word_to_matrix(PeriodicWord((1, 2))) == IntMatrix2(1, 2, 1, 3)

    def test_power_and_inverse(self):
        A = IntMatrix2(2, 1, 1, 1)
        assert A ** 3 @ A ** -3 == I
        assert A.transpose() == A


class TestFactorization:
    @given(primitive, st.integers(1, 3), st.booleans(), st.booleans())
    def test_round_trip(self, w, k, negate, invert):
        m = word_to_matrix(w) ** k
        if negate:
            m = -m
        if invert:
            m = m.inverse()
        u, power, sign = ba_factorize(m, surd_from_word(w))
        assert u == w
        assert power == (-k if invert else k)
        expected = word_to_matrix(u) ** power
        assert m == (expected if sign == 1 else -expected)

    def test_rejects_non_fixing(self):
        with pytest.raises(ValueError):
            ba_factorize(word_to_matrix(PeriodicWord((1, 2))), surd_from_word(PeriodicWord((2,))))

    def test_rejects_identity_and_non_unimodular(self):
        with pytest.raises(ValueError):
            ba_factorize(IntMatrix2(2, 0, 0, 1), surd_from_word(PeriodicWord((1,))))


class TestRademacher:
    def test_basic_values(self):
        assert rademacher(S) == 0
        assert rademacher(U) == -2
        assert rademacher(U.inverse()) == 2
        assert rademacher(I) == 0

    def test_su_word_reproduces_matrix(self):
        rng = random.Random(1)
        for _ in range(200):
            A = random_sl2(rng, 10)
            assert matrix_to_su_word(A).to_matrix().proj_eq(A)

    def test_reduction(self):
        assert SUWord.reduce([0, 0, 1, 1, 1]).tokens == ()
        assert SUWord.reduce([1, 1]).tokens == (-1,)

    @settings(max_examples=200)
    @given(primitive_even)
    def test_equals_alt(self, w):
        A = word_to_matrix(w)
        assert rademacher(A) == alt_sum(w) == rademacher_dedekind(A)

    def test_conjugation_invariance_and_antisymmetry(self):
        rng = random.Random(7)
        for _ in range(300):
            A = random_sl2(rng, 8)
            if abs(A.trace) <= 2:
                continue
            g = random_sl2(rng, 6)
            assert rademacher(g @ A @ g.inverse()) == rademacher(A)
            assert rademacher(A.inverse()) == -rademacher(A)

    @pytest.mark.parametrize("h,k", [(1, 1), (1, 3), (2, 5), (3, 7), (5, 12), (7, 30), (-4, 9)])
    def test_dedekind_sum(self, h, k):
        assert dedekind_sum(h, k) == dedekind_direct(h, k)

    def test_dedekind_small_values(self):
        assert dedekind_sum(1, 3) == Fraction(1, 18)
        with pytest.raises(ValueError):
            dedekind_sum(2, 4)


class TestConjugacy:
    def test_key_of_b_product(self):
        assert conjugacy_class_key(word_to_matrix(PeriodicWord((1, 2)))) == ((1, 2), 1)
        assert conjugacy_class_key(IntMatrix2(2, 3, 1, 2)) == ((1, 2), 1)
        # trace 5 lies in the class of B_1 B_3
        assert conjugacy_class_key(IntMatrix2(3, 5, 1, 2)) == ((1, 3), 1)

    def test_key_invariance(self):
        rng = random.Random(3)
        for _ in range(300):
            w = PeriodicWord(rng.randint(1, 6) for _ in range(2 * rng.randint(1, 3)))
            if not w.is_primitive:
                continue
            A = word_to_matrix(w) ** rng.randint(1, 2)
            g = random_sl2(rng, 7)
            assert conjugacy_class_key(g @ A @ g.inverse()) == conjugacy_class_key(A)

    def test_rejects_elliptic(self):
        with pytest.raises(ValueError):
            conjugacy_class_key(S)

    @given(primitive)
    def test_reciprocal_two_ways(self, w):
        A = word_to_matrix(w.even_expansion())
        by_key = conjugacy_class_key(A.inverse()) == conjugacy_class_key(A)
        assert reversal_reciprocal(w.digits) == by_key == classify_symmetry(w)["reciprocal"]

    def test_known_reciprocals(self):
        # x^2 + 2xy - 2y^2 and its negative are not narrowly equivalent
        assert not classify_symmetry(PeriodicWord((1, 2)))["reciprocal"]
        assert classify_symmetry(PeriodicWord((1, 2, 2, 1)))["reciprocal"]
        assert classify_symmetry(PeriodicWord((1,)))["reciprocal"]


class TestInert:
    def test_square_root(self):
        R = square_root_det_minus_one(word_to_matrix(PeriodicWord((1, 1))))
        assert R is not None and R.det == -1 and (R @ R).proj_eq(word_to_matrix(PeriodicWord((1, 1))))
        assert square_root_det_minus_one(word_to_matrix(PeriodicWord((1, 2)))) is None

    @given(primitive)
    def test_odd_iff_square(self, w):
        root = square_root_det_minus_one(word_to_matrix(w.even_expansion()))
        assert (root is not None) == (len(w) % 2 == 1) == classify_symmetry(w)["inert"]
