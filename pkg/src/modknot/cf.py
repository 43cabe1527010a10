"""Periodic continued fractions, the Gauss map and geodesic lengths.

A purely periodic expansion x = [0; a_1, ..., a_n, a_1, ...] is the
attracting fixed point of z -> 1/(a_1 + 1/(... + 1/(a_n + z))), the Moebius
map of B_{a_1} ... B_{a_n} with B_a = [[0, 1], [1, a]].  Such x are exactly
the reduced quadratic irrationals: 0 < x < 1 with conjugate below -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Sequence

__all__ = [
    "PeriodicWord",
    "QuadraticSurd",
    "OrbitGeometry",
    "b_product",
    "gauss_map_real",
    "surd_from_word",
    "gauss_map_surd",
    "minimal_period",
    "least_rotation",
    "alt_sum",
    "trace_even",
    "length_from_trace",
    "geodesic_length",
    "geodesic_length_trace",
    "orbit_points",
    "orbit_values",
    "orbit_geometry",
    "r0",
    "extended_gauss_map",
    "return_time",
    "orbit_return_time",
]


def least_rotation(digits: Sequence[int], step: int = 1) -> tuple:
    """Lexicographically least rotation of ``digits`` by multiples of ``step``."""
    d = tuple(digits)
    n = len(d)
    return min(d[k:] + d[:k] for k in range(0, n, step))


@dataclass(frozen=True)
class PeriodicWord:
    """Digits of a purely periodic continued fraction, one period (or more)."""

    digits: tuple

    def __init__(self, digits: Iterable[int]):
        d = tuple(int(a) for a in digits)
        if not d:
            raise ValueError("a periodic word needs at least one digit")
        if any(a < 1 for a in d):
            raise ValueError(f"digits must be positive integers, got {d}")
        object.__setattr__(self, "digits", d)

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __str__(self):
        return ",".join(map(str, self.digits))

    @classmethod
    def parse(cls, text: str) -> "PeriodicWord":
        return cls(int(t) for t in text.replace("(", "").replace(")", "").split(",") if t.strip())

    def primitive_root(self) -> tuple["PeriodicWord", int]:
        n = len(self.digits)
        for p in range(1, n + 1):
            if n % p == 0 and self.digits == self.digits[:p] * (n // p):
                return PeriodicWord(self.digits[:p]), n // p
        raise AssertionError("unreachable")

    @property
    def is_primitive(self) -> bool:
        return self.primitive_root()[1] == 1

    def canonical(self) -> "PeriodicWord":
        """Least rotation of the primitive root (the necklace key)."""
        root, _ = self.primitive_root()
        return PeriodicWord(least_rotation(root.digits))

    def rotate(self, k: int = 1) -> "PeriodicWord":
        k %= len(self.digits)
        return PeriodicWord(self.digits[k:] + self.digits[:k])

    def reverse(self) -> "PeriodicWord":
        return PeriodicWord(self.digits[::-1])

    def even_expansion(self) -> "PeriodicWord":
        """The word itself if of even length, else the word repeated twice."""
        return self if len(self.digits) % 2 == 0 else PeriodicWord(self.digits * 2)

    @property
    def parity(self) -> str:
        return "even" if len(self.digits) % 2 == 0 else "odd"


def _require_primitive(w: PeriodicWord) -> None:
    if not w.is_primitive:
        raise ValueError(f"word {w} is not primitive; pass its primitive root")


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number (P + sqrt(D))/Q with Q | D - P**2.

    The sign of Q is part of the value, since flipping it would switch the
    branch of the square root; surds coming from periodic words have Q > 0.
    """

    P: int
    D: int
    Q: int

    def __init__(self, P: int, D: int, Q: int):
        P, D, Q = int(P), int(D), int(Q)
        if Q == 0:
            raise ValueError("Q must be nonzero")
        if D <= 0 or isqrt(D) ** 2 == D:
            raise ValueError(f"D = {D} must be a positive non-square")
        if (D - P * P) % Q:
            # scale so that Q divides D - P^2
            P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
        g = gcd(gcd(P, Q), (D - P * P) // Q)
        if g > 1:
            P, D, Q = P // g, D // (g * g), Q // g
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "Q", Q)

    def __str__(self):
        return f"({self.P},{self.D},{self.Q})"

    def __float__(self):
        return self.value()

    def value(self) -> float:
        """Float value, evaluated without cancellation."""
        r = math.sqrt(self.D)
        if self.P >= 0:
            return (self.P + r) / self.Q
        return (self.D - self.P * self.P) / (self.Q * (r - self.P))

    def conjugate_value(self) -> float:
        r = math.sqrt(self.D)
        if self.P <= 0:
            return (self.P - r) / self.Q
        return (self.P * self.P - self.D) / (self.Q * (self.P + r))

    def partner(self) -> float:
        """y = -1/conjugate, the second coordinate of the natural extension."""
        r = math.sqrt(self.D)
        if self.P <= 0:
            return self.Q / (r - self.P)
        return self.Q * (self.P + r) / (self.D - self.P * self.P)

    def mp_value(self, dps: int = 50):
        import mpmath

        with mpmath.workdps(dps):
            return (self.P + mpmath.sqrt(self.D)) / self.Q

    def floor(self) -> int:
        r = isqrt(self.D)
        if self.Q > 0:
            return (self.P + r) // self.Q
        return (-self.P - r - 1) // (-self.Q)

    def is_reduced(self) -> bool:
        """Exact test of 0 < x < 1 and conjugate < -1."""
        P, D, Q = self.P, self.D, self.Q
        if Q < 0:
            return False
        positive = P >= 0 or D > P * P
        below_one = Q - P > 0 and D < (Q - P) ** 2
        conj_low = P + Q < 0 or D > (P + Q) ** 2
        return positive and below_one and conj_low

    def reciprocal_minus(self, a: int) -> "QuadraticSurd":
        """1/x - a, exactly."""
        Qn = (self.D - self.P * self.P) // self.Q
        return QuadraticSurd(-self.P - a * Qn, self.D, Qn)

    def satisfies(self, m) -> bool:
        """Whether the Moebius map of m = ((a, b), (c, d)) fixes this surd."""
        (a, b), (c, d) = m
        R = (self.P * self.P - self.D) // self.Q
        u = (c, d - a, -b)
        v = (self.Q, -2 * self.P, R)
        return (u[0] * v[1] == u[1] * v[0] and u[0] * v[2] == u[2] * v[0]
                and u[1] * v[2] == u[2] * v[1])


def b_product(digits: Sequence[int]) -> tuple:
    """B_{a_1} ... B_{a_n} as ((p, q), (r, t)) in Python integers."""
    p, q, r, t = 1, 0, 0, 1
    for a in digits:
        p, q, r, t = q, p + a * q, t, r + a * t
    return (p, q), (r, t)


def gauss_map_real(x: float) -> float:
    """Fractional part of 1/x on (0, 1]."""
    if not 0 < x <= 1:
        raise ValueError(f"Gauss map is defined on (0, 1], got {x}")
    return math.modf(1.0 / x)[0]


def surd_from_word(w: PeriodicWord) -> QuadraticSurd:
    """The reduced surd with expansion [0; w, w, ...]."""
    w = PeriodicWord(w)
    (p, q), (r, t) = b_product(w.digits)
    return QuadraticSurd(p - t, (p - t) ** 2 + 4 * q * r, 2 * r)


def gauss_map_surd(x: QuadraticSurd, w: PeriodicWord) -> tuple[QuadraticSurd, PeriodicWord]:
    """Apply the Gauss map to the periodic point x = [0; w]."""
    w = PeriodicWord(w)
    if surd_from_word(w) != x:
        raise ValueError(f"surd {x} does not have expansion {w}")
    return x.reciprocal_minus(w[0]), w.rotate(1)


def minimal_period(w: PeriodicWord) -> tuple[PeriodicWord, int]:
    return PeriodicWord(w).primitive_root()


def alt_sum(w: PeriodicWord) -> int:
    """-a_1 + a_2 - ... + a_n for even n, and 0 for odd n."""
    w = PeriodicWord(w)
    _require_primitive(w)
    if len(w) % 2:
        return 0
    return sum(a if j % 2 else -a for j, a in enumerate(w.digits))


def trace_even(w: PeriodicWord) -> int:
    """Trace of the B-product over the minimal even expansion."""
    (p, _), (_, t) = b_product(PeriodicWord(w).digits)
    tr = p + t
    return tr if len(w) % 2 == 0 else tr * tr + 2


def length_from_trace(tr: int) -> float:
    """2 arccosh(tr/2), safe for arbitrarily large integer traces."""
    if tr <= 2:
        raise ValueError("length needs a hyperbolic trace > 2")
    if tr < 1 << 50:
        return 2.0 * math.acosh(tr / 2.0)
    return 2.0 * math.log(tr)


def orbit_points(w: PeriodicWord) -> list[QuadraticSurd]:
    """Surds [0; rotation_j(w)] for j = 0 .. |w| - 1."""
    w = PeriodicWord(w)
    x = surd_from_word(w)
    pts = [x]
    for a in w.digits[:-1]:
        x = x.reciprocal_minus(a)
        pts.append(x)
    return pts


def orbit_values(w: PeriodicWord) -> list[float]:
    return [p.value() for p in orbit_points(w)]


def geodesic_length(w: PeriodicWord) -> float:
    """-2 times the sum of log over the orbit of the minimal even expansion."""
    w = PeriodicWord(w)
    _require_primitive(w)
    factor = 2.0 if len(w) % 2 == 0 else 4.0
    return -factor * math.fsum(math.log(x) for x in orbit_values(w))


def geodesic_length_trace(w: PeriodicWord) -> float:
    w = PeriodicWord(w)
    _require_primitive(w)
    return length_from_trace(trace_even(w))


@dataclass(frozen=True)
class OrbitGeometry:
    word: PeriodicWord
    orbit_points: tuple
    length: float
    alt: int
    parity: str


def orbit_geometry(w: PeriodicWord) -> OrbitGeometry:
    w = PeriodicWord(w)
    _require_primitive(w)
    return OrbitGeometry(word=w, orbit_points=tuple(orbit_points(w)), length=geodesic_length(w),
                         alt=alt_sum(w), parity=w.parity)


def r0(x: float, y: float) -> float:
    if not (0 < x <= 1 and 0 < y <= 1):
        raise ValueError("r0 is defined on (0, 1]^2")
    return -0.5 * math.log(x * y)


def extended_gauss_map(x: float, y: float) -> tuple[float, float]:
    """(x, y) -> ({1/x}, 1/(y + floor(1/x)))."""
    inv = 1.0 / x
    a = math.floor(inv)
    return inv - a, 1.0 / (y + a)


def return_time(x: float, y: float) -> float:
    """r0(x, y) + r0 of the image under the extended Gauss map."""
    if not (0 < x < 1 and 0 < y < 1):
        raise ValueError("return time is defined on (0, 1)^2")
    x1, y1 = extended_gauss_map(x, y)
    if x1 <= 0:
        raise ValueError("orbit hits a rational point")
    return r0(x, y) + r0(x1, y1)


def orbit_return_time(w: PeriodicWord) -> float:
    """Sum of return times over the orbit of the minimal even expansion.

    Each step starts from the exact surd rather than from the previous float
    image, which would drift off the periodic orbit.
    """
    w = PeriodicWord(w)
    _require_primitive(w)
    pts = orbit_points(w.even_expansion())
    return math.fsum(return_time(p.value(), p.partner()) for p in pts)
