"""Integer 2x2 matrices up to sign: B-products, factorization, S/U words,
the Rademacher function and conjugacy classes in PSL(2, Z)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

from .cf import PeriodicWord, QuadraticSurd, b_product, least_rotation, surd_from_word

__all__ = [
    "IntMatrix2",
    "SUWord",
    "S",
    "U",
    "T",
    "W",
    "I",
    "B",
    "word_to_matrix",
    "ba_factorize",
    "matrix_to_su_word",
    "rademacher",
    "rademacher_dedekind",
    "dedekind_sum",
    "conjugacy_class_key",
    "classify_symmetry",
    "square_root_det_minus_one",
    "reversal_reciprocal",
]


@dataclass(frozen=True)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    def __init__(self, a, b=None, c=None, d=None):
        if b is None:
            (a, b), (c, d) = a
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, int(v))

    def __matmul__(self, o: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                          self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self):
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def __pow__(self, m: int) -> "IntMatrix2":
        base = self if m >= 0 else self.inverse()
        out = I
        for _ in range(abs(m)):
            out = out @ base
        return out

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def rows(self):
        return (self.a, self.b), (self.c, self.d)

    def inverse(self) -> "IntMatrix2":
        dt = self.det
        if dt not in (1, -1):
            raise ValueError(f"{self} is not invertible over Z")
        return IntMatrix2(dt * self.d, -dt * self.b, -dt * self.c, dt * self.a)

    def transpose(self) -> "IntMatrix2":
        return IntMatrix2(self.a, self.c, self.b, self.d)

    def normalized(self) -> "IntMatrix2":
        """Representative of {M, -M} whose first nonzero entry is positive."""
        for v in (self.a, self.b, self.c, self.d):
            if v:
                return self if v > 0 else -self
        return self

    def proj_eq(self, other: "IntMatrix2") -> bool:
        return self.normalized() == other.normalized()


S = IntMatrix2(0, -1, 1, 0)
U = IntMatrix2(1, -1, 1, 0)
T = IntMatrix2(1, 1, 0, 1)
W = IntMatrix2(1, 0, 0, -1)
I = IntMatrix2(1, 0, 0, 1)


def B(a: int) -> IntMatrix2:
    return IntMatrix2(0, 1, 1, a)


def word_to_matrix(w: PeriodicWord) -> IntMatrix2:
    return IntMatrix2(b_product(PeriodicWord(w).digits))


# -- factorization into B_a factors ------------------------------------------

def _peel(m: IntMatrix2) -> list[int]:
    """Digits b_i with m = B_{b_1} ... B_{b_k}, for m with entries >= 0.

    Each step strips B_b^{-1} with b = floor(c/a); the loop stops on a
    matrix [[0, +-1], [1, d']].  A terminal -1 is rewritten using
    B_b [[0,-1],[1,d']] = B_{b-1} B_1 B_{d'-1}, or, after a zero digit,
    B_b B_0 [[0,-1],[1,d']] = [[0,-1],[1,d'-b]].  Zero digits are finally
    merged through B_a B_0 B_b = B_{a+b}.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    digits: list[int] = []
    while a != 0:
        k = c // a
        a, b, c, d = c - k * a, d - k * b, a, b
        digits.append(k)
    if c != 1 or b not in (1, -1):
        raise ValueError(f"unexpected terminal matrix [[0,{b}],[{c},{d}]]")
    while b == -1:
        if not digits:
            raise ValueError("terminal [[0,-1],[1,d]] with nothing to absorb it")
        last = digits.pop()
        if last != 0:
            digits.extend([last - 1, 1, d - 1])
            b = 1
            d = None
        else:
            if not digits:
                raise ValueError("dangling zero digit")
            d -= digits.pop()
    if d is not None:
        digits.append(d)
    return _merge_zeros(digits)


def _merge_zeros(digits: list[int]) -> list[int]:
    out: list[int] = []
    i = 0
    while i < len(digits):
        x = digits[i]
        if x == 0 and out and i + 1 < len(digits):
            out[-1] += digits[i + 1]
            i += 2
            continue
        out.append(x)
        i += 1
    return out


def _expansion_root(x: QuadraticSurd) -> PeriodicWord:
    """Primitive period of a reduced surd, read off its continued fraction."""
    if not x.is_reduced():
        raise ValueError(f"{x} is not a reduced quadratic irrational")
    digits = []
    y = x
    seen = {y: 0}
    while True:
        a = y.reciprocal_minus(0).floor()
        digits.append(a)
        y = y.reciprocal_minus(a)
        if y in seen:
            return PeriodicWord(digits[seen[y]:])
        seen[y] = len(digits)


def ba_factorize(m: IntMatrix2, x: QuadraticSurd) -> tuple[PeriodicWord, int, int]:
    """Write m = sign * (B_{u_1} ... B_{u_n})^k with u the period of x.

    Parameters
    ----------
    m : IntMatrix2
        Element of PGL(2, Z) whose Moebius map fixes x.
    x : QuadraticSurd
        A reduced quadratic irrational.

    Returns
    -------
    (u, k, sign) with u primitive, k a nonzero integer and sign = +-1.
    """
    if abs(m.det) != 1:
        raise ValueError(f"{m} is not in PGL(2, Z)")
    if not x.satisfies(m.rows()):
        raise ValueError(f"{m} does not fix {x}")
    if m.b == 0 and m.c == 0:
        raise ValueError("the identity has no nonzero exponent")
    u = _expansion_root(x)
    entries = (m.a, m.b, m.c, m.d)
    if all(v >= 0 for v in entries) or all(v <= 0 for v in entries):
        target = m if max(entries) > 0 else -m
        inverse = False
    else:
        inv = m.inverse()
        e2 = (inv.a, inv.b, inv.c, inv.d)
        if not (all(v >= 0 for v in e2) or all(v <= 0 for v in e2)):
            raise ValueError(f"{m} is not a power of a B-product")
        target = inv if max(e2) > 0 else -inv
        inverse = True
    digits = _peel(target)
    if any(v < 1 for v in digits):
        raise ValueError(f"factorization of {m} produced digits {digits}")
    word, k = PeriodicWord(digits).primitive_root()
    if word != u:
        raise ValueError(f"factor word {word} differs from the period {u} of x")
    if inverse:
        k = -k
    power = word_to_matrix(word) ** k
    if not power.proj_eq(m):
        raise ArithmeticError(f"factorization of {m} does not multiply back")
    sign = 1 if power == m else -1
    return word, k, sign


# -- S/U words -------------------------------------------------------------------

@dataclass(frozen=True)
class SUWord:
    """Tokens 0 (S), +1 (U), -1 (U^-1), reduced under S^2 = U^3 = 1."""

    tokens: tuple

    def __str__(self):
        if not self.tokens:
            return "1"
        names = {0: "S", 1: "U", -1: "U^-1"}
        return " ".join(names[t] for t in self.tokens)

    def to_matrix(self) -> IntMatrix2:
        out = I
        for t in self.tokens:
            out = out @ (S if t == 0 else U if t == 1 else U.inverse())
        return out

    @staticmethod
    def reduce(tokens: Iterable[int]) -> "SUWord":
        stack: list[int] = []
        for t in tokens:
            if stack and t == 0 and stack[-1] == 0:
                stack.pop()
            elif stack and t != 0 and stack[-1] != 0:
                e = (stack.pop() + t) % 3
                if e:
                    stack.append(1 if e == 1 else -1)
            else:
                stack.append(t)
            # a removal can expose a new reducible pair
            while len(stack) >= 2 and stack[-1] == 0 and stack[-2] == 0:
                del stack[-2:]
        return SUWord(tuple(stack))

    def cyclic_reduce(self) -> "SUWord":
        toks = list(self.tokens)
        while len(toks) >= 2:
            first, last = toks[0], toks[-1]
            if first == 0 and last == 0:
                toks = toks[1:-1]
            elif first != 0 and last != 0:
                e = (first + last) % 3
                toks = toks[1:-1]
                if e:
                    toks = [1 if e == 1 else -1] + toks
                toks = list(SUWord.reduce(toks).tokens)
            else:
                break
        if len(toks) >= 2 and toks[0] != 0:
            toks = toks[1:] + toks[:1]
        return SUWord(tuple(toks))


def matrix_to_su_word(A: IntMatrix2) -> SUWord:
    """Reduced S/U word equal to A up to sign.

    Euclid on the left column gives A = T^{q_1} S T^{q_2} S ... (up to sign),
    then T = U S and T^{-1} = S U^{-1} projectively.
    """
    if A.det != 1:
        raise ValueError("matrix_to_su_word needs det = 1")
    a, b, c, d = A.a, A.b, A.c, A.d
    parts: list[object] = []
    while c != 0:
        q = a // c
        parts.append(q)
        parts.append("S")
        # T^{-q} then S^{-1}
        a, b = a - q * c, b - q * d
        a, b, c, d = c, d, -a, -b
    # remaining matrix is +-[[1, e], [0, 1]]
    e = b * a  # a = +-1
    parts.append(e)
    tokens: list[int] = []
    for p in parts:
        if p == "S":
            tokens.append(0)
        elif p > 0:
            tokens.extend([1, 0] * p)
        elif p < 0:
            tokens.extend([0, -1] * (-p))
    return SUWord.reduce(tokens)


def rademacher(A: IntMatrix2) -> int:
    """Rademacher function from the cyclically reduced S/U word."""
    if A.det != 1:
        raise ValueError("the Rademacher function is defined on SL(2, Z)")
    toks = matrix_to_su_word(A).cyclic_reduce().tokens
    if not toks or toks == (0,):
        return 0
    if toks == (1,):
        return -2
    if toks == (-1,):
        return 2
    return sum(t for t in toks if t != 0)


def dedekind_sum(h: int, k: int) -> Fraction:
    """s(h, k) by the reciprocity law, k > 0."""
    if k <= 0:
        raise ValueError("k must be positive")
    h %= k
    if gcd(h, k) != 1:
        raise ValueError("h and k must be coprime")
    total = Fraction(0)
    sign = 1
    while k > 1:
        # s(h,k) = -s(k,h) - 1/4 + (h/k + k/h + 1/(hk))/12
        total += sign * (Fraction(-1, 4) + (Fraction(h, k) + Fraction(k, h) + Fraction(1, h * k)) / 12)
        sign = -sign
        h, k = k % h, h
    return total


def rademacher_dedekind(A: IntMatrix2) -> int:
    """Independent evaluation through Dedekind sums (cross-check only)."""
    if A.det != 1:
        raise ValueError("det must be 1")
    a, b, c, d = A.a, A.b, A.c, A.d
    if c == 0:
        phi = Fraction(b, d)
        val = phi
    else:
        sc = 1 if c > 0 else -1
        phi = Fraction(a + d, c) - 12 * sc * dedekind_sum(d, abs(c))
        t = c * (a + d)
        val = phi - 3 * ((t > 0) - (t < 0))
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral value {val} for {A}")
    return int(val)


# -- conjugacy classes ------------------------------------------------------------

def _class_word(u: tuple) -> tuple:
    """Rotation representative allowed inside PSL(2, Z).

    Rotating by one digit conjugates by a det -1 matrix, so even words may
    only be rotated by an even number of places; odd words by any number.
    """
    return least_rotation(u, 2 if len(u) % 2 == 0 else 1)


def conjugacy_class_key(A: IntMatrix2) -> tuple[tuple, int]:
    """(word, power) such that A is PSL(2,Z)-conjugate to B_word^power.

    The word is the period of the attracting fixed point, rotated to the
    least representative that stays within the conjugacy class.
    """
    if A.det != 1:
        raise ValueError("conjugacy keys are defined for det = 1")
    if abs(A.trace) <= 2:
        raise ValueError(f"{A} is not hyperbolic")
    if A.trace < 0:
        A = -A
    a, b, c, d = A.a, A.b, A.c, A.d
    disc = (a + d) ** 2 - 4
    x = QuadraticSurd(a - d, disc, 2 * c)
    # continued fraction x = [c0; c1, ...] until the complete quotients repeat
    cs: list[int] = []
    seen: dict = {}
    y = x
    while True:
        q = y.floor()
        cs.append(q)
        y = QuadraticSurd(y.P - q * y.Q, y.D, y.Q).reciprocal_minus(0)
        if y in seen:
            k = seen[y]
            break
        seen[y] = len(cs)
    period = len(cs) - k

    def digit(i):
        return cs[i] if i < k else cs[k + (i - k) % period]

    # conjugate by T^{c0} B_{c1} ... B_{c_{j0-1}}, which has det +1 for odd j0
    j0 = k if k % 2 else k + 1
    G = T ** cs[0]
    for i in range(1, j0):
        G = G @ B(digit(i))
    u = tuple(digit(j0 + i) for i in range(period))
    Ap = G.inverse() @ A @ G
    xp = surd_from_word(PeriodicWord(u))
    word, power, _ = ba_factorize(Ap, xp)
    return _class_word(word.digits), power


def square_root_det_minus_one(A: IntMatrix2) -> IntMatrix2 | None:
    """B with det B = -1 and B^2 = +-A, if one exists (exact search).

    Cayley-Hamilton gives B^2 = t B + I with t = tr B, so B = (eA - I)/t
    and t^2 = e tr(A) - 2 for e = +-1.
    """
    for e in (1, -1):
        t2 = e * A.trace - 2
        if t2 <= 0:
            continue
        t = isqrt(t2)
        if t * t != t2:
            continue
        num = (e * A.a - 1, e * A.b, e * A.c, e * A.d - 1)
        if any(v % t for v in num):
            continue
        Bm = IntMatrix2(*(v // t for v in num))
        if Bm.det == -1 and (Bm @ Bm).proj_eq(A):
            return Bm
    return None


def reversal_reciprocal(u: Sequence[int]) -> bool:
    """Reciprocity through A^{-1} ~ A^T, whose B-word is u reversed."""
    u = tuple(u)
    return _class_word(u[::-1]) == _class_word(u)


def classify_symmetry(w: PeriodicWord) -> dict:
    """Inert and reciprocal flags of the geodesic of a primitive word."""
    w = PeriodicWord(w)
    if not w.is_primitive:
        raise ValueError(f"word {w} is not primitive")
    A = word_to_matrix(w.even_expansion())
    inert = len(w) % 2 == 1
    root = square_root_det_minus_one(A)
    if (root is not None) != inert:
        raise ArithmeticError(f"parity and square-root test disagree for {w}")
    reciprocal = conjugacy_class_key(A.inverse()) == conjugacy_class_key(A)
    return {"inert": inert, "reciprocal": reciprocal}
