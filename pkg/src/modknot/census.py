"""Enumeration of primitive periodic Gauss-map orbits up to a length bound.

Each orbit is one necklace of digits, stored as its least rotation
(a Lyndon word).  Lyndon words are generated directly with the
Fredricksen-Kessler-Maiorana recursion over the unbounded alphabet
{1, 2, ...}; the search is cut by trace bounds on the partial B-product.

For a prefix product P and any nonempty continuation Q,
tr(PQ) >= P12 + P21 + P22, and that quantity never decreases as digits are
appended, so a prefix whose bound exceeds the target trace has no valid
extension.
"""

from __future__ import annotations

import hashlib
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .cf import PeriodicWord, least_rotation, length_from_trace, orbit_values
from .sl2 import reversal_reciprocal

__all__ = [
    "GeodesicRecord",
    "CensusFile",
    "CensusError",
    "ResourceGuardError",
    "ChecksumError",
    "DEFAULT_T_CAP",
    "make_record",
    "enumerate_orbits",
    "brute_force_orbits",
    "count_geodesics",
    "count_points",
    "write_census",
    "read_census",
    "build_census",
]

DEFAULT_T_CAP = 18.0
FORMAT = "MKC1"


class CensusError(ValueError):
    pass


class ResourceGuardError(CensusError):
    pass


class ChecksumError(CensusError):
    pass


@dataclass(frozen=True)
class GeodesicRecord:
    canonical_word: tuple
    trace: int
    length: float
    alt: int
    parity: str
    inert: bool
    reciprocal: bool

    @property
    def geodesic_multiplicity(self) -> int:
        return 1 if self.inert else 2

    @property
    def period(self) -> int:
        return len(self.canonical_word)

    def sort_key(self):
        return (self.length, self.canonical_word)

    def to_line(self) -> str:
        return " ".join([
            ",".join(map(str, self.canonical_word)),
            str(self.trace),
            "%.17g" % self.length,
            str(self.alt),
            self.parity,
            str(int(self.inert)),
            str(int(self.reciprocal)),
        ])

    @classmethod
    def from_line(cls, line: str) -> "GeodesicRecord":
        parts = line.split()
        if len(parts) != 7:
            raise CensusError(f"malformed record line: {line!r}")
        word, tr, length, alt, parity, inert, recip = parts
        if parity not in ("even", "odd"):
            raise CensusError(f"bad parity field {parity!r}")
        return cls(tuple(int(a) for a in word.split(",")), int(tr), float(length), int(alt),
                   parity, inert == "1", recip == "1")

    def points(self) -> list[float]:
        return orbit_values(PeriodicWord(self.canonical_word))


def make_record(word: Sequence[int], trace: int | None = None) -> GeodesicRecord:
    """Record for a Lyndon word; ``trace`` is the B-product trace if known."""
    u = tuple(word)
    n = len(u)
    if trace is None:
        p, q, r, t = 1, 0, 0, 1
        for a in u:
            p, q, r, t = q, p + a * q, t, r + a * t
        trace = p + t
    odd = n % 2 == 1
    tr = trace * trace + 2 if odd else trace
    alt = 0 if odd else sum(a if j % 2 else -a for j, a in enumerate(u))
    return GeodesicRecord(u, tr, length_from_trace(tr), alt, "odd" if odd else "even",
                          odd, reversal_reciprocal(u))


def _trace_bounds(T: float) -> tuple[int, int]:
    """Integer trace caps for even and odd words, slightly generous.

    The exact test is done on the computed length, so the caps only need to
    err on the inclusive side.
    """
    X = 2.0 * math.cosh(T / 2.0)
    even = int(math.floor(X * (1 + 1e-12))) + 1
    odd = math.isqrt(max(even - 2, 0)) + 1
    return even, odd


def _lyndon_dfs(first: int, T: float, odd_only: bool) -> list[GeodesicRecord]:
    """Lyndon words with first digit ``first`` and length <= T."""
    even_cap, odd_cap = _trace_bounds(T)
    cap = odd_cap if odd_only else even_cap
    out: list[GeodesicRecord] = []
    a = [0, first]
    # prefix products, index t holds B_{a_1} ... B_{a_t}
    prods = [(1, 0, 0, 1), (0, 1, 1, first)]

    def emit(t):
        p, q, r, s = prods[t]
        tr = p + s
        if t % 2 == 1:
            if tr > odd_cap:
                return
        elif odd_only or tr > even_cap:
            return
        rec = make_record(a[1:t + 1], tr)
        if rec.length <= T:
            out.append(rec)

    def visit(t, p):
        # a[1..t] is a prenecklace with period p
        if p == t:
            emit(t)
        P = prods[t]
        if P[1] + P[2] + P[3] > cap:
            return
        j = a[t - p + 1]
        while True:
            p0, q0, r0, s0 = P
            prod = (q0, p0 + j * q0, s0, r0 + j * s0)
            if min(prod[0] + prod[3], prod[1] + prod[2] + prod[3]) > cap:
                break
            a.append(j)
            prods.append(prod)
            visit(t + 1, p if j == a[t - p + 1] else t + 1)
            a.pop()
            prods.pop()
            j += 1

    visit(1, 1)
    return out


def _first_digits(T: float, odd_only: bool) -> list[int]:
    even_cap, odd_cap = _trace_bounds(T)
    cap = odd_cap if odd_only else even_cap
    # every word starting with digit a has B-product trace at least a
    return list(range(1, cap + 1))


def enumerate_orbits(T: float, *, jobs: int = 1, odd_only: bool = False,
                     t_cap: float = DEFAULT_T_CAP, force: bool = False) -> list[GeodesicRecord]:
    """All primitive orbits of length <= T, sorted by (length, word).

    Parameters
    ----------
    T : float
        Length bound (natural-log units).
    jobs : int
        Worker processes; the work is split by first digit.
    odd_only : bool
        Restrict to odd-period orbits (inert geodesics), which allows a much
        tighter trace cut and so larger T.
    t_cap, force :
        Resource guard; T above ``t_cap`` raises unless ``force`` is set.
        In odd-only mode the guard applies to T/2.
    """
    if T <= 0:
        raise CensusError("T must be positive")
    scale = T / 2.0 if odd_only else T
    if scale > t_cap and not force:
        est = math.exp(scale) / scale
        raise ResourceGuardError(
            f"T = {T} implies roughly {est:.3g} records; pass force=True to proceed")
    firsts = _first_digits(T, odd_only)
    if jobs > 1 and len(firsts) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_lyndon_dfs, firsts, [T] * len(firsts),
                                  [odd_only] * len(firsts), chunksize=1))
    else:
        parts = [_lyndon_dfs(f, T, odd_only) for f in firsts]
    records = [r for part in parts for r in part]
    records.sort(key=GeodesicRecord.sort_key)
    return records


def brute_force_orbits(T: float, odd_only: bool = False) -> list[GeodesicRecord]:
    """Independent reference enumeration for small T.

    Every digit word whose B-product trace respects the cap is listed (not
    only necklace representatives); the length is evaluated from the orbit
    points, and necklaces are deduplicated by hashing their least rotation.
    A word's trace is at least its digit sum, so the cap also bounds the
    digit sums that need to be explored.
    """
    even_cap, odd_cap = _trace_bounds(T)
    seen: dict = {}
    stack = [((), (1, 0, 0, 1))]
    while stack:
        word, (p, q, r, s) = stack.pop()
        if word:
            n = len(word)
            tr = p + s
            ok = tr <= (odd_cap if n % 2 else even_cap) and not (odd_only and n % 2 == 0)
            if ok:
                w = PeriodicWord(word)
                if w.is_primitive:
                    key = least_rotation(word)
                    if key not in seen:
                        pts = orbit_values(w)
                        factor = 4.0 if n % 2 else 2.0
                        length = -factor * math.fsum(math.log(x) for x in pts)
                        if length <= T * (1 + 1e-12):
                            seen[key] = make_record(key)
        if sum(word) >= even_cap:
            continue
        for a in range(1, even_cap - sum(word) + 1):
            nxt = (q, p + a * q, s, r + a * s)
            if nxt[1] + nxt[2] + nxt[3] > even_cap and nxt[0] + nxt[3] > even_cap:
                break
            stack.append((word + (a,), nxt))
    records = [r for r in seen.values() if r.length <= T]
    records.sort(key=GeodesicRecord.sort_key)
    return records


# -- counting ---------------------------------------------------------------------

def _select(records: Iterable[GeodesicRecord], T: float) -> Iterator[GeodesicRecord]:
    for r in records:
        if r.length <= T:
            yield r


def _check_complete(census, T, odd_query=False):
    t_max = getattr(census, "t_max", None)
    if t_max is not None and T > t_max * (1 + 1e-12):
        raise CensusError(f"census is complete only to T = {t_max}, asked for {T}")
    settings = getattr(census, "settings", None) or {}
    if not odd_query and str(settings.get("odd_only", "0")) not in ("0", "False"):
        raise CensusError("an odd-only census can answer inert/odd queries only")
    return getattr(census, "records", census)


def count_geodesics(census, T: float, *, lk: int | None = None, lk_abs: int | None = None,
                    inert: bool = False, predicate: Callable | None = None) -> int:
    """Number of primitive geodesics of length <= T.

    An even record with alternating sum a stands for two geodesics with
    linking numbers a and -a; an inert record for one geodesic with linking
    number 0.  ``lk_abs`` counts the multiset union of lk = n and lk = -n
    (so lk_abs = 0 counts lk = 0 geodesics twice).
    """
    records = _check_complete(census, T, odd_query=inert)
    if lk_abs is not None:
        return (count_geodesics(census, T, lk=lk_abs, predicate=predicate)
                + count_geodesics(census, T, lk=-lk_abs, predicate=predicate))
    total = 0
    for r in _select(records, T):
        if predicate is not None and not predicate(r):
            continue
        if inert:
            total += 1 if r.inert else 0
            continue
        links = (0,) if r.inert else (r.alt, -r.alt)
        if lk is not None:
            total += sum(1 for v in links if v == lk)
        else:
            total += len(links)
    return total


def count_points(census, n: int | None, T: float, *, plus: bool = False,
                 odd: bool = False) -> int:
    """Number of periodic points x with Alt(x) = n and length <= T.

    An even record of period 2m holds m points with Alt = alt and m with
    Alt = -alt; an odd record puts all its points at Alt = 0.  ``plus``
    returns count(n) + count(-n); ``odd`` counts odd-period points only.
    """
    records = _check_complete(census, T, odd_query=odd)
    if plus:
        return count_points(census, n, T, odd=odd) + count_points(census, -n, T, odd=odd)
    total = 0
    for r in _select(records, T):
        if odd:
            total += r.period if r.inert else 0
            continue
        if n is None:
            total += r.period
        elif r.inert:
            total += r.period if n == 0 else 0
        else:
            half = r.period // 2
            total += half * ((r.alt == n) + (-r.alt == n))
    return total


# -- persistence -------------------------------------------------------------------

@dataclass
class CensusFile:
    t_max: float
    records: list
    settings: dict

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def write_census(path, records: Sequence[GeodesicRecord], t_max: float, **settings) -> None:
    """Write records (sorted) to a line-oriented text file with a checksum."""
    keys = [r.sort_key() for r in records]
    if keys != sorted(keys):
        raise CensusError("records must be sorted by (length, word)")
    words = [r.canonical_word for r in records]
    if len(set(words)) != len(words):
        raise CensusError("duplicate necklaces in census")
    head = " ".join([FORMAT, f"t_max={t_max!r}"] + [f"{k}={v}" for k, v in sorted(settings.items())])
    body = io.StringIO()
    for r in records:
        body.write(r.to_line())
        body.write("\n")
    text = body.getvalue()
    digest = hashlib.sha256(text.encode()).hexdigest()
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(head + "\n")
        fh.write(text)
        fh.write(f"END count={len(records)} sha256={digest}\n")
    os.replace(tmp, path)


def read_census(path) -> CensusFile:
    with open(path) as fh:
        lines = fh.read().split("\n")
    if not lines or not lines[0].startswith(FORMAT + " "):
        raise CensusError(f"{path}: not a {FORMAT} census file")
    fields = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    if "t_max" not in fields:
        raise CensusError("header lacks t_max")
    t_max = float(fields.pop("t_max"))
    if lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or not lines[-1].startswith("END "):
        raise ChecksumError(f"{path}: missing trailer, file truncated")
    trailer = dict(tok.split("=", 1) for tok in lines[-1].split()[1:])
    body = lines[1:-1]
    text = "".join(line + "\n" for line in body)
    if hashlib.sha256(text.encode()).hexdigest() != trailer.get("sha256"):
        raise ChecksumError(f"{path}: checksum mismatch")
    if int(trailer.get("count", -1)) != len(body):
        raise ChecksumError(f"{path}: record count mismatch")
    records = [GeodesicRecord.from_line(line) for line in body]
    return CensusFile(t_max=t_max, records=records, settings=fields)


def build_census(T: float, path=None, *, jobs: int = 1, odd_only: bool = False,
                 force: bool = False) -> CensusFile:
    records = enumerate_orbits(T, jobs=jobs, odd_only=odd_only, force=force)
    census = CensusFile(t_max=T, records=records, settings={"odd_only": int(odd_only)})
    if path is not None:
        write_census(path, records, T, odd_only=int(odd_only))
    return census
