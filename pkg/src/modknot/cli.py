"""Command-line entry point and the reproducible experiment drivers.

Exit status is 0 when every requested check passes, 1 when a check fails or
a computation raises, and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import glob
import json
import math
import os
import random
import sys
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .cf import (PeriodicWord, alt_sum, geodesic_length, geodesic_length_trace,
                 orbit_return_time)
from .census import (DEFAULT_T_CAP, CensusError, CensusFile, build_census, count_geodesics,
                     count_points, read_census)
from .sl2 import (classify_symmetry, rademacher, square_root_det_minus_one, word_to_matrix)
from .stats import (MEAN_RETURN_LIMIT, gauss_integral, ks_distance, mean_return_time,
                    pair_distribution_check, sample_points)

__all__ = [
    "main",
    "run_verify_linking",
    "run_verify_lengths",
    "run_verify_inert",
    "run_verify_traces",
    "run_counting_table",
    "run_spectral_suite",
    "minimal_even_words",
]

LINKING_GUARD = 14
LOG2 = math.log(2.0)
RESIDUE_ZERO = 6 * LOG2 / math.pi ** 2


# -- enumeration helpers --------------------------------------------------------

def _compositions(total: int) -> Iterable[tuple]:
    if total == 0:
        yield ()
        return
    for a in range(1, total + 1):
        for rest in _compositions(total - a):
            yield (a,) + rest


def primitive_words(max_digit_sum: int) -> Iterable[PeriodicWord]:
    for s in range(1, max_digit_sum + 1):
        for c in _compositions(s):
            w = PeriodicWord(c)
            if w.is_primitive:
                yield w


def minimal_even_words(max_digit_sum: int) -> Iterable[tuple[PeriodicWord, PeriodicWord]]:
    """(primitive word, minimal even expansion) pairs with expansion digit sum bounded."""
    for w in primitive_words(max_digit_sum):
        e = w.even_expansion()
        if sum(e.digits) <= max_digit_sum:
            yield w, e


# -- drivers -----------------------------------------------------------------------

def _report(name, checked, failures, **extra):
    return {"check": name, "checked": checked, "passed": checked - len(failures),
            "failed": len(failures), "ok": not failures, "failures": failures[:20], **extra}


def run_verify_linking(max_digit_sum: int = 10, force: bool = False) -> dict:
    """Rademacher function of each minimal even B-product against its Alt."""
    if max_digit_sum > LINKING_GUARD and not force:
        raise ValueError(f"max_digit_sum above {LINKING_GUARD} needs --force")
    failures = []
    n = 0
    for w, e in minimal_even_words(max_digit_sum):
        n += 1
        psi = rademacher(word_to_matrix(e))
        alt = sum(a if j % 2 else -a for j, a in enumerate(e.digits))
        if psi != alt or alt != alt_sum(w):
            failures.append({"word": str(e), "psi": psi, "alt": alt})
    return _report("linking", n, failures, max_digit_sum=max_digit_sum)


def run_verify_lengths(count: int = 10_000, seed: int = 0, max_digit: int = 20,
                       max_period: int = 12, telescoping_sum: int = 12) -> dict:
    """Orbit-log length against the trace length, and return-time telescoping."""
    rng = random.Random(seed)
    failures = []
    worst = 0.0
    n = 0
    while n < count:
        w = PeriodicWord(rng.randint(1, max_digit) for _ in range(rng.randint(1, max_period)))
        if not w.is_primitive:
            continue
        n += 1
        gap = abs(geodesic_length(w) - geodesic_length_trace(w))
        worst = max(worst, gap)
        if gap >= 1e-9:
            failures.append({"word": str(w), "gap": gap})
    worst_tel = 0.0
    m = 0
    for w in primitive_words(telescoping_sum):
        m += 1
        gap = abs(orbit_return_time(w) - geodesic_length(w))
        worst_tel = max(worst_tel, gap)
        if gap >= 1e-10:
            failures.append({"word": str(w), "telescoping_gap": gap})
    return _report("lengths", n + m, failures, seed=seed, worst_dual_gap=worst,
                   worst_telescoping_gap=worst_tel)


def run_verify_inert(max_digit_sum: int = 10) -> dict:
    failures = []
    n = 0
    for w in primitive_words(max_digit_sum):
        n += 1
        odd = len(w) % 2 == 1
        root = square_root_det_minus_one(word_to_matrix(w.even_expansion()))
        flag = classify_symmetry(w)["inert"]
        if not (odd == (root is not None) == flag):
            failures.append({"word": str(w), "odd": odd, "root": root is not None, "flag": flag})
    return _report("inert", n, failures, max_digit_sum=max_digit_sum)


def run_verify_traces(N: int = 30, tol: float = 1e-6) -> dict:
    from .spectral import build_operator, trace_via_words, twisted_square

    failures = []
    rows = []
    grid = [(s, th, w, f) for s in (1.2, 1.5) for th in (0.0, 0.05)
            for (w, f) in ((0.0, (1.0,)), (0.01, (0.0, 1.0)))]
    for s, th, w, f in grid:
        one = np.trace(build_operator(s, w, -th, f, N).matrix)
        two = np.trace(twisted_square(s, w, th, f, N)[0])
        for n, ref in ((1, one), (2, two)):
            val = trace_via_words(n, s, w, th, f)
            gap = abs(val - ref)
            rows.append({"n": n, "s": s, "theta": th, "w": w, "gap": _sci(gap)})
            if gap >= tol:
                failures.append(rows[-1])
    return _report("traces", len(rows), failures, rows=rows)


def run_spectral_suite(theta_list: Sequence[float] = (0.0, 0.02, 0.04), N: int = 24) -> dict:
    """Dominant zeros, the untwisted residue and a trace cross-check."""
    from .spectral import build_operator, find_dominant_zero, residue, trace_via_words

    items = []
    for th in theta_list:
        if abs(th) >= 1 / 12:
            raise ValueError("|theta| must be below 1/12")
        z = find_dominant_zero(th, N)
        target = 1 - 3 * abs(th)
        items.append({"check": "zero", "theta": th, "value": z.value, "error": _sci(z.error),
                      "target": target, "ok": abs(z.value - target) <= 1e-3})
    r = residue(0.0, (1.0,), N)
    items.append({"check": "residue", "theta": 0.0, "value": r.value, "error": _sci(r.error),
                  "target": RESIDUE_ZERO, "ok": abs(r.value - RESIDUE_ZERO) <= 1e-3})
    tw = trace_via_words(1, 1.5)
    tm = np.trace(build_operator(1.5, 0.0, 0.0, (1.0,), 30).matrix)
    items.append({"check": "trace", "n": 1, "s": 1.5, "value": float(tw.real),
                  "error": _sci(abs(tw - tm)), "ok": bool(abs(tw - tm) <= 1e-8)})
    return {"check": "spectral", "ok": all(i["ok"] for i in items), "items": items}


def run_counting_table(tmax_list: Sequence[float], census) -> list[dict]:
    """Counts at each T with their predicted asymptotic sizes divided out."""
    rows = []
    for T in tmax_list:
        row = {"T": T}
        big = math.exp(T) / T if T > 0 else float("nan")
        half = math.exp(T / 2) / T
        for n in range(4):
            q = count_points(census, n, T, plus=True)
            c = count_geodesics(census, T, lk_abs=n)
            row[f"Q{n}+"] = q
            row[f"Q{n}+_norm"] = q / (2 * LOG2 / math.pi ** 2 * big)
            row[f"C{n}+"] = c
            row[f"C{n}+_norm"] = c / (2 * math.exp(T) / (3 * T * T))
        qo = count_points(census, None, T, odd=True)
        ci = count_geodesics(census, T, inert=True)
        row["Qodd"] = qo
        row["Qodd_norm"] = qo / (3 * LOG2 / math.pi ** 2 * half)
        row["Qodd_norm_exp"] = qo / (3 * LOG2 / math.pi ** 2 * math.exp(T / 2))
        row["Ci"] = ci
        row["Ci_norm"] = ci / half
        rows.append(row)
    return rows


# -- formatting ---------------------------------------------------------------------

def _sci(x: float) -> float:
    return float(f"{x:.3e}")


def _cplx(z):
    z = complex(z)
    return [float(f"{z.real:.17g}"), float(f"{z.imag:.17g}")]


def _stamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _emit_json(obj, args) -> None:
    payload = {"command": args.cmd_path, "seed": args.seed, "generated": _stamp(), **obj}
    print(json.dumps(payload, indent=2, default=_json_default))


def _json_default(o):
    if isinstance(o, complex):
        return _cplx(o)
    if isinstance(o, np.complexfloating):
        return _cplx(o)
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o))


def _emit_csv(rows: list[dict], args) -> None:
    out = sys.stdout
    out.write(f"# modknot {args.cmd_path} seed={args.seed} generated={_stamp()}\n")
    if not rows:
        return
    writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: (f"{v:.17g}" if isinstance(v, float) else v) for k, v in r.items()})


def _poly(text: str) -> tuple:
    """'1', '0,1' or '1,0,2' -> coefficients of 1, x, x^2, ..."""
    return tuple(float(t) for t in text.split(",") if t.strip())


def _census_dir() -> str:
    return os.environ.get("MKL_CENSUS_DIR", os.getcwd())


def _load_census(path: str | None, tmax: float) -> CensusFile:
    if path:
        return read_census(path)
    best = None
    for p in glob.glob(os.path.join(_census_dir(), "*.mkc")):
        try:
            with open(p) as fh:
                head = fh.readline().split()
            t = float(dict(tok.split("=", 1) for tok in head[1:])["t_max"])
        except (OSError, KeyError, ValueError, IndexError):
            continue
        if t >= tmax and (best is None or t < best[0]):
            best = (t, p)
    if best is None:
        raise CensusError(f"no census with t_max >= {tmax} in {_census_dir()}; build one first")
    return read_census(best[1])


# -- subcommand handlers ------------------------------------------------------------

def _cmd_census_build(args) -> int:
    out = args.out or os.path.join(_census_dir(), f"census-T{args.tmax:g}.mkc")
    c = build_census(args.tmax, out, jobs=args.jobs, odd_only=args.odd_only, force=args.force)
    _emit_json({"file": out, "t_max": args.tmax, "records": len(c.records),
                "odd_only": args.odd_only}, args)
    return 0


def _cmd_census_query(args) -> int:
    census = _load_census(args.file, args.tmax)
    if args.count == "geodesics":
        val = count_geodesics(census, args.tmax, lk=args.lk, lk_abs=args.lk_abs, inert=args.inert)
    else:
        if args.odd or args.inert:
            val = count_points(census, None, args.tmax, odd=True)
        elif args.lk_abs is not None:
            val = count_points(census, args.lk_abs, args.tmax, plus=True)
        else:
            val = count_points(census, args.lk, args.tmax)
    _emit_json({"count": args.count, "t_max": args.tmax, "lk": args.lk, "lk_abs": args.lk_abs,
                "inert": args.inert, "odd": args.odd, "value": val}, args)
    return 0


def _cmd_stats(args) -> int:
    census = _load_census(args.file, max(args.tmax))
    if args.stat == "table":
        _emit_csv(run_counting_table(args.tmax, census), args)
        return 0
    rows = []
    for T in args.tmax:
        if args.stat == "ks":
            v = ks_distance(sample_points(census, T, args.lk_abs, odd=args.odd))
        elif args.stat == "pairs":
            v = pair_distribution_check(census, T, args.lk_abs)
        elif args.stat == "mean-length":
            v = mean_return_time(census, T)
        rows.append({"T": float(T), args.stat: v})
    if args.stat == "mean-length":
        for r in rows:
            r["ratio"] = r["mean-length"] / MEAN_RETURN_LIMIT
    _emit_csv(rows, args)
    return 0


def _cmd_spectral(args) -> int:
    from . import spectral as sp

    kind = args.kind
    if kind == "eig":
        op = sp.build_operator(args.s, args.w, args.theta, _poly(args.f), args.order)
        res = sp.spectrum(op.matrix, op.entry_error)
        k = min(args.count, len(res.eigenvalues))
        _emit_json({"s": args.s, "w": args.w, "theta": args.theta, "order": args.order,
                    "leading": _cplx(res.leading), "eigenvalues": [_cplx(z) for z in res.eigenvalues[:k]],
                    "error": _sci(op.entry_error), "tail_method": op.tail_method,
                    "cutoff": op.cutoff}, args)
    elif kind == "zero":
        z = sp.find_dominant_zero(args.theta, args.order)
        _emit_json({"theta": args.theta, "order": args.order, "value": z.value,
                    "error": _sci(z.error), "predicted": 1 - 3 * abs(args.theta)}, args)
    elif kind == "residue":
        f = _poly(args.f)
        r = sp.residue(args.theta, f, args.order, args.h)
        _emit_json({"theta": args.theta, "f": list(f), "value": r.value, "error": _sci(r.error),
                    "closed_form_theta0": RESIDUE_ZERO * gauss_integral(f)}, args)
    elif kind == "zeta":
        f = _poly(args.f)
        if args.plus:
            fn, which = (lambda n: sp.zeta_plus(args.s, 0.0, f, n)), "plus"
        elif args.minus:
            fn, which = (lambda n: sp.zeta_minus(args.s, 0.0, f, n)), "minus"
        else:
            th = args.twisted or 0.0
            fn, which = (lambda n: sp.fredholm_det(args.s, 0.0, th, f, n)), f"twisted({th})"
        val = fn(args.order)
        _emit_json({"s": args.s, "which": which, "order": args.order, "value": _cplx(val),
                    "error": _sci(abs(val - fn(args.order + 8)))}, args)
    elif kind == "eta":
        f = _poly(args.f)
        det = sp.eta_via_determinant(args.s, args.theta, f, args.order)
        out = {"s": args.s, "theta": args.theta, "determinant": {"value": det.value,
                                                              "error": _sci(det.error)}}
        if args.census or args.tmax:
            census = _load_census(args.census, args.tmax)
            c = sp.eta_via_census(args.s, args.theta, f, census, args.tmax)
            out["census"] = {"value": c.value, "tail_bound": _sci(c.error), "t_max": args.tmax}
            out["difference"] = _sci(abs(c.value - det.value))
        _emit_json(out, args)
    return 0


def _cmd_verify(args) -> int:
    which = args.what
    reports = []
    if which in ("linking", "all"):
        reports.append(run_verify_linking(args.max_digit_sum, force=args.force))
    if which in ("lengths", "all"):
        reports.append(run_verify_lengths(args.count, args.seed))
    if which in ("inert", "all"):
        reports.append(run_verify_inert(min(args.max_digit_sum, 10) if which == "all"
                                        else args.max_digit_sum))
    if which in ("traces", "all"):
        reports.append(run_verify_traces())
    if which in ("spectral", "all"):
        reports.append(run_spectral_suite(args.theta, args.order))
    ok = all(r["ok"] for r in reports)
    _emit_json({"ok": ok, "reports": reports}, args)
    return 0 if ok else 1


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modknot", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    sub = p.add_subparsers(dest="group", required=True)

    cen = sub.add_parser("census", help="build or query orbit censuses")
    csub = cen.add_subparsers(dest="action", required=True)
    b = csub.add_parser("build")
    b.add_argument("--tmax", type=float, required=True)
    b.add_argument("--out", help="output file (default $MKL_CENSUS_DIR/census-T<tmax>.mkc)")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--odd-only", action="store_true", help="only odd-period orbits")
    b.add_argument("--force", action="store_true", help=f"allow T > {DEFAULT_T_CAP:g}")
    b.set_defaults(handler=_cmd_census_build)
    q = csub.add_parser("query")
    q.add_argument("--file")
    q.add_argument("--count", choices=("geodesics", "points"), required=True)
    g = q.add_mutually_exclusive_group()
    g.add_argument("--lk", type=int)
    g.add_argument("--lk-abs", type=int)
    g.add_argument("--inert", action="store_true")
    g.add_argument("--odd", action="store_true")
    q.add_argument("--tmax", type=float, required=True)
    q.set_defaults(handler=_cmd_census_query)

    st = sub.add_parser("stats", help="equidistribution diagnostics (CSV)")
    ssub = st.add_subparsers(dest="stat", required=True)
    for name in ("ks", "pairs", "mean-length", "table"):
        s = ssub.add_parser(name)
        s.add_argument("--file")
        s.add_argument("--tmax", type=float, nargs="+", required=True)
        if name in ("ks", "pairs"):
            s.add_argument("--lk-abs", type=int)
        if name == "ks":
            s.add_argument("--odd", action="store_true")
        s.set_defaults(handler=_cmd_stats, lk_abs=None, odd=False)

    sp = sub.add_parser("spectral", help="transfer-operator computations (JSON)")
    spsub = sp.add_subparsers(dest="kind", required=True)
    for name in ("eig", "zero", "residue", "zeta", "eta"):
        s = spsub.add_parser(name)
        s.add_argument("--order", type=int, default=24)
        s.add_argument("--f", default="1", help="test polynomial coefficients, e.g. 0,1 for x")
        if name in ("eig", "zeta", "eta"):
            s.add_argument("--s", type=float, required=name != "eig", default=1.0)
        if name in ("eig", "zero", "residue", "eta"):
            s.add_argument("--theta", type=float, default=0.0)
        if name == "eig":
            s.add_argument("--w", type=float, default=0.0)
            s.add_argument("--count", type=int, default=6)
        if name == "residue":
            s.add_argument("--h", type=float, default=1e-4)
        if name == "zeta":
            zg = s.add_mutually_exclusive_group()
            zg.add_argument("--plus", action="store_true")
            zg.add_argument("--minus", action="store_true")
            zg.add_argument("--twisted", type=float)
        if name == "eta":
            s.add_argument("--census")
            s.add_argument("--tmax", type=float)
        s.set_defaults(handler=_cmd_spectral)

    v = sub.add_parser("verify", help="exhaustive and cross-validation checks")
    v.add_argument("what", choices=("linking", "lengths", "inert", "traces", "spectral", "all"))
    v.add_argument("--max-digit-sum", type=int, default=10)
    v.add_argument("--count", type=int, default=10_000)
    v.add_argument("--theta", type=float, nargs="+", default=[0.0, 0.02, 0.04])
    v.add_argument("--order", type=int, default=24)
    v.add_argument("--force", action="store_true")
    v.set_defaults(handler=_cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    path = [args.group] + [getattr(args, k) for k in ("action", "stat", "kind", "what")
                           if isinstance(getattr(args, k, None), str)]
    args.cmd_path = " ".join(path)
    try:
        return args.handler(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"modknot: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
