"""Command-line interface: ``seshadri <command> [options]``.

Machine-readable fields are exact: rationals as ``"p/q"`` strings, elements of
Q(sqrt(e)) as ``{"a", "b", "e"}`` objects and irrational square roots as
``{"sqrt": "r"}``.  ``--approx`` adds decimal renderings under keys ending in
``_approx``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .bounds import PellBound
from .exactfield import SqrtRat, Surd, parse_rat, rat_str
from .exceptions import InvariantViolation, SeshadriError
from .lattice import BundleClass, OrderSpec, Ring, is_ample_ray, normalize
from .scan import check_en, classify_e, has_two_submax_witness, iter_scan
from .seshadri import Segment, epsilon, epsilon_class, sample_function
from .symmetry import extend_by_group, fundamental_interval, generators, principal_polarizations


# ---------------------------------------------------------------------------
# serialization


def value_json(x):
    if isinstance(x, SqrtRat):
        return x.to_json()
    if isinstance(x, Surd):
        return x.to_json()
    return rat_str(x)


def witness_json(w) -> dict:
    return {
        "lambda1": rat_str(w.lambda1),
        "lambda2": rat_str(w.lambda2),
        "bounds": [b.to_json() for b in w.bounds],
        "overlap": w.overlap.to_json(),
        "covering_check_qbound": w.covering_check_qbound,
    }


def segment_json(seg: Segment, approx: bool = False) -> dict:
    out = {
        "kind": "gap" if seg.is_gap else "segment",
        "lo": seg.lo.to_json(),
        "hi": seg.hi.to_json(),
        "bound": None if seg.is_gap else seg.bound.to_json(),
        "certified": seg.certified,
    }
    if approx:
        out["lo_approx"] = f"{float(seg.lo):.12g}"
        out["hi_approx"] = f"{float(seg.hi):.12g}"
    return out


CSV_COLUMNS = ["lo_a", "lo_b", "hi_a", "hi_b", "c0", "c1", "lambda", "certified"]


def segments_csv(segments: Sequence[Segment], meta: dict) -> str:
    buf = io.StringIO()
    for key, val in meta.items():
        buf.write(f"# {key}: {val}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in segments:
        b: Optional[PellBound] = s.bound
        w.writerow([
            rat_str(s.lo.a), rat_str(s.lo.b), rat_str(s.hi.a), rat_str(s.hi.b),
            "" if b is None else rat_str(b.c0),
            "" if b is None else rat_str(b.c1),
            "" if b is None else rat_str(b.lam),
            "true" if s.certified else "false",
        ])
    return buf.getvalue()


def dumps(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))


# ---------------------------------------------------------------------------
# argument helpers


def _order(args) -> OrderSpec:
    if args.e is None:
        raise SeshadriError("--e is required")
    return OrderSpec(Ring(args.ring), args.e)


def _bundle(text: str) -> BundleClass:
    parts = text.split(",")
    if len(parts) != 2:
        raise SeshadriError(f"--bundle expects 'a,b', got {text!r}")
    try:
        return BundleClass(parse_rat(parts[0]), parse_rat(parts[1]))
    except ValueError as exc:
        raise SeshadriError(str(exc)) from None


def _rat(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SeshadriError(f"not an exact rational: {text!r}") from exc


def _range(text: str):
    if ".." not in text:
        raise SeshadriError(f"--range expects 'lo..hi', got {text!r}")
    lo, hi = text.split("..", 1)
    return _rat(lo), _rat(hi)


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_epsilon(args) -> int:
    order = _order(args)
    if (args.bundle is None) == (args.t is None):
        raise SeshadriError("give exactly one of --bundle or --t")
    if args.bundle is not None:
        L = _bundle(args.bundle)
        res = epsilon_class(L, order)
        bundle = str(L)
        t = normalize(L)[1]
    else:
        t = _rat(args.t)
        res = epsilon(t, order)
        bundle = None
    doc = {
        "ring": order.ring.value,
        "e": order.e,
        "bundle": bundle,
        "lambda": rat_str(t),
        "epsilon": value_json(res.value),
        "kind": res.kind,
        "witnesses": [w.to_json() for w in res.witnesses],
    }
    if args.approx:
        doc["epsilon_approx"] = f"{float(res.value):.15g}"
    _emit(dumps(doc) + "\n", args.out)
    return 0


def cmd_plot(args) -> int:
    order = _order(args)
    fi = fundamental_interval(order)
    if args.range:
        lo, hi = _range(args.range)
    else:
        # between the principal polarizations next to L0
        prev, _, nxt = principal_polarizations(order, -1, 1)
        lo, hi = prev.b / prev.a, nxt.b / nxt.a
    if args.extend_by_group:
        if not (lo < hi and is_ample_ray(lo, order) and is_ample_ray(hi, order)):
            raise SeshadriError(f"[{lo}, {hi}] is not an interval inside the open nef interval")
        segs = extend_by_group(lo, hi, args.qmax, order, workers=args.threads)
    else:
        segs = sample_function(lo, hi, args.qmax, order, workers=args.threads)
    meta = {
        "ring": order.ring.value,
        "e": order.e,
        "qmax": args.qmax,
        "range": f"{rat_str(lo)}..{rat_str(hi)}",
        "fundamental_interval": f"{rat_str(fi.lo)}..{rat_str(fi.hi)}",
    }
    fmt = args.format or "csv"
    if fmt == "csv":
        text = segments_csv(segs, meta)
    else:
        doc = {
            "ring": order.ring.value,
            "e": order.e,
            "qmax": args.qmax,
            "range": {"lo": rat_str(lo), "hi": rat_str(hi)},
            "fundamental_interval": fi.to_json(),
            "segments": [segment_json(s, args.approx) for s in segs],
        }
        text = dumps(doc) + "\n"
    _emit(text, args.out)
    return 0


def cmd_fundamental(args) -> int:
    order = _order(args)
    gen, invol = generators(order)
    Ls = principal_polarizations(order, args.kmin, args.kmax)
    doc = {
        "ring": order.ring.value,
        "e": order.e,
        "generators": {"gen": gen.to_json(), "invol": invol.to_json()},
        "principal_polarizations": [
            {"k": k, "class": str(L)} for k, L in zip(range(args.kmin, args.kmax + 1), Ls)
        ],
        "fundamental_interval": fundamental_interval(order).to_json(),
    }
    _emit(dumps(doc) + "\n", args.out)
    return 0


def cmd_classify(args) -> int:
    c = classify_e(args.e)
    doc = {
        "e": args.e,
        "no_bad_prime": c.no_bad_prime,
        "minus2_qr": c.minus2_qr,
        "repr_A_8B": None if c.repr_A_8B is None else list(c.repr_A_8B),
    }
    _emit(dumps(doc) + "\n", args.out)
    return 0


def cmd_witness(args) -> int:
    order = _order(args)
    at = _rat(args.t) if args.t is not None else None
    w = has_two_submax_witness(order, args.qmax, at=at)
    doc = {"ring": order.ring.value, "e": order.e, "qmax": args.qmax}
    doc["witness"] = f"none@{args.qmax}" if w is None else witness_json(w)
    _emit(dumps(doc) + "\n", args.out)
    return 0


def cmd_scan(args) -> int:
    if args.ring != Ring.HALF.value:
        raise SeshadriError("scan covers the ring 'half'; 'sqrt' always has at most one submaximal curve")
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for rec in iter_scan(args.e_max, args.qmax, workers=args.threads, e_min=args.e_min,
                             qmax_cap=args.qmax_cap):
            doc = {"e": rec.e, "qmax": rec.qmax}
            doc["witness"] = f"none@{rec.qmax}" if rec.witness is None else witness_json(rec.witness)
            sink.write(dumps(doc) + "\n")
            sink.flush()
    finally:
        if args.out:
            sink.close()
    return 0


def cmd_check_en(args) -> int:
    w = check_en(args.n, args.qmax)
    doc = {"n": args.n, "e": 1 + 8 * args.n * args.n, "point": rat_str(Fraction(2, 4 * args.n - 1))}
    doc["witness"] = witness_json(w)
    _emit(dumps(doc) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seshadri", description="Exact Seshadri constants on abelian surfaces with real multiplication.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order=True):
        if order:
            sp.add_argument("--ring", choices=[r.value for r in Ring], default="sqrt")
            sp.add_argument("--e", type=int, required=True)
        sp.add_argument("--out", help="write output to this path instead of stdout")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--format", choices=["json", "csv"])
        sp.add_argument("--approx", action="store_true", help="add decimal renderings (marked *_approx)")

    sp = sub.add_parser("epsilon", help="Seshadri constant of a class or of L_t")
    common(sp)
    sp.add_argument("--bundle", help="class a,b meaning a*L0 + b*Linf")
    sp.add_argument("--t", help="ray parameter p/q")
    sp.set_defaults(func=cmd_epsilon)

    sp = sub.add_parser("plot", help="segment data of the Seshadri function")
    common(sp)
    sp.add_argument("--qmax", type=int, default=50)
    sp.add_argument("--range", help="lo..hi with rational endpoints")
    sp.add_argument("--extend-by-group", action="store_true", help="sweep the fundamental interval and transport")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("fundamental", help="generators, principal polarizations, fundamental interval")
    common(sp)
    sp.add_argument("--kmin", type=int, default=-2)
    sp.add_argument("--kmax", type=int, default=2)
    sp.set_defaults(func=cmd_fundamental)

    sp = sub.add_parser("classify", help="residue classification of e")
    common(sp, order=False)
    sp.add_argument("--e", type=int, required=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("witness", help="search for a line bundle with two submaximal curves")
    common(sp)
    sp.add_argument("--qmax", type=int, default=50)
    sp.add_argument("--t", help="only pairs whose overlap contains this point")
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("scan", help="witness search over a range of e (JSON lines)")
    common(sp, order=False)
    sp.add_argument("--ring", choices=[r.value for r in Ring], default="half")
    sp.add_argument("--e-max", type=int, required=True)
    sp.add_argument("--e-min", type=int, default=5)
    sp.add_argument("--qmax", type=int, default=100)
    sp.add_argument("--qmax-cap", type=int, help="double qmax per e up to this value while no witness is found")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("check-en", help="witness for e = 1 + 8 n^2")
    common(sp, order=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--qmax", type=int, default=50)
    sp.set_defaults(func=cmd_check_en)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        print("This is a bug; please report the command line that triggered it.", file=sys.stderr)
        return 3
    except (SeshadriError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
