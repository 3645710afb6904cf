"""Command-line interface: encode, decode, compose, eval, check, list-laws.

All I/O is JSON (sorted keys) so runs with the same seed and configuration
are byte-identical apart from the reported wall time.  Exit codes: 0 on
success, 1 when a law run found failures, 2 for text or JSON parse
problems, 3 for composition boundary mismatches, 4 for bad evaluation
input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .errors import (
    IncompleteAssignment,
    NotComposable,
    NotNameable,
    ParseError,
    PolyfinError,
)
from .extension import eval_obj
from .finset import paranoid_checks
from .gen import InstanceGenConfig
from .laws import LAWS, run_laws
from .poly import compose_seq
from .symbolic import decode, encode, fiber_slice, parse_poly


def _emit(data, out_path: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if out_path and out_path != "-":
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}", 0) from exc


def _split_csv(text: str | None) -> list[str] | None:
    if text is None:
        return None
    return [part.strip() for part in text.split(",") if part.strip()]


def cmd_encode(args) -> int:
    s = parse_poly(args.text, in_vars=_split_csv(args.in_vars),
                   out_names=_split_csv(args.out_names))
    _emit(jsonio.poly_to_json(encode(s)), args.output)
    return 0


def cmd_decode(args) -> int:
    p = jsonio.poly_from_json(_read_json(args.file))
    s = decode(p)
    _emit({"in_vars": list(s.in_vars), "out_vars": list(s.out_vars),
           "text": s.render()}, args.output)
    return 0


def cmd_compose(args) -> int:
    polys = [jsonio.poly_from_json(_read_json(f)) for f in args.files]
    _emit(jsonio.poly_to_json(compose_seq(polys)), args.output)
    return 0


def _parse_assignment(text: str) -> dict[str, int]:
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise IncompleteAssignment(f"bad assignment entry {item!r}")
        key, _, value = item.partition("=")
        try:
            parsed = int(value)
        except ValueError:
            raise IncompleteAssignment(
                f"value for {key.strip()!r} is not a natural number") from None
        if parsed < 0:
            raise IncompleteAssignment(
                f"value for {key.strip()!r} must not be negative")
        out[key.strip()] = parsed
    return out


def cmd_eval(args) -> int:
    p = jsonio.poly_from_json(_read_json(args.file))
    assignment = _parse_assignment(args.assign)
    from .finset import Atom
    for e in p.tgt:
        if not isinstance(e, Atom):
            raise NotNameable("target elements must be atoms")
    x = fiber_slice(p, assignment)
    out, trace = eval_obj(p, x)
    counts = {e.token: len(out.arrow.fiber(e)) for e in p.tgt}
    payload: dict = {"counts": counts}
    if args.trace:
        payload["trace"] = jsonio.eval_trace_to_json(trace)
    _emit(payload, args.output)
    return 0


def cmd_check(args) -> int:
    names = list(LAWS) if args.law == "all" else [args.law]
    for name in names:
        if name not in LAWS:
            sys.stderr.write(f"unknown law {name!r}; see list-laws\n")
            return 2
    cfg = InstanceGenConfig(seed=args.seed, max_set_size=args.size,
                            cases=args.cases)
    if args.paranoid:
        with paranoid_checks():
            reports = run_laws(names, cfg)
    else:
        reports = run_laws(names, cfg)
    failures = sum(len(r.failures) for r in reports)
    _emit({"config": {"seed": cfg.seed, "size": cfg.max_set_size,
                      "cases": cfg.cases},
           "reports": [r.to_json() for r in reports],
           "failures_total": failures}, args.output)
    return 0 if failures == 0 else 1


def cmd_list_laws(args) -> int:
    _emit({name: desc for name, (desc, _) in LAWS.items()}, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyfin",
        description="polynomial diagrams over finite sets: encode, compose, "
                    "evaluate and law-check")
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="encode a polynomial expression")
    enc.add_argument("text")
    enc.add_argument("--in", dest="in_vars", default=None,
                     help="comma-separated input variables")
    enc.add_argument("--out", dest="out_names", default=None,
                     help="comma-separated output names")
    enc.add_argument("-o", "--output", default=None)
    enc.set_defaults(func=cmd_encode)

    dec = sub.add_parser("decode", help="decode a diagram back to text")
    dec.add_argument("file")
    dec.add_argument("-o", "--output", default=None)
    dec.set_defaults(func=cmd_decode)

    comp = sub.add_parser("compose", help="compose diagram files in order")
    comp.add_argument("files", nargs="+")
    comp.add_argument("-o", "--output", default=None)
    comp.set_defaults(func=cmd_compose)

    ev = sub.add_parser("eval", help="evaluate a diagram on fiber sizes")
    ev.add_argument("file")
    ev.add_argument("--assign", required=True,
                    help="comma-separated var=value pairs")
    ev.add_argument("--trace", action="store_true",
                    help="include the staged evaluation data")
    ev.add_argument("-o", "--output", default=None)
    ev.set_defaults(func=cmd_eval)

    chk = sub.add_parser("check", help="run law checks with seeded instances")
    chk.add_argument("--law", default="all")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--size", type=int, default=3)
    chk.add_argument("--cases", type=int, default=50)
    chk.add_argument("--paranoid", action="store_true",
                     help="re-verify induced maps by exhaustive search")
    chk.add_argument("-o", "--output", default=None)
    chk.set_defaults(func=cmd_check)

    lst = sub.add_parser("list-laws", help="print the law registry")
    lst.add_argument("-o", "--output", default=None)
    lst.set_defaults(func=cmd_list_laws)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return 2
    except NotComposable as exc:
        sys.stderr.write(f"composition error: {exc}\n")
        return 3
    except (IncompleteAssignment, NotNameable) as exc:
        sys.stderr.write(f"evaluation error: {exc}\n")
        return 4
    except PolyfinError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
