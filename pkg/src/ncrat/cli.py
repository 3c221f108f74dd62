"""Command-line front end.

Expressions are read from ``.nce`` files (a ``d=<count>`` header, then the
expression).  Points, directions and realizations are JSON.  Exit status is
0 for success and exact verdicts, 2 for sampled verdicts, 1 for errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import acceptance
from .algebra import Mat
from .decide import SamplingPolicy, equivalent, is_zero
from .diffcalc import (delta, delta_numeric, directional_derivative, hessian, left_shift,
                       right_shift)
from .errors import NcratError
from .evaluation import EvalPoint, evaluate
from .expr import format_expr, read_nce, write_nce
from .realize import FmRealization, minimize, pencil_domain_check, realize, transfer_expr
from .series import expand

EXIT_OK, EXIT_ERROR, EXIT_SAMPLED = 0, 1, 2


class _Usage(Exception):
    pass


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_json(path):
    return json.loads(_read(path))


def _load_expr(args, name="expr"):
    path = getattr(args, name)
    if path is None:
        raise _Usage(f"--{name} is required")
    return read_nce(_read(path), seed=args.seed)


def _load_point(path) -> EvalPoint:
    return EvalPoint.from_json(_load_json(path))


def _load_dirs(path, d):
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("W", obj.get("mats"))
    mats = [Mat.from_json(m) for m in obj]
    if len(mats) != d:
        raise _Usage(f"direction file holds {len(mats)} matrices, expected {d}")
    return mats


def _load_realization(args) -> FmRealization:
    if args.realization:
        return FmRealization.from_json(_load_json(args.realization))
    return realize(_load_expr(args))


def _policy(args) -> SamplingPolicy:
    return SamplingPolicy.up_to(args.max_size, samples=args.samples, seed=args.seed)


# -- text rendering -------------------------------------------------------------------

def _monomial(w) -> str:
    return "*".join(f"z{j}" for j in w) or "1"


def _mat_text(M: Mat) -> str:
    return M.pretty()


def _realization_text(r: FmRealization) -> str:
    lines = [f"d={r.d} p={r.p} q={r.q} m={r.m}"]
    for j, (a, b) in enumerate(zip(r.A, r.B), start=1):
        lines += [f"A{j} =", _mat_text(a), f"B{j} =", _mat_text(b)]
    lines += ["C =", _mat_text(r.C), "D =", _mat_text(r.D)]
    return "\n".join(lines)


def _verdict_text(v) -> str:
    lines = [f"result: {v.kind}", f"exact: {str(v.exact).lower()}", f"route: {v.route}"]
    for k, x in v.details.items():
        lines.append(f"{k}: {json.dumps(x)}")
    if v.witness is not None:
        lines.append(f"witness (n={v.witness.n}):")
        for j, m in enumerate(v.witness.mats, start=1):
            lines += [f"Z{j} =", _mat_text(m)]
    return "\n".join(lines)


# -- commands -------------------------------------------------------------------------
# each returns (json object, text, exit code)

def cmd_parse(args):
    e = _load_expr(args)
    obj = {"d": e.d, "shape": list(e.shape), "expr": format_expr(e)}
    return obj, write_nce(e).rstrip("\n"), EXIT_OK


def cmd_eval(args):
    e = _load_expr(args)
    if args.multi:
        pts = [EvalPoint.from_json(p) for p in _load_json(args.Z)]
        vals = [evaluate(e, Z) for Z in pts]
        return ([v.to_json() for v in vals], "\n\n".join(_mat_text(v) for v in vals), EXIT_OK)
    v = evaluate(e, _load_point(args.Z))
    return v.to_json(), _mat_text(v), EXIT_OK


def cmd_series(args):
    s = expand(_load_expr(args), args.order)
    obj = s.to_json()
    text = "\n".join(f"{_monomial(w)}: {json.dumps(m.to_json())}" for w, m in s.coeffs.items())
    return obj, text, EXIT_OK


def cmd_realize(args):
    r = realize(_load_expr(args))
    return r.to_json(), _realization_text(r), EXIT_OK


def cmd_minimize(args):
    r = minimize(_load_realization(args))
    return r.to_json(), _realization_text(r), EXIT_OK


def cmd_transfer(args):
    if not args.realization:
        raise _Usage("--realization is required")
    e = transfer_expr(FmRealization.from_json(_load_json(args.realization)))
    return {"d": e.d, "expr": format_expr(e)}, write_nce(e).rstrip("\n"), EXIT_OK


def _verdict_result(v):
    return v.to_json(), _verdict_text(v), EXIT_OK if v.exact else EXIT_SAMPLED


def cmd_equiv(args):
    return _verdict_result(equivalent(_load_expr(args, "a"), _load_expr(args, "b"), _policy(args)))


def cmd_zero(args):
    return _verdict_result(is_zero(_load_expr(args), _policy(args)))


def cmd_diff(args):
    e = _load_expr(args)
    j = args.letter
    if not args.numeric:
        D = delta(e, j)
        return {"letter": j, "expr": format_expr(D)}, format_expr(D), EXIT_OK
    if not (args.Z and args.Zp and args.W):
        raise _Usage("--numeric needs --Z, --Zp and --W")
    Z, Zp = _load_point(args.Z), _load_point(args.Zp)
    obj = _load_json(args.W)
    if obj and isinstance(obj[0][0], list):
        H = Mat.from_json(obj[j - 1])
    else:
        H = Mat.from_json(obj)
    W = [H if k == j else Mat.zeros(Z.n, Zp.n) for k in range(1, e.d + 1)]
    v = delta_numeric(e, Z, Zp, W)
    return v.to_json(), _mat_text(v), EXIT_OK


def cmd_shift(args):
    e = _load_expr(args)
    fn = right_shift if args.side == "right" else left_shift
    s = fn(e, args.letter)
    return {"side": args.side, "letter": args.letter, "expr": format_expr(s)}, format_expr(s), EXIT_OK


def cmd_dderiv(args):
    e = _load_expr(args)
    v = directional_derivative(e, _load_point(args.Z), _load_dirs(args.W, e.d))
    return v.to_json(), _mat_text(v), EXIT_OK


def cmd_hessian(args):
    e = _load_expr(args)
    v = hessian(e, _load_point(args.Z), _load_dirs(args.W, e.d))
    return v.to_json(), _mat_text(v), EXIT_OK


def cmd_domain_check(args):
    r = _load_realization(args)
    if args.minimal:
        r = minimize(r)
    Z = _load_point(args.Z)
    ok = pencil_domain_check(r, Z)
    return {"regular": ok, "m": r.m, "n": Z.n}, "regular" if ok else "singular", EXIT_OK


def cmd_selftest(args):
    results = []
    lines = []
    for k in (args.criteria or sorted(acceptance.CRITERIA)):
        c = acceptance.run(k)
        results.append(c)
        lines.append(c.line(timing=False))
    passed = sum(c.passed for c in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    obj = [{"criterion": c.number, "name": c.name, "passed": c.passed, "detail": c.detail}
           for c in results]
    return obj, "\n".join(lines), EXIT_OK if passed == len(results) else EXIT_ERROR


COMMANDS = {
    "parse": (cmd_parse, "parse and pretty-print an expression"),
    "eval": (cmd_eval, "evaluate an expression at a point"),
    "series": (cmd_series, "truncated power series of an expression regular at zero"),
    "realize": (cmd_realize, "state-space realization of an expression"),
    "minimize": (cmd_minimize, "minimal realization"),
    "transfer": (cmd_transfer, "expression of a realization's transfer function"),
    "equiv": (cmd_equiv, "decide equivalence of two expressions"),
    "zero": (cmd_zero, "decide whether an expression is equivalent to zero"),
    "diff": (cmd_diff, "difference-differential operator, symbolic or numeric"),
    "shift": (cmd_shift, "left or right backward shift"),
    "dderiv": (cmd_dderiv, "directional derivative at a point"),
    "hessian": (cmd_hessian, "second directional derivative at a point"),
    "domain-check": (cmd_domain_check, "pencil invertibility of a realization at a point"),
    "selftest": (cmd_selftest, "run the acceptance suite"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=40)
    common.add_argument("--max-size", type=int, default=3)
    common.add_argument("--order", type=int, default=6)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", metavar="FILE")

    ap = argparse.ArgumentParser(prog="ncrat", description="Noncommutative rational functions over Q.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = {}
    for name, (_, help_) in COMMANDS.items():
        p[name] = sub.add_parser(name, parents=[common], help=help_)
    for name in ("parse", "eval", "series", "realize", "minimize", "zero", "diff", "shift",
                 "dderiv", "hessian", "domain-check"):
        flags = ("--expr", "--in") if name == "realize" else ("--expr",)
        p[name].add_argument(*flags, dest="expr", metavar="FILE")
    for name in ("minimize", "transfer", "domain-check"):
        p[name].add_argument("--realization", "--in", dest="realization", metavar="FILE")
    for name in ("eval", "dderiv", "hessian", "domain-check"):
        flags = ("--Z", "--point") if name == "eval" else ("--Z",)
        p[name].add_argument(*flags, dest="Z", metavar="FILE", required=True)
    for name in ("dderiv", "hessian"):
        p[name].add_argument("--W", metavar="FILE", required=True)
    p["eval"].add_argument("--multi", action="store_true", help="the point file holds a list of points")
    p["equiv"].add_argument("--a", metavar="FILE", required=True)
    p["equiv"].add_argument("--b", metavar="FILE", required=True)
    p["diff"].add_argument("--letter", type=int, required=True)
    mode = p["diff"].add_mutually_exclusive_group()
    mode.add_argument("--symbolic", action="store_true")
    mode.add_argument("--numeric", action="store_true")
    p["diff"].add_argument("--Z", metavar="FILE")
    p["diff"].add_argument("--Zp", metavar="FILE")
    p["diff"].add_argument("--W", metavar="FILE")
    p["shift"].add_argument("--side", choices=("left", "right"), required=True)
    p["shift"].add_argument("--letter", type=int, required=True)
    p["domain-check"].add_argument("--minimal", action="store_true", help="minimize first")
    p["selftest"].add_argument("--criteria", type=int, nargs="*", metavar="K")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        obj, text, code = COMMANDS[args.command][0](args)
    except (_Usage, NcratError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"ncrat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    out = json.dumps(obj, indent=2) if args.format == "json" else text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
