"""Command line entry point.

Exit codes: 0 success, 1 a checked inequality failed, 2 usage error,
3 the operation needs a data file that was not supplied.
"""
import argparse
import hashlib
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import CapacityError, DataGatedError, DomainError, SiftboundError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _clean(v):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _header(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "timestamp")}
    h = hashlib.sha256(json.dumps(_clean(cfg), sort_keys=True).encode()).hexdigest()[:16]
    meta = {"version": __version__, "config_hash": h, "command": args.command}
    if getattr(args, "timestamp", False):
        meta["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return meta


def _emit(args, payload, out=None):
    out = out or sys.stdout
    doc = {"meta": _header(args), "result": _clean(payload)}
    if args.format == "json":
        out.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        out.write(_text(payload) + "\n")


def _text(payload, indent=""):
    if isinstance(payload, dict):
        lines = []
        for k, v in payload.items():
            nested = isinstance(v, dict) or (isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v))
            if nested and v:
                lines.append(f"{indent}{k}:")
                lines.append(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_clean(v)}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(_text(x, indent) for x in payload)
    return f"{indent}{payload}"


def _threads(args):
    env = os.environ.get("SIFTBOUND_THREADS")
    return int(env) if env else int(getattr(args, "threads", 1) or 1)


# subcommands

def cmd_chebyshev(args):
    from .primes import check_pi_bracket, chebyshev
    s = chebyshev(args.x)
    out = {"x": s.x, "theta": s.theta, "theta3": s.theta3, "pi_rho": s.pi_rho,
           "pi_rho_minus_2logx": s.pi_rho_minus_2logx, "error_bound": s.error_bound,
           "terms": s.terms}
    ok = True
    if args.check:
        c = check_pi_bracket(args.x)
        out["check"] = c
        ok = c["lower_ok"] and c["upper_ok"]
    _emit(args, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_factor(args):
    from .factor import FactorBudget, factorize, load_hints, smallest_p3
    for h in args.hints or []:
        load_hints(h)
    b = FactorBudget(trial_bound=args.trial, rho_iterations=args.rho_iterations,
                     rho_seeds=args.rho_seeds)
    f = factorize(args.n, b)
    out = f.as_dict()
    out["smallest_p3"] = smallest_p3(args.n, b)
    _emit(args, out)
    return EXIT_OK


def cmd_mg(args):
    from .density import mg
    s = mg(args.x, "exact" if args.exact else "fast")
    _emit(args, {"x": s.x, "mode": "exact" if args.exact else "fast", "mg": s.mg,
                 "lambda_sum": s.lambda_sum, "e_of_x": s.e_of_x, "delta": s.delta,
                 "error_bound": s.error_bound})
    return EXIT_OK


def _parse_grid(text):
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise _Usage(f"grid must be lo:hi:n, got {text!r}") from None


def cmd_density_check(args):
    from .density import A1, A2, A3, LambdaProfile, mg_at_points
    lo, hi, n = _parse_grid(args.grid)
    if not (1 < lo < hi) or n < 1:
        raise _Usage("need 1 < lo < hi and n >= 1")
    xs = np.geomspace(lo, hi, n)
    prof = LambdaProfile(int(hi))
    E = prof.E(xs)
    m, merr = mg_at_points(xs)
    eb = prof.bound
    rows = []
    ok = True
    for x, e, v in zip(xs, E, m):
        r = {"x": float(x), "E": float(e), "mg": float(v),
             "E_in_bracket": bool(-A1 + eb < e < -eb),
             "E_below_A2": bool(e < -A2 - eb) if x >= 49 else None,
             "mg_below_A3log2": bool(v + merr < A3 * math.log(x) ** 2) if x >= 10 else None}
        ok &= r["E_in_bracket"] and r["E_below_A2"] is not False
        rows.append(r)
    if args.format == "csv":
        sys.stdout.write("x,E,mg,E_in_bracket,E_below_A2,mg_below_A3log2\n")
        for r in rows:
            sys.stdout.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v)
                                      for v in r.values()) + "\n")
    else:
        _emit(args, {"grid": [lo, hi, n], "error_bound_E": eb, "error_bound_mg": merr,
                     "all_E_ok": ok, "rows": rows})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_constants(args):
    from .bootstrap import (C_PUBLISHED, b1_reference, compare_printed,
                            euler_product_C, ladder_constants)
    C = euler_product_C(args.euler_limit) if args.euler_limit else None
    cs = ladder_constants(C)
    out = cs.as_dict()
    out["C_source"] = "published bracket" if C is None else f"Euler product to {args.euler_limit}"
    if C is not None:
        out["C_contains_published_point"] = C.contains(0.05476218)
        out["C_inside_published_bracket"] = C_PUBLISHED.contains(C)
    cmp = compare_printed(cs.ladder)
    out["printed_comparison"] = cmp
    out["B1_reference_mpmath"] = b1_reference()
    _emit(args, out)
    return EXIT_OK if all(v["ok"] for v in cmp.values()) else EXIT_FAIL


def cmd_envelope(args):
    from .envelope import load_envelope, mg_lower_envelope
    table = load_envelope(args.table) if args.table else load_envelope()
    if args.u is not None:
        _emit(args, {"u": args.u, "lower_bound": mg_lower_envelope(args.u, table=table)})
        return EXIT_OK
    if args.emit == "csv":
        sys.stdout.write("K_i,t_i,u_lo,u_hi\n")
        for (k, t), a, b in zip(table.pairs(), table.u_lo, table.u_hi):
            sys.stdout.write(f"{k:.17g},{t:.17g},{float(a):.17g},{float(b):.17g}\n")
    else:
        _emit(args, {"pieces": len(table), "pairs": table.pairs()})
    return EXIT_OK


def cmd_sift(args):
    from .largesieve import count_survivors, sieve_bound
    s = 1 if args.sign == "+" else -1
    X = (args.x - s) / 6
    out = {"x": args.x, "w": args.w, "sign": args.sign, "X": X,
           "bound": sieve_bound(X, args.w)}
    ok = True
    if not args.bound_only:
        out["survivors"] = count_survivors(args.x, args.sign, args.w)
        ok = out["survivors"] <= out["bound"]
        out["ok"] = ok
    _emit(args, out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_zeros(args):
    from .zeros import inverse_square_sum, load_zeros, tail_bound, zero_count_bound
    if not args.file:
        raise DataGatedError("a zero table (--file) is required")
    t = load_zeros(args.file, args.kind)
    out = {"kind": args.kind, "count": len(t), "top": t.top, "sha256": t.checksum}
    if args.sum_to is not None:
        out["inverse_square_sum"] = inverse_square_sum(t, args.sum_to)
    if args.tail_from is not None:
        out["tail_bound"] = tail_bound(args.tail_from, math.inf, args.kind)
        out["zero_count_bound"] = zero_count_bound(args.tail_from, args.kind)
    _emit(args, out)
    return EXIT_OK


def cmd_chains(args):
    from .application.certcheck import check_certificate
    from .application.chains import ChainLimits, verify_range
    from .factor import load_bundled_hints, load_hints
    if not args.no_bundled_hints:
        load_bundled_hints()
    for h in args.hints or []:
        load_hints(h)
    out = open(args.out, "w") if args.out else sys.stdout
    bad = []

    def sink(cert):
        d = cert.as_dict()
        if args.verify:
            ok, msg = check_certificate(d)
            if not ok:
                bad.append((cert.p, msg))
        out.write(json.dumps(_clean(d), sort_keys=True) + "\n")

    state = verify_range(args.lo, args.hi, ChainLimits(max_steps=args.max_steps),
                         checkpoint=args.resume, sink=sink, workers=_threads(args))
    if args.out:
        out.close()
    summary = {"excluded": state["excluded"], "unresolved": state["unresolved"],
               "prefiltered": state["prefiltered"], "verifier_failures": bad}
    sys.stderr.write(json.dumps(_clean(summary), sort_keys=True) + "\n")
    return EXIT_OK if not state["unresolved"] and not bad else EXIT_FAIL


def cmd_tail(args):
    from .application.tail import abundancy_contradiction, tail_integrals
    from .bootstrap import published_lower, recomputed_lower, ladder_constants
    consts = (published_lower() if args.constants == "printed"
              else recomputed_lower(ladder_constants()))
    x = math.exp(args.x_log)
    rep = tail_integrals(args.L, x, constants=consts, require_i3=not args.skip_i3)
    verdict = abundancy_contradiction(rep, args.small_sum)
    out = rep.as_dict()
    out["constants"] = args.constants
    _emit(args, out)
    return EXIT_OK if verdict == "contradiction" else EXIT_FAIL


def cmd_rbound(args):
    from .application.rbound import r_bound_direct, r_bound_iterative
    if args.beta >= 8:
        out = {"beta": args.beta,
               "bound_beta_plus_3": r_bound_direct(args.beta, "beta+3"),
               "bound_2beta_plus_1": r_bound_direct(args.beta, "2beta+1")}
    else:
        out = {"beta": args.beta,
               "iterative_2beta_plus_1": r_bound_iterative(args.beta, "2beta+1"),
               "iterative_beta_plus_3": r_bound_iterative(args.beta, "beta+3")}
    _emit(args, out)
    return EXIT_OK


def cmd_report(args):
    from .report import report_all
    res = report_all(long=args.long, zeros_dir=args.zeros_dir, threads=_threads(args))
    if args.format == "json":
        _emit(args, res)
    else:
        for c in res["checks"]:
            sys.stdout.write(f"{c['status']:5s} {c['name']}: {c['detail']}\n")
    return EXIT_OK if res["ok"] else EXIT_FAIL


def build_parser():
    def common(parser, default):
        kw = {} if default else {"default": argparse.SUPPRESS}
        parser.add_argument("--format", choices=("json", "text", "csv"),
                            **({"default": "json"} if default else kw))
        parser.add_argument("--threads", type=int, **({"default": 1} if default else kw))
        parser.add_argument("--timestamp", action="store_true",
                            help="add a timestamp to the metadata (breaks byte-identical output)",
                            **kw)

    p = _Parser(prog="siftbound", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common(p, True)
    shared = _Parser(add_help=False)
    common(shared, False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[shared], **kw)
    sub.add_parser = add_parser

    s = sub.add_parser("chebyshev", help="theta, theta_3 and Pi at x")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--check", action="store_true")
    s.set_defaults(func=cmd_chebyshev)

    s = sub.add_parser("factor", help="factor an integer below 2^128")
    s.add_argument("n", type=int)
    s.add_argument("--hints", action="append")
    s.add_argument("--trial", type=int, default=100000)
    s.add_argument("--rho-iterations", type=int, default=2 ** 20)
    s.add_argument("--rho-seeds", type=int, default=64)
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("mg", help="M_g, Lambda_g sum, E and Delta at x")
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--exact", action="store_true")
    s.set_defaults(func=cmd_mg)

    s = sub.add_parser("density-check", help="E and M_g brackets on a log grid")
    s.add_argument("--grid", required=True, help="lo:hi:n")
    s.set_defaults(func=cmd_density_check)

    s = sub.add_parser("constants", help="the constant ladder as intervals")
    s.add_argument("--euler-limit", type=int, default=None)
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("envelope", help="lower envelope table for M_g(e^u)")
    s.add_argument("--emit", choices=("csv", "json"), default="json")
    s.add_argument("--u", type=float, default=None)
    s.add_argument("--table", default=None)
    s.set_defaults(func=cmd_envelope)

    s = sub.add_parser("sift", help="brute-force survivors against the sieve bound")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--w", type=float, required=True)
    s.add_argument("--sign", choices=("+", "-"), required=True)
    s.add_argument("--bound-only", action="store_true")
    s.set_defaults(func=cmd_sift)

    s = sub.add_parser("zeros", help="sums over a table of zero ordinates")
    s.add_argument("--file", default=None)
    s.add_argument("--kind", choices=("zeta", "chi3"), default="zeta")
    s.add_argument("--sum-to", type=float, default=None)
    s.add_argument("--tail-from", type=float, default=None)
    s.set_defaults(func=cmd_zeros)

    s = sub.add_parser("chains", help="chain exclusion certificates as JSON lines")
    s.add_argument("--lo", type=int, required=True)
    s.add_argument("--hi", type=int, required=True)
    s.add_argument("--resume", default=None, help="checkpoint file")
    s.add_argument("--hints", action="append")
    s.add_argument("--no-bundled-hints", action="store_true")
    s.add_argument("--out", default=None)
    s.add_argument("--max-steps", type=int, default=400)
    s.add_argument("--verify", action="store_true", help="run the independent checker")
    s.set_defaults(func=cmd_chains)

    s = sub.add_parser("tail", help="tail integrals and the abundancy verdict")
    s.add_argument("--L", type=float, default=9.0)
    s.add_argument("--x-log", type=float, default=25.0)
    s.add_argument("--small-sum", type=float, default=0.00633)
    s.add_argument("--constants", choices=("recomputed", "printed"), default="recomputed")
    s.add_argument("--skip-i3", action="store_true")
    s.set_defaults(func=cmd_tail)

    s = sub.add_parser("rbound", help="bounds on the number of prime factors")
    s.add_argument("--beta", type=int, required=True)
    s.set_defaults(func=cmd_rbound)

    s = sub.add_parser("report", help="run the desk-scale verification suite")
    s.add_argument("--long", action="store_true")
    s.add_argument("--zeros-dir", default=None)
    s.set_defaults(func=cmd_report)
    return p


def dispatch(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise _Usage("a subcommand is required")
        return args.func(args)
    except _Usage as exc:
        sys.stderr.write(f"siftbound: usage error: {exc}\n")
        return EXIT_USAGE
    except DataGatedError as exc:
        sys.stderr.write(f"siftbound: data required: {exc}\n")
        return EXIT_DATA
    except (DomainError, CapacityError) as exc:
        sys.stderr.write(f"siftbound: {exc}\n")
        return EXIT_USAGE
    except SiftboundError as exc:
        sys.stderr.write(f"siftbound: {exc}\n")
        return EXIT_FAIL


def main():
    try:
        code = dispatch()
        sys.stdout.flush()
    except BrokenPipeError:
        # output piped into head and the like
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
