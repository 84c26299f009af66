"""Command-line front end.

    python -m compqd table  --gen exp_over_poly:1,2,-2,3:35 --algorithm compqd
    python -m compqd conds  --gen exp_over_poly:1,2,-2,3:35 --variant qd
    python -m compqd cfrac  --gen exp:20
    python -m compqd poles  --gen exp_over_poly:1,2,3,4:33 --method critical
    python -m compqd zeros  --gen laguerre:35 --variant compproqd
    python -m compqd sweep  --range 10:7:200 --seed 1
    python -m compqd flops  --range 50:5:1000
    python -m compqd bench  --degree 200

Exit codes: 0 success, 2 bad input, 3 breakdown, 4 no convergence.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import analysis, apps, backend, oracle, progressive, qdtable
from .errors import BreakdownError, ConvergenceError, ParseError, QDError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BREAKDOWN = 3
EXIT_NOCONV = 4

THREADS_ENV = "COMPQD_THREADS"


# -- input -------------------------------------------------------------------

def parse_coefficients(text, source="<input>"):
    """One coefficient per line: decimal, p/q or hex-float; '#' starts a
    comment.  Returns exact rationals."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = oracle.to_mpq(line)
        except (ValueError, ZeroDivisionError):
            raise ParseError("cannot parse coefficient %r" % line, lineno,
                             source) from None
        out.append(v)
    if not out:
        raise ParseError("no coefficients", 0, source)
    return out


def read_coefficients(path):
    if path == "-":
        return parse_coefficients(sys.stdin.read(), "<stdin>")
    with open(path, encoding="utf-8") as fh:
        return parse_coefficients(fh.read(), path)


def _ints(s, what):
    try:
        return int(s)
    except ValueError:
        raise ParseError("bad %s %r" % (what, s), 0, "--gen") from None


def generate(spec):
    """Builtin generators; all return exact rationals in ascending powers.

    exp:N                      Taylor coefficients of e^x up to x^N
    exp_over_poly:a,b,c,d:N    e^x / prod (x - a_i), degree N
    laguerre:k                 Laguerre polynomial L_k
    random:N:seed              N+1 binary64 values uniform in (-1, 1)
    """
    parts = spec.split(":")
    name = parts[0]
    try:
        if name == "exp" and len(parts) == 2:
            N = _ints(parts[1], "degree")
            out = [oracle.mpq(1)]
            for n in range(1, N + 1):
                out.append(out[-1] / n)
            return out
        if name == "exp_over_poly" and len(parts) == 3:
            poles = [oracle.to_mpq(a) for a in parts[1].split(",") if a]
            return oracle.gen_taylor_exp_rational(poles,
                                                  _ints(parts[2], "degree"))
        if name == "laguerre" and len(parts) == 2:
            return oracle.gen_laguerre(_ints(parts[1], "degree"))
        if name == "random" and len(parts) == 3:
            return oracle.gen_random_poly(_ints(parts[1], "degree"),
                                          _ints(parts[2], "seed"))
    except (ValueError, QDError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), 0, "--gen") from None
    raise ParseError("unknown generator %r" % spec, 0, "--gen")


def load_input(args):
    if args.input is not None:
        vals = read_coefficients(args.input)
    else:
        vals = generate(args.gen)
    if getattr(args, "float_inputs", False):
        vals = [oracle.mpq(oracle.round_nearest(v)) for v in vals]
    return vals


def parse_range(text):
    """start:step:stop (inclusive) or a single integer."""
    try:
        bits = [int(x) for x in text.split(":")]
    except ValueError:
        raise ParseError("bad range %r" % text, 0, "--range") from None
    if len(bits) == 1:
        bits = [bits[0], 1, bits[0]]
    if len(bits) != 3 or bits[1] <= 0:
        raise ParseError("range must be start:step:stop", 0, "--range")
    return list(range(bits[0], bits[2] + 1, bits[1]))


# -- output ------------------------------------------------------------------

def fmt_float(x, hexfloat=False):
    if x is None:
        return ""
    if isinstance(x, oracle.BigReal):
        x = oracle.round_nearest(x)
    x = float(x)
    return x.hex() if hexfloat else repr(x)


def emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _series(vals):
    return qdtable.SeriesInput.from_exact(vals)


def _table(vals, algorithm, init):
    if algorithm == "exact":
        return qdtable.from_exact_table(oracle.exact_qd(vals))
    return qdtable.build(_series(vals), algorithm, init)


# -- subcommands -------------------------------------------------------------

def cmd_table(args):
    vals = load_input(args)
    t = _table(vals, args.algorithm, args.init)
    emit(t.to_json(hexfloat=args.hex, indent=args.indent), args.output)
    return EXIT_OK


def cmd_conds(args):
    vals = load_input(args)
    ex = oracle.exact_qd(vals)
    conds = analysis.condition_table(ex)
    t = _table(vals, args.variant, args.init)
    factors = analysis.stability_factors(t, ex)
    bvar = "compqd" if args.variant in ("compqd", "ddqd") else "qd"
    rep = analysis.bound_check(t, ex, factors, conds, bvar)
    emit(rep.to_csv(hexfloat=args.hex), args.output)
    return EXIT_OK


def cmd_cfrac(args):
    vals = load_input(args)
    ref = apps.cfrac_from_series(vals, "exact")
    if args.algorithm == "exact":
        cf = ref
    else:
        cf = apps.cfrac_from_series(vals, args.algorithm, args.init)
    doc = {
        "algorithm": args.algorithm,
        "K": cf.K,
        "truncated": cf.truncated,
        "coefficients": [fmt_float(a, args.hex) for a in cf.coeffs],
    }
    emit(json.dumps(doc, indent=args.indent), args.output)
    if args.errors:
        rows = []
        for i, (a, b) in enumerate(zip(cf.coeffs, ref.coeffs)):
            rows.append([i, fmt_float(a, args.hex), fmt_float(b, args.hex),
                         fmt_float(oracle.rel_error(a, b), args.hex)])
        emit(_csv(["i", "a", "a_exact", "rel_err"], rows), args.errors)
    return EXIT_OK


def cmd_poles(args):
    vals = load_input(args)
    t = _table(vals, args.algorithm, args.init)
    if args.method == "direct":
        which = None
        if args.columns:
            which = [int(x) for x in args.columns.split(",")]
        rep = apps.poles_direct(t, which, conv_tol=args.conv_tol)
    else:
        rep = apps.poles_critical(t, args.m, args.j, args.n,
                                  conv_tol=args.conv_tol)
    emit(rep.to_json(indent=args.indent), args.output)
    return EXIT_OK


def cmd_zeros(args):
    vals = load_input(args)
    poly = progressive.PolyInput.from_exact(vals, ascending=True)
    ref = None
    if args.reference:
        ref = oracle.reference_zeros(poly.exact)
    code = EXIT_OK
    try:
        rep = apps.zeros(poly, args.variant, args.tol, args.max_sweeps,
                         reference=ref)
    except BreakdownError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BREAKDOWN
    if not rep.converged:
        print("warning: not converged after %d sweeps" % rep.sweeps,
              file=sys.stderr)
        code = EXIT_NOCONV
    emit(rep.to_json(indent=args.indent), args.output)
    if args.errors and ref is not None:
        rows = [[i, fmt_float(z, args.hex), fmt_float(r, args.hex),
                 fmt_float(e, args.hex)]
                for i, (z, r, e) in enumerate(zip(rep.zeros, ref,
                                                  rep.rel_errors))]
        emit(_csv(["i", "zero", "zero_exact", "rel_err"], rows), args.errors)
    return code


def _max_q_error(t, ex):
    worst = 0.0
    for m in range(1, ex.mq + 1):
        for n, x in enumerate(ex.q[m]):
            if x is None or x == 0 or not t.valid("q", m, n):
                continue
            err = oracle.rel_error(t.value("q", m, n), x)
            if err > worst:
                worst = err
    return worst


def sweep_case(N, seed):
    """One random-polynomial case: (N, max cond_q, qd err, Compqd err)."""
    vals = oracle.gen_random_poly(N, seed + N)
    ex = oracle.exact_qd(vals)
    conds = analysis.condition_table(ex)
    s = qdtable.SeriesInput.from_exact(vals)
    e_qd = _max_q_error(qdtable.build_qd(s), ex)
    e_cq = _max_q_error(qdtable.build_compqd(s, "float"), ex)
    mc = conds.max_cond_q()
    return N, mc, e_qd, e_cq


def _workers():
    try:
        n = int(os.environ.get(THREADS_ENV, "1"))
    except ValueError:
        n = 1
    return max(1, n)


def run_sweep(Ns, seed, workers=None):
    workers = workers or _workers()
    if workers == 1:
        return [sweep_case(N, seed) for N in Ns]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        res = list(pool.map(sweep_case, Ns, [seed] * len(Ns)))
    return sorted(res)


def cmd_sweep(args):
    Ns = parse_range(args.range)
    rows = []
    for N, mc, e1, e2 in run_sweep(Ns, args.seed):
        rows.append([N, fmt_float(mc, args.hex), fmt_float(e1, args.hex),
                     fmt_float(e2, args.hex)])
    emit(_csv(["N", "max_cond_q", "qd_max_rel_err", "compqd_max_rel_err"],
              rows), args.output)
    return EXIT_OK


def cmd_flops(args):
    ms = parse_range(args.range)
    if not ms:
        raise ParseError("empty range", 0, "--range")
    r = analysis.flop_ratios(ms, inputs=args.inputs)
    rows = [
        ["compqd/qd", "%.2f" % r.compqd_qd_e, "%.2f" % r.compqd_qd_q,
         "%.2f" % r.compqd_qd],
        ["ddqd/qd", "%.2f" % r.ddqd_qd_e, "%.2f" % r.ddqd_qd_q,
         "%.2f" % r.ddqd_qd],
        ["compqd/ddqd", "", "", "%.2f%%" % (100 * r.compqd_ddqd)],
    ]
    emit(_csv(["ratio", "e", "q", "average"], rows), args.output)
    return EXIT_OK


def cmd_bench(args):
    vals = oracle.gen_random_poly(args.degree, args.seed)
    s = qdtable.SeriesInput.from_exact(vals)
    rows = []
    for name in backend.available():
        for alg in ("qd", "compqd", "ddqd"):
            best = None
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                qdtable.build(s, alg, "float", backend=name)
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            rows.append([name, alg, args.degree, "%.6f" % best])
    emit(_csv(["backend", "algorithm", "degree", "seconds"], rows),
         args.output)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _add_input(p, poly=False):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", "-i", metavar="FILE",
                   help="coefficient file, ascending powers ('-' for stdin)")
    g.add_argument("--gen", metavar="SPEC",
                   help="builtin generator, e.g. exp_over_poly:1,2,-2,3:35")
    p.add_argument("--float-inputs", action="store_true",
                   help="round the coefficients to binary64 first")


def _add_out(p):
    p.add_argument("--output", "-o", metavar="PATH")
    p.add_argument("--hex", action="store_true",
                   help="write floats as hex (bit exact)")
    p.add_argument("--indent", type=int, default=None)


def build_parser():
    ap = argparse.ArgumentParser(prog="compqd",
                                 description="qd tables and applications")
    ap.add_argument("--backend", choices=["python", "cython"],
                    help="kernel backend (default: compiled when available)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="build a qd table")
    _add_input(p)
    _add_out(p)
    p.add_argument("--algorithm", default="compqd",
                   choices=["qd", "compqd", "ddqd", "exact"])
    p.add_argument("--init", default="real", choices=["real", "float"])
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("conds", help="condition numbers, errors and bounds")
    _add_input(p)
    _add_out(p)
    p.add_argument("--variant", default="compqd",
                   choices=["qd", "compqd", "ddqd"])
    p.add_argument("--init", default="real", choices=["real", "float"])
    p.set_defaults(func=cmd_conds)

    p = sub.add_parser("cfrac", help="regular C-fraction coefficients")
    _add_input(p)
    _add_out(p)
    p.add_argument("--algorithm", default="compqd",
                   choices=["qd", "compqd", "ddqd", "exact"])
    p.add_argument("--init", default="real", choices=["real", "float"])
    p.add_argument("--errors", metavar="CSV",
                   help="also write per-coefficient errors against the oracle")
    p.set_defaults(func=cmd_cfrac)

    p = sub.add_parser("poles", help="poles from the q columns")
    _add_input(p)
    _add_out(p)
    p.add_argument("--algorithm", default="compqd",
                   choices=["qd", "compqd", "ddqd", "exact"])
    p.add_argument("--init", default="real", choices=["real", "float"])
    p.add_argument("--method", default="direct",
                   choices=["direct", "critical"])
    p.add_argument("--columns", help="direct: comma separated m values")
    p.add_argument("-m", type=int, default=1)
    p.add_argument("-j", type=int, default=3)
    p.add_argument("-n", type=int, default=None)
    p.add_argument("--conv-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("zeros", help="polynomial zeros, progressive qd")
    _add_input(p)
    _add_out(p)
    p.add_argument("--variant", default="compproqd",
                   choices=["proqd", "compproqd"])
    p.add_argument("--tol", type=float, default=1e-16)
    p.add_argument("--max-sweeps", type=int, default=None)
    p.add_argument("--reference", action="store_true",
                   help="attach errors against exact zeros")
    p.add_argument("--errors", metavar="CSV")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("sweep", help="random-polynomial accuracy sweep")
    p.add_argument("--range", default="10:7:200")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.add_argument("--hex", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("flops", help="theoretical flop ratios")
    p.add_argument("--range", default="50:5:1000")
    p.add_argument("--inputs", default="float", choices=["float", "real"])
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_flops)

    p = sub.add_parser("bench", help="wall-clock timing per backend")
    p.add_argument("--degree", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.backend:
        os.environ[backend.ENV] = args.backend
        backend.select(args.backend)
    if getattr(args, "tol", 1.0) is not None and not getattr(args, "tol", 1.0) > 0:
        print("error: tol must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except ParseError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except BreakdownError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BREAKDOWN
    except ConvergenceError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_NOCONV
    except (QDError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE


def main_exit():
    sys.exit(main())
