"""Command-line entry point: `cubicdist <subcommand> [flags]`.

Exit status 0 on success, 1 on invalid input, 2 when a numerical procedure
does not converge (or, for `reproduce`, when a criterion fails).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .charfn import char_fn, tail_estimate
from .cubic_symbol import symbol
from .density import NonConvergence, QuadParams, invert
from .eisenstein import EisensteinInt, ModulusC, enumerate_primes, moduli_arrays
from .empirics import count_C, empirical_cdf, ks_distance
from .lfunction import CaseKind, EvalParams, ExcludedValue, batch_values, log_Lc, logderiv_Lc, value_smoothed
from .randmodel import ModelConfig, sample_sum


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    return f"{x:.12g}" if math.isfinite(x) else ""


def _eis(text: str) -> EisensteinInt:
    try:
        return EisensteinInt.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _case(text: str) -> CaseKind:
    try:
        return CaseKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ---------------------------------------------------------------- output


class Output:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.buf = io.StringIO()

    def config(self) -> dict:
        return {k: _config_val(v) for k, v in sorted(vars(self.args).items()) if k not in ("func", "output")}

    def header(self) -> None:
        self.buf.write(f"# cubicdist {__version__}\n")
        self.buf.write(f"# config {json.dumps(self.config(), sort_keys=True)}\n")
        ident = {k: self.config()[k] for k in ("sigma", "case") if k in self.config()}
        if ident:
            self.buf.write(f"# case {json.dumps(ident, sort_keys=True)}\n")

    def table(self, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
        if self.args.format == "json":
            recs = [dict(zip(columns, (_json_val(v) for v in r))) for r in rows]
            self.json({"rows": json.dumps(recs)})
            return
        self.header()
        w = csv.writer(self.buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])

    def json(self, obj: dict) -> None:
        flat = {"tool_version": __version__, "config": json.dumps(self.config(), sort_keys=True)}
        flat.update({k: _json_val(v) for k, v in obj.items()})
        self.buf.write(json.dumps(flat, sort_keys=True) + "\n")

    def plain(self, text: str) -> None:
        self.header()
        self.buf.write(text + "\n")

    def flush(self) -> None:
        if self.args.output:
            with open(self.args.output, "w", newline="") as fh:
                fh.write(self.buf.getvalue())
        else:
            sys.stdout.write(self.buf.getvalue())


def _config_val(v):
    if isinstance(v, CaseKind):
        return v.value
    if isinstance(v, EisensteinInt):
        return f"{v.a},{v.b}"
    return v


def _json_val(v):
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(f"{v:.12g}") if math.isfinite(v) else None
    return v


# ---------------------------------------------------------------- commands


def cmd_primes(args, out: Output) -> None:
    if args.max_norm < 3:
        raise ValueError("--max-norm must be >= 3")
    rows = [(p.norm, p.generator.a, p.generator.b, p.splitting.value) for p in enumerate_primes(args.max_norm)]
    out.table(["norm", "gen_a", "gen_b", "splitting"], rows)


def cmd_moduli(args, out: Output) -> None:
    if args.max_norm < 1:
        raise ValueError("--max-norm must be >= 1")
    a, b, n = moduli_arrays(args.max_norm)
    order = np.lexsort((b, a, n))
    out.table(["norm", "a", "b"], zip(n[order], a[order], b[order]))


def cmd_symbol(args, out: Output) -> None:
    value = str(symbol(args.alpha, args.lam))
    if args.format == "json":
        out.json({"symbol": value})
    else:
        out.plain(value)


def _params(args) -> EvalParams:
    return EvalParams(prime_cutoff=args.cutoff, smoothing=args.smooth)


def cmd_lvalue(args, out: Output) -> None:
    c = ModulusC.checked(args.c)
    params = _params(args)
    try:
        if args.sigma > 1:
            v = (log_Lc if args.case is CaseKind.LOG else logderiv_Lc)(c, args.sigma, params)
        else:
            v = value_smoothed(c, args.sigma, args.case, params)
        row, excluded = (v.value, v.err_est), False
    except ExcludedValue:
        row, excluded = (math.nan, math.nan), True
    if args.json or args.format == "json":
        out.json({"norm": c.norm, "a": c.value.a, "b": c.value.b, "value": row[0], "err_est": row[1], "excluded": excluded})
    else:
        out.table(["norm", "a", "b", "value", "err_est"], [(c.norm, c.value.a, c.value.b, *row)])


def cmd_lvalues(args, out: Output) -> None:
    a, b, n = moduli_arrays(args.max_norm)
    order = np.lexsort((b, a, n))
    a, b, n = a[order], b[order], n[order]
    params = _params(args)
    if args.sigma <= 1 and params.smoothing is None:
        from .empirics import DEFAULT_SMOOTHING

        params = EvalParams(params.prime_cutoff, DEFAULT_SMOOTHING)
    res = batch_values(a, b, args.sigma, params)
    val, err = (res.log, res.log_err) if args.case is CaseKind.LOG else (res.logderiv, res.logderiv_err)
    val = np.where(res.excluded, math.nan, val)
    out.table(["norm", "a", "b", "value", "err_est"], zip(n, a, b, val, err))


def cmd_charfn(args, out: Output) -> None:
    if args.y_step <= 0 or args.y_max < args.y_min:
        raise ValueError("need y-step > 0 and y-max >= y-min")
    ys = args.y_min + args.y_step * np.arange(int(math.floor((args.y_max - args.y_min) / args.y_step + 1e-9)) + 1)
    phi = char_fn(args.sigma, ys, args.case, args.cutoff)
    tail = tail_estimate(args.sigma, ys, args.case, args.cutoff, phi)
    out.table(["y", "re", "im", "abs", "tail_est"], zip(ys, phi.real, phi.imag, np.abs(phi), tail))


def cmd_density(args, out: Output) -> None:
    z = None
    if args.z_min is not None or args.z_max is not None:
        if args.z_min is None or args.z_max is None or args.z_step <= 0 or args.z_max <= args.z_min:
            raise ValueError("need --z-min < --z-max and --z-step > 0")
        z = args.z_min + args.z_step * np.arange(int(round((args.z_max - args.z_min) / args.z_step)) + 1)
    g = invert(args.sigma, args.case, z, QuadParams(prime_cutoff=args.cutoff))
    out.table(["z", "density", "cdf"], zip(g.z_values, g.m_values, g.cdf_values))


def cmd_compare(args, out: Output) -> None:
    vals = empirical_cdf(args.max_norm, args.sigma, args.case, _params(args))
    grid = invert(args.sigma, args.case)
    obj = {"n_samples": vals.n_samples, "n_excluded": vals.n_excluded, "ks": ks_distance(vals, grid),
           "ks_weighted": ks_distance(vals, grid, weighted=True)}
    if not args.weighted:
        obj.pop("ks_weighted")
    out.json(obj)


def cmd_count(args, out: Output) -> None:
    r = count_C(args.max_norm)
    if args.format == "json":
        out.json({"Y": r.Y, "count": r.count, "weighted": r.weighted, "predicted_slope": r.predicted_slope})
    else:
        out.table(["Y", "count", "weighted", "predicted_slope"], [(r.Y, r.count, r.weighted, r.predicted_slope)])


def cmd_montecarlo(args, out: Output) -> None:
    cfg = ModelConfig(args.sigma, args.case, args.cutoff, args.samples, args.seed)
    x = sample_sum(cfg, threads=args.threads)
    out.table(["sample_index", "value"], zip(range(x.size), x))


def cmd_reproduce(args, out: Output) -> int:
    from .acceptance import run_all

    report = run_all(args.profile, threads=args.threads)
    for c in report["criteria"]:
        print(f"criterion {c['id']:2d} [{'PASS' if c['passed'] else 'FAIL'}] {c['name']}", file=sys.stderr)
    out.buf.write(json.dumps(report, sort_keys=True, indent=1) + "\n")
    return 0 if report["all_passed"] else 2


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cubicdist", description="Value distribution of cubic Hecke L-functions over Z[w].")
    p.add_argument("--version", action="version", version=f"cubicdist {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--output", default=None, help="write to this file instead of stdout")
        sp.add_argument("--threads", type=int, default=1, help="worker threads (0 = auto)")
        return sp

    sp = add("primes", cmd_primes, "prime ideals up to a norm bound")
    sp.add_argument("--max-norm", type=int, required=True)

    sp = add("moduli", cmd_moduli, "the modulus family up to a norm bound")
    sp.add_argument("--max-norm", type=int, required=True)

    sp = add("symbol", cmd_symbol, "cubic residue symbol (alpha/lambda)_3")
    sp.add_argument("--alpha", type=_eis, required=True, help="A,B meaning A + B*w")
    sp.add_argument("--lambda", dest="lam", type=_eis, required=True)

    def lflags(sp, single: bool) -> None:
        sp.add_argument("--sigma", type=float, required=True)
        sp.add_argument("--case", type=_case, required=True)
        sp.add_argument("--cutoff", type=int, default=100_000, help="prime cutoff of Euler products")
        sp.add_argument("--smooth", type=float, default=None, help="smoothing X for sigma <= 1")
        if single:
            sp.add_argument("--json", action="store_true")

    sp = add("lvalue", cmd_lvalue, "one L-value")
    sp.add_argument("--c", type=_eis, required=True)
    lflags(sp, True)

    sp = add("lvalues", cmd_lvalues, "L-values over the family")
    sp.add_argument("--max-norm", type=int, required=True)
    lflags(sp, False)

    sp = add("charfn", cmd_charfn, "limiting characteristic function on a y-grid")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--case", type=_case, required=True)
    sp.add_argument("--y-min", type=float, default=0.0)
    sp.add_argument("--y-max", type=float, default=10.0)
    sp.add_argument("--y-step", type=float, default=0.5)
    sp.add_argument("--cutoff", type=int, default=100_000)

    sp = add("density", cmd_density, "limiting density and CDF")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--case", type=_case, required=True)
    sp.add_argument("--z-min", type=float, default=None)
    sp.add_argument("--z-max", type=float, default=None)
    sp.add_argument("--z-step", type=float, default=0.01)
    sp.add_argument("--cutoff", type=int, default=None)

    sp = add("compare", cmd_compare, "KS distance between empirical and predicted CDFs")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--case", type=_case, required=True)
    sp.add_argument("--max-norm", type=int, required=True)
    sp.add_argument("--weighted", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--cutoff", type=int, default=100_000)
    sp.add_argument("--smooth", type=float, default=None)

    sp = add("count", cmd_count, "count the family against the predicted slope")
    sp.add_argument("--max-norm", type=int, required=True)

    sp = add("montecarlo", cmd_montecarlo, "samples of the random model")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--case", type=_case, required=True)
    sp.add_argument("--cutoff", type=int, default=100_000)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("reproduce", cmd_reproduce, "run the acceptance checks")
    sp.add_argument("--profile", choices=("quick", "full"), default="quick")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"cubicdist: error: {exc}", file=sys.stderr)
        return 1
    out = Output(args)
    try:
        status = args.func(args, out) or 0
    except NonConvergence as exc:
        print(f"cubicdist: non-convergence: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"cubicdist: error: {exc}", file=sys.stderr)
        return 1
    out.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
