"""Command-line front end.

Subcommands emit CSV (tabular checks and scans) or JSON (search results) to
``--output`` (stdout by default).  The exit status is 0 iff every emitted
check holds; usage and domain errors exit with status 2 and write nothing.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
from math import isfinite

import numpy as np

from . import exponents, inequalities as ineq, search, trial
from .measure import DomainError, FunctionFamily, MeasureSpace, load_scenario

TOL_ENV = "LP_SHARP_TOL"
CHECK_COLUMNS = ["label", "N", "p", "r", "lhs", "rhs", "slack", "holds"]


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x) + 0.0, ".17g")
    return str(x)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def report_row(rep: ineq.InequalityReport):
    return [rep.label, rep.N, rep.p, rep.r, rep.lhs, rep.rhs, rep.slack, rep.holds]


def random_family(rng: np.random.Generator, N: int, M: int | None = None) -> FunctionFamily:
    """A non-negative family with a mix of dense, sparse and disjoint rows."""
    if M is None:
        M = int(rng.integers(2, search.MAX_ATOMS + 1))
    kind = rng.integers(0, 3)
    values = rng.random((N, M))
    if kind == 1:
        values *= rng.random((N, M)) < 0.4
    elif kind == 2:
        values *= np.arange(N)[:, None] == rng.integers(0, N, size=M)[None, :]
    if not np.any(values > 0):
        values[0, 0] = 1.0
    return FunctionFamily.from_arrays(rng.uniform(0.05, 1.0, M), values)


# -- subcommands -----------------------------------------------------------------


def cmd_exponents(args):
    rows = []
    for N in args.N:
        for p in args.p:
            e = exponents.exponent_row(N, p)
            rows.append([e[k] for k in ("N", "p", "r_main", "r_tilde", "r_limit", "nec_bound")])
    return render_csv(["N", "p", "r_main", "r_tilde", "r_limit", "nec_bound"], rows), True


def _families(args, rng):
    if args.scenario:
        fam, _ = load_scenario(args.scenario)
        yield fam
        return
    for _ in range(args.iters):
        N = args.N if args.N else int(rng.integers(2, 7))
        yield random_family(rng, N)


def _pairs(args, rng, signed):
    if args.scenario:
        fam, _ = load_scenario(args.scenario)
        if fam.n != 2:
            raise DomainError("two-function checks need a scenario with N = 2")
        yield fam.space, fam.values[0], fam.values[1]
        return
    for _ in range(args.iters):
        M = int(rng.integers(2, search.MAX_ATOMS + 1))
        space = MeasureSpace(rng.uniform(0.05, 1.0, M))
        if signed:
            g, h = rng.standard_normal((2, M))
        else:
            g, h = random_family(rng, 2, M).values
            g, h = g + 1e-3 * (not g.any()), h + 1e-3 * (not h.any())
        yield space, g, h


def _verify_reports(args):
    rng = np.random.default_rng(args.seed)
    tol, p, kind = args.tol, args.p, args.ineq
    if kind == "main":
        for fam in _families(args, rng):
            yield ineq.main_report(fam, p, args.r, tol)
    elif kind == "corollary":
        for fam in _families(args, rng):
            yield ineq.corollary_report(fam, p, tol)
    elif kind == "p2":
        for fam in _families(args, rng):
            yield dataclasses.replace(ineq.main_report(fam, 2.0, 1.0, tol), label="p2id")
    elif kind == "clarkson":
        for space, g, h in _pairs(args, rng, signed=True):
            yield ineq.clarkson_residual(g, h, p, space, tol)
    elif kind == "tri5":
        for space, g, h in _pairs(args, rng, signed=True):
            yield ineq.improved_triangle_report(g, h, p, space, tol)
    elif kind == "pair":
        for space, f, g in _pairs(args, rng, signed=False):
            yield from _pair_with_order(f, g, p, space, tol)
    elif kind == "pre":
        for gam in np.linspace(0.0, 1.0, args.iters):
            yield ineq.pre_scalar(float(gam), p, tol)
    else:
        N = args.N or 3
        r = args.r if args.r is not None else exponents.r_main(N, p)
        if kind == "nf5":
            for B in np.geomspace(float(N) ** (1 - p), 1.0, args.iters):
                yield ineq.scalar_nf5(float(B), N, p, r, tol)
        elif kind == "nf5B":
            for x in np.linspace(0.0, (N - 1) / N, args.iters):
                yield ineq.scalar_nf5B(float(x), N, p, r, tol)
        elif kind == "final":
            for x in np.linspace(0.0, (N - 1) / N, args.iters + 1)[:-1]:
                yield ineq.scalar_final(float(x), N, tol)


def _pair_with_order(f, g, p, space, tol):
    """The three N = 2 bounds, followed by rows checking their ordering."""
    reps = ineq.pair_bounds_report(f, g, p, space, tol)
    yield from reps
    by = {rep.label: rep for rep in reps}
    chain = [lab for lab in ("carb++", "carb+", "carb") if lab in by]
    for tight, loose in zip(chain, chain[1:]):
        yield ineq.InequalityReport(
            f"order:{tight}<={loose}", by[tight].rhs, by[loose].rhs, ineq.Direction.UPPER, tol, 2, p, None
        )


def cmd_verify(args):
    reports = list(_verify_reports(args))
    return render_csv(CHECK_COLUMNS, map(report_row, reports)), all(r.holds for r in reports)


def cmd_pair(args):
    args.ineq = "pair"
    return cmd_verify(args)


def cmd_scan(args):
    r = args.r if args.r is not None else exponents.r_main(args.N, args.p)
    a = np.linspace(args.a_min, args.a_max, args.steps)
    sum_fp, _, gamma = trial.trial_closed_forms(args.N, args.p, a)
    K = trial.K_value(args.N, args.p, a, r)
    rows = zip(np.atleast_1d(a), np.atleast_1d(K), np.atleast_1d(sum_fp), np.atleast_1d(gamma))
    ok = bool(np.all(np.atleast_1d(K) >= 1 - args.tol))
    return render_csv(["a", "K", "sum_fp", "gamma"], rows), ok


def cmd_search(args):
    if args.mode == "scalar":
        res = search.max_r_scalar(args.N, args.p, args.search_tol)
        ok = True
    elif args.mode == "trial":
        res = search.max_r_trial(args.N, args.p, args.search_tol)
        ok = True
    else:
        res = search.fuzz_main(args.N, args.p, args.r, seed=args.seed, iters=args.iters, workers=args.workers)
        ok = res.slack >= -args.tol
    payload = res.to_dict()
    if res.seed is None:
        payload["seed"] = args.seed
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n", ok


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj) if isfinite(obj) else str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def demo_limit(g, h, p: float, space: MeasureSpace, n_max: int, n_values=None):
    """Rows (N, finite bound, limit bound, scaled bounds, relative error, ok).

    The finite-N bound comes from replicating the normalized |g| and |h| with
    multiplicities round(lam N) and N - round(lam N); its distance to the
    limit must stay below 10 / N.
    """
    if p <= 2:
        raise DomainError("demo-limit needs p > 2")
    if n_max < 2:
        raise DomainError("N_max must be >= 2")
    if n_values is None:
        n_values = sorted({int(n) for n in np.unique(np.geomspace(2, n_max, 25).round())} | {n_max})
    limit = ineq.tri3_limit(g, h, p, space)
    scale = (ineq.lp_norm(g, p, space) + ineq.lp_norm(h, p, space)) ** p
    rows = []
    for N in n_values:
        fin = ineq.replicated_bound(g, h, p, space, N)
        err = abs(fin - limit) / limit
        rows.append([N, fin, limit, fin * scale, limit * scale, err, err <= 10 / N])
    return rows


def cmd_demo_limit(args):
    rng = np.random.default_rng(args.seed)
    space, g, h = next(_pairs(argparse.Namespace(scenario=args.scenario, iters=1), rng, signed=False))
    rows = demo_limit(g, h, args.p, space, args.N_max)
    header = ["N", "finite_bound", "limit_bound", "scaled_finite", "scaled_limit", "rel_error", "holds"]
    return render_csv(header, rows), all(row[-1] for row in rows)


# -- argument parsing ------------------------------------------------------------


def default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return ineq.DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise SystemExit(f"lpsharp: {TOL_ENV} must be a number, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default="-", help="output file, '-' for stdout")
    common.add_argument("--tol", type=float, default=None, help=f"relative tolerance (env {TOL_ENV}, default 1e-10)")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="lpsharp", description="Sharpened triangle inequalities in L^p")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponents", parents=[common], help="table of exponents")
    p.add_argument("--N", type=int, nargs="+", default=[2, 3, 4, 5])
    p.add_argument("--p", type=float, nargs="+", default=[4.0])
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("verify", parents=[common], help="check an inequality on random or given data")
    p.add_argument("--ineq", required=True,
                   choices=["main", "corollary", "p2", "clarkson", "tri5", "pair", "pre", "nf5", "nf5B", "final"])
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--scenario", default=None, help="scenario file instead of random data")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pair", parents=[common], help="N = 2 bounds and their ordering")
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--iters", type=int, default=100)
    p.add_argument("--scenario", default=None)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("scan", parents=[common], help="K(a) along the trial family")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--a-min", type=float, default=0.0)
    p.add_argument("--a-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=1000)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("search-r", parents=[common], help="empirical extremal exponent search")
    p.add_argument("--mode", choices=["scalar", "trial", "fuzz"], required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, default=None, help="exponent tested by fuzz mode")
    p.add_argument("--search-tol", type=float, default=1e-3, help="bisection resolution")
    p.add_argument("--iters", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("demo-limit", parents=[common], help="finite-N replication bound vs its limit")
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--N-max", dest="N_max", type=int, default=10_000)
    p.add_argument("--scenario", default=None, help="scenario with N = 2 (g and h)")
    p.set_defaults(func=cmd_demo_limit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is None:
        args.tol = default_tol()
    try:
        text, ok = args.func(args)
    except (DomainError, OSError) as exc:
        print(f"lpsharp: error: {exc}", file=sys.stderr)
        return 2
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
