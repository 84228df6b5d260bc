"""Command-line front end: ``pstl <subcommand> [flags]``.

Exit status: 0 when every assertive check passes, 1 when one fails,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import expsums as es
from .harness import DEFAULT_SEED, Check, Report, verify_all
from .params import ParamsError, derive, derive_from_n, with_overrides
from .primes import near_square_subset, sieve
from .representations import (build_spectrum, enumerate_representations, main_term,
                              ratio_scan, ternary_count)
from .smoothing import BumpSpec, chi

GLOBAL_FLAGS = ("c", "delta", "x", "n", "y", "h", "m", "grid_points", "workers",
                "seed", "format", "out", "config")
DEFAULTS = {"c": 1.02, "delta": 0.001, "seed": DEFAULT_SEED}


class UsageError(Exception):
    pass


def _global_parent(skip=()) -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    add = g.add_argument
    add("--c", type=float, help="exponent c, 1 < c < 37/36 (default 1.02)")
    add("--delta", type=float, help="slack delta in (0, 0.01] (default 0.001)")
    add("--x", type=float, help="prime cutoff X")
    add("--n", type=int, help="target N")
    add("--y", type=float, help="near-square window Y in (0, 1/2]")
    add("--h", type=float, help="override H (>= 3)")
    if "m" not in skip:
        add("--m", type=float, help="override M (>= 1)")
    add("--grid-points", type=int, help="grid size K")
    add("--workers", type=int, help="worker threads (env PSTL_WORKERS)")
    add("--seed", type=int, help="seed for sampled checks")
    add("--format", choices=("json", "csv"), help="output format")
    add("--out", help="write output to PATH instead of stdout")
    add("--config", help="key=value file; flags win over file values")
    return g


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pstl", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"pstl {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)
    parent = _global_parent()

    sub.add_parser("params", parents=[parent], help="derive the parameter schedule")

    p = sub.add_parser("sieve", parents=[parent], help="build a prime table")
    p.add_argument("--cache", help="write the binary table cache to this path")

    p = sub.add_parser("count", parents=[parent], help="weighted ternary count R(N) / Gamma")
    p.add_argument("--mode", choices=("plain", "smooth", "sharp"), default="plain")
    p.add_argument("--delta-bump", type=float, help="bump margin Delta (default Y/5)")
    p.add_argument("--r", type=int, help="bump smoothness order")
    p.add_argument("--list", action="store_true", help="emit the representing triples")

    sub.add_parser("main-term", parents=[parent], help="asymptotic main term")

    p = sub.add_parser("ratio-scan", parents=[parent], help="count / main term over N")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--mode", choices=("plain", "smooth", "sharp"), default="plain")
    p.add_argument("--delta-bump", type=float)
    p.add_argument("--r", type=int)

    p = sub.add_parser("chi-check", parents=[parent], help="tabulate and check the bump")
    p.add_argument("--delta-bump", type=float)
    p.add_argument("--r", type=int)

    p = sub.add_parser("expsum", parents=[_global_parent(skip=("m",))],
                       help="evaluate S, H, V or U")
    p.add_argument("--alpha", type=float)
    p.add_argument("--grid", type=int, help="evaluate on alpha = k/K, k < K")
    p.add_argument("--sum", dest="which", choices=("S", "H", "V", "U"), default="S")
    p.add_argument("--m", type=int, default=0, help="frequency m of U")
    p.add_argument("--delta-bump", type=float)
    p.add_argument("--r", type=int)

    p = sub.add_parser("parseval", parents=[parent], help="sampled int|S|^2 vs collision sum")
    p.add_argument("--delta-bump", type=float)
    p.add_argument("--r", type=int)

    p = sub.add_parser("lemma2-check", parents=[parent], help="empirical Lemma-2 constant")
    p.add_argument("--xs", default="0.1,0.3,0.5,0.7,0.9")
    p.add_argument("--hs", default="10,100")

    sub.add_parser("v-bound-scan", parents=[parent], help="sup |V| on a grid vs bound RHS")

    p = sub.add_parser("verify-all", parents=[parent], help="run the acceptance suite")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings")
    return ap


def read_config(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}: expected key=value, got {line!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.lstrip("-").replace("-", "_")] = v
    return out


def merge_config(args: argparse.Namespace) -> argparse.Namespace:
    cfg = read_config(args.config) if args.config else {}
    for key, val in cfg.items():
        if getattr(args, key, None) is None:
            setattr(args, key, _coerce(key, val))
    for key, val in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)
    return args


def _coerce(key: str, val: str):
    if key in ("n", "grid_points", "workers", "seed", "r", "n_min", "n_max", "step", "grid"):
        return int(float(val))
    if key in ("format", "out", "mode", "which", "xs", "hs", "cache"):
        return val
    return float(val)


# --------------------------------------------------------------------------
# helpers

def _params(a):
    if a.x is not None:
        p = derive(a.c, a.delta, a.x)
    elif a.n is not None:
        p = derive_from_n(a.c, a.delta, a.n)
    else:
        raise UsageError("give --x or --n")
    return with_overrides(p, y=a.y, h=a.h, m=getattr(a, "m", None) if a.cmd != "expsum" else None)


def _bump(a, X: float) -> BumpSpec:
    if a.y is None:
        raise UsageError("this mode needs --y")
    Y = a.y
    D = a.delta_bump if getattr(a, "delta_bump", None) is not None else Y / 5.0
    r = a.r if getattr(a, "r", None) is not None else max(1, int(math.floor(math.log(X))))
    return BumpSpec(Y, D, r)


def _table(a):
    if a.x is None:
        raise UsageError("give --x")
    t = sieve(a.x, workers=a.workers)
    return t, es.FloorPowerMap(t, a.c)


def _emit(a, payload, rows=None, default="json"):
    fmt = a.format or default
    if fmt == "csv" and rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in rows:
            w.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)


def _report_exit(checks: list[Check]) -> int:
    for c in checks:
        if c.status != "report":
            print(f"[{c.status.upper()}] {c.name}", file=sys.stderr)
    return 1 if any(c.failed for c in checks) else 0


# --------------------------------------------------------------------------
# subcommands

def cmd_params(a):
    p = _params(a)
    d = p.to_dict()
    _emit(a, d, [["key", "value"]] + [[k, json.dumps(v)] for k, v in d.items()])
    return 0


def cmd_sieve(a):
    t = sieve(a.x, workers=a.workers) if a.x is not None else None
    if t is None:
        raise UsageError("give --x")
    d = {"X": t.X, "count": len(t), "theta": t.theta()}
    if a.y is not None:
        d["Y"] = a.y
        d["near_square_count"] = len(near_square_subset(t, a.y))
    if a.cache:
        t.save(a.cache)
        d["cache"] = a.cache
    _emit(a, d, [list(d.keys()), list(d.values())])
    return 0


def _mode_kw(a, X):
    if a.mode == "smooth":
        return {"spec": _bump(a, X)}
    if a.mode == "sharp":
        if a.y is None:
            raise UsageError("sharp mode needs --y")
        return {"Y": a.y}
    return {}


def cmd_count(a):
    if a.n is None:
        raise UsageError("count needs --n")
    t, fp = _table(a)
    kw = _mode_kw(a, t.X)
    s = build_spectrum(t, a.c, a.mode, fp=fp, **kw)
    val = ternary_count(s, a.n)
    d = {"N": a.n, "c": a.c, "X": t.X, "mode": a.mode, "count": val}
    rows = [["N", "count"], [a.n, repr(val)]]
    if a.list:
        recs = enumerate_representations(t, a.c, a.n, a.mode, fp=fp, **kw)
        d["triples"] = [{"triple": list(r.triple), "weight": r.weight, "orbit": r.orbit}
                        for r in recs]
        rows = [["p1", "p2", "p3", "weight", "orbit"]] + [
            [*r.triple, repr(r.weight), r.orbit] for r in recs]
    _emit(a, d, rows)
    return 0


def cmd_main_term(a):
    if a.n is None:
        raise UsageError("main-term needs --n")
    v = main_term(a.n, a.c)
    _emit(a, {"N": a.n, "c": a.c, "main_term": v}, [["N", "c", "main_term"], [a.n, a.c, repr(v)]])
    return 0


def cmd_ratio_scan(a):
    t, fp = _table(a)
    Ns = range(a.n_min, a.n_max + 1, a.step)
    rows, summary = ratio_scan(t, a.c, Ns, a.mode, fp=fp, **_mode_kw(a, t.X))
    d = {"rows": [vars(r) for r in rows], "summary": summary}
    _emit(a, d, [["N", "count", "main_term", "ratio"]] +
          [[r.N, repr(r.count), repr(r.main_term), repr(r.ratio)] for r in rows])
    return 0


def cmd_chi_check(a):
    if a.y is None:
        raise UsageError("chi-check needs --y")
    spec = BumpSpec(a.y, a.delta_bump if a.delta_bump is not None else a.y / 5.0,
                    a.r if a.r is not None else 3)
    K = a.grid_points or 1000
    ts = np.arange(K) / K
    v = chi(spec, ts)
    reg = spec.regime(ts)
    plat = reg == "plateau"
    zero = reg == "zero"
    trans = reg == "transition"
    checks = [
        Check("plateau", float(np.max(np.abs(v[plat] - 1), initial=0)), 0.0, 1e-9,
              "pass" if np.all(np.abs(v[plat] - 1) <= 1e-9) else "fail"),
        Check("zero", float(np.max(np.abs(v[zero]), initial=0)), 0.0, 1e-9,
              "pass" if np.all(np.abs(v[zero]) <= 1e-9) else "fail"),
        Check("transition", [float(v[trans].min(initial=1)), float(v[trans].max(initial=0))],
              [0.0, 1.0], 1e-9,
              "pass" if np.all((v[trans] >= -1e-9) & (v[trans] <= 1 + 1e-9)) else "fail"),
    ]
    d = {"spec": {"Y": spec.Y, "Delta": spec.Delta, "r": spec.r, "trunc": spec.trunc},
         "rows": [{"t": float(x), "chi": float(y), "regime": str(g)}
                  for x, y, g in zip(ts, v, reg)],
         "checks": [vars(c) for c in checks]}
    _emit(a, d, [["t", "chi", "regime"]] +
          [[repr(float(x)), repr(float(y)), g] for x, y, g in zip(ts, v, reg)], default="csv")
    return _report_exit(checks)


def cmd_expsum(a):
    t, fp = _table(a)
    if a.grid is None and a.grid_points is not None:
        a.grid = a.grid_points
    if (a.alpha is None) == (a.grid is None):
        raise UsageError("give exactly one of --alpha or --grid")
    if a.which == "S":
        w, extra = es.weights_S(t), None
    elif a.which == "H":
        w, extra = es.weights_H(t, _bump(a, t.X)), None
    elif a.which == "V":
        w, extra = es.weights_V(t, _bump(a, t.X)), None
    else:
        w, extra = t.logp, np.mod(a.m * es.sqrt_frac(t.p), 1.0)
    if a.grid is not None:
        alphas = np.arange(a.grid) / a.grid
        vals = es.trig_sum_grid(a.grid, fp.values, w, extra=extra, workers=a.workers)
    else:
        alphas = np.array([a.alpha])
        vals = np.atleast_1d(es.trig_sum(a.alpha, fp.values, w, extra=extra,
                                         workers=a.workers))
    rows = [["alpha", "re", "im", "abs"]] + [
        [repr(float(x)), repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z)))]
        for x, z in zip(alphas, vals)]
    d = {"sum": a.which, "rows": [{"alpha": float(x), "re": float(z.real),
                                    "im": float(z.imag), "abs": float(abs(z))}
                                   for x, z in zip(alphas, vals)]}
    _emit(a, d, rows, default="csv")
    return 0


def cmd_parseval(a):
    t, fp = _table(a)
    sampled = es.integral_S_abs2(t, fp, K=a.grid_points, workers=a.workers)
    coll = es.collision_sum(fp.values, es.weights_S(t))
    rel = abs(sampled - coll) / coll
    checks = [Check("parseval_S", sampled, coll, 1e-9, "pass" if rel <= 1e-9 else "fail")]
    d = {"X": t.X, "c": a.c, "integral_S2": sampled, "collision_sum": coll, "rel_diff": rel}
    if a.y is not None:
        spec = _bump(a, t.X)
        v_s = es.integral_V_abs2(t, fp, spec, "smooth", workers=a.workers)
        v_f = es.integral_V_abs2(t, fp, spec, "series", workers=a.workers)
        tol = 2 * es.V_tail(t, spec) * math.sqrt(max(v_s, v_f)) + es.V_tail(t, spec) ** 2
        checks.append(Check("parseval_V_routes", v_f, v_s, tol,
                            "pass" if abs(v_f - v_s) <= tol + 1e-9 * v_s else "fail"))
        d.update({"integral_V2_smooth": v_s, "integral_V2_series": v_f})
    d["checks"] = [vars(c) for c in checks]
    _emit(a, d, [["key", "value"]] + [[k, repr(v)] for k, v in d.items() if k != "checks"])
    return _report_exit(checks)


def cmd_lemma2(a):
    y = (np.arange(a.grid_points or 1000) + 0.5) / (a.grid_points or 1000)
    xs = [float(s) for s in a.xs.split(",")]
    hs = [a.h] if a.h is not None else [float(s) for s in a.hs.split(",")]
    rows, checks = [["x", "H", "ratio"]], []
    for x in xs:
        for H in hs:
            r = es.lemma2_residual(x, H, y)
            rows.append([x, H, repr(r)])
            checks.append(Check(f"lemma2[x={x},H={H}]", r, 10.0, 10.0,
                                "pass" if r <= 10 else "fail"))
    _emit(a, {"checks": [vars(c) for c in checks]}, rows)
    return _report_exit(checks)


def cmd_v_bound_scan(a):
    p = _params(a)
    t = sieve(p.X, workers=a.workers)
    fp = es.FloorPowerMap(t, p.c)
    spec = BumpSpec.from_params(p)
    K = a.grid_points or 4096
    sup, ratio = es.sup_V_scan(K, t, fp, spec, p, workers=a.workers)
    v1, v2 = es.v1_v2_rhs(p)
    d = {"grid": K, "sup_V": sup, "lemma3_rhs": es.lemma3_rhs(p), "ratio": ratio,
         "H": p.H, "M": p.M, "v1_rhs": v1, "v2_rhs": v2}
    _emit(a, d, [list(d.keys()), [repr(v) for v in d.values()]])
    return 0


def cmd_verify_all(a):
    p = derive(a.c, a.delta, a.x if a.x is not None else 1e4)
    rep = verify_all(p, workers=a.workers, seed=a.seed)
    text = rep.to_json(timing=a.timing) + "\n"
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    for line in rep.lines():
        print(line, file=sys.stderr)
    return rep.exit_code


COMMANDS = {
    "params": cmd_params, "sieve": cmd_sieve, "count": cmd_count,
    "main-term": cmd_main_term, "ratio-scan": cmd_ratio_scan, "chi-check": cmd_chi_check,
    "expsum": cmd_expsum, "parseval": cmd_parseval, "lemma2-check": cmd_lemma2,
    "v-bound-scan": cmd_v_bound_scan, "verify-all": cmd_verify_all,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args = merge_config(args)
        return COMMANDS[args.cmd](args)
    except (UsageError, ParamsError, ValueError) as exc:
        ap.print_usage(sys.stderr)
        print(f"pstl {args.cmd}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
