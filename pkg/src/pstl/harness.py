"""Verification suite: identity checks, shape checks and report-only monitors.

Every check lands in a :class:`Report` as a :class:`Check` with status
``pass``, ``fail`` or ``report``. Report-only checks never affect the exit
code; they carry measured ratios against expressions whose implied
constants are unknown.
"""

from __future__ import annotations

import decimal
import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .expsums import (FloorPowerMap, collision_sum, floor_powers, integral_H3,
                      integral_S_abs2, integral_V_abs2, lemma2_residual, lemma3_rhs,
                      lower_bound_expr, sup_V_scan, v1_v2_rhs, weights_S)
from .params import Params, derive
from .primes import primes_upto, sieve
from .representations import (MODES, brute_force_counts_all, build_spectrum,
                              gamma_smooth, ratio_scan, ternary_counts_all)
from .smoothing import BumpSpec, chi, coeff_bound, coeffs

DEFAULT_SEED = 20190417


@dataclass
class Check:
    name: str
    measured: object
    reference: object
    tolerance: object
    status: str  # "pass" | "fail" | "report"
    detail: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status == "fail"


@dataclass
class Report:
    version: str = __version__
    params: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    checks: list[Check] = field(default_factory=list)
    timing: dict[str, float] = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def ok(self) -> bool:
        return not any(c.failed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self, timing: bool = True) -> dict:
        d = {"version": self.version, "params": self.params, "seed": self.seed,
             "checks": [asdict(c) for c in self.checks]}
        if timing:
            d["timing"] = self.timing
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True, default=_jsonable)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            tag = {"pass": "PASS", "fail": "FAIL", "report": "INFO"}[c.status]
            out.append(f"[{tag}] {c.name}: measured={_fmt(c.measured)} "
                       f"reference={_fmt(c.reference)} tol={_fmt(c.tolerance)}")
        return out


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"not JSON serialisable: {type(o)}")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# --------------------------------------------------------------------------
# individual criteria; each returns a list of checks

def check_fourier_inversion(c=1.02, X=2000.0, Y=0.25, Delta=0.05, r=5, workers=None):
    """Convolution count of the smooth spectrum vs the sampled ``int H^3 e(-N alpha)``."""
    t = sieve(X)
    fp = FloorPowerMap(t, c)
    spec = BumpSpec(Y, Delta, r)
    N = math.ceil(X**c)
    K = 3 * N + 1
    s = build_spectrum(t, c, "smooth", spec=spec, fp=fp)
    support = np.flatnonzero(ternary_counts_all(s) > 0)
    targets = sorted({N, int(support[len(support) // 2])})
    out = []
    for N0 in targets:
        conv = gamma_smooth(t, c, spec, N0, fp=fp)
        integ = integral_H3(t, fp, spec, N0, K=K, workers=workers)
        rel = _rel(integ.real, conv)
        ok = rel <= 1e-8 and abs(integ.imag) <= 1e-8 * abs(conv)
        out.append(Check(f"fourier_inversion[N={N0}]", integ.real, conv, 1e-8, _status(ok),
                         {"rel_diff": rel, "imag": integ.imag, "K": K}))
    return out


def check_parseval(c=1.02, X=2000.0, workers=None):
    t = sieve(X)
    fp = FloorPowerMap(t, c)
    sampled = integral_S_abs2(t, fp, workers=workers)
    coll = collision_sum(fp.values, weights_S(t))
    rel = _rel(sampled, coll)
    return [Check("parseval_S", sampled, coll, 1e-9, _status(rel <= 1e-9),
                  {"rel_diff": rel, "X_ratio": sampled / X})]


def check_brute_force(X=200.0, cs=(1.01, 1.02, 1.027), Y=0.25, Delta=0.05, r=5):
    t = sieve(X)
    spec = BumpSpec(Y, Delta, r)
    out = []
    for c in cs:
        fp = FloorPowerMap(t, c)
        for mode in MODES:
            kw = {"spec": spec} if mode == "smooth" else {"Y": Y} if mode == "sharp" else {}
            conv = ternary_counts_all(build_spectrum(t, c, mode, fp=fp, **kw))
            brute = brute_force_counts_all(t, c, mode, fp=fp, **kw)
            n = max(len(conv), len(brute))
            conv = np.pad(conv, (0, n - len(conv)))
            brute = np.pad(brute, (0, n - len(brute)))
            scale = np.maximum(np.abs(brute), 1e-300)
            nz = brute > 0
            worst = float(np.max(np.abs(conv[nz] - brute[nz]) / scale[nz])) if nz.any() else 0.0
            stray = float(np.max(np.abs(conv[~nz]))) if (~nz).any() else 0.0
            ok = worst <= 1e-10 and stray <= 1e-10 * float(brute.max())
            out.append(Check(f"brute_force[c={c},{mode}]", worst, 0.0, 1e-10, _status(ok),
                             {"n_targets": int(nz.sum()), "stray_max": stray}))
    return out


def check_lemma1(Y=0.1, Delta=0.02, rs=(1, 3, 13), grid=1 << 16):
    out = []
    t = np.arange(grid) / grid
    d = np.minimum(t, 1.0 - t)
    for r in rs:
        spec = BumpSpec(Y, Delta, r)
        v = chi(spec, t)
        rng_ok = bool(v.min() >= -1e-9 and v.max() <= 1 + 1e-9)
        plateau = d <= Y - Delta
        zero = d >= Y
        plat_err = float(np.max(np.abs(v[plateau] - 1.0)))
        zero_err = float(np.max(np.abs(v[zero])))
        mean_err = abs(float(np.mean(v)) - spec.g0)
        worst = 0.0
        m_hi = 10 * spec.trunc
        for lo in range(1, m_hi + 1, 1 << 22):
            m = np.arange(lo, min(lo + (1 << 22), m_hi + 1))
            excess = np.abs(coeffs(Y, Delta, r, m)) - coeff_bound(Delta, r, m) * (1 + 1e-12)
            worst = max(worst, float(excess.max()))
        out += [
            Check(f"lemma1_range[r={r}]", [float(v.min()), float(v.max())], [0.0, 1.0], 1e-9,
                  _status(rng_ok)),
            Check(f"lemma1_plateau[r={r}]", plat_err, 0.0, 1e-9, _status(plat_err <= 1e-9)),
            Check(f"lemma1_zero[r={r}]", zero_err, 0.0, 1e-9, _status(zero_err <= 1e-9)),
            Check(f"lemma1_coeff_bound[r={r}]", worst, 0.0, 0.0, _status(worst <= 0.0),
                  {"m_max": m_hi, "trunc": spec.trunc, "tail": spec.tail}),
            Check(f"lemma1_mean[r={r}]", float(np.mean(v)), spec.g0, 1e-8,
                  _status(mean_err <= 1e-8)),
        ]
    return out


def check_lemma2(xs=(0.1, 0.3, 0.5, 0.7, 0.9), Hs=(10, 100), n=1000):
    y = (np.arange(n) + 0.5) / n
    out = []
    for x in xs:
        for H in Hs:
            ratio = lemma2_residual(x, H, y)
            out.append(Check(f"lemma2_ratio[x={x},H={H}]", ratio, 10.0, 10.0,
                             _status(ratio <= 10.0)))
    return out


def floor_power_oracle(p: int, c: float, digits: int = 50) -> int:
    """``[p^c]`` in decimal arithmetic, independent of the float/mpmath path."""
    ctx = decimal.Context(prec=digits)
    v = ctx.power(decimal.Decimal(int(p)), decimal.Decimal(c))
    return int(v.to_integral_value(rounding=decimal.ROUND_FLOOR))


def check_floor_power(n=100_000, bound=1e8, cs=(1.01, 1.02), seed=DEFAULT_SEED):
    ps = primes_upto(bound)
    rng = np.random.default_rng(seed)
    sample = np.sort(rng.choice(ps, size=n, replace=False))
    out = []
    for c in cs:
        got = floor_powers(sample, c)
        bad = sum(1 for p, g in zip(sample.tolist(), got.tolist())
                  if floor_power_oracle(p, c) != g)
        out.append(Check(f"floor_power[c={c}]", bad, 0, 0, _status(bad == 0),
                         {"n": n, "bound": bound, "seed": seed}))
    return out


def check_asymptotic(c=1.02, X=1e4, points=61):
    t = sieve(X)
    fp = FloorPowerMap(t, c)
    top = 3 * fp.max()
    Ns = np.unique(np.linspace(0.2 * top, 0.8 * top, points).astype(np.int64))
    rows, summary = ratio_scan(t, c, Ns, "plain", fp=fp)
    med = summary["median_ratio"]
    ratios = np.array([r.ratio for r in rows])
    diffs = np.diff(ratios)
    monotone = bool(np.all(diffs <= 0) or np.all(diffs >= 0))
    return [
        Check("asymptotic_median_ratio", med, [0.5, 2.0], "interval",
              _status(0.5 <= med <= 2.0), summary),
        Check("asymptotic_trend", {"first": float(ratios[0]), "last": float(ratios[-1]),
                                   "monotone": monotone}, None, None, "report",
              {"N": Ns.tolist(), "ratio": ratios.tolist()}),
    ]


def check_bounds(c=1.02, delta=0.001, X=1e4, K=4096, workers=None):
    p = derive(c, delta, X)
    t = sieve(X)
    fp = FloorPowerMap(t, c)
    spec = BumpSpec.from_params(p)
    sup1, ratio1 = sup_V_scan(K, t, fp, spec, p, workers=workers)
    sup2, ratio2 = sup_V_scan(2 * K, t, fp, spec, p, workers=workers)
    v1, v2 = v1_v2_rhs(p)
    gam = gamma_smooth(t, c, spec, p.N, fp=fp)
    lower = gam / lower_bound_expr(p)
    s2 = integral_S_abs2(t, fp, workers=workers)
    vv2 = integral_V_abs2(t, fp, spec, workers=workers)
    drift = abs(ratio2 - ratio1) / ratio1
    finite = all(math.isfinite(v) and v > 0 for v in (ratio1, ratio2, lower))
    out = [
        Check("bounds_finite_positive", [ratio1, ratio2, lower], ">0", None,
              _status(finite)),
        Check(f"bounds_supV_stability[K={K}->{2 * K}]", drift, 0.0, 0.10,
              _status(drift <= 0.10), {"sup_K": sup1, "sup_2K": sup2}),
        Check("bounds_supV_vs_lemma3", ratio2, None, None, "report",
              {"sup_V": sup2, "lemma3_rhs": lemma3_rhs(p), "K": 2 * K,
               "v1_rhs": v1, "v2_rhs": v2, "H": p.H, "M": p.M}),
        Check("bounds_gamma_lower", lower, None, None, "report",
              {"gamma_smooth": gam, "Y3X3c": lower_bound_expr(p), "N": p.N}),
        Check("bounds_S2_over_X", s2 / X, None, None, "report"),
        Check("bounds_V2_over_X", vv2 / X, None, None, "report"),
    ]
    return out


CRITERIA = {
    "fourier_inversion": check_fourier_inversion,
    "parseval": check_parseval,
    "brute_force": check_brute_force,
    "lemma1": check_lemma1,
    "lemma2": check_lemma2,
    "floor_power": check_floor_power,
    "asymptotic": check_asymptotic,
    "bounds": check_bounds,
}
_TAKES_WORKERS = {"fourier_inversion", "parseval", "bounds"}


def verify_all(params: Params | None = None, workers: int | None = None,
               seed: int = DEFAULT_SEED, only=None) -> Report:
    """Run the full acceptance suite. Deterministic for a given seed."""
    rep = Report(params=params.to_dict() if params is not None else {}, seed=seed)
    for name, fn in CRITERIA.items():
        if only is not None and name not in only:
            continue
        kw = {}
        if name in _TAKES_WORKERS:
            kw["workers"] = workers
        if name == "floor_power":
            kw["seed"] = seed
        t0 = time.perf_counter()
        for chk in fn(**kw):
            rep.add(chk)
        rep.timing[name] = time.perf_counter() - t0
    return rep
