"""Weighted counts of ``N = [p1^c] + [p2^c] + [p3^c]`` over ordered prime triples."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from scipy.signal import fftconvolve

from .expsums import FloorPowerMap
from .primes import PrimeTable
from .smoothing import BumpSpec, chi

log = logging.getLogger(__name__)

FFT_CROSSOVER = 1 << 15
MODES = ("plain", "smooth", "sharp")

# Lanczos approximation, g = 7, n = 9 (Numerical Recipes / Godfrey coefficients)
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_gamma(x: float) -> float:
    """Gamma function via the Lanczos series; relative error ~1e-15 on [1, 4]."""
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * lanczos_gamma(1.0 - x))
    x -= 1.0
    a = _LANCZOS_COEF[0]
    t = x + _LANCZOS_G + 0.5
    for i, ci in enumerate(_LANCZOS_COEF[1:], start=1):
        a += ci / (x + i)
    return math.sqrt(2 * math.pi) * t ** (x + 0.5) * math.exp(-t) * a


def main_term(N: float, c: float) -> float:
    """``Gamma(1 + 1/c)^3 / Gamma(3/c) * N^(3/c - 1)``."""
    return lanczos_gamma(1.0 + 1.0 / c) ** 3 / lanczos_gamma(3.0 / c) * float(N) ** (3.0 / c - 1.0)


@dataclass(frozen=True)
class WeightedSpectrum:
    """Dense map ``n -> sum_{[p^c] = n} w(p)`` stored as ``weights[n]``."""

    c: float
    N: int
    weights: np.ndarray
    mode: str = "plain"

    @property
    def keys(self) -> np.ndarray:
        return np.flatnonzero(self.weights)

    def as_dict(self) -> dict[int, float]:
        k = self.keys
        return dict(zip(k.tolist(), self.weights[k].tolist()))

    def mass(self) -> float:
        return math.fsum(self.weights)

    @property
    def max_key(self) -> int:
        k = self.keys
        return int(k[-1]) if len(k) else 0

    @property
    def min_key(self) -> int:
        k = self.keys
        return int(k[0]) if len(k) else 0


def prime_weights(table: PrimeTable, mode: str = "plain", spec: BumpSpec | None = None,
                  Y: float | None = None) -> np.ndarray:
    if mode == "plain":
        return np.array(table.logp)
    if mode == "smooth":
        if spec is None:
            raise ValueError("smooth mode needs a BumpSpec")
        return chi(spec, table.sqrt_dist) * table.logp
    if mode == "sharp":
        if Y is None or not 0.0 < Y <= 0.5:
            raise ValueError(f"sharp mode needs 0 < Y <= 1/2, got {Y!r}")
        return np.where(table.sqrt_dist < Y, table.logp, 0.0)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def build_spectrum(table: PrimeTable, c: float, mode: str = "plain",
                   spec: BumpSpec | None = None, Y: float | None = None,
                   fp: FloorPowerMap | None = None) -> WeightedSpectrum:
    fp = FloorPowerMap(table, c) if fp is None else fp
    w = prime_weights(table, mode, spec, Y)
    n = fp.max() if len(fp) else 0
    dense = np.bincount(fp.values, weights=w, minlength=n + 1) if len(fp) else np.zeros(1)
    dense.flags.writeable = False
    return WeightedSpectrum(c=float(c), N=n, weights=dense, mode=mode)


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if min(len(a), len(b)) < 1:
        return np.zeros(0)
    if len(a) + len(b) - 1 <= FFT_CROSSOVER:
        return np.convolve(a, b)
    out = fftconvolve(a, b)
    # round-off below zero is not a count
    return np.maximum(out, 0.0)


def ternary_count(s: WeightedSpectrum, N: int) -> float:
    """``sum_{n1+n2+n3=N} w(n1) w(n2) w(n3)``."""
    N = int(N)
    if N < 6:
        return 0.0
    if N > 3 * s.N:
        log.info("N=%d exceeds 3 * max key %d; count is 0", N, s.N)
        return 0.0
    w = s.weights[:N + 1]
    pair = _convolve(w, w)[:N + 1]
    if len(pair) < N + 1:
        pair = np.pad(pair, (0, N + 1 - len(pair)))
    refl = np.zeros(N + 1)
    refl[:len(w)] = w
    return float(np.dot(pair, refl[::-1]))


def ternary_counts_all(s: WeightedSpectrum) -> np.ndarray:
    """Counts for every ``N`` in ``0 .. 3 * max key`` in one pass."""
    w = s.weights
    return _convolve(_convolve(w, w), w)


def gamma_sharp(table: PrimeTable, c: float, Y: float, N: int,
                fp: FloorPowerMap | None = None) -> float:
    return ternary_count(build_spectrum(table, c, "sharp", Y=Y, fp=fp), N)


def gamma_smooth(table: PrimeTable, c: float, spec: BumpSpec, N: int,
                 fp: FloorPowerMap | None = None) -> float:
    return ternary_count(build_spectrum(table, c, "smooth", spec=spec, fp=fp), N)


def R(table: PrimeTable, c: float, N: int, fp: FloorPowerMap | None = None) -> float:
    return ternary_count(build_spectrum(table, c, "plain", fp=fp), N)


@dataclass(frozen=True)
class RepresentationRecord:
    N: int
    triple: tuple[int, int, int]
    weight: float
    orbit: int = 1


def enumerate_representations(table: PrimeTable, c: float, N: int, mode: str = "plain",
                              spec: BumpSpec | None = None, Y: float | None = None,
                              fp: FloorPowerMap | None = None) -> list[RepresentationRecord]:
    """Multisets ``p1 <= p2 <= p3`` hitting ``N``; ``orbit`` counts their orderings.

    ``weight`` is the mode weight of one ordering, so the ordered total is
    ``sum(rec.weight * rec.orbit)``.
    """
    fp = FloorPowerMap(table, c) if fp is None else fp
    w = prime_weights(table, mode, spec, Y)
    keep = w > 0
    ps, ns, ws = table.p[keep], fp.values[keep], w[keep]
    by_n: dict[int, list[int]] = {}
    for i, n in enumerate(ns.tolist()):
        by_n.setdefault(n, []).append(i)
    out = []
    m = len(ps)
    for i in range(m):
        for j in range(i, m):
            rest = N - ns[i] - ns[j]
            if rest < ns[j]:
                break
            for k in by_n.get(int(rest), ()):
                if k < j:
                    continue
                trip = (int(ps[i]), int(ps[j]), int(ps[k]))
                orbit = 6 // math.prod(math.factorial(v) for v in Counter(trip).values())
                out.append(RepresentationRecord(int(N), trip, float(ws[i] * ws[j] * ws[k]), orbit))
    return out


def brute_force_count(table: PrimeTable, c: float, N: int, mode: str = "plain",
                      spec: BumpSpec | None = None, Y: float | None = None,
                      fp: FloorPowerMap | None = None) -> float:
    """Ordered-triple enumeration over all multisets; reference for small tables."""
    fp = FloorPowerMap(table, c) if fp is None else fp
    w = prime_weights(table, mode, spec, Y).tolist()
    ns = fp.values.tolist()
    terms = []
    for i, j, k in combinations_with_replacement(range(len(ns)), 3):
        if ns[i] + ns[j] + ns[k] == N:
            orbit = 6 // math.prod(math.factorial(v) for v in Counter((i, j, k)).values())
            terms.append(orbit * w[i] * w[j] * w[k])
    return math.fsum(terms)


def brute_force_counts_all(table: PrimeTable, c: float, mode: str = "plain",
                           spec: BumpSpec | None = None, Y: float | None = None,
                           fp: FloorPowerMap | None = None) -> np.ndarray:
    """Every ordered-triple count at once, by enumerating all multisets."""
    fp = FloorPowerMap(table, c) if fp is None else fp
    w = prime_weights(table, mode, spec, Y).tolist()
    ns = fp.values.tolist()
    acc: dict[int, list[float]] = {}
    for i, j, k in combinations_with_replacement(range(len(ns)), 3):
        orbit = 6 // math.prod(math.factorial(v) for v in Counter((i, j, k)).values())
        acc.setdefault(ns[i] + ns[j] + ns[k], []).append(orbit * w[i] * w[j] * w[k])
    out = np.zeros(3 * max(ns, default=0) + 1)
    for n, terms in acc.items():
        out[n] = math.fsum(terms)
    return out


@dataclass
class ScanRow:
    N: int
    count: float
    main_term: float
    ratio: float


def ratio_scan(table: PrimeTable, c: float, Ns, mode: str = "plain",
               spec: BumpSpec | None = None, Y: float | None = None,
               fp: FloorPowerMap | None = None) -> tuple[list[ScanRow], dict]:
    """Count / main term along ``Ns``, with median and interquartile range."""
    s = build_spectrum(table, c, mode, spec=spec, Y=Y, fp=fp)
    allc = ternary_counts_all(s)
    rows = []
    for N in Ns:
        N = int(N)
        cnt = float(allc[N]) if 6 <= N < len(allc) else 0.0
        mt = main_term(N, c)
        rows.append(ScanRow(N, cnt, mt, cnt / mt))
    ratios = np.array([r.ratio for r in rows])
    q1, med, q3 = np.percentile(ratios, [25, 50, 75]) if len(rows) else (np.nan,) * 3
    summary = {"median_ratio": float(med), "iqr": float(q3 - q1), "q1": float(q1),
               "q3": float(q3), "n_rows": len(rows)}
    return rows, summary
