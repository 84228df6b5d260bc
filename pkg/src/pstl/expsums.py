"""Exponential sums over primes with integer-part frequencies ``[p^c]``.

All sums here have the form ``F(alpha) = sum_p w_p e(alpha n_p + phi_p)``
with integer frequencies ``n_p = [p^c]``. Two consequences are used
throughout:

* on the grid ``alpha = k/K`` the phase ``k n_p / K`` is reduced exactly in
  integer arithmetic, and
* ``(1/K) sum_k F(k/K)^j e(-N0 k/K)`` equals ``int_0^1 F^j e(-N0 alpha)``
  exactly once ``K`` exceeds the frequency spread (orthogonality).

``V`` is available through two routes: the Fourier series
``sum_{0<|m|<=trunc} g(m) U(alpha, m)`` and ``H - g(0) S`` with the exact bump.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from ._parallel import chunked_map, compensated_rowsum, spans
from .primes import PrimeTable, nearest_int_distance, sqrt_frac
from .smoothing import BumpSpec, chi, chi_series

TWO_PI = 2.0 * math.pi
FLOOR_GUARD = 1e-6
GUARD_PREC = 128
PRIME_BLOCK = 4096
ALPHA_BLOCK = 256
DIRECT_LIMIT = 50_000_000  # grid points x primes above which sampling uses the FFT


class NyquistError(ValueError):
    """Raised when a sampling grid is too coarse for an exact integral."""


# --------------------------------------------------------------------------
# integer parts of p^c

def _floor_power_mp(p: int, c: float) -> int:
    with mpmath.workprec(GUARD_PREC):
        return int(mpmath.floor(mpmath.exp(mpmath.mpf(c) * mpmath.log(int(p)))))


def floor_powers(p, c: float, force_guard: bool = False) -> np.ndarray:
    """``[p^c]`` for an array of integers, certified near integer boundaries.

    Values whose double-precision fractional part lies within the guard band
    of 0 or 1 are recomputed with 128-bit arithmetic.
    """
    p = np.asarray(p, dtype=np.int64)
    if p.size and p.min() < 2:
        raise ValueError("floor_power needs p >= 2")
    v = np.power(p.astype(np.float64), float(c))
    if p.size and v.max() >= 2.0**63:
        raise OverflowError(f"p^c exceeds 2^63 for c={c}")
    fl = np.floor(v)
    frac = v - fl
    guard = np.maximum(FLOOR_GUARD, 16.0 * np.spacing(v))
    out = fl.astype(np.int64)
    redo = np.ones(p.shape, bool) if force_guard else (frac < guard) | (frac > 1.0 - guard)
    for i in np.flatnonzero(redo.ravel()):
        out.flat[i] = _floor_power_mp(int(p.flat[i]), c)
    return out


def floor_power(p: int, c: float, force_guard: bool = False) -> int:
    return int(floor_powers(np.array([p]), c, force_guard)[0])


class FloorPowerMap:
    """``[p^c]`` for every prime of a table, aligned with ``table.p``."""

    def __init__(self, table: PrimeTable, c: float):
        self.c = float(c)
        self.X = table.X
        self.values = floor_powers(table.p, self.c)
        self.values.flags.writeable = False

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return int(self.values[i])

    def as_dict(self, table: PrimeTable) -> dict[int, int]:
        return dict(zip(table.p.tolist(), self.values.tolist()))

    def max(self) -> int:
        return int(self.values.max()) if len(self.values) else 0

    def min(self) -> int:
        return int(self.values.min()) if len(self.values) else 0


def _check(table: PrimeTable, fp: FloorPowerMap) -> None:
    if len(table) != len(fp) or table.X != fp.X:
        raise ValueError("prime table and floor-power map are inconsistent")


# --------------------------------------------------------------------------
# generic trigonometric-sum kernels

def _sum_rows(phase_block, weights: np.ndarray, rows: int, workers) -> np.ndarray:
    """``sum_p w_p e(phase(row, p))`` for each row, compensated across blocks."""
    n = len(weights)

    def rowchunk(rspan):
        r0, r1 = rspan
        parts = []
        for p0, p1 in spans(n, PRIME_BLOCK):
            ph = phase_block(r0, r1, p0, p1)
            z = np.exp(1j * TWO_PI * ph) * weights[p0:p1]
            parts.append(z.sum(axis=1))
        if not parts:
            return np.zeros(r1 - r0, complex)
        return compensated_rowsum(parts)

    out = chunked_map(rowchunk, spans(rows, ALPHA_BLOCK), workers)
    return np.concatenate(out) if out else np.zeros(0, complex)


def trig_sum(alpha, freqs, weights, extra=None, workers=None):
    """``sum_p w_p e(alpha n_p + extra_p)`` at arbitrary real ``alpha``."""
    a = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    afrac = a - np.floor(a)
    freqs = np.asarray(freqs, dtype=np.int64)
    weights = np.asarray(weights)
    extra = None if extra is None else np.asarray(extra, dtype=np.float64)

    def phase(r0, r1, p0, p1):
        ph = np.multiply.outer(afrac[r0:r1], freqs[p0:p1].astype(np.float64))
        if extra is not None:
            ph = ph + extra[p0:p1]
        return np.mod(ph, 1.0)

    out = _sum_rows(phase, weights, len(a), workers)
    return complex(out[0]) if np.ndim(alpha) == 0 else out.reshape(np.shape(alpha))


def trig_sum_grid(K: int, freqs, weights, extra=None, method: str = "auto",
                  workers=None) -> np.ndarray:
    """``F(k/K)`` for ``k = 0..K-1`` with exact integer phase reduction."""
    K = int(K)
    freqs = np.asarray(freqs, dtype=np.int64)
    weights = np.asarray(weights)
    if method == "auto":
        method = "direct" if K * len(freqs) <= DIRECT_LIMIT else "fft"
    if method == "fft":
        if extra is not None:
            weights = weights * np.exp(1j * TWO_PI * np.asarray(extra))
        folded = np.zeros(K, complex)
        idx = np.mod(freqs, K)
        folded.real = np.bincount(idx, weights=np.real(weights), minlength=K)
        folded.imag = np.bincount(idx, weights=np.imag(weights), minlength=K)
        return K * np.fft.ifft(folded)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    red = np.mod(freqs, K)
    extra = None if extra is None else np.asarray(extra, dtype=np.float64)

    def phase(r0, r1, p0, p1):
        k = np.arange(r0, r1, dtype=np.int64)
        ph = np.mod(np.multiply.outer(k, red[p0:p1]), K) / K
        if extra is not None:
            ph = np.mod(ph + extra[p0:p1], 1.0)
        return ph

    return _sum_rows(phase, weights, K, workers)


# --------------------------------------------------------------------------
# the named sums

def weights_S(table: PrimeTable) -> np.ndarray:
    return table.logp


def weights_H(table: PrimeTable, spec: BumpSpec) -> np.ndarray:
    return chi(spec, table.sqrt_dist) * table.logp


def weights_V(table: PrimeTable, spec: BumpSpec, route: str = "smooth") -> np.ndarray:
    """Per-prime weights whose trigonometric sum is ``V``.

    ``smooth``: ``(chi(sqrt p) - g(0)) log p`` with the exact bump.
    ``series``: ``sum_{0<|m|<=trunc} g(m) e(m sqrt p) log p``, the Fourier
    series of the bump summed per prime (real because ``g`` is even).
    """
    if route == "smooth":
        return (chi(spec, table.sqrt_dist) - spec.g0) * table.logp
    if route == "series":
        return (chi_series(spec, table.sqrt_dist) - spec.g0) * table.logp
    raise ValueError(f"unknown route {route!r}")


def S(alpha, table: PrimeTable, fp: FloorPowerMap, workers=None):
    _check(table, fp)
    return trig_sum(alpha, fp.values, weights_S(table), workers=workers)


def H_smooth(alpha, table: PrimeTable, fp: FloorPowerMap, spec: BumpSpec, workers=None):
    _check(table, fp)
    return trig_sum(alpha, fp.values, weights_H(table, spec), workers=workers)


def U(alpha, m: int, table: PrimeTable, fp: FloorPowerMap, workers=None):
    """``sum_p e(alpha [p^c] + m sqrt p) log p``."""
    _check(table, fp)
    extra = np.mod(int(m) * sqrt_frac(table.p), 1.0)
    return trig_sum(alpha, fp.values, table.logp, extra=extra, workers=workers)


def V(alpha, table: PrimeTable, fp: FloorPowerMap, spec: BumpSpec,
      route: str = "series", workers=None):
    _check(table, fp)
    return trig_sum(alpha, fp.values, weights_V(table, spec, route), workers=workers)


def V_from_U(alpha: float, table: PrimeTable, fp: FloorPowerMap, spec: BumpSpec,
             trunc: int | None = None) -> complex:
    """``sum_{0<|m|<=trunc} g(m) U(alpha, m)`` term by term (slow, for checks)."""
    trunc = spec.trunc if trunc is None else int(trunc)
    ms = np.concatenate([np.arange(-trunc, 0), np.arange(1, trunc + 1)])
    us = np.array([U(alpha, int(m), table, fp) for m in ms])
    return complex(np.sum(spec.fourier_coeff(ms) * us))


def V_tail(table: PrimeTable, spec: BumpSpec) -> float:
    """Certified bound on ``|V - V_series|``: tail of ``sum |g(m)|`` times ``S(0)``."""
    return spec.tail * table.theta()


# --------------------------------------------------------------------------
# Lemma-2 coefficients

def c_h(x: float, h: int) -> complex:
    """``(1 - e(-x)) / (2 pi i (h + x))``."""
    d = h + x
    if d == 0:
        raise ZeroDivisionError(f"c_h pole: h + x = 0 (h={h}, x={x})")
    return (1.0 - np.exp(-1j * TWO_PI * x)) / (1j * TWO_PI * d)


def lemma2_residuals(x: float, H: float, y_grid) -> np.ndarray:
    """``|e(-x{y}) - sum_{|h|<=H} c_h(x) e(hy)|`` at each grid point."""
    y = np.asarray(y_grid, dtype=np.float64)
    Hi = int(math.floor(H))
    h = np.arange(-Hi, Hi + 1)
    if np.any(h + x == 0):
        raise ZeroDivisionError("x must not be an integer in [-H, H]")
    ch = (1.0 - np.exp(-1j * TWO_PI * x)) / (1j * TWO_PI * (h + x))
    yf = y - np.floor(y)
    lhs = np.exp(-1j * TWO_PI * x * yf)
    rhs = np.exp(1j * TWO_PI * np.mod(np.multiply.outer(yf, h), 1.0)) @ ch
    return np.abs(lhs - rhs)


def lemma2_residual(x: float, H: float, y_grid) -> float:
    """Worst ratio of the residual to ``min(1, 1/(H||y||))`` over the grid."""
    scale = np.minimum(1.0, 1.0 / (H * nearest_int_distance(np.asarray(y_grid, float))))
    return float(np.max(lemma2_residuals(x, H, y_grid) / scale))


# --------------------------------------------------------------------------
# exact integrals

def nyquist(freqs, j: int, N0: int = 0) -> int:
    """Smallest ``K`` making the sampled integral exact."""
    freqs = np.asarray(freqs, dtype=np.int64)
    lo, hi = int(freqs.min()), int(freqs.max())
    if j == 2:
        return hi - lo + 1
    return max(abs(j * hi - N0), abs(j * lo - N0)) + 1


def exact_integral_power(freqs, weights, j: int, N0: int = 0, K: int | None = None,
                         extra=None, method: str = "auto", workers=None):
    """Exact ``int_0^1 F^j e(-N0 alpha) d alpha`` (j = 1, 3) or ``int |F|^2`` (j = 2).

    ``F(alpha) = sum_p w_p e(alpha n_p + extra_p)``; evaluated by sampling
    ``F`` on ``K`` equispaced points.
    """
    if j not in (1, 2, 3):
        raise ValueError("j must be 1, 2 or 3")
    need = nyquist(freqs, j, N0)
    if K is None:
        K = need
    if K < need:
        raise NyquistError(f"K={K} below the exactness bound {need}")
    F = trig_sum_grid(K, freqs, weights, extra=extra, method=method, workers=workers)
    if j == 2:
        return float(np.mean(F.real**2 + F.imag**2))
    k = np.arange(K, dtype=np.int64)
    twist = np.exp(-1j * TWO_PI * (np.mod(k * (N0 % K), K) / K))
    return complex(np.mean(F**j * twist))


def collision_sum(freqs, weights) -> float:
    """``sum_n (sum_{n_p = n} w_p)^2``, which equals ``int |F|^2``."""
    _, inv = np.unique(np.asarray(freqs), return_inverse=True)
    grouped = np.bincount(inv.ravel(), weights=np.asarray(weights, dtype=np.float64))
    return math.fsum(grouped**2)


def integral_H3(table, fp, spec, N0: int, K: int | None = None, workers=None) -> complex:
    return exact_integral_power(fp.values, weights_H(table, spec), 3, N0, K, workers=workers)


def integral_S_abs2(table, fp, K: int | None = None, workers=None) -> float:
    return exact_integral_power(fp.values, weights_S(table), 2, K=K, workers=workers)


def integral_V_abs2(table, fp, spec, route: str = "smooth", K: int | None = None,
                    workers=None) -> float:
    return exact_integral_power(fp.values, weights_V(table, spec, route), 2, K=K,
                                workers=workers)


# --------------------------------------------------------------------------
# bound right-hand sides and the sup |V| scan

def lemma3_rhs(p, fudge: float = 1.0, X: float | None = None, M: float | None = None) -> float:
    X = p.X if X is None else X
    M = p.M if M is None else M
    c = p.c
    terms = (M**0.5 * X**(7 / 12), M**(1 / 6) * X**0.75, X**(11 / 12),
             X**((2 * c + 31) / 34), M**0.25 * X**((69 - 12 * c) / 68),
             M**(1 / 12) * X**((131 - 8 * c) / 136), X**((32 * c + 3) / 68))
    return fudge * math.fsum(terms)


def v1_v2_rhs(p, fudge: float = 1.0, X: float | None = None, M: float | None = None,
              H: float | None = None) -> tuple[float, float]:
    X = p.X if X is None else X
    M = p.M if M is None else M
    H = p.H if H is None else H
    c = p.c
    v1 = (M**0.5 * X**(7 / 12), M**(1 / 6) * X**0.75, X**(11 / 12),
          H**(1 / 16) * X**((2 * c + 29) / 32),
          H**(-3 / 16) * M**0.25 * X**((33 - 6 * c) / 32),
          H**(-1 / 16) * M**(1 / 12) * X**((31 - 2 * c) / 32))
    v2 = (X / H, H**0.5 * X**(c / 2))
    return fudge * math.fsum(v1), fudge * math.fsum(v2)


def lower_bound_expr(p) -> float:
    """``Y^3 X^(3-c)`` with the effective window."""
    return p.Y_eff**3 * p.X**(3 - p.c)


def sup_V_scan(K: int, table: PrimeTable, fp: FloorPowerMap, spec: BumpSpec, p,
               route: str = "smooth", workers=None) -> tuple[float, float]:
    """``(max_k |V(k/K)|, ratio to lemma3_rhs with fudge 1)``; a lower bound on sup."""
    if K < 1000:
        raise ValueError("sup_V_scan needs K >= 1000")
    _check(table, fp)
    vals = trig_sum_grid(K, fp.values, weights_V(table, spec, route), workers=workers)
    sup = float(np.max(np.abs(vals)))
    return sup, sup / lemma3_rhs(p)
