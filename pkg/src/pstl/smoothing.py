"""The periodic bump ``chi`` and its Fourier coefficients.

Construction: the indicator of ``||u|| <= Y - Delta/2`` convolved ``r`` times
with the uniform density of width ``Delta/r``, then wrapped to period 1.
Each convolution widens the support by ``Delta/(2r)`` on each side, so

* ``chi = 1``            when ``||t|| <= Y - Delta``,
* ``chi = 0``            when ``||t|| >= Y``,
* ``0 <= chi <= 1``      in between,

and the Fourier coefficients are products of sincs::

    g(0) = 2Y - Delta
    g(m) = sin(pi m (2Y - Delta)) / (pi m) * sinc(m Delta / r) ** r

which obey ``|g(m)| <= min(1, (r / (pi |m| Delta)) ** r) / (pi |m|)``.
``chi`` itself is evaluated exactly from the Irwin-Hall distribution
(a B-spline), not from the truncated series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import BSpline

TAIL_TOL = 1e-9
TRUNC_CAP = 1 << 20


def tail_bound(Delta: float, r: int, M0: float) -> float:
    """Upper bound for ``sum_{|m| > M0} |g(m)|`` from the coefficient bound.

    Uses ``sum_{m > K} m^-(r+1) <= K^-r / r`` with ``K = floor(M0)``.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    K = math.floor(M0)
    if K < 1:
        raise ValueError("M0 must be >= 1")
    a = r / (math.pi * Delta)
    # 2 * (1/pi) * a^r * K^-r / r, in logs to avoid overflow for large r
    log_val = math.log(2.0 / (math.pi * r)) + r * (math.log(a) - math.log(K))
    return math.exp(log_val)


def certified_trunc(Delta: float, r: int, tol: float = TAIL_TOL,
                    cap: int = TRUNC_CAP) -> int:
    """Smallest ``K <= cap`` with ``tail_bound(K) <= tol``; ``cap`` if none."""
    a = r / (math.pi * Delta)
    # solve 2/(pi r) * (a/K)^r = tol
    K = math.ceil(a * (2.0 / (math.pi * r * tol)) ** (1.0 / r))
    K = max(K - 2, 1)
    while K < cap and tail_bound(Delta, r, K) > tol:
        K += 1
    return min(K, cap)


def coeffs(Y: float, Delta: float, r: int, m) -> np.ndarray:
    """Closed-form Fourier coefficients ``g(m)`` (vectorised over ``m``)."""
    m = np.asarray(m, dtype=np.float64)
    width = 2.0 * Y - Delta
    x = m * (Delta / r)
    with np.errstate(invalid="ignore", divide="ignore"):
        box = np.where(m == 0, width, np.sin(np.pi * m * width) / (np.pi * m))
    return box * np.sinc(x) ** r


def coeff_bound(Delta: float, r: int, m) -> np.ndarray:
    m = np.abs(np.asarray(m, dtype=np.float64))
    base = 1.0 / (np.pi * m)
    return np.minimum(base, base * (r / (np.pi * m * Delta)) ** r)


@dataclass(frozen=True)
class BumpSpec:
    Y: float
    Delta: float
    r: int
    trunc: int = 0
    tail: float = field(default=math.nan, compare=False)

    def __post_init__(self):
        if not 0.0 < self.Delta < self.Y <= 0.5:
            raise ValueError(f"need 0 < Delta < Y <= 1/2, got Y={self.Y}, Delta={self.Delta}")
        if int(self.r) != self.r or self.r < 1:
            raise ValueError(f"r must be a positive integer, got {self.r}")
        object.__setattr__(self, "r", int(self.r))
        if self.trunc <= 0:
            object.__setattr__(self, "trunc", certified_trunc(self.Delta, self.r))
        object.__setattr__(self, "tail", tail_bound(self.Delta, self.r, self.trunc))

    @classmethod
    def from_params(cls, p, trunc: int = 0) -> "BumpSpec":
        """Bump with the effective (clamped) window of a :class:`Params`."""
        return cls(p.Y_eff, p.Delta, p.r, trunc)

    @property
    def g0(self) -> float:
        return 2.0 * self.Y - self.Delta

    @cached_property
    def g(self) -> np.ndarray:
        """``g(1) .. g(trunc)``; index ``m - 1``."""
        out = coeffs(self.Y, self.Delta, self.r, np.arange(1, self.trunc + 1))
        out.flags.writeable = False
        return out

    def fourier_coeff(self, m):
        out = coeffs(self.Y, self.Delta, self.r, m)
        return float(out) if np.ndim(out) == 0 else out

    def chi(self, t):
        return chi(self, t)

    def chi_series(self, t, trunc: int | None = None):
        return chi_series(self, t, trunc)

    def regime(self, t):
        """'plateau', 'transition' or 'zero' for each ``t``."""
        d = np.asarray(_dist(t))
        out = np.where(d <= self.Y - self.Delta, "plateau",
                       np.where(d >= self.Y, "zero", "transition"))
        return str(out) if out.ndim == 0 else out


def _dist(t):
    t = np.asarray(t, dtype=np.float64)
    f = t - np.floor(t)
    return np.minimum(f, 1.0 - f)


_CDF_CACHE: dict[int, BSpline] = {}


def _irwin_hall_cdf(r: int) -> BSpline:
    spl = _CDF_CACHE.get(r)
    if spl is None:
        spl = BSpline.basis_element(np.arange(r + 1, dtype=np.float64),
                                    extrapolate=False).antiderivative()
        _CDF_CACHE[r] = spl
    return spl


def _sum_cdf(x: np.ndarray, r: int, w: float) -> np.ndarray:
    """CDF of the sum of ``r`` independent uniforms on ``[-w/2, w/2]``."""
    u = x / w + r / 2.0
    out = np.empty_like(u)
    lo, hi = u <= 0.0, u >= r
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    if mid.any():
        um = u[mid]
        # evaluate on the lower half and reflect for accuracy near 1
        left = um <= r / 2.0
        cdf = _irwin_hall_cdf(r)
        vals = np.where(left, cdf(np.where(left, um, r / 2.0)),
                        1.0 - cdf(np.where(left, r / 2.0, r - um)))
        out[mid] = vals
    return out


def chi(spec: BumpSpec, t):
    """Exact value of the bump at ``t`` (vectorised)."""
    d = _dist(t)
    a = spec.Y - spec.Delta / 2.0
    w = spec.Delta / spec.r
    dd = np.atleast_1d(d)
    out = _sum_cdf(dd + a, spec.r, w) - _sum_cdf(dd - a, spec.r, w)
    return float(out[0]) if np.ndim(d) == 0 else out.reshape(np.shape(d))


def chi_series(spec: BumpSpec, t, trunc: int | None = None, block: int = 1 << 16):
    """Truncated Fourier series ``g(0) + sum_{0<|m|<=trunc} g(m) e(mt)``."""
    trunc = spec.trunc if trunc is None else int(trunc)
    g = spec.g if trunc <= spec.trunc else coeffs(spec.Y, spec.Delta, spec.r,
                                                   np.arange(1, trunc + 1))
    g = g[:trunc]
    t = np.asarray(t, dtype=np.float64)
    frac = (t - np.floor(t)).ravel()
    total = np.zeros_like(frac)
    for lo in range(0, trunc, block):
        m = np.arange(lo + 1, min(lo + block, trunc) + 1, dtype=np.float64)
        ph = np.mod(np.multiply.outer(frac, m), 1.0)
        total += np.cos(2.0 * np.pi * ph) @ g[lo:lo + len(m)]
    out = spec.g0 + 2.0 * total
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)
