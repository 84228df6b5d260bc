"""Prime tables with log weights and distances of sqrt(p) to the integers."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from ._parallel import chunked_map, spans

SEGMENT = 1 << 20
X_GUARD = 1e9
CACHE_MAGIC = b"PSTL1"
RECORD_DTYPE = np.dtype([("p", "<u8"), ("logp", "<f8"), ("sqrt_dist", "<f8")])


class SieveResourceError(MemoryError):
    """Raised when a requested table exceeds the memory guard."""


@dataclass(frozen=True)
class PrimeRecord:
    p: int
    logp: float
    sqrt_dist: float


class PrimeTable:
    """All primes ``p <= X`` in ascending order, with ``log p`` and ``||sqrt p||``.

    The three columns are read-only numpy arrays; the table is never mutated
    after construction.
    """

    __slots__ = ("X", "p", "logp", "sqrt_dist")

    def __init__(self, X: float, p, logp=None, sqrt_dist=None):
        p = np.ascontiguousarray(p, dtype=np.int64)
        if logp is None:
            logp = np.log(p.astype(np.float64))
        if sqrt_dist is None:
            sqrt_dist = sqrt_distance_int(p)
        logp = np.ascontiguousarray(logp, dtype=np.float64)
        sqrt_dist = np.ascontiguousarray(sqrt_dist, dtype=np.float64)
        for a in (p, logp, sqrt_dist):
            a.flags.writeable = False
        object.__setattr__(self, "X", float(X))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "logp", logp)
        object.__setattr__(self, "sqrt_dist", sqrt_dist)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeTable is immutable")

    def __len__(self) -> int:
        return len(self.p)

    def __getitem__(self, i: int) -> PrimeRecord:
        return PrimeRecord(int(self.p[i]), float(self.logp[i]), float(self.sqrt_dist[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __repr__(self) -> str:
        return f"PrimeTable(X={self.X:g}, count={len(self)})"

    def theta(self) -> float:
        """Chebyshev's theta(X) = sum of log p."""
        return math.fsum(self.logp)

    def take(self, mask) -> "PrimeTable":
        return PrimeTable(self.X, self.p[mask], self.logp[mask], self.sqrt_dist[mask])

    def save(self, path) -> None:
        rec = np.empty(len(self), dtype=RECORD_DTYPE)
        rec["p"] = self.p
        rec["logp"] = self.logp
        rec["sqrt_dist"] = self.sqrt_dist
        with open(path, "wb") as fh:
            fh.write(CACHE_MAGIC)
            fh.write(struct.pack("<dq", self.X, len(self)))
            fh.write(rec.tobytes())

    @classmethod
    def load(cls, path) -> "PrimeTable":
        with open(path, "rb") as fh:
            magic = fh.read(len(CACHE_MAGIC))
            if magic != CACHE_MAGIC:
                raise ValueError(f"{path}: not a prime table cache (magic {magic!r})")
            X, count = struct.unpack("<dq", fh.read(16))
            rec = np.frombuffer(fh.read(), dtype=RECORD_DTYPE)
        if len(rec) != count:
            raise ValueError(f"{path}: header says {count} records, found {len(rec)}")
        return cls(X, rec["p"].astype(np.int64), rec["logp"].copy(), rec["sqrt_dist"].copy())


def _small_primes(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if is_p[q]:
            is_p[q * q::q] = False
    return np.flatnonzero(is_p).astype(np.int64)


def primes_upto(X: float, workers: int | None = None) -> np.ndarray:
    """Segmented sieve of Eratosthenes; returns the primes ``<= X`` as int64."""
    if X > X_GUARD:
        raise SieveResourceError(f"X={X:g} exceeds the sieve guard {X_GUARD:g}")
    n = int(math.floor(X))
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    base = _small_primes(math.isqrt(n))

    def segment(span):
        lo, hi = span  # numbers lo .. hi-1
        mark = np.ones(hi - lo, dtype=bool)
        for q in base:
            q = int(q)
            if q * q >= hi:
                break
            start = max(q * q, -(-lo // q) * q)
            mark[start - lo::q] = False
        if lo < 2:
            mark[:2 - lo] = False
        return np.flatnonzero(mark).astype(np.int64) + lo

    parts = chunked_map(segment, spans(n + 1, SEGMENT), workers)
    return np.concatenate(parts)


def sieve(X: float, workers: int | None = None) -> PrimeTable:
    return PrimeTable(X, primes_upto(X, workers))


def nearest_int_distance(t):
    """``||t|| = min({t}, 1 - {t})``, elementwise."""
    frac = np.subtract(t, np.floor(t))
    out = np.minimum(frac, 1.0 - frac)
    return float(out) if np.ndim(out) == 0 else out


def _isqrt(p: np.ndarray) -> np.ndarray:
    k = np.floor(np.sqrt(p.astype(np.float64))).astype(np.int64)
    k -= (k * k > p)
    k += ((k + 1) * (k + 1) <= p)
    return k


def sqrt_distance_int(p) -> np.ndarray:
    """``||sqrt p||`` from the integer bracket ``k = round(sqrt p)``.

    ``sqrt(p) - k = (p - k^2) / (sqrt(p) + k)`` has no cancellation, so the
    result is accurate to a few ulps even for p next to a square.
    """
    p = np.asarray(p, dtype=np.int64)
    k = _isqrt(p)
    # round half never occurs: (k + 1/2)^2 is not an integer
    k = np.where(p - k * k <= k, k, k + 1)
    num = np.abs(p - k * k).astype(np.float64)
    return num / (np.sqrt(p.astype(np.float64)) + k)


def near_square_subset(t: PrimeTable, Y: float) -> PrimeTable:
    """Primes with ``||sqrt p|| < Y`` (strict), order preserved."""
    if not 0.0 < Y <= 0.5:
        raise ValueError(f"Y must lie in (0, 1/2], got Y={Y!r}")
    return t.take(t.sqrt_dist < Y)


def sqrt_frac(p) -> np.ndarray:
    """Fractional part ``{sqrt p}`` using the same integer bracket."""
    p = np.asarray(p, dtype=np.int64)
    k = _isqrt(p)
    num = (p - k * k).astype(np.float64)
    return num / (np.sqrt(p.astype(np.float64)) + k)
