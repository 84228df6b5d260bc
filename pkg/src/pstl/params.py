"""Parameter schedule for the near-square ternary problem.

Given the exponent ``c``, the slack ``delta`` and a cutoff ``X`` (or the
target ``N``), the schedule is::

    r     = floor(log X)                     (natural log)
    Y     = X ** (-(6/17) * (37/36 - c) + delta)
    Delta = Y / 5
    M     = r / Delta
    H     = X ** ((3 - 2c) / 34)

At desk scale ``Y`` is close to 1, so the near-square window is vacuous.
:func:`with_overrides` replaces Y, H or M by hand for experiments while the
schedule values are kept for reporting.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass

C_MAX = 37 / 36
DELTA_MAX = 0.01
X_MIN = 100.0


class ParamsError(ValueError):
    """Raised when an input violates a hypothesis of the schedule."""


@dataclass(frozen=True)
class Params:
    c: float
    delta: float
    X: float
    N: int
    r: int
    Y: float
    Delta: float
    M: float
    H: float
    overrides: tuple[str, ...] = ()
    schedule_Y: float = math.nan
    schedule_H: float = math.nan
    schedule_M: float = math.nan
    primary: str = "X"

    @property
    def Y_eff(self) -> float:
        """Window half-width actually used downstream (clamped to 1/2)."""
        return min(self.Y, 0.5)

    @property
    def clamped(self) -> bool:
        return self.Y > 0.5

    @property
    def M_int(self) -> int:
        """Truncation index for sums over 0 < |m| <= M."""
        return int(math.floor(self.M))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["overrides"] = list(self.overrides)
        d["Y_clamped"] = self.clamped
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Params":
        names = {f.name for f in dataclasses.fields(cls)}
        kw = {k: v for k, v in d.items() if k in names}
        kw["overrides"] = tuple(kw.get("overrides", ()))
        kw["N"] = int(kw["N"])
        kw["r"] = int(kw["r"])
        return cls(**kw)

    @classmethod
    def from_json(cls, text: str) -> "Params":
        return cls.from_dict(json.loads(text))


def _check_hypotheses(c: float, delta: float, X: float) -> None:
    if not (1.0 < c < C_MAX):
        raise ParamsError(f"c out of range: need 1 < c < 37/36, got c={c!r}")
    if not delta > 0:
        raise ParamsError(f"delta must be positive, got delta={delta!r}")
    if delta > DELTA_MAX:
        raise ParamsError(f"delta must lie in (0, {DELTA_MAX}], got delta={delta!r}")
    if not X >= X_MIN:
        raise ParamsError(f"X must be at least {X_MIN:g}, got X={X!r}")


def y_exponent(c: float, delta: float) -> float:
    return -(6.0 / 17.0) * (C_MAX - c) + delta


def h_exponent(c: float) -> float:
    return (3.0 - 2.0 * c) / 34.0


def derive(c: float, delta: float, X: float) -> Params:
    """Schedule driven by the prime cutoff ``X``; ``N = ceil(X**c)``."""
    c, delta, X = float(c), float(delta), float(X)
    _check_hypotheses(c, delta, X)
    return _build(c, delta, X, int(math.ceil(X**c)), "X")


def derive_from_n(c: float, delta: float, N: int) -> Params:
    """Schedule driven by the integer target ``N``; ``X = N**(1/c)``."""
    c, delta, N = float(c), float(delta), int(N)
    if N < 1:
        raise ParamsError(f"N must be a positive integer, got N={N!r}")
    X = N ** (1.0 / c)
    _check_hypotheses(c, delta, X)
    return _build(c, delta, X, N, "N")


def _build(c: float, delta: float, X: float, N: int, primary: str) -> Params:
    r = int(math.floor(math.log(X)))
    Y = X ** y_exponent(c, delta)
    Delta = Y / 5.0
    M = r / Delta
    H = X ** h_exponent(c)
    return Params(c=c, delta=delta, X=X, N=N, r=r, Y=Y, Delta=Delta, M=M, H=H,
                  schedule_Y=Y, schedule_H=H, schedule_M=M, primary=primary)


def with_overrides(p: Params, y: float | None = None, h: float | None = None,
                   m: float | None = None) -> Params:
    """Replace Y, H and/or M. Delta and M follow a new Y unless M is given."""
    if y is None and h is None and m is None:
        return p
    changes: dict = {}
    flags = list(p.overrides)
    if y is not None:
        y = float(y)
        if not 0.0 < y <= 0.5:
            raise ParamsError(f"Y must lie in (0, 1/2], got Y={y!r}")
        changes["Y"] = y
        changes["Delta"] = y / 5.0
        changes["M"] = p.r / changes["Delta"]
        flags.append("Y")
    if h is not None:
        h = float(h)
        if not h >= 3.0:
            raise ParamsError(f"H must be at least 3, got H={h!r}")
        changes["H"] = h
        flags.append("H")
    if m is not None:
        m = float(m)
        if not m >= 1.0:
            raise ParamsError(f"M must be at least 1, got M={m!r}")
        changes["M"] = m
        flags.append("M")
    changes["overrides"] = tuple(dict.fromkeys(flags))
    return dataclasses.replace(p, **changes)
