"""Exponential sums over [p^c] and the exact Parseval identity.

On a grid finer than the frequency spread, the sampled mean of |S|^2 is
exactly the collision sum, which we compare to X log X as a sanity scale.
"""

import math

import numpy as np

from pstl import FloorPowerMap, S, sieve
from pstl.expsums import collision_sum, integral_S_abs2

X, c = 2e4, 1.02
t = sieve(X)
fp = FloorPowerMap(t, c)
print(f"{len(t)} primes, frequencies [p^c] in [{fp.min()}, {fp.max()}]")
for a in (0.0, 1e-4, 1e-3, 0.25, 1 / 3):
    val = S(a, t, fp)
    print(f"  S({a:.6f}) = {val.real:12.2f} {val.imag:+12.2f}i   |S|={abs(val):10.2f}")

lhs = integral_S_abs2(t, fp)
rhs = collision_sum(fp.values, t.logp)
print(f"int |S|^2 = {lhs:.6f}, collisions = {rhs:.6f}, rel diff {abs(lhs - rhs) / rhs:.1e}")
print(f"ratio to X log X: {lhs / (X * math.log(X)):.3f}")
