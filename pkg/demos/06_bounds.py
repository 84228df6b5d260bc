"""Bound monitors for the smoothed sum V.

The grid sup of |V| only settles once K exceeds the largest frequency
[X^c]; below that the grid aliases and misses the peak.
"""

from pstl import BumpSpec, FloorPowerMap, derive, sieve
from pstl.expsums import lemma3_rhs, sup_V_scan

c, X = 1.02, 1e4
p = derive(c, 0.001, X)
t = sieve(X)
fp = FloorPowerMap(t, c)
spec = BumpSpec.from_params(p)
print(f"N={p.N}, Y_eff={p.Y_eff}, Delta={p.Delta:.4f}, r={p.r}, trunc={spec.trunc}")
print(f"lemma-3 right side: {lemma3_rhs(p):.4g}")
for K in (2048, 4096, 8192, 16384, 32768):
    sup, ratio = sup_V_scan(K, t, fp, spec, p)
    print(f"  K={K:6d}  sup|V|={sup:9.3f}  ratio={ratio:.4f}")
