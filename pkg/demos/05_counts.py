"""Weighted representation counts against the expected main term.

The plain count R(N) is compared to Gamma(1+1/c)^3/Gamma(3/c) N^(3/c-1).
Past the largest [p^c], triples start to fall off the table, which pulls
the ratio down; the scan stops well before that edge.
"""

import numpy as np

from pstl import FloorPowerMap, sieve
from pstl.representations import enumerate_representations, ratio_scan

X, c = 1e4, 1.02
t = sieve(X)
fp = FloorPowerMap(t, c)

recs = enumerate_representations(t, c, 101, fp=fp)
print(f"N=101: {len(recs)} unordered triples, for example {recs[0].triple}")

Ns = np.linspace(0.2, 1.0, 9) * fp.max()
rows, summary = ratio_scan(t, c, Ns, fp=fp)
for row in rows:
    print(f"  N={row.N:6d}  R={row.count:12.1f}  main={row.main_term:12.1f}  ratio={row.ratio:.3f}")
print(f"median {summary['median_ratio']:.3f}, IQR {summary['iqr']:.3f}")

rows, summary = ratio_scan(t, c, Ns, mode="sharp", Y=0.1, fp=fp)
print(f"near-square Y=0.1: median ratio {summary['median_ratio']:.4f}, over (2Y)^3: {summary['median_ratio'] / 0.008:.3f}")
