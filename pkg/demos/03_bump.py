"""The smooth cutoff chi and its truncated Fourier series.

More convolutions (larger r) give faster coefficient decay, so the series
needs fewer terms. The exact evaluation and the series agree to the tail.
"""

import numpy as np

from pstl import BumpSpec

t = np.linspace(0.078, 0.102, 7)
for r in (1, 3, 13):
    spec = BumpSpec(Y=0.1, Delta=0.02, r=r)
    exact = spec.chi(t)
    if spec.trunc <= 5000:
        err = np.max(np.abs(exact - spec.chi_series(t)))
        series = f"series max err {err:.1e}"
    else:
        series = "series skipped (slow decay)"
    print(f"r={r:2d}  trunc={spec.trunc:8d}  tail<={spec.tail:.1e}  {series}")
    print("   chi:", np.array2string(exact, precision=3, suppress_small=True))
    print("   regime:", [spec.regime(x) for x in (0.05, 0.095, 0.2)])
