"""How the parameter schedule moves with X and c.

Y shrinks like a small negative power of X, so for laboratory-sized X it is
still above 1/2 and gets clamped; the output shows where the clamp stops.
"""

from pstl import derive

for c in (1.01, 1.02, 1.027):
    print(f"c = {c}")
    for X in (1e4, 1e6, 1e8, 1e12, 1e20):
        p = derive(c, 0.001, X)
        flag = " (clamped)" if p.clamped else ""
        print(f"  X={X:8.0e}  N={p.N:>24d}  r={p.r:3d}  Y={p.Y:.4f}{flag}  H={p.H:.4f}  M={p.M:8.2f}")
