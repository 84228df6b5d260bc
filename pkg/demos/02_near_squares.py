"""Primes whose square root sits close to an integer.

For equidistributed sqrt(p) mod 1, the share with ||sqrt p|| < Y should be
about 2Y. We compare observed and expected shares for a few Y.
"""

from pstl import near_square_subset, sieve

t = sieve(1e6)
print(f"{len(t)} primes up to 1e6, theta = {t.theta():.1f}")
for Y in (0.01, 0.05, 0.1, 0.25, 0.5):
    sub = near_square_subset(t, Y)
    print(f"  Y={Y:<5}  count={len(sub):6d}  share={len(sub) / len(t):.4f}  expected={2 * Y:.4f}")

sub = near_square_subset(t, 0.001)
print("closest few:", [(r.p, f"{r.sqrt_dist:.2e}") for r in list(sub)[:5]])
