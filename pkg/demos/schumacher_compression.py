"""Typical-subspace compression of the two-letter source
cos(t/2)|0> + sin(t/2)|1>, sin(t/2)|0> + cos(t/2)|1>."""

import math

from releq import protocols as pr

for theta in (math.pi / 6, math.pi / 2, math.pi):
    print(f"theta = {theta:.4f}")
    for n in (4, 8, 12, 16):
        r = pr.schumacher_compress(theta, n, trials=100, seed=1)
        print(
            f"  n={n:2d}  dim={r.typical_dim:6d}  rate={r.rate_bits_per_symbol:.4f}  "
            f"S={r.entropy_bits:.4f}  success={r.success_prob_exact:.4f}"
        )
