"""Landauer erasure, broadband bosonic capacity and Bekenstein limits."""

import numpy as np

from releq import protocols as pr
from releq import qentropy as qe
from releq import qstate as qs
from releq.constants import C_LIGHT, M_PROTON

rho = qs.random_density(2, seed=3)
for label, omega in [("omega = rho", rho), ("omega = I/2", np.eye(2) / 2), ("omega = |0><0| mix", np.diag([0.9, 0.1]))]:
    c = pr.landauer_erasure(rho, omega)
    print(f"{label:20s} dS = {c.delta_s:.4f} = {c.relative_entropy:.4f} + {c.entropy:.4f} bits")

print()
for s, t in [(1e-20, 300.0), (1e-9, 3.0), (1e-3, 1.0), (1e-3, 0.0)]:
    b = qe.bosonic_capacity(s, t)
    print(f"S={s:.0e} W T={t:5.1f} K  C={b.capacity:.4e}  classical={b.classical_limit:.4e}  quantum={b.quantum_limit:.4e} bits/s")
print(f"energy per bit near the quantum limit ~ {qe.quantum_energy_per_bit():.2e} J")

e = M_PROTON * C_LIGHT**2
print(f"\nproton in 1e-15 m: {pr.bekenstein(e, 1e-15):.1f} bits, {pr.processing_rate(e):.2e} bits/s")
