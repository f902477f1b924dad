"""Relative entropy of entanglement for Werner states, compared with the
closed form 1 - H2(F) that holds for singlet fraction F > 1/2."""

import numpy as np

from releq import entanglement as ent
from releq import qchannel as qc
from releq import qstate as qs
from releq.classical_info import binary_entropy

singlet = qs.ket_to_density(qs.bell_state("psi-"))
print(" F      REE (numeric)   1 - H2(F)   PPT")
for f in (0.25, 0.5, 0.6, 0.75, 0.9, 1.0):
    rho = (4 * f - 1) / 3 * singlet + (1 - f) / 3 * np.eye(4)
    val = ent.ree(rho, (2, 2), restarts=4, seed=0).value
    exact = 1 - binary_entropy(f) if f > 0.5 else 0.0
    print(f" {f:.2f}   {val:.8f}      {exact:.8f}  {qc.ppt_check(rho).is_ppt}")

mix = 0.5 * qs.ket_to_density(qs.bell_state("phi+")) + 0.5 * qs.ket_to_density(qs.bell_state("phi-"))
print(f"\nequal mixture of Phi+ and Phi-: REE = {ent.ree(mix, (2, 2)).value:.2e} (separable)")
