"""Shared Bell pairs: entanglement, mutual information, teleportation and
dense coding on one page."""

import numpy as np

from releq import entanglement as ent
from releq import protocols as pr
from releq import qentropy as qe
from releq import qstate as qs

bell = qs.bell_state("phi+")
rho = qs.ket_to_density(bell)
print(f"entanglement of |Phi+>        {ent.pure_entanglement(bell, (2, 2)):.4f} bits")
print(f"mutual information             {qe.qmutual(rho):.4f} bits")
print(f"dense-coding Holevo capacity   {pr.sdc_capacity(rho):.4f} bits")

print("\nteleporting a random qubit, every Bell outcome:")
psi = qs.random_state(2, seed=4)
for b in pr.teleport_all_branches(psi):
    print(f"  bits {b.classical_bits}  p={b.probability:.2f}  fidelity={b.fidelity_to_input:.12f}")

print("\ncapacity of a|00> + b|11> against x = |a|^2:")
for x in np.linspace(0, 1, 6):
    print(f"  x={x:.1f}  C={pr.dense_coding_capacity(x):.4f}")
