"""Kraus channels, their unitary dilation and the partial-transpose test."""

import numpy as np

from releq import qchannel as qc
from releq import qentropy as qe
from releq import qstate as qs

ch = qc.random_channel(2, 3, seed=8)
dil = ch.dilate()
rho = qs.random_density(2, seed=9)
print(f"channel with {ch.num_ops} Kraus operators, dilation on {dil.unitary.shape[0]} dims")
print(f"  dilation error {np.max(np.abs(dil.apply(rho) - ch.apply(rho))):.1e}")
sigma = qs.random_density(2, seed=10)
print(f"  S(sigma||rho) = {qe.qrelent(sigma, rho):.4f} -> {qe.qrelent(ch.apply(sigma), ch.apply(rho)):.4f} bits after the channel")
print(f"  sum over measurement branches {qe.selective_relent_sum(ch, sigma, rho):.4f} bits")

singlet = qs.ket_to_density(qs.bell_state("psi-"))
for v in (0.0, 0.2, 1 / 3, 0.5, 1.0):
    r = qc.ppt_check(v * singlet + (1 - v) * np.eye(4) / 4)
    print(f"  singlet weight {v:.3f}: min eigenvalue {r.min_eig:+.4f}  PPT={r.is_ppt}")
