"""Quantum entropies and the Holevo quantity.

All functions take ``units="bits"`` (default) or ``"nats"``.  Relative
entropy returns ``inf`` when the first argument has weight outside the support
of the second; the support of ``rho`` is the span of eigenvectors with
eigenvalue at least ``1e-10`` and "weight outside" means more than ``1e-9``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import xlogy

from .classical_info import log_base, mutual_information, validate_probs
from .constants import HBAR, K_B
from .errors import DimMismatchError, NonPositiveError, OutOfRangeError
from .matcore import as_square, clip_eigenvalues, hermitian_eig, tensor
from .qchannel import KrausChannel, povm_probs
from .qstate import as_density, bipartite_dims, density_from_json, density_to_json, reduced_states

KERNEL_EIG = 1e-10
KERNEL_MASS = 1e-9


def entropy_of_spectrum(w, units: str = "bits") -> float:
    w = clip_eigenvalues(w)
    return float(max(0.0, -xlogy(w, w).sum()) / log_base(units))


def von_neumann(rho, units: str = "bits") -> float:
    """``S(rho) = -Tr rho log rho`` from the clipped spectrum.

    >>> von_neumann(np.eye(2) / 2)
    1.0
    """
    return entropy_of_spectrum(hermitian_eig(as_density(rho)).eigenvalues, units)


def qrelent(sigma, rho, units: str = "bits") -> float:
    """Quantum relative entropy ``S(sigma || rho) = Tr sigma (log sigma - log rho)``.

    ``sigma`` only needs to be positive semidefinite; it is not renormalised,
    which is what the selective data-processing inequality needs.  ``rho``
    must be a density matrix.

    Returns ``inf`` if ``sigma`` has more than ``1e-9`` weight on the kernel
    of ``rho``.
    """
    s = as_square(sigma, "sigma")
    r = as_density(rho)
    if s.shape != r.shape:
        raise DimMismatchError(f"states have shapes {s.shape} and {r.shape}")
    ws = clip_eigenvalues(hermitian_eig(s).eigenvalues)
    wr, vr = hermitian_eig(r)
    # Diagonal of sigma in the eigenbasis of rho.
    sig_diag = np.einsum("ji,jk,ki->i", vr.conj(), s, vr).real
    kernel = wr < KERNEL_EIG
    if sig_diag[kernel].sum() > KERNEL_MASS:
        return math.inf
    cross = float(np.sum(sig_diag[~kernel] * np.log(wr[~kernel])))
    val = float(xlogy(ws, ws).sum()) - cross
    return val / log_base(units)


def qmutual(rho_ab, dims=None, units: str = "bits") -> float:
    """Quantum mutual information ``S(A) + S(B) - S(AB)``."""
    rho = as_density(rho_ab)
    ra, rb = reduced_states(rho, bipartite_dims(rho.shape[0], dims))
    val = von_neumann(ra, units) + von_neumann(rb, units) - von_neumann(rho, units)
    return max(val, 0.0)


def conditional_qentropy(rho_ab, dims=None, units: str = "bits") -> float:
    """``S(A|B) = S(AB) - S(B)``; negative for entangled states."""
    rho = as_density(rho_ab)
    _, rb = reduced_states(rho, bipartite_dims(rho.shape[0], dims))
    return von_neumann(rho, units) - von_neumann(rb, units)


class Ensemble:
    """Probabilities ``p_i`` attached to density matrices ``rho_i`` of one dimension.

    Kets are accepted and converted to projectors.  ``dims`` records the
    subsystem structure shared by every member.
    """

    def __init__(self, probs, states: Sequence, dims=None):
        self.probs = validate_probs(probs)
        self.states = [as_density(s) for s in states]
        if len(self.states) != self.probs.size:
            raise DimMismatchError("number of probabilities and states differ")
        d = self.states[0].shape[0]
        if any(s.shape != (d, d) for s in self.states):
            raise DimMismatchError("ensemble members must share one dimension")
        if dims is not None and int(np.prod(dims)) != d:
            raise DimMismatchError(f"dims {tuple(dims)} do not match dimension {d}")
        self.dims = tuple(dims) if dims is not None else (d,)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.probs, self.states))

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def average(self) -> np.ndarray:
        return np.einsum("i,ijk->jk", self.probs, np.stack(self.states))


def holevo(ensemble: Ensemble, units: str = "bits") -> float:
    """Holevo quantity ``S(sum p_i rho_i) - sum p_i S(rho_i)``."""
    val = von_neumann(ensemble.average(), units) - sum(
        p * von_neumann(r, units) for p, r in ensemble
    )
    return max(val, 0.0)


def holevo_as_relent(ensemble: Ensemble, units: str = "bits") -> float:
    """The same quantity written as ``sum_i p_i S(rho_i || rho_bar)``."""
    avg = ensemble.average()
    return float(sum(p * qrelent(r, avg, units) for p, r in ensemble if p > 0))


def symbol_state(ensemble: Ensemble) -> np.ndarray:
    """Classical-quantum state ``sum_i p_i |i><i| (x) rho_i`` (symbol register first)."""
    n = len(ensemble)
    out = np.zeros((n * ensemble.dim,) * 2, dtype=complex)
    for i, (p, r) in enumerate(ensemble):
        proj = np.zeros((n, n))
        proj[i, i] = 1.0
        out += p * tensor(proj, r)
    return out


def accessible_info(ensemble: Ensemble, effects: Sequence, units: str = "bits") -> float:
    """Mutual information between the letter index and the outcome of a POVM."""
    joint = np.array([p * povm_probs(effects, r) for p, r in ensemble])
    joint = np.clip(joint, 0.0, None)
    return mutual_information(joint / joint.sum(), units=units)


def selective_relent_sum(channel: KrausChannel, sigma, rho, units: str = "bits") -> float:
    """Sum over Kraus branches of ``S(A_j sigma A_j^dagger || rho_j)``.

    ``rho_j`` is the normalised branch ``A_j rho A_j^dagger / p_j`` and the
    ``sigma`` branch keeps its weight.  Monotonicity under measurement says the
    sum is at most ``S(sigma || rho)``.  Branches where ``rho`` has zero weight
    are skipped if ``sigma`` also vanishes there and give ``inf`` otherwise.
    """
    total = 0.0
    for sb, rb in zip(channel.branches(as_density(sigma)), channel.branches(as_density(rho))):
        p_r, p_s = np.trace(rb).real, np.trace(sb).real
        if p_r < 1e-14:
            if p_s > KERNEL_MASS:
                return math.inf
            continue
        if p_s < 1e-300:
            continue
        total += qrelent(sb, rb / p_r, units)
    return total


# --------------------------------------------------------------------------
# Bosonic broadband channel


@dataclass(frozen=True)
class BosonicCapacity:
    """Capacities in bits per second.

    ``quantum_limit`` is the zero-temperature value of the full formula,
    ``sqrt(pi S / (3 hbar)) / ln 2``.
    """

    capacity: float
    classical_limit: float
    quantum_limit: float


def bosonic_capacity(signal_power: float, temperature: float) -> BosonicCapacity:
    """Capacity of a noiseless broadband bosonic channel with thermal background.

    ``C = (pi k T / (6 hbar ln 2)) (sqrt(12 hbar S / (pi (k T)^2) + 1) - 1)``.

    Args:
        signal_power: Signal power ``S`` in watts (> 0).
        temperature: Background temperature ``T`` in kelvin (>= 0).  At ``T = 0``
            the capacity equals the quantum limit.

    The classical limit ``S / (k T ln 2)`` applies when ``12 hbar S << pi (k T)^2``.
    """
    if not signal_power > 0:
        raise NonPositiveError("signal power must be positive")
    if temperature < 0:
        raise OutOfRangeError("temperature must be nonnegative")
    ln2 = math.log(2.0)
    quantum = math.sqrt(math.pi * signal_power / (3 * HBAR)) / ln2
    if temperature == 0:
        return BosonicCapacity(quantum, math.inf, quantum)
    kt = K_B * temperature
    x = 12 * HBAR * signal_power / (math.pi * kt * kt)
    # sqrt(1 + x) - 1 written stably for small x
    cap = math.pi * kt / (6 * HBAR * ln2) * (x / (math.sqrt(1 + x) + 1))
    return BosonicCapacity(cap, signal_power / (kt * ln2), quantum)


def quantum_energy_per_bit() -> float:
    """Order-of-magnitude energy cost per bit at the quantum limit, ``hbar / (pi ln 2)`` joules."""
    return HBAR / (math.pi * math.log(2.0))


def ensemble_to_json(ensemble: Ensemble) -> dict:
    return {
        "dims": list(ensemble.dims),
        "items": [{"p": float(p), "state": density_to_json(r, ensemble.dims)} for p, r in ensemble],
    }


def ensemble_from_json(obj: dict) -> Ensemble:
    """Load ``{"items": [{"p": .., "state": <density or ket>}, ...], "dims": [...]}``."""
    try:
        items = obj["items"]
    except (KeyError, TypeError):
        raise DimMismatchError("ensemble object needs an 'items' list") from None
    if not items:
        raise DimMismatchError("ensemble is empty")
    states, dims = [], None
    for it in items:
        rho, d = density_from_json(it["state"])
        states.append(rho)
        dims = dims or d
    return Ensemble([it["p"] for it in items], states, obj.get("dims", dims))
