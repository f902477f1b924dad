"""Communication protocols and physical limits.

Teleportation and dense coding run on explicit state vectors; Schumacher
compression projects sampled message strings onto a typical subspace; the
Landauer and Bekenstein functions evaluate closed-form bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical_info import binary_entropy, log_base
from .constants import C_LIGHT, HBAR
from .errors import DimMismatchError, NonPositiveError, NotTwoQubitError, OutOfRangeError, TooLargeError
from .matcore import hermitian_eig, partial_trace
from .qentropy import Ensemble, holevo, qrelent, von_neumann
from .qstate import I2, X, Y, Z, _rng, as_density, as_ket, bell_state, ket_to_density

# --------------------------------------------------------------------------
# Teleportation

#: Bell outcome (m1, m2) -> (Bell state name, correction applied by Bob).
#: m2 flags a bit flip and m1 a phase flip; Bob applies X^m2 first, then Z^m1.
BELL_OUTCOMES = {
    (0, 0): ("phi+", I2),
    (0, 1): ("psi+", X),
    (1, 0): ("phi-", Z),
    (1, 1): ("psi-", Z @ X),
}


@dataclass(frozen=True)
class TeleportationOutcome:
    classical_bits: tuple[int, int]
    probability: float
    output: np.ndarray
    fidelity_to_input: float
    alice_residual: np.ndarray


def _teleport_branch(psi: np.ndarray, bits: tuple[int, int]) -> TeleportationOutcome:
    # Qubit order: input (Alice), Alice's half of the pair, Bob's half.
    state = np.kron(psi, bell_state("phi+")).reshape(4, 2)
    name, correction = BELL_OUTCOMES[bits]
    bob = bell_state(name).conj() @ state  # <Bell|_{12} applied to the 3-qubit state
    prob = float(np.vdot(bob, bob).real)
    bob = correction @ (bob / math.sqrt(prob))
    # After the measurement Alice's qubits are in the Bell state; the input
    # qubit alone is its marginal.
    alice = partial_trace(ket_to_density(bell_state(name)), (2, 2), 0)
    fid = float(abs(np.vdot(psi, bob)) ** 2)
    return TeleportationOutcome(bits, prob, bob, fid, alice)


def teleport_all_branches(psi) -> list[TeleportationOutcome]:
    """Run the protocol once per Bell outcome (deterministic mode)."""
    v = as_ket(psi, (2,))
    return [_teleport_branch(v, bits) for bits in BELL_OUTCOMES]


def teleport(psi, seed=None) -> TeleportationOutcome:
    """Teleport one qubit through ``(|00> + |11>)/sqrt(2)``.

    The Bell outcome is sampled from its exact probability (always 1/4) and Bob
    applies the matching Pauli correction.
    """
    branches = teleport_all_branches(psi)
    p = np.array([b.probability for b in branches])
    idx = int(_rng(seed).choice(4, p=p / p.sum()))
    return branches[idx]


# --------------------------------------------------------------------------
# Dense coding

PAULIS = (I2, X, Y, Z)


def dense_coding_capacity(x: float) -> float:
    """Capacity in bits of dense coding over ``a|00> + b|11>`` with ``|a|^2 = x``:
    ``1 + H_2(x)``."""
    if not 0.0 <= x <= 1.0:
        raise OutOfRangeError(f"Schmidt weight must lie in [0, 1], got {x}")
    return 1.0 + binary_entropy(x)


def sdc_letters(w0) -> list[np.ndarray]:
    """The four letters ``(s_i (x) I) W0 (s_i (x) I)`` for the Paulis ``s_i``."""
    w0 = as_density(w0)
    if w0.shape != (4, 4):
        raise NotTwoQubitError("dense coding needs a two-qubit state")
    ops = [np.kron(s, I2) for s in PAULIS]
    return [u @ w0 @ u.conj().T for u in ops]


def sdc_capacity(w0, units: str = "bits") -> float:
    """Holevo quantity of the four equiprobable Pauli-encoded letters."""
    return holevo(Ensemble(np.full(4, 0.25), sdc_letters(w0)), units)


# --------------------------------------------------------------------------
# Schumacher compression


@dataclass(frozen=True)
class CompressionReport:
    """Typical-subspace compression of ``n`` letters.

    ``success_prob`` is the Monte-Carlo mean of ``||P psi||^2`` over sampled
    messages; ``success_prob_exact`` is ``Tr(P rho^n)``.
    """

    theta: float
    n: int
    typical_dim: int
    success_prob: float
    success_prob_exact: float
    rate_bits_per_symbol: float
    entropy_bits: float
    trials: int


def source_letters(theta: float) -> np.ndarray:
    """The two equiprobable letters ``cos(t/2)|0> + sin(t/2)|1>`` and
    ``sin(t/2)|0> + cos(t/2)|1>`` as rows."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [s, c]], dtype=complex)


def source_spectrum(theta: float) -> tuple[float, float]:
    """Eigenvalues ``(1 + sin t)/2`` on ``|+>`` and ``(1 - sin t)/2`` on ``|->``."""
    s = math.sin(theta)
    return (1 + s) / 2, (1 - s) / 2


def _popcount(n: int) -> np.ndarray:
    """Number of set bits of each integer in ``range(2**n)``."""
    idx = np.arange(2**n, dtype=np.uint32)
    return np.unpackbits(idx.view(np.uint8).reshape(-1, 4), axis=1).sum(axis=1)


def typical_mask(theta: float, n: int, delta: float = 0.02) -> np.ndarray:
    """Boolean mask over the ``2^n`` eigenstrings selecting the typical subspace.

    Bit ``1`` in position ``j`` means letter ``j`` is projected on ``|+>``.  The
    subspace is the smallest span of eigenstrings, most probable first, whose
    weight under ``rho^n`` is at least ``1 - delta``.  Within a class of equally
    probable strings the lowest indices are taken.
    """
    lp, lm = source_spectrum(theta)
    plus = _popcount(n)
    # log-probability of each class k (number of '+'); 0 * log 0 counts as 0
    def _term(count, prob):
        if count == 0:
            return 0.0
        return count * math.log(prob) if prob > 0 else -math.inf

    logp = np.array([_term(k, lp) + _term(n - k, lm) for k in range(n + 1)])
    mask = np.zeros(2**n, dtype=bool)
    total = 0.0
    for k in sorted(range(n + 1), key=lambda k: -logp[k]):
        p = math.exp(logp[k]) if np.isfinite(logp[k]) else 0.0
        members = np.flatnonzero(plus == k)
        if total + p * members.size >= 1 - delta - 1e-15:
            need = max(0, math.ceil((1 - delta - total) / p - 1e-9)) if p > 0 else 0
            mask[members[:need]] = True
            break
        mask[members] = True
        total += p * members.size
    return mask


def schumacher_compress(theta: float, n: int, trials: int = 200, seed=0, delta: float = 0.02) -> CompressionReport:
    """Compress ``n`` letters of the two-state source onto its typical subspace.

    Each trial draws a message of ``n`` letters, writes it in the eigenbasis of
    the average state and records the squared norm of its projection.

    Args:
        theta: Source parameter in ``(0, pi]``; the letters are orthogonal at ``pi``.
        n: Block length, at most 16.
        trials: Number of sampled messages.
        seed: Seed or generator.
        delta: Allowed error weight of the typical subspace.
    """
    if n > 16:
        raise TooLargeError("state-vector compression is limited to n <= 16")
    if not 0 < theta <= math.pi:
        raise OutOfRangeError("theta must lie in (0, pi]")
    rng = _rng(seed)
    mask = typical_mask(theta, n, delta)
    letters = source_letters(theta)
    # amplitudes on (|->, |+>) so that index bit 1 means '+'
    minus = np.array([1, -1]) / math.sqrt(2)
    plusv = np.array([1, 1]) / math.sqrt(2)
    amps = np.stack([letters @ minus, letters @ plusv], axis=1)  # rows: letter, cols: (-, +)
    succ = 0.0
    for _ in range(trials):
        msg = rng.integers(0, 2, size=n)
        vec = np.ones(1, dtype=complex)
        for letter in msg:
            vec = np.kron(vec, amps[letter])
        succ += float(np.sum(np.abs(vec[mask]) ** 2))
    lp, lm = source_spectrum(theta)
    plus = _popcount(n)[mask]
    exact = float(np.sum(lp**plus * lm ** (n - plus)))
    dim = int(mask.sum())
    return CompressionReport(
        theta, n, dim, succ / max(trials, 1), exact, math.log2(dim) / n, binary_entropy(lp), trials
    )


# --------------------------------------------------------------------------
# Landauer erasure


@dataclass(frozen=True)
class ErasureCost:
    """Entropy increase ``-Tr(rho log omega)`` and its two parts."""

    delta_s: float
    relative_entropy: float
    entropy: float


def landauer_erasure(rho, omega, units: str = "bits") -> ErasureCost:
    """Entropy generated by resetting ``rho`` with a reservoir in state ``omega``.

    ``-Tr(rho log omega) = S(rho || omega) + S(rho)``; it is smallest, equal to
    ``S(rho)``, when ``omega = rho``.  Infinite if ``rho`` has weight on the
    kernel of ``omega``.
    """
    r, w = as_density(rho), as_density(omega)
    if r.shape != w.shape:
        raise DimMismatchError(f"states have shapes {r.shape} and {w.shape}")
    rel = qrelent(r, w, units)
    s = von_neumann(r, units)
    if math.isinf(rel):
        return ErasureCost(math.inf, math.inf, s)
    wr, vr = hermitian_eig(w)
    diag = np.einsum("ji,jk,ki->i", vr.conj(), r, vr).real
    keep = wr >= 1e-10
    delta = -float(np.sum(diag[keep] * np.log(wr[keep]))) / log_base(units)
    return ErasureCost(delta, rel, s)


# --------------------------------------------------------------------------
# Bekenstein limits


def bekenstein(energy: float, radius: float, rigorous: bool = True) -> float:
    """Maximum information in bits held by a system of energy ``E`` (joules)
    inside radius ``R`` (metres).

    With ``rigorous=True`` this is ``2 pi E R / (hbar c ln 2)``.  With
    ``rigorous=False`` the ``2 pi`` is dropped, giving the heuristic
    ``E R / (hbar c)`` nats converted to bits.
    """
    if not (energy > 0 and radius > 0):
        raise NonPositiveError("energy and radius must be positive")
    nats = energy * radius / (HBAR * C_LIGHT)
    if rigorous:
        nats *= 2 * math.pi
    return nats / math.log(2.0)


def processing_rate(energy: float) -> float:
    """Maximum processing rate ``E / (2 hbar)`` converted to bits per second."""
    if not energy > 0:
        raise NonPositiveError("energy must be positive")
    return energy / (2 * HBAR) / math.log(2.0)
