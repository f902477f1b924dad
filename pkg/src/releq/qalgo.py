"""Query algorithms viewed as correlation between a memory and a computer register.

The memory register ``M`` holds the unknown (the oracle's function or the
marked item) as a classical uniform mixture over branches; the computational
register ``C`` evolves unitarily in each branch.  The mutual information
``I(M:C)`` after ``k`` oracle calls equals the Holevo quantity of the branch
states of ``C``, ``S(mean_i rho_i) - mean_i S(rho_i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import OutOfRangeError, TooLargeError
from .qentropy import entropy_of_spectrum, von_neumann
from .qstate import H, X, as_density, bures_distance, fidelity, ket_to_density

# --------------------------------------------------------------------------
# Deutsch


@dataclass(frozen=True)
class DeutschResult:
    verdict: str
    queries_used: int
    holevo_diag: float
    first_qubit: np.ndarray


def _oracle(f: tuple[int, int]) -> np.ndarray:
    """``|x>|y> -> |x>|y XOR f(x)>`` as a 4x4 permutation matrix."""
    u = np.zeros((4, 4))
    for x in (0, 1):
        for y in (0, 1):
            u[2 * x + (y ^ f[x]), 2 * x + y] = 1.0
    return u


def _parse_truth_table(f) -> tuple[int, int]:
    vals = tuple(int(c) for c in f) if isinstance(f, str) else tuple(int(v) for v in f)
    if len(vals) != 2 or any(v not in (0, 1) for v in vals):
        raise OutOfRangeError(f"expected a truth table (f(0), f(1)) of bits, got {f!r}")
    return vals


def _deutsch_first_qubit(f: tuple[int, int], rho_in: np.ndarray) -> np.ndarray:
    minus = np.array([1, -1]) / math.sqrt(2)
    hh = np.kron(H, np.eye(2))
    state = np.kron(H @ rho_in @ H, np.outer(minus, minus))
    u = hh @ _oracle(f)
    out = u @ state @ u.conj().T
    return np.einsum("ajbj->ab", out.reshape(2, 2, 2, 2))


def deutsch(f, purity: float = 1.0) -> DeutschResult:
    """Decide whether a one-bit function is constant or balanced with one query.

    Args:
        f: Truth table ``(f(0), f(1))`` as a tuple or string such as ``"01"``.
        purity: Weight ``p`` of ``|0>`` in the first qubit's input
            ``p|0><0| + (1-p)|1><1|``.  Below 1 the two output classes overlap
            and the Holevo diagnostic drops to ``1 - H_2(p)``.

    Returns:
        :class:`DeutschResult`.  ``holevo_diag`` is the Holevo quantity of the
        first qubit's output for the constant and the balanced class.
    """
    tt = _parse_truth_table(f)
    if not 0.0 <= purity <= 1.0:
        raise OutOfRangeError("purity must lie in [0, 1]")
    rho_in = np.diag([purity, 1 - purity]).astype(complex)
    out = _deutsch_first_qubit(tt, rho_in)
    p0 = float(out[0, 0].real)
    verdict = "constant" if p0 >= 0.5 else "varying"
    rho_const = _deutsch_first_qubit((0, 0), rho_in)
    rho_bal = _deutsch_first_qubit((0, 1), rho_in)
    avg = 0.5 * (rho_const + rho_bal)
    diag = von_neumann(avg) - 0.5 * (von_neumann(rho_const) + von_neumann(rho_bal))
    return DeutschResult(verdict, 1, max(diag, 0.0), out)


# --------------------------------------------------------------------------
# Grover with a classical memory register


def hadamard_n(n: int) -> np.ndarray:
    return reduce(np.kron, [H] * n) if n else np.eye(1)


def initial_register(n: int, p: float) -> np.ndarray:
    """``(p|0><0| + (1-p)|1><1|)`` on each of ``n`` qubits."""
    one = np.diag([p, 1 - p])
    return reduce(np.kron, [one] * n).astype(complex)


@dataclass(frozen=True)
class GroverStep:
    k: int
    mutual_info: float
    s_avg: float
    bures_step: float
    fidelity_step: float


@dataclass
class GroverTrace:
    """Mutual information between memory and computer after each block.

    ``avg_states[k]`` is the branch-averaged ``C`` state after ``k`` blocks and
    ``marked_states[k]`` the state of the branch ``marked``.
    """

    n_qubits: int
    p: float
    marked: int
    s0: float
    steps: list[GroverStep]
    branch_entropies: np.ndarray
    avg_states: list[np.ndarray] = field(repr=False)
    marked_states: list[np.ndarray] = field(repr=False)

    @property
    def N(self) -> int:
        return 2**self.n_qubits

    @property
    def mutual_info(self) -> np.ndarray:
        return np.array([s.mutual_info for s in self.steps])

    @property
    def s_avg(self) -> np.ndarray:
        return np.array([s.s_avg for s in self.steps])


def grover_block(n: int, marked: int) -> np.ndarray:
    """One block ``f0 H U H`` for the branch whose solution is ``marked``.

    ``U`` flips the phase of ``|marked>`` and ``f0`` the phase of ``|0...0>``.
    """
    big_n = 2**n
    hn = hadamard_n(n)
    u = np.ones(big_n)
    u[marked] = -1
    f0 = np.ones(big_n)
    f0[0] = -1
    return (f0[:, None] * hn) @ (u[:, None] * hn)


def grover_trace(n_qubits: int, p: float = 1.0, k_max: int = 40, marked: int = 0) -> GroverTrace:
    """Simulate ``k_max`` Grover blocks for every possible solution.

    Every branch ``i = 0..N-1`` starts from the same ``C`` state
    :func:`initial_register` and is evolved by its own block
    :func:`grover_block`; the memory prior is uniform.

    Args:
        n_qubits: Size of the ``C`` register (at most 6).
        p: Per-qubit weight of ``|0>`` in the initial ``C`` state.
        k_max: Number of blocks.
        marked: Branch whose states are kept in ``marked_states``.
    """
    if n_qubits > 6:
        raise TooLargeError("grover_trace simulates at most 6 qubits")
    if n_qubits < 1:
        raise OutOfRangeError("n_qubits must be positive")
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError("p must lie in [0, 1]")
    big_n = 2**n_qubits
    if not 0 <= marked < big_n:
        raise OutOfRangeError(f"marked must lie in [0, {big_n})")
    rho0 = initial_register(n_qubits, p)
    s0 = entropy_of_spectrum(np.diag(rho0).real)
    blocks = np.stack([grover_block(n_qubits, i) for i in range(big_n)])
    states = np.repeat(rho0[None], big_n, axis=0)
    avg_states, marked_states, steps, branch_s = [], [], [], []
    prev = None
    for k in range(k_max + 1):
        if k > 0:
            states = blocks @ states @ blocks.conj().transpose(0, 2, 1)
        avg = states.mean(axis=0)
        avg = 0.5 * (avg + avg.conj().T)
        s_avg = entropy_of_spectrum(np.linalg.eigvalsh(avg))
        bs = np.array([entropy_of_spectrum(np.linalg.eigvalsh(s)) for s in states])
        mi = max(0.0, s_avg - float(bs.mean()))
        if prev is None:
            bures, fid = 0.0, 1.0
        else:
            fid = fidelity(prev, avg)
            bures = bures_distance(prev, avg)
        steps.append(GroverStep(k, mi, s_avg, bures, fid))
        branch_s.append(bs)
        avg_states.append(avg)
        marked_states.append(states[marked].copy())
        prev = avg
    return GroverTrace(n_qubits, p, marked, s0, steps, np.array(branch_s), avg_states, marked_states)


def memory_computer_state(branch_states, probs=None) -> np.ndarray:
    """``rho_MC = sum_i p_i |i><i| (x) rho_i`` with ``M`` as the first factor."""
    n = len(branch_states)
    probs = np.full(n, 1.0 / n) if probs is None else np.asarray(probs, dtype=float)
    d = branch_states[0].shape[0]
    out = np.zeros((n * d, n * d), dtype=complex)
    for i, (p, r) in enumerate(zip(probs, branch_states)):
        out[i * d : (i + 1) * d, i * d : (i + 1) * d] = p * r
    return out


def grover_branch_states(n_qubits: int, p: float, k: int) -> list[np.ndarray]:
    """All ``N`` branch states of ``C`` after ``k`` blocks."""
    rho = initial_register(n_qubits, p)
    out = []
    for i in range(2**n_qubits):
        b = np.linalg.matrix_power(grover_block(n_qubits, i), k)
        out.append(b @ rho @ b.conj().T)
    return out


@dataclass(frozen=True)
class StepBound:
    k: int
    delta_s: float
    bound: float


@dataclass(frozen=True)
class StepBoundReport:
    """Entropy change per block against the continuity bound
    ``d log2 N - d log2 d`` with ``d`` the Bures distance between consecutive
    averaged ``C`` states.

    ``first_step_cap`` is ``(3/sqrt N) log2 N`` and ``query_floor`` the number
    of blocks ``sqrt(N)/3`` that this cap implies are needed to build
    ``log2 N`` bits of correlation.
    """

    rows: list[StepBound]
    first_step_cap: float
    first_step_fidelity: float
    fidelity_floor: float
    query_floor: float

    @property
    def all_within(self) -> bool:
        return all(r.delta_s <= r.bound + 1e-9 for r in self.rows)


def continuity_bound(d_bures: float, big_n: int) -> float:
    if d_bures <= 0:
        return 0.0
    return d_bures * math.log2(big_n) - d_bures * math.log2(d_bures)


def step_bound_check(trace: GroverTrace) -> StepBoundReport:
    """Compare every recorded entropy step with the Bures continuity bound."""
    big_n = trace.N
    rows = []
    for prev, cur in zip(trace.steps, trace.steps[1:]):
        ds = abs(cur.s_avg - prev.s_avg)
        if ds < 1e-12:
            ds = 0.0
        rows.append(StepBound(cur.k, ds, continuity_bound(cur.bures_step, big_n)))
    first_fid = trace.steps[1].fidelity_step if len(trace.steps) > 1 else 1.0
    return StepBoundReport(
        rows,
        3 / math.sqrt(big_n) * math.log2(big_n),
        first_fid,
        (big_n - 2) / big_n,
        math.sqrt(big_n) / 3,
    )


# --------------------------------------------------------------------------
# Bitwise oracle


@dataclass(frozen=True)
class BitwiseTrace:
    n_qubits: int
    mutual_info: np.ndarray  # after 0, 1, ..., n queries

    @property
    def queries_to_full_correlation(self) -> int:
        target = self.n_qubits
        hits = np.flatnonzero(self.mutual_info >= target - 1e-9)
        return int(hits[0]) if hits.size else -1

    @property
    def gains(self) -> np.ndarray:
        return np.diff(self.mutual_info)


def bitwise_oracle(n: int, bit: int, solution: int) -> np.ndarray:
    """Diagonal phase ``(-1)^(i_k j_k)`` on ``C``: qubit ``bit`` of ``C`` picks up a
    sign when both it and bit ``bit`` of the solution ``i`` are 1.  Bit 0 is the
    most significant."""
    shift = n - 1 - bit
    sol_bit = (solution >> shift) & 1
    j = np.arange(2**n)
    return np.where(sol_bit & ((j >> shift) & 1), -1.0, 1.0)


def bitwise_oracle_trace(n_qubits: int) -> BitwiseTrace:
    """Search with an oracle that answers one bit position per query.

    ``C`` starts in ``|+>^n``.  Query ``k`` applies :func:`bitwise_oracle` on
    qubit ``k`` followed by a Hadamard on that qubit, which writes bit ``k`` of
    the solution into ``C`` and adds one bit of memory-computer correlation.
    """
    if n_qubits > 6:
        raise TooLargeError("bitwise_oracle_trace simulates at most 6 qubits")
    if n_qubits < 1:
        raise OutOfRangeError("n_qubits must be positive")
    big_n = 2**n_qubits
    plus = np.full(big_n, 1 / math.sqrt(big_n), dtype=complex)
    kets = np.repeat(plus[None], big_n, axis=0)  # one ket per solution branch
    mi = [0.0]
    for k in range(n_qubits):
        had = reduce(np.kron, [H if q == k else np.eye(2) for q in range(n_qubits)])
        for i in range(big_n):
            kets[i] = had @ (bitwise_oracle(n_qubits, k, i) * kets[i])
        avg = kets.T @ kets.conj() / big_n
        mi.append(entropy_of_spectrum(np.linalg.eigvalsh(0.5 * (avg + avg.conj().T))))
    return BitwiseTrace(n_qubits, np.array(mi))


def no_speedup_predicate(s0_bits: float, n_qubits: int) -> bool:
    """Sufficient (not necessary) condition for no quantum speed-up: the initial
    ``C`` entropy is at least half the register size, ``S0 >= n/2`` bits."""
    if s0_bits < 0:
        raise OutOfRangeError("entropy must be nonnegative")
    return s0_bits >= n_qubits / 2
