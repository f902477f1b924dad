"""Completely positive trace-preserving maps in Kraus form.

A :class:`KrausChannel` is validated once at construction
(``sum_i A_i^dagger A_i = I``) and then applied to density matrices either
non-selectively (the usual channel output) or selectively (one normalised
branch per Kraus operator).  :meth:`KrausChannel.dilate` builds a unitary on
system plus ancilla that reproduces the channel after tracing out the ancilla.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import (
    DimMismatchError,
    IncompleteEffectsError,
    NegativeEffectError,
    NotTracePreservingError,
)
from .matcore import as_square, hermitian_eig, matrix_from_json, matrix_to_json, partial_trace, partial_transpose
from .qstate import _rng, as_density, basis_ket, bipartite_dims, random_unitary

COMPLETENESS_TOL = 1e-9
BRANCH_CUTOFF = 1e-14
PPT_TOL = 1e-10


@dataclass(frozen=True)
class Dilation:
    """Unitary ``U`` on system (x) ancilla with ancilla start state ``|alpha>``.

    The system is the first (slow) tensor factor and the ancilla has dimension
    equal to the number of Kraus operators.
    """

    unitary: np.ndarray
    ancilla_state: np.ndarray

    @property
    def ancilla_dim(self) -> int:
        return self.ancilla_state.size

    def apply(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        d, k = rho.shape[0], self.ancilla_dim
        full = np.kron(rho, np.outer(self.ancilla_state, self.ancilla_state.conj()))
        out = self.unitary @ full @ self.unitary.conj().T
        return partial_trace(out, (d, k), 0)


class KrausChannel:
    """A CPTP map ``rho -> sum_i A_i rho A_i^dagger``.

    Args:
        ops: Kraus operators, all ``d x d``.
        tol: Tolerance on the completeness relation.

    Raises:
        NotTracePreservingError: if ``sum A^dagger A`` differs from the identity.

    Examples:
        >>> dephase = KrausChannel([np.diag([1, 0]), np.diag([0, 1])])
        >>> plus = np.full((2, 2), 0.5)
        >>> dephase.apply(plus).real
        array([[0.5, 0. ],
               [0. , 0.5]])
    """

    def __init__(self, ops: Sequence, tol: float = COMPLETENESS_TOL):
        mats = [as_square(a, "Kraus operator") for a in ops]
        if not mats:
            raise NotTracePreservingError("a channel needs at least one Kraus operator")
        d = mats[0].shape[0]
        if any(a.shape != (d, d) for a in mats):
            raise DimMismatchError("Kraus operators must share one square shape")
        self.ops = np.stack(mats)
        self.ops.setflags(write=False)
        gap = np.max(np.abs(np.einsum("kji,kjl->il", self.ops.conj(), self.ops) - np.eye(d)))
        if gap > tol:
            raise NotTracePreservingError(f"completeness relation violated by {gap:.3g}")

    @property
    def dim(self) -> int:
        return self.ops.shape[1]

    @property
    def num_ops(self) -> int:
        return self.ops.shape[0]

    def __repr__(self):
        return f"KrausChannel(dim={self.dim}, num_ops={self.num_ops})"

    def _check(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape != (self.dim, self.dim):
            raise DimMismatchError(f"state of shape {rho.shape} does not fit a {self.dim}-dim channel")
        return rho

    def apply(self, rho) -> np.ndarray:
        """Channel output.  ``rho`` need only be square of matching size, so the
        map can also act on unnormalised operators."""
        rho = self._check(rho)
        out = np.einsum("kij,jl,kml->im", self.ops, rho, self.ops.conj())
        return 0.5 * (out + out.conj().T)

    def branches(self, rho) -> list[np.ndarray]:
        """Unnormalised branch operators ``A_i rho A_i^dagger`` (one per Kraus op)."""
        rho = self._check(rho)
        return [a @ rho @ a.conj().T for a in self.ops]

    def selective_apply(self, rho) -> list[tuple[float, np.ndarray]]:
        """Measurement update: ``[(p_j, A_j rho A_j^dagger / p_j), ...]``.

        Branches with ``p_j < 1e-14`` are dropped.
        """
        out = []
        for b in self.branches(as_density(rho)):
            p = float(np.trace(b).real)
            if p >= BRANCH_CUTOFF:
                b = b / p
                out.append((p, 0.5 * (b + b.conj().T)))
        return out

    def dilate(self) -> Dilation:
        """Unitary dilation ``U`` with ``Tr_anc U (rho (x) |0><0|) U^dagger = apply(rho)``.

        The isometry ``W|s>|0> = sum_i A_i|s>|i>`` fixes ``d`` columns of ``U``;
        the remaining columns are an orthonormal basis of their complement.
        """
        d, k = self.dim, self.num_ops
        # iso[(s_out, i), s_in] = A_i[s_out, s_in]
        iso = self.ops.transpose(1, 0, 2).reshape(d * k, d)
        comp = null_space(iso.conj().T)
        u = np.zeros((d * k, d * k), dtype=complex)
        alpha_cols = np.arange(d) * k
        other_cols = np.setdiff1d(np.arange(d * k), alpha_cols)
        u[:, alpha_cols] = iso
        u[:, other_cols] = comp
        return Dilation(u, basis_ket(k, 0))

    def to_json(self) -> dict:
        return {"kraus": [matrix_to_json(a) for a in self.ops]}

    @classmethod
    def from_json(cls, obj: dict) -> "KrausChannel":
        if "kraus" not in obj:
            raise NotTracePreservingError("channel object needs a 'kraus' list")
        return cls([matrix_from_json(m) for m in obj["kraus"]])


def unitary_channel(u) -> KrausChannel:
    return KrausChannel([u])


def dephasing_channel(dim: int = 2) -> KrausChannel:
    """Complete dephasing in the computational basis."""
    return KrausChannel([np.outer(basis_ket(dim, i), basis_ket(dim, i)) for i in range(dim)])


def random_channel(dim: int, num_ops: int, seed=None) -> KrausChannel:
    """Random channel from a Haar unitary on ``dim * num_ops``.

    With ``U`` acting on system (x) environment and the environment starting
    in ``|0>``, the Kraus operators are ``A_i = <i|_env U |0>_env``.
    """
    u = random_unitary(dim * num_ops, _rng(seed)).reshape(dim, num_ops, dim, num_ops)
    return KrausChannel([u[:, i, :, 0] for i in range(num_ops)])


def povm_probs(effects: Sequence, rho, tol: float = COMPLETENESS_TOL) -> np.ndarray:
    """Outcome probabilities ``Tr(rho E_i)`` of a POVM.

    Raises:
        NegativeEffectError: an effect has an eigenvalue below ``-tol``.
        IncompleteEffectsError: the effects do not sum to the identity.
    """
    rho = as_density(rho)
    effs = [as_square(e, "effect") for e in effects]
    if not effs:
        raise IncompleteEffectsError("POVM has no effects")
    if any(e.shape != rho.shape for e in effs):
        raise DimMismatchError("effects and state differ in dimension")
    for e in effs:
        if hermitian_eig(e).eigenvalues.min() < -tol:
            raise NegativeEffectError("POVM effect is not positive semidefinite")
    gap = np.max(np.abs(sum(effs) - np.eye(rho.shape[0])))
    if gap > tol:
        raise IncompleteEffectsError(f"effects do not sum to the identity (gap {gap:.3g})")
    p = np.array([np.trace(rho @ e).real for e in effs])
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def random_povm(dim: int, num_effects: int, seed=None) -> list[np.ndarray]:
    """Random POVM: random PSD operators ``G_i`` normalised as ``S^-1/2 G_i S^-1/2``."""
    rng = _rng(seed)
    gs = []
    for _ in range(num_effects):
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        gs.append(m @ m.conj().T)
    w, v = np.linalg.eigh(sum(gs))
    s_inv_half = (v / np.sqrt(w)) @ v.conj().T
    return [0.5 * (e + e.conj().T) for e in (s_inv_half @ g @ s_inv_half for g in gs)]


def projective_measurement(basis) -> list[np.ndarray]:
    """Rank-one projectors onto the columns of a unitary ``basis``."""
    b = np.asarray(basis, dtype=complex)
    return [np.outer(b[:, i], b[:, i].conj()) for i in range(b.shape[1])]


@dataclass(frozen=True)
class PPTResult:
    """Outcome of the partial-transpose test.

    ``conclusive`` is true for ``2x2`` and ``2x3`` systems, where a positive
    partial transpose is equivalent to separability; elsewhere a PPT verdict is
    only a necessary condition for separability.
    """

    min_eig: float
    is_ppt: bool
    conclusive: bool


def ppt_check(rho, dims=None, tol: float = PPT_TOL) -> PPTResult:
    """Smallest eigenvalue of the partial transpose over ``B``.

    >>> from releq.qstate import bell_state, ket_to_density
    >>> r = ppt_check(ket_to_density(bell_state("psi-")), (2, 2))
    >>> round(r.min_eig, 12), r.is_ppt
    (-0.5, False)
    """
    rho = as_density(rho)
    d_a, d_b = bipartite_dims(rho.shape[0], dims)
    m = float(hermitian_eig(partial_transpose(rho, (d_a, d_b), 1)).eigenvalues[0])
    return PPTResult(m, m >= -tol, d_a * d_b <= 6)
