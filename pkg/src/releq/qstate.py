"""Pure and mixed quantum states.

Kets are 1-D complex arrays and density matrices are 2-D complex arrays; the
subsystem structure is passed separately as ``dims`` wherever it matters.  This
module provides validation, the Schmidt decomposition, purification, fidelity
and the Bures distance, and seeded random-state generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import BadRankError, DimMismatchError, InvalidStateError, NotBipartiteError
from .matcore import (
    as_square,
    clip_eigenvalues,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    sqrtm_psd,
)

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
SCHMIDT_ZERO = 1e-12

#: Single-qubit Pauli matrices.
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def bell_state(name: str = "phi+") -> np.ndarray:
    """One of the four Bell kets: ``"phi+"``, ``"phi-"``, ``"psi+"``, ``"psi-"``."""
    s = 1 / np.sqrt(2)
    table = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    try:
        return np.array(table[name], dtype=complex)
    except KeyError:
        raise ValueError(f"unknown Bell state {name!r}") from None


def basis_ket(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def as_ket(psi, dims: Sequence[int] | None = None, tol: float = NORM_TOL) -> np.ndarray:
    """Validate a normalised state vector (and its ``dims`` if given)."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise InvalidStateError("ket must be a nonempty finite vector")
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise InvalidStateError(f"ket has norm {np.linalg.norm(v):.12g}, expected 1")
    if dims is not None and int(np.prod(dims)) != v.size:
        raise DimMismatchError(f"dims {tuple(dims)} do not match ket length {v.size}")
    return v


def ket_to_density(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def as_density(rho, dims: Sequence[int] | None = None) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, PSD up to clipping.

    A 1-D input is interpreted as a ket and converted to its projector.
    """
    arr = np.asarray(rho, dtype=complex)
    if arr.ndim == 1:
        arr = ket_to_density(as_ket(arr))
    arr = as_square(arr, "density matrix")
    try:
        w = hermitian_eig(arr).eigenvalues
    except ValueError as exc:
        raise InvalidStateError(str(exc)) from None
    if abs(np.trace(arr).real - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"density matrix has trace {np.trace(arr).real:.12g}")
    if w.min() < -1e-10:
        raise InvalidStateError(f"density matrix has negative eigenvalue {w.min():.3g}")
    if dims is not None and int(np.prod(dims)) != arr.shape[0]:
        raise DimMismatchError(f"dims {tuple(dims)} do not match matrix size {arr.shape[0]}")
    return 0.5 * (arr + arr.conj().T)


def bipartite_dims(n: int, dims: Sequence[int] | None) -> tuple[int, int]:
    """Resolve ``(d_A, d_B)``; without ``dims`` the space must split into equal halves."""
    if dims is None:
        d = int(round(np.sqrt(n)))
        if d * d != n:
            raise NotBipartiteError(f"cannot infer a bipartition of dimension {n}; pass dims")
        return d, d
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise NotBipartiteError(f"expected two subsystem dimensions, got {dims}")
    if dims[0] * dims[1] != n:
        raise DimMismatchError(f"dims {dims} do not match dimension {n}")
    return dims


def reduced_states(rho, dims=None) -> tuple[np.ndarray, np.ndarray]:
    """Marginals ``(rho_A, rho_B)`` of a bipartite density matrix or ket."""
    arr = np.asarray(rho, dtype=complex)
    if arr.ndim == 1:
        arr = ket_to_density(arr)
    dims = bipartite_dims(arr.shape[0], dims)
    return partial_trace(arr, dims, 0), partial_trace(arr, dims, 1)


def purity(rho) -> float:
    arr = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(arr @ arr)))


# --------------------------------------------------------------------------
# Schmidt decomposition


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``|psi> = sum_n coeffs[n] |basis_a[:, n]> |basis_b[:, n]>``.

    ``coeffs`` are nonnegative and descending.  There are ``min(d_A, d_B)``
    terms; trailing coefficients may be zero.
    """

    coeffs: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.sum(self.coeffs > SCHMIDT_ZERO))

    def reassemble(self) -> np.ndarray:
        return np.einsum("n,an,bn->ab", self.coeffs, self.basis_a, self.basis_b).reshape(-1)


def _complete_columns(vecs: np.ndarray, ok: np.ndarray) -> np.ndarray:
    """Replace the columns of ``vecs`` not flagged in ``ok`` by an orthonormal
    extension of the flagged ones."""
    good = vecs[:, ok]
    fill = null_space(good.conj().T) if good.size else np.eye(vecs.shape[0], dtype=complex)
    out = vecs.copy()
    out[:, ~ok] = fill[:, : int(np.sum(~ok))]
    return out


def schmidt(psi, dims: Sequence[int]) -> SchmidtDecomposition:
    """Schmidt decomposition of a bipartite pure state.

    The reduced density matrix of the smaller factor is diagonalised; its
    eigenvalues are the squared coefficients and its eigenvectors one Schmidt
    basis.  The partner vectors follow by expanding the state in that basis and
    dividing by the coefficient.  Partners of zero coefficients are filled in
    by orthonormal extension.

    Args:
        psi: Normalised ket on ``d_A * d_B``.
        dims: ``(d_A, d_B)``.

    Examples:
        >>> sd = schmidt(bell_state("psi+"), (2, 2))
        >>> np.round(sd.coeffs, 6)
        array([0.707107, 0.707107])
    """
    v = as_ket(psi)
    d_a, d_b = bipartite_dims(v.size, dims)
    c = v.reshape(d_a, d_b)
    swap = d_a > d_b
    if swap:
        c = c.T
    # c has shape (small, large); reduced state of the small side.
    w, u = hermitian_eig(c @ c.conj().T)
    order = np.argsort(w)[::-1]
    w, u = clip_eigenvalues(w[order]), u[:, order]
    g = np.sqrt(w)
    partner = (u.conj().T @ c).T  # column n holds sum_m c'_{nm} |m>
    ok = g > SCHMIDT_ZERO
    partner[:, ok] /= g[ok]
    if not np.all(ok):
        partner = _complete_columns(partner, ok)
    if swap:
        return SchmidtDecomposition(g, partner, u)
    return SchmidtDecomposition(g, u, partner)


def purify(rho) -> np.ndarray:
    """A purification ``sum_i sqrt(lambda_i) |e_i>|i>`` on ``d * d``.

    The eigenvalues are ordered descending, so a pure input ``|e><e|`` maps to
    ``|e>|0>``.  Tracing out the second factor returns ``rho``.
    """
    arr = as_density(rho)
    w, v = hermitian_eig(arr)
    order = np.argsort(w)[::-1]
    w, v = clip_eigenvalues(w[order]), v[:, order]
    return (v * np.sqrt(w)).reshape(-1)


# --------------------------------------------------------------------------
# Distances


def _same_shape(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise DimMismatchError(f"states have shapes {a.shape} and {b.shape}")


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``Tr sqrt(sqrt(rho) sigma sqrt(rho))``.

    Computed as the nuclear norm of ``sqrt(rho) sqrt(sigma)``, which is the
    same quantity and symmetric by construction.
    """
    a, b = as_density(rho), as_density(sigma)
    _same_shape(a, b)
    s = np.linalg.svd(sqrtm_psd(a) @ sqrtm_psd(b), compute_uv=False)
    return float(min(1.0, s.sum()))


def bures_distance(rho, sigma) -> float:
    """Bures distance ``sqrt(1 - F^2)``."""
    f = fidelity(rho, sigma)
    return float(np.sqrt(max(0.0, 1.0 - f * f)))


def trace_distance(rho, sigma) -> float:
    """``(1/2) ||rho - sigma||_1``."""
    a, b = np.asarray(rho, dtype=complex), np.asarray(sigma, dtype=complex)
    _same_shape(a, b)
    return float(0.5 * np.abs(np.linalg.eigvalsh(0.5 * ((a - b) + (a - b).conj().T))).sum())


# --------------------------------------------------------------------------
# Random states


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    rng = _rng(seed)
    g = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(dim: int, seed=None) -> np.ndarray:
    """Haar-random pure state (normalised isotropic complex Gaussian)."""
    rng = _rng(seed)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Random density matrix of the given rank.

    Obtained by tracing out a ``rank``-dimensional ancilla from a Haar-random
    pure state on ``dim * rank`` (induced measure).  ``rank`` defaults to ``dim``.
    """
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise BadRankError(f"rank must lie in [1, {dim}], got {rank}")
    psi = random_state(dim * rank, seed).reshape(dim, rank)
    rho = psi @ psi.conj().T
    return 0.5 * (rho + rho.conj().T) / np.trace(rho).real


# --------------------------------------------------------------------------
# JSON


def ket_to_json(psi, dims: Sequence[int]) -> dict:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    return {"dims": [int(d) for d in dims], "amps": [[float(z.real), float(z.imag)] for z in v]}


def ket_from_json(obj: dict) -> tuple[np.ndarray, tuple[int, ...]]:
    try:
        amps = np.array([complex(re, im) for re, im in obj["amps"]], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError(f"malformed ket object: {exc}") from None
    dims = tuple(obj.get("dims", [amps.size]))
    return as_ket(amps, dims), dims


def density_to_json(rho, dims: Sequence[int]) -> dict:
    out = matrix_to_json(rho)
    out["dims"] = [int(d) for d in dims]
    return out


def density_from_json(obj: dict) -> tuple[np.ndarray, tuple[int, ...]]:
    """Load a density matrix; a ket object (with ``"amps"``) is also accepted."""
    if "amps" in obj:
        psi, dims = ket_from_json(obj)
        return ket_to_density(psi), dims
    rho = matrix_from_json(obj)
    dims = tuple(obj.get("dims", [rho.shape[0]]))
    return as_density(rho, dims), dims
