"""Dense complex linear algebra shared by every other module.

Matrices are plain :class:`numpy.ndarray` objects of complex dtype.  Composite
systems follow the Kronecker convention: for dimensions ``(d_A, d_B)`` the basis
vector ``|i>_A |j>_B`` sits at flat index ``i * d_B + j``, so the first factor is
the slow index.  Partial traces and transposes take an explicit ``dims`` list.
"""

from __future__ import annotations

from functools import reduce
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DimMismatchError, DomainError, NonSquareError, NotHermitianError

#: Asymmetry tolerated by :func:`hermitian_eig` before raising.
HERMITIAN_TOL = 1e-9
#: Negative eigenvalues down to ``-CLIP_TOL`` are treated as roundoff and set to 0.
CLIP_TOL = 1e-10


class HermitianEig(NamedTuple):
    """Spectral decomposition ``m = V diag(eigenvalues) V^dagger``.

    ``eigenvalues`` are real and ascending; column ``k`` of ``eigenvectors`` is
    the eigenvector of ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Convert ``m`` to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimMismatchError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DimMismatchError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains NaN or infinite entries")
    return arr


def as_square(m, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise NonSquareError(f"{name} must be square, got shape {arr.shape}")
    return arr


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    arr = np.asarray(m)
    return arr.ndim == 2 and arr.shape[0] == arr.shape[1] and bool(
        np.max(np.abs(arr - arr.conj().T), initial=0.0) <= tol
    )


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    Args:
        m: Square complex matrix with ``max|m - m^dagger| <= tol``.
        tol: Hermiticity tolerance.

    Returns:
        :class:`HermitianEig` with ascending eigenvalues.

    Raises:
        NonSquareError: ``m`` is not square.
        NotHermitianError: asymmetry exceeds ``tol``.
    """
    arr = as_square(m)
    asym = np.max(np.abs(arr - arr.conj().T))
    if asym > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max asymmetry {asym:.3g})")
    w, v = np.linalg.eigh(0.5 * (arr + arr.conj().T))
    return HermitianEig(w, v)


def clip_eigenvalues(w: np.ndarray, tol: float = CLIP_TOL) -> np.ndarray:
    """Apply the PSD clipping policy to a vector of eigenvalues.

    Values in ``[-tol, 0)`` become 0.  Anything more negative raises
    :class:`DomainError`, because it cannot be explained by roundoff.
    """
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -tol:
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {w.min():.3g})")
    return np.where(w < 0, 0.0, w)


def mat_func(m, f: Callable[[np.ndarray], np.ndarray], psd: bool = False) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Args:
        m: Hermitian matrix.
        f: Vectorised real function applied to the eigenvalues.
        psd: Apply the eigenvalue clipping policy first.  Use this for
            ``sqrt`` and ``log``; ``log`` of an exact zero still yields ``-inf``
            and is reported as a :class:`DomainError`.

    Returns:
        ``V diag(f(lambda)) V^dagger``.
    """
    w, v = hermitian_eig(m)
    if psd:
        w = clip_eigenvalues(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        fw = np.asarray(f(w))
    if not np.all(np.isfinite(fw)):
        raise DomainError("function is undefined on part of the spectrum")
    return (v * fw) @ v.conj().T


def sqrtm_psd(m) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix."""
    return mat_func(m, np.sqrt, psd=True)


def tensor(*ms) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), first factor slowest."""
    if not ms:
        raise DimMismatchError("tensor needs at least one factor")
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in ms))


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimMismatchError(f"invalid subsystem dimensions {dims}")
    if m.shape[0] != m.shape[1] or int(np.prod(dims)) != m.shape[0]:
        raise DimMismatchError(f"dims {dims} do not match matrix shape {m.shape}")
    return dims


def _as_index_list(idx, n: int) -> list[int]:
    idx = [idx] if np.isscalar(idx) else list(idx)
    for k in idx:
        if not 0 <= k < n:
            raise DimMismatchError(f"subsystem index {k} out of range for {n} subsystems")
    return sorted(set(int(k) for k in idx))


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Args:
        m: Square matrix on ``prod(dims)``.
        dims: Subsystem dimensions.
        keep: Index or list of indices of the subsystems to keep.

    Returns:
        Reduced matrix on the kept subsystems, in their original order.

    Examples:
        >>> bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        >>> partial_trace(np.outer(bell, bell), (2, 2), 0).real
        array([[0.5, 0. ],
               [0. , 0.5]])
    """
    arr = as_square(m)
    dims = _check_dims(arr, dims)
    n = len(dims)
    keep = _as_index_list(keep, n)
    t = arr.reshape(dims + dims)
    # Trace subsystems from the highest index down so axis numbers stay valid.
    cur = n
    for k in reversed(range(n)):
        if k not in keep:
            t = np.trace(t, axis1=k, axis2=k + cur)
            cur -= 1
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)


def partial_transpose(m, dims: Sequence[int], which) -> np.ndarray:
    """Transpose the listed subsystems of ``m`` in the computational basis."""
    arr = as_square(m)
    dims = _check_dims(arr, dims)
    n = len(dims)
    which = _as_index_list(which, n)
    perm = list(range(2 * n))
    for k in which:
        perm[k], perm[n + k] = perm[n + k], perm[k]
    return arr.reshape(dims + dims).transpose(perm).reshape(arr.shape)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)


def matrix_to_json(m) -> dict:
    """Serialise a matrix to ``{"rows", "cols", "data": [[re, im], ...]}`` (row-major)."""
    arr = as_matrix(m)
    flat = arr.reshape(-1)
    return {
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`."""
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError) as exc:
        raise DimMismatchError(f"malformed matrix object: {exc}") from None
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise DimMismatchError(f"matrix data has {len(data)} entries, expected {rows}x{cols}")
    vals = np.array([complex(re, im) for re, im in data], dtype=complex)
    return as_matrix(vals.reshape(rows, cols))
