"""Entanglement measures.

* :func:`pure_entanglement`: entropy of either marginal of a pure state.
* :func:`ree`: relative entropy of entanglement ``min_{sigma sep} S(rho||sigma)``,
  found numerically over mixtures of ``K`` product states.
* :func:`ensemble_entanglement`: average pure-state entanglement of an explicit
  decomposition, verified against the memory-flagged construction.
* :func:`entanglement_loss_bound`, :func:`cgdc_bound`,
  :func:`assistance_upper_bound`: inequalities that bound these quantities.

REE optimisation
----------------
A separable candidate is ``sigma = sum_k q_k |a_k><a_k| (x) |b_k><b_k|``.  The
weights are ``q = w**2 / sum(w**2)`` and the kets are normalised complex
vectors, so every parameter vector gives a valid separable state.  The
objective ``-Tr rho log sigma_eps - S(rho)`` uses the slightly mixed
``sigma_eps = (1 - eps) sigma + eps I/d`` to keep the logarithm finite, and its
exact gradient comes from the divided-difference (Daleckii-Krein) formula for
the derivative of the matrix logarithm.  L-BFGS is restarted from several
random points and the best result kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .classical_info import log_base, shannon_entropy
from .errors import NotPureError, NotTwoQubitError, TooLargeError
from .matcore import hermitian_eig, tensor
from .qentropy import Ensemble, holevo, qrelent, von_neumann
from .qstate import _rng, as_density, as_ket, bipartite_dims, ket_to_density, reduced_states, schmidt

REG_EPS = 1e-9
MAX_DIM = 16


def pure_entanglement(psi, dims=None, units: str = "bits") -> float:
    """Entanglement of a bipartite pure state: Shannon entropy of the squared
    Schmidt coefficients.

    >>> from releq.qstate import bell_state
    >>> round(pure_entanglement(bell_state(), (2, 2)), 12)
    1.0
    """
    v = as_ket(psi)
    sd = schmidt(v, bipartite_dims(v.size, dims))
    g2 = sd.coeffs**2
    return shannon_entropy(g2 / g2.sum(), units)


# --------------------------------------------------------------------------
# Separable ansatz and REE objective


@dataclass(frozen=True)
class SeparableAnsatz:
    """Mixture of product pure states ``sum_k weights[k] |a_k><a_k| (x) |b_k><b_k|``.

    ``kets_a`` has shape ``(K, d_A)`` and ``kets_b`` shape ``(K, d_B)``.
    """

    weights: np.ndarray
    kets_a: np.ndarray
    kets_b: np.ndarray

    @property
    def dims(self) -> tuple[int, int]:
        return self.kets_a.shape[1], self.kets_b.shape[1]

    def assemble(self) -> np.ndarray:
        prods = np.einsum("ka,kb->kab", self.kets_a, self.kets_b).reshape(len(self.weights), -1)
        return np.einsum("k,ki,kj->ij", self.weights, prods, prods.conj())


def random_separable(dims: Sequence[int], components: int, seed=None) -> SeparableAnsatz:
    """Random separable state from ``components`` Haar product kets and Dirichlet weights."""
    rng = _rng(seed)
    d_a, d_b = dims

    def kets(d):
        v = rng.normal(size=(components, d)) + 1j * rng.normal(size=(components, d))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    return SeparableAnsatz(rng.dirichlet(np.ones(components)), kets(d_a), kets(d_b))


def log_derivative(sigma: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Frechet derivative of the matrix logarithm at ``sigma`` (positive definite)
    in direction ``x``, via the divided-difference kernel in the eigenbasis."""
    lam, v = np.linalg.eigh(sigma)
    lam = np.maximum(lam, 1e-300)
    loglam = np.log(lam)
    diff = lam[:, None] - lam[None, :]
    same = np.abs(diff) <= 1e-12 * np.maximum(lam[:, None], lam[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = np.where(same, 1.0 / lam[:, None], (loglam[:, None] - loglam[None, :]) / diff)
    return v @ (kern * (v.conj().T @ x @ v)) @ v.conj().T


class ReeObjective:
    """``S(rho || sigma(params))`` in nats for the separable ansatz, with gradient.

    The parameter vector packs ``w`` (``K`` reals) followed by the real and
    imaginary parts of the unnormalised kets ``x_a`` (``K x d_A``) and ``x_b``
    (``K x d_B``).
    """

    def __init__(self, rho, dims, components: int, eps: float = REG_EPS):
        self.rho = as_density(rho)
        self.dims = bipartite_dims(self.rho.shape[0], dims)
        self.k = int(components)
        self.eps = eps
        self.d = self.rho.shape[0]
        w = hermitian_eig(self.rho).eigenvalues
        w = w[w > 0]
        self.neg_entropy = float(np.sum(w * np.log(w)))

    @property
    def size(self) -> int:
        d_a, d_b = self.dims
        return self.k * (1 + 2 * d_a + 2 * d_b)

    def unpack(self, x: np.ndarray):
        d_a, d_b = self.dims
        k = self.k
        w = x[:k]
        off = k
        xa = x[off : off + k * d_a] + 1j * x[off + k * d_a : off + 2 * k * d_a]
        off += 2 * k * d_a
        xb = x[off : off + k * d_b] + 1j * x[off + k * d_b : off + 2 * k * d_b]
        return w, xa.reshape(k, d_a), xb.reshape(k, d_b)

    def pack(self, w, xa, xb) -> np.ndarray:
        return np.concatenate([w, xa.real.ravel(), xa.imag.ravel(), xb.real.ravel(), xb.imag.ravel()])

    def ansatz(self, x: np.ndarray) -> SeparableAnsatz:
        w, xa, xb = self.unpack(x)
        q = w**2 / np.sum(w**2)
        return SeparableAnsatz(
            q, xa / np.linalg.norm(xa, axis=1, keepdims=True), xb / np.linalg.norm(xb, axis=1, keepdims=True)
        )

    def regularise(self, sigma: np.ndarray) -> np.ndarray:
        return (1 - self.eps) * sigma + self.eps * np.eye(self.d) / self.d

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        d_a, d_b = self.dims
        k = self.k
        return np.concatenate([rng.uniform(0.5, 1.5, size=k), rng.normal(size=2 * k * (d_a + d_b))])

    def value(self, x: np.ndarray) -> float:
        return self.value_and_grad(x)[0]

    def value_and_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        d_a, d_b = self.dims
        w, xa, xb = self.unpack(x)
        wsum = np.sum(w**2)
        q = w**2 / wsum
        na = np.linalg.norm(xa, axis=1)
        nb = np.linalg.norm(xb, axis=1)
        a = xa / na[:, None]
        b = xb / nb[:, None]
        psi = np.einsum("ka,kb->kab", a, b).reshape(self.k, -1)
        sigma = self.regularise(np.einsum("k,ki,kj->ij", q, psi, psi.conj()))
        lam, v = np.linalg.eigh(sigma)
        lam = np.maximum(lam, 1e-300)
        loglam = np.log(lam)
        m = v.conj().T @ self.rho @ v
        f = self.neg_entropy - float(np.real(np.sum(np.diag(m) * loglam)))
        # G = df/dsigma = -(1 - eps) * Dlog_sigma[rho]
        diff = lam[:, None] - lam[None, :]
        same = np.abs(diff) <= 1e-12 * np.maximum(lam[:, None], lam[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            kern = np.where(same, 1.0 / lam[:, None], (loglam[:, None] - loglam[None, :]) / diff)
        g_mat = -(1 - self.eps) * (v @ (kern * m) @ v.conj().T)
        gpsi = psi @ g_mat.T  # row k holds (G psi_k)^T
        gk = np.real(np.sum(psi.conj() * gpsi, axis=1))  # <psi_k|G|psi_k>
        grad_w = 2 * w / wsum * (gk - np.dot(q, gk))
        gpsi = gpsi.reshape(self.k, d_a, d_b)
        h_a = q[:, None] * np.einsum("kab,kb->ka", gpsi, b.conj())
        h_b = q[:, None] * np.einsum("kab,ka->kb", gpsi, a.conj())
        # Chain rule through the normalisation x -> x/|x|, then df/dRe = 2Re h, df/dIm = 2Im h.
        h_a = (h_a - a * np.real(np.sum(a.conj() * h_a, axis=1))[:, None]) / na[:, None]
        h_b = (h_b - b * np.real(np.sum(b.conj() * h_b, axis=1))[:, None]) / nb[:, None]
        grad = self.pack(grad_w, 2 * h_a, 2 * h_b)
        return f, grad


@dataclass(frozen=True)
class ReeResult:
    """Outcome of :func:`ree`.

    ``value`` equals ``qrelent(rho, closest_state)`` in the requested units.
    It is an upper bound on the true relative entropy of entanglement.
    """

    value: float
    closest_state: np.ndarray
    iterations: int
    converged: bool
    restarts_used: int
    ansatz: SeparableAnsatz


def ree(
    rho,
    dims=None,
    components: int | None = None,
    restarts: int = 8,
    max_iters: int = 5000,
    tol: float = 1e-8,
    seed=0,
    units: str = "bits",
) -> ReeResult:
    """Relative entropy of entanglement of a bipartite state.

    Args:
        rho: Density matrix (or ket) on ``d_A * d_B <= 16``.
        dims: ``(d_A, d_B)``; inferred for square dimensions.
        components: Number of product terms ``K``; defaults to ``(d_A d_B)**2``.
        restarts: Independent random starts; the best is returned.
        max_iters: Iteration cap per start.
        tol: Relative objective change at which a run counts as converged.
        seed: Seed or generator for the starting points.
        units: ``"bits"`` or ``"nats"``.

    Returns:
        :class:`ReeResult`; ``closest_state`` is the regularised minimiser,
        which is separable (a mixture with the maximally mixed state).
    """
    rho = as_density(rho)
    dims = bipartite_dims(rho.shape[0], dims)
    if rho.shape[0] > MAX_DIM:
        raise TooLargeError(f"REE optimisation supports d_A*d_B <= {MAX_DIM}")
    k = components if components is not None else rho.shape[0] ** 2
    obj = ReeObjective(rho, dims, k)
    rng = _rng(seed)
    best = None
    total_iters, all_converged = 0, True
    for _ in range(max(1, restarts)):
        res = minimize(
            obj.value_and_grad,
            obj.random_point(rng),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": max_iters, "ftol": tol, "gtol": 1e-12, "maxcor": 30},
        )
        total_iters += int(res.nit)
        all_converged &= bool(res.success)
        if best is None or res.fun < best.fun:
            best = res
    ans = obj.ansatz(best.x)
    sigma = obj.regularise(ans.assemble())
    sigma = 0.5 * (sigma + sigma.conj().T)
    value = qrelent(rho, sigma, units)
    return ReeResult(value, sigma, total_iters, all_converged, max(1, restarts), ans)


def ree_measure(dims=None, **opts) -> Callable[[np.ndarray], float]:
    """Wrap :func:`ree` as a function ``rho -> value`` for use with
    :func:`entanglement_loss_bound`."""
    return lambda rho: ree(rho, dims, **opts).value


# --------------------------------------------------------------------------
# Decomposition measures


def _pure_members(ensemble: Ensemble) -> list[np.ndarray]:
    kets = []
    for _, r in ensemble:
        w, v = hermitian_eig(r)
        if w[-1] < 1 - 1e-9:
            raise NotPureError("ensemble member is not a pure state")
        kets.append(v[:, -1])
    return kets


def schmidt_dephased(psi, dims) -> np.ndarray:
    """``sum_n g_n^2 |u_n v_n><u_n v_n|``: the pure state with its Schmidt
    off-diagonal terms deleted.  It is separable and is the closest separable
    state to ``psi`` in relative entropy."""
    sd = schmidt(psi, dims)
    out = np.zeros((dims[0] * dims[1],) * 2, dtype=complex)
    for g, u, v in zip(sd.coeffs, sd.basis_a.T, sd.basis_b.T):
        uv = np.kron(u, v)
        out += g * g * np.outer(uv, uv.conj())
    return out


@dataclass(frozen=True)
class EnsembleEntanglement:
    """Average entanglement of a pure decomposition.

    ``memory_relent`` is ``S(rho_ABM || sigma_ABM)`` for the flagged state
    ``rho_ABM = sum_i p_i |psi_i><psi_i| (x) |i><i|`` and the separable
    ``sigma_ABM = sum_i p_i sigma_i (x) |i><i|`` built from Schmidt-dephased
    members; it must equal ``value``.
    """

    value: float
    memory_relent: float
    memory_state: np.ndarray
    memory_sigma: np.ndarray

    @property
    def identity_gap(self) -> float:
        return abs(self.value - self.memory_relent)


def ensemble_entanglement(ensemble: Ensemble, dims=None, units: str = "bits") -> EnsembleEntanglement:
    """``sum_i p_i E(psi_i)`` for an ensemble of pure bipartite states.

    Raises:
        NotPureError: a member is mixed.
    """
    dims = bipartite_dims(ensemble.dim, dims if dims is not None else (ensemble.dims if len(ensemble.dims) == 2 else None))
    kets = _pure_members(ensemble)
    n = len(kets)
    value = float(sum(p * pure_entanglement(k, dims, units) for p, k in zip(ensemble.probs, kets)))
    rho_abm = np.zeros((ensemble.dim * n,) * 2, dtype=complex)
    sigma_abm = np.zeros_like(rho_abm)
    for i, (p, k) in enumerate(zip(ensemble.probs, kets)):
        flag = np.zeros((n, n))
        flag[i, i] = 1.0
        rho_abm += p * tensor(ket_to_density(k), flag)
        sigma_abm += p * tensor(schmidt_dephased(k, dims), flag)
    rel = qrelent(rho_abm, sigma_abm, units)
    return EnsembleEntanglement(value, rel, rho_abm, sigma_abm)


@dataclass(frozen=True)
class LossBound:
    lhs: float
    rhs: float
    holds: bool


def entanglement_loss_bound(
    ensemble: Ensemble, measure: Callable[[np.ndarray], float], slack: float = 0.0, units: str = "bits"
) -> LossBound:
    """Check ``sum_i p_i E(rho_i) - E(rho) <= sum_i p_i S(rho_i || rho)``.

    The right side is the Holevo quantity of the ensemble.  ``measure`` must
    return values in ``units``; pass ``slack`` to absorb optimiser error when
    it is numerical (2e-3 bits is appropriate for :func:`ree`).
    """
    avg = ensemble.average()
    lhs = float(sum(p * measure(r) for p, r in ensemble)) - measure(avg)
    rhs = holevo(ensemble, units)
    return LossBound(lhs, rhs, lhs <= rhs + slack + 1e-9)


def cgdc_bound(rho_ab, units: str = "bits") -> float:
    """Dense-coding capacity cap ``log 2 + S(rho_B) - S(rho_AB)`` for two qubits."""
    rho = as_density(rho_ab)
    if rho.shape != (4, 4):
        raise NotTwoQubitError("cgdc_bound needs a two-qubit state")
    _, rb = reduced_states(rho, (2, 2))
    return math.log(2.0) / log_base(units) + von_neumann(rb, units) - von_neumann(rho, units)


def assistance_upper_bound(rho_ab, dims=None, units: str = "bits") -> float:
    """``min(S(rho_A), S(rho_B))``, an upper bound on the entanglement of assistance."""
    rho = as_density(rho_ab)
    ra, rb = reduced_states(rho, bipartite_dims(rho.shape[0], dims))
    return min(von_neumann(ra, units), von_neumann(rb, units))
