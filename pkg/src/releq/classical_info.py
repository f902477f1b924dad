"""Classical information: Shannon entropy, relative entropy and the method of types.

Distributions are 1-D arrays (or :class:`ProbDist` when labels matter).  All
entropies take ``units="bits"`` (default) or ``units="nats"``.  Relative entropy
returns ``inf`` on a support violation instead of raising, so that Sanov-type
candidate sets may contain members with disjoint support.

Type-class sizes are exact Python integers; type-class probabilities are
evaluated in log space so they stay finite for long sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import gammaln, xlogy

from .errors import (
    DimMismatchError,
    EmptySetError,
    InvalidDistributionError,
    InvalidTypeError,
    SizeMismatchError,
    UnknownSymbolError,
    ZeroProbSymbolError,
)

PROB_TOL = 1e-12


def log_base(units: str) -> float:
    """Natural log of the logarithm base for ``units`` ("bits" or "nats")."""
    if units == "bits":
        return math.log(2.0)
    if units == "nats":
        return 1.0
    raise ValueError(f"units must be 'bits' or 'nats', got {units!r}")


@dataclass(frozen=True, eq=False)
class ProbDist:
    """A finite probability distribution with optional symbol labels."""

    probs: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        object.__setattr__(self, "probs", validate_probs(p))
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != p.size:
                raise SizeMismatchError("labels and probs differ in length")
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.probs.size

    def __eq__(self, other):
        if not isinstance(other, ProbDist):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.probs, other.probs)

    __hash__ = None

    def to_json(self) -> dict:
        out = {"probs": [float(x) for x in self.probs]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ProbDist":
        if "probs" not in obj:
            raise InvalidDistributionError("distribution object needs a 'probs' field")
        return cls(obj["probs"], obj.get("labels"))


def validate_probs(p, tol: float = PROB_TOL) -> np.ndarray:
    """Return ``p`` as a float array after checking it is a distribution."""
    if isinstance(p, ProbDist):
        return p.probs
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0:
        raise InvalidDistributionError("distribution is empty")
    if not np.all(np.isfinite(p)) or p.min() < 0:
        raise InvalidDistributionError("probabilities must be finite and nonnegative")
    if abs(p.sum() - 1.0) > tol:
        raise InvalidDistributionError(f"probabilities sum to {p.sum():.15g}, not 1")
    return p


def shannon_entropy(p, units: str = "bits") -> float:
    """Shannon entropy ``-sum p log p`` with ``0 log 0 = 0``.

    >>> shannon_entropy([0.5, 0.5])
    1.0
    """
    p = validate_probs(p)
    return float(max(0.0, -xlogy(p, p).sum()) / log_base(units))


def binary_entropy(x: float, units: str = "bits") -> float:
    return shannon_entropy([x, 1.0 - x], units)


def kl_divergence(p, q, units: str = "bits") -> float:
    """Relative entropy ``S(p||q) = sum p log(p/q)``; ``inf`` if ``p`` is not
    absolutely continuous with respect to ``q``."""
    p, q = validate_probs(p), validate_probs(q)
    if p.size != q.size:
        raise SizeMismatchError(f"distributions have sizes {p.size} and {q.size}")
    support = p > 0
    if np.any(q[support] == 0):
        return math.inf
    val = float(np.sum(p[support] * (np.log(p[support]) - np.log(q[support]))))
    return max(val, 0.0) / log_base(units)


def _joint_matrix(joint, dims) -> np.ndarray:
    p = np.asarray(joint.probs if isinstance(joint, ProbDist) else joint, dtype=float)
    if dims is None:
        if p.ndim != 2:
            raise DimMismatchError("a flat joint distribution needs dims=(n_A, n_B)")
        dims = p.shape
    n_a, n_b = (int(d) for d in dims)
    if p.size != n_a * n_b:
        raise DimMismatchError(f"joint has {p.size} entries, dims {dims} need {n_a * n_b}")
    validate_probs(p.reshape(-1))
    return p.reshape(n_a, n_b)


def mutual_information(joint, dims=None, units: str = "bits") -> float:
    """``I(A:B) = S(A) + S(B) - S(A,B)`` for a joint distribution.

    ``joint`` is either an ``(n_A, n_B)`` array or a flat array with ``dims``;
    the flat index of ``(a, b)`` is ``a * n_B + b``.
    """
    pab = _joint_matrix(joint, dims)
    val = (
        shannon_entropy(pab.sum(axis=1), units)
        + shannon_entropy(pab.sum(axis=0), units)
        - shannon_entropy(pab.reshape(-1), units)
    )
    return max(val, 0.0)


def conditional_entropy(joint, dims=None, given: str = "A", units: str = "bits") -> float:
    """Entropy of one variable after learning the other.

    With ``given="A"`` this is ``S_A(B) = S(A,B) - S(A)``, the uncertainty left
    in ``B`` once ``A`` is known; ``given="B"`` swaps the roles.
    """
    pab = _joint_matrix(joint, dims)
    if given not in ("A", "B"):
        raise ValueError("given must be 'A' or 'B'")
    marginal = pab.sum(axis=1) if given == "A" else pab.sum(axis=0)
    val = shannon_entropy(pab.reshape(-1), units) - shannon_entropy(marginal, units)
    return max(val, 0.0)


# --------------------------------------------------------------------------
# Stochastic evolution


def validate_stochastic(t, tol: float = PROB_TOL) -> np.ndarray:
    """Check ``t[j, k] = P(j|k)``: entries in [0, 1] and columns summing to 1."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 2 or t.size == 0:
        raise DimMismatchError("stochastic matrix must be a nonempty 2-D array")
    if not np.all(np.isfinite(t)) or t.min() < 0 or t.max() > 1 + tol:
        raise InvalidDistributionError("stochastic matrix entries must lie in [0, 1]")
    if np.max(np.abs(t.sum(axis=0) - 1.0)) > tol:
        raise InvalidDistributionError("stochastic matrix columns must sum to 1")
    return t


def evolve_stochastic(p, t) -> np.ndarray:
    """Push a distribution through a column-stochastic matrix: ``q_j = sum_k t[j,k] p_k``."""
    p = validate_probs(p)
    t = validate_stochastic(t)
    if t.shape[1] != p.size:
        raise DimMismatchError(f"matrix has {t.shape[1]} columns, distribution has {p.size} entries")
    q = t @ p
    return q / q.sum()


def random_distribution(n: int, rng: np.random.Generator, alpha: float = 1.0) -> np.ndarray:
    return rng.dirichlet(np.full(n, alpha))


def random_stochastic(n_out: int, n_in: int, rng: np.random.Generator) -> np.ndarray:
    """Random column-stochastic matrix with Dirichlet(1) columns."""
    return rng.dirichlet(np.ones(n_out), size=n_in).T


# --------------------------------------------------------------------------
# Method of types


@dataclass(frozen=True)
class TypeRecord:
    """Empirical type of a sequence.

    Attributes:
        n: Sequence length.
        alphabet: Ordered alphabet.
        counts: ``N(a|x)`` for each symbol, in alphabet order.
        class_size: Exact number of sequences sharing this type.
    """

    n: int
    alphabet: tuple
    counts: tuple
    class_size: int = field(compare=False)

    @property
    def alphabet_size(self) -> int:
        return len(self.alphabet)

    @property
    def type_dist(self) -> ProbDist:
        return ProbDist(np.array(self.counts, dtype=float) / self.n, self.alphabet)

    @property
    def fractions(self) -> tuple:
        """Exact type as :class:`fractions.Fraction` values."""
        return tuple(Fraction(c, self.n) for c in self.counts)


def multinomial(counts: Sequence[int]) -> int:
    """Exact multinomial coefficient ``n! / prod(c!)``."""
    total, out = 0, 1
    for c in counts:
        total += c
        out *= math.comb(total, c)
    return out


def type_of(sequence, alphabet=None) -> TypeRecord:
    """Type (empirical distribution) of ``sequence`` over ``alphabet``.

    Strings are treated as sequences of characters.  When ``alphabet`` is
    omitted the sorted set of observed symbols is used.

    >>> type_of("011010", "01") == type_of("100110", "01")
    True
    """
    seq = list(sequence)
    if not seq:
        raise InvalidTypeError("sequence is empty")
    alphabet = tuple(sorted(set(seq))) if alphabet is None else tuple(alphabet)
    index = {a: k for k, a in enumerate(alphabet)}
    counts = [0] * len(alphabet)
    for s in seq:
        if s not in index:
            raise UnknownSymbolError(f"symbol {s!r} not in alphabet")
        counts[index[s]] += 1
    return TypeRecord(len(seq), alphabet, tuple(counts), multinomial(counts))


def type_counting_bounds(n: int, alphabet_size: int) -> tuple[int, int]:
    """Exact number of types of length-``n`` sequences and the bound ``(n+1)^|A|``."""
    if n < 1 or alphabet_size < 1:
        raise ValueError("n and alphabet_size must be positive")
    return math.comb(n + alphabet_size - 1, alphabet_size - 1), (n + 1) ** alphabet_size


def _symbol_indices(x, q: ProbDist | np.ndarray, alphabet):
    if alphabet is None:
        alphabet = q.labels if isinstance(q, ProbDist) and q.labels is not None else None
    if alphabet is None:
        idx = [int(s) for s in x]
    else:
        lookup = {a: k for k, a in enumerate(alphabet)}
        try:
            idx = [lookup[s] for s in x]
        except KeyError as exc:
            raise UnknownSymbolError(f"symbol {exc.args[0]!r} not in alphabet") from None
    return idx


def sequence_prob(q, x, alphabet=None) -> tuple[float, float]:
    """Probability of an i.i.d. sequence, computed two ways.

    Returns the direct product ``prod_i q(x_i)`` and the type form
    ``exp(-n (S(P_x) + S(P_x || q)))``, which depend only on the type of ``x``.

    Symbols are mapped to indices through ``alphabet`` (or the labels of a
    :class:`ProbDist`); without either, symbols must be integer-like.
    """
    qv = validate_probs(q)
    idx = _symbol_indices(x, q, alphabet)
    if not idx:
        raise InvalidTypeError("sequence is empty")
    if any(not 0 <= k < qv.size for k in idx):
        raise UnknownSymbolError("sequence symbol outside the distribution's support")
    if any(qv[k] == 0 for k in idx):
        raise ZeroProbSymbolError("sequence contains a symbol of probability zero")
    direct = math.prod(float(qv[k]) for k in idx)
    n = len(idx)
    p = np.bincount(idx, minlength=qv.size) / n
    exponent = shannon_entropy(p, "nats") + kl_divergence(p, qv, "nats")
    return direct, math.exp(-n * exponent)


@dataclass(frozen=True)
class TypeClassProb:
    """``Q^n(T(P))`` and the sandwich ``(n+1)^-|A| e^{-nD} <= Q^n(T(P)) <= e^{-nD}``.

    Log-space values (natural log) are kept alongside so that long sequences
    do not underflow.
    """

    exact: float
    lower: float
    upper: float
    log_exact: float
    log_lower: float
    log_upper: float

    @property
    def holds(self) -> bool:
        eps = 1e-12 * max(1.0, abs(self.log_upper))
        return self.log_lower <= self.log_exact + eps and self.log_exact <= self.log_upper + eps


def type_counts(p_type, n: int, tol: float = 1e-9) -> list[int]:
    """Integer counts ``n * P(a)``; raises if ``P`` is not a type of denominator ``n``."""
    p = validate_probs(p_type)
    scaled = p * n
    counts = np.rint(scaled)
    if np.max(np.abs(scaled - counts)) > tol:
        raise InvalidTypeError(f"distribution is not a type with denominator {n}")
    return [int(c) for c in counts]


def log_class_size(counts: Sequence[int]) -> float:
    n = sum(counts)
    return float(gammaln(n + 1) - sum(gammaln(c + 1) for c in counts))


def type_class_prob(q, p_type, n: int) -> TypeClassProb:
    """Probability under ``Q^n`` of the type class of ``p_type``, with bounds."""
    qv = validate_probs(q)
    counts = type_counts(p_type, n)
    if len(counts) != qv.size:
        raise SizeMismatchError("type and source distribution differ in size")
    p = np.array(counts, dtype=float) / n
    if any(c > 0 and qv[k] == 0 for k, c in enumerate(counts)):
        log_exact = -math.inf
    else:
        log_exact = log_class_size(counts) + float(
            sum(c * math.log(qv[k]) for k, c in enumerate(counts) if c > 0)
        )
    d = kl_divergence(p, qv, "nats")
    log_upper = -n * d
    log_lower = log_upper - qv.size * math.log(n + 1)
    return TypeClassProb(
        math.exp(log_exact), math.exp(log_lower), math.exp(log_upper), log_exact, log_lower, log_upper
    )


def sanov_exponent(q, candidates, units: str = "bits") -> tuple[np.ndarray, float]:
    """Closest member of a finite candidate set to ``q`` in relative entropy.

    Returns ``(P*, min_P S(P||q))``; the first minimiser wins ties.  The
    probability that ``n`` samples from ``q`` look like they came from the set
    decays as ``exp(-n * exponent)``.
    """
    qv = validate_probs(q)
    cands = [validate_probs(c) for c in candidates]
    if not cands:
        raise EmptySetError("candidate set is empty")
    values = [kl_divergence(c, qv, units) for c in cands]
    best = int(np.argmin(values))
    return cands[best], values[best]


def confusion_probability(n: int, q, p) -> float:
    """Leading-order probability ``exp(-n S(p||q))`` that ``n`` draws from ``q`` look like ``p``."""
    return math.exp(-n * kl_divergence(p, q, "nats"))
