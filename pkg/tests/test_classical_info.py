import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from releq import classical_info as ci
from releq.errors import InvalidDistributionError, InvalidTypeError, UnknownSymbolError, ZeroProbSymbolError

LN2, LN3 = math.log(2), math.log(3)


def test_shannon_examples():
    assert ci.shannon_entropy([0.5, 0.5]) == pytest.approx(1.0)
    assert ci.shannon_entropy([2 / 3, 1 / 3], "nats") == pytest.approx(LN3 - 2 / 3 * LN2)
    assert round(ci.shannon_entropy([2 / 3, 1 / 3], "nats"), 4) == 0.6365
    assert ci.shannon_entropy([1, 0]) == 0.0


def test_invalid_distribution():
    with pytest.raises(InvalidDistributionError):
        ci.shannon_entropy([0.5, 0.6])
    with pytest.raises(InvalidDistributionError):
        ci.shannon_entropy([1.2, -0.2])


def test_kl_examples():
    assert ci.kl_divergence([0.3, 0.7], [0.3, 0.7]) == 0.0
    # unfair (1/3, 2/3) against a fair coin
    assert ci.kl_divergence([1 / 3, 2 / 3], [0.5, 0.5], "nats") == pytest.approx(5 / 3 * LN2 - LN3, abs=1e-15)
    assert ci.kl_divergence([1, 0], [0, 1]) == math.inf


def test_mutual_information_examples():
    pa, pb = np.array([0.2, 0.8]), np.array([0.6, 0.1, 0.3])
    assert ci.mutual_information(np.outer(pa, pb)) == pytest.approx(0, abs=1e-12)
    socks = np.diag([0.75, 0.25])
    assert ci.mutual_information(socks, units="nats") == pytest.approx(-0.75 * math.log(0.75) - 0.25 * math.log(0.25))
    assert ci.mutual_information(np.diag([0.5, 0.5]), units="nats") == pytest.approx(LN2)


def test_conditional_entropy(rng):
    pa, pb = np.array([0.2, 0.8]), np.array([0.6, 0.4])
    assert ci.conditional_entropy(np.outer(pa, pb), given="A") == pytest.approx(ci.shannon_entropy(pb))
    assert ci.conditional_entropy(np.diag([0.3, 0.7])) == pytest.approx(0, abs=1e-12)
    joint = ci.random_distribution(9, rng).reshape(3, 3)
    s_ab = ci.shannon_entropy(joint.ravel())
    assert ci.shannon_entropy(joint.sum(1)) + ci.conditional_entropy(joint, given="A") == pytest.approx(s_ab, abs=1e-12)


def test_type_examples():
    assert ci.type_of("011010", "01") == ci.type_of("100110", "01")
    assert ci.type_of("0000000", "01").class_size == 1
    assert ci.type_of("1111100000", "01").class_size == 252
    with pytest.raises(UnknownSymbolError):
        ci.type_of("012", "01")
    with pytest.raises(InvalidTypeError):
        ci.type_of("")


def test_type_counting_examples():
    assert ci.type_counting_bounds(6, 2) == (7, 49)
    assert ci.type_counting_bounds(1, 3) == (3, 8)
    assert ci.type_counting_bounds(4, 2) == (5, 25)


def _brute_number_of_types(n, k):
    if k == 1:
        return 1
    return sum(_brute_number_of_types(n - j, k - 1) for j in range(n + 1))


@pytest.mark.parametrize("n,k", [(1, 1), (3, 2), (5, 3), (7, 4)])
def test_type_count_enumeration(n, k):
    exact, bound = ci.type_counting_bounds(n, k)
    assert exact == _brute_number_of_types(n, k) <= bound


def test_sequence_prob_examples():
    assert ci.sequence_prob([0.5, 0.5], [0, 1, 1, 0, 1]) == pytest.approx((2**-5, 2**-5))
    d, t = ci.sequence_prob([2 / 3, 1 / 3], "00", alphabet="01")
    assert d == pytest.approx(4 / 9) and t == pytest.approx(4 / 9)
    # a sequence of exactly the type of q has probability exp(-n S(q))
    q = [0.25, 0.75]
    x = [0, 1, 1, 1] * 3
    assert ci.sequence_prob(q, x)[1] == pytest.approx(math.exp(-12 * ci.shannon_entropy(q, "nats")))
    with pytest.raises(ZeroProbSymbolError):
        ci.sequence_prob([1.0, 0.0], [0, 1])


def test_type_class_prob_examples():
    r = ci.type_class_prob([0.5, 0.5], [0.5, 0.5], 2)
    assert r.exact == pytest.approx(0.5) and r.lower == pytest.approx(1 / 9) and r.upper == pytest.approx(1)
    assert ci.type_class_prob([0.5, 0.5], [1, 0], 3).exact == pytest.approx(1 / 8)
    with pytest.raises(InvalidTypeError):
        ci.type_class_prob([0.5, 0.5], [0.3, 0.7], 4)


def test_confusion_factor():
    # fair source mistaken for (1/3, 2/3): per-trial factor 3 * 2^(-5/3)
    for n in (1, 5, 20):
        assert ci.confusion_probability(n, [0.5, 0.5], [1 / 3, 2 / 3]) == pytest.approx((3 * 2 ** (-5 / 3)) ** n, rel=1e-12)
    assert 3 * 2 ** (-5 / 3) == pytest.approx(0.94494, abs=5e-6)


def test_confusion_tracks_exact_class_probability():
    # Exact type-class probability of (1/3, 2/3) under the fair coin decays at the same rate.
    ratios = []
    for n in (30, 60, 90):
        r = ci.type_class_prob([0.5, 0.5], [1 / 3, 2 / 3], n)
        ratios.append(r.log_exact / n)
    assert ratios[-1] == pytest.approx(math.log(3 * 2 ** (-5 / 3)), abs=0.05)
    assert ratios[0] < ratios[1] < ratios[2]


def test_sanov_examples():
    q = [0.5, 0.5]
    assert ci.sanov_exponent(q, [[0.9, 0.1], q])[1] == 0.0
    p, d = ci.sanov_exponent(q, [[1 / 3, 2 / 3]], "nats")
    assert d == pytest.approx(0.0566, abs=5e-5)
    p, _ = ci.sanov_exponent(q, [[1 / 3, 2 / 3], [0.45, 0.55]])
    assert np.allclose(p, [0.45, 0.55])


def test_evolve_examples(rng):
    p = ci.random_distribution(3, rng)
    assert np.allclose(ci.evolve_stochastic(p, np.eye(3)), p)
    col = np.array([0.2, 0.3, 0.5])
    t = np.tile(col[:, None], (1, 3))
    assert np.allclose(ci.evolve_stochastic(p, t), col)
    assert np.allclose(ci.evolve_stochastic(ci.random_distribution(3, rng), t), col)


def test_probdist_json():
    d = ci.ProbDist([0.25, 0.75], ("a", "b"))
    assert ci.ProbDist.from_json(d.to_json()) == d
    assert ci.ProbDist([0.5, 0.5]) != ci.ProbDist([0.25, 0.75])


# Exact-integer oracles for the type-class sandwiches, binary alphabet, n <= 20.


def _binary_size_bounds_exact(n, k):
    size = math.comb(n, k)
    en_h_denominator = k**k * (n - k) ** (n - k)  # exp(nH(P)) = n^n / this
    lower_ok = size * en_h_denominator * (n + 1) ** 2 >= n**n
    upper_ok = size * en_h_denominator <= n**n
    return lower_ok and upper_ok


def test_class_size_sandwich_exact():
    for n in range(1, 21):
        for k in range(n + 1):
            assert _binary_size_bounds_exact(n, k), (n, k)


@pytest.mark.parametrize("q0", [Fraction(1, 2), Fraction(1, 3), Fraction(3, 4), Fraction(1, 10)])
def test_class_probability_sandwich_exact(q0):
    # Q^n(T(P)) = C(n,k) q0^k q1^(n-k) against e^{-nD(P||Q)} = prod (q_a / P_a)^{n_a},
    # all in rationals after raising to integer powers of n.
    q1 = 1 - q0
    for n in range(1, 21):
        for k in range(n + 1):
            exact = math.comb(n, k) * q0**k * q1 ** (n - k)
            # e^{-nD} * n^n = q0^k q1^(n-k) n^n / (k^k (n-k)^(n-k))
            e_nd = q0**k * q1 ** (n - k) * Fraction(n**n, k**k * (n - k) ** (n - k))
            assert exact <= e_nd
            assert exact * (n + 1) ** 2 >= e_nd
            r = ci.type_class_prob([float(q0), float(q1)], [k / n, 1 - k / n], n)
            assert r.holds
            assert r.exact == pytest.approx(float(exact), rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 4), st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_sequence_prob_depends_on_type_only(k, n, seed):
    r = np.random.default_rng(seed)
    q = ci.random_distribution(k, r) * 0.9 + 0.1 / k
    x = r.integers(0, k, size=n)
    direct, typed = ci.sequence_prob(q, x)
    assert abs(direct - typed) <= 1e-9 * direct
    assert ci.sequence_prob(q, r.permutation(x))[0] == pytest.approx(direct, rel=1e-12)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 5), st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_kl_nonneg_and_monotone(n, m, seed):
    r = np.random.default_rng(seed)
    p, a = ci.random_distribution(n, r), ci.random_distribution(n, r)
    t = ci.random_stochastic(m, n, r)
    assert ci.kl_divergence(p, a) >= 0
    assert ci.kl_divergence(t @ p, t @ a) <= ci.kl_divergence(p, a) + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mutual_information_local_processing(seed):
    r = np.random.default_rng(seed)
    joint = ci.random_distribution(12, r).reshape(3, 4)
    ta, tb = ci.random_stochastic(2, 3, r), ci.random_stochastic(4, 4, r)
    assert ci.mutual_information(ta @ joint @ tb.T) <= ci.mutual_information(joint) + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_concavity_and_log_sum(seed):
    r = np.random.default_rng(seed)
    w = ci.random_distribution(3, r)
    xs = [ci.random_distribution(4, r) for _ in range(3)]
    mix = sum(wi * x for wi, x in zip(w, xs))
    assert ci.shannon_entropy(mix) >= sum(wi * ci.shannon_entropy(x) for wi, x in zip(w, xs)) - 1e-12
    a, b = r.uniform(0.01, 2, size=5), r.uniform(0.01, 2, size=5)
    assert np.sum(a * np.log(a / b)) >= a.sum() * np.log(a.sum() / b.sum()) - 1e-12
