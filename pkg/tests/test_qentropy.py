import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from releq import classical_info as ci
from releq import qentropy as qe
from releq import qstate as qs
from releq.qchannel import projective_measurement, random_povm
from releq.protocols import sdc_letters

LN2 = math.log(2)


def test_von_neumann_examples(rng):
    assert qe.von_neumann(qs.ket_to_density(qs.random_state(3, rng))) == pytest.approx(0, abs=1e-9)
    assert qe.von_neumann(np.eye(2) / 2) == pytest.approx(1)
    ra, _ = qs.reduced_states(qs.bell_state(), (2, 2))
    assert qe.von_neumann(ra) == pytest.approx(1)
    assert qe.von_neumann(np.eye(2) / 2, "nats") == pytest.approx(LN2)


def test_qrelent_examples(rng):
    r = qs.random_density(3, seed=rng)
    assert qe.qrelent(r, r) == pytest.approx(0, abs=1e-9)
    s, p = np.diag([2 / 3, 1 / 3]), np.eye(2) / 2
    assert qe.qrelent(s, p) == pytest.approx(ci.kl_divergence([2 / 3, 1 / 3], [0.5, 0.5]), abs=1e-14)
    for n in (2, 3, 5):
        pure = qs.ket_to_density(qs.random_state(n, rng))
        assert qe.qrelent(pure, np.eye(n) / n, "nats") == pytest.approx(math.log(n))


def test_qrelent_support_rule():
    assert qe.qrelent(np.eye(2) / 2, np.diag([1.0, 0.0])) == math.inf
    # weight below the 1e-9 threshold on the kernel is ignored
    assert math.isfinite(qe.qrelent(np.diag([1 - 1e-12, 1e-12]), np.diag([1.0, 0.0])))


def test_qmutual_examples(rng):
    prod = np.kron(qs.random_density(2, seed=rng), qs.random_density(3, seed=rng))
    assert qe.qmutual(prod, (2, 3)) == pytest.approx(0, abs=1e-9)
    assert qe.qmutual(qs.ket_to_density(qs.bell_state())) == pytest.approx(2)
    assert qe.qmutual(np.diag([0.5, 0, 0, 0.5])) == pytest.approx(1)
    assert qe.conditional_qentropy(qs.ket_to_density(qs.bell_state())) == pytest.approx(-1)


def test_holevo_examples(rng):
    e = qe.Ensemble([0.5, 0.5], [[1, 0], [0, 1]])
    assert qe.holevo(e) == pytest.approx(1)
    r = qs.random_density(2, seed=rng)
    assert qe.holevo(qe.Ensemble([0.3, 0.7], [r, r])) == pytest.approx(0, abs=1e-9)
    sdc = qe.Ensemble(np.full(4, 0.25), sdc_letters(qs.ket_to_density(qs.bell_state())))
    assert qe.holevo(sdc) == pytest.approx(2)


def test_accessible_info_examples(rng):
    e = qe.Ensemble([0.4, 0.6], [[1, 0], [0, 1]])
    assert qe.accessible_info(e, projective_measurement(np.eye(2))) == pytest.approx(qe.holevo(e), abs=1e-12)
    assert qe.accessible_info(e, [np.eye(2)]) == pytest.approx(0, abs=1e-12)
    e = qe.Ensemble(ci.random_distribution(3, rng), [qs.random_density(2, seed=rng) for _ in range(3)])
    chi = qe.holevo(e)
    for _ in range(200):
        assert qe.accessible_info(e, random_povm(2, int(rng.integers(2, 5)), rng)) <= chi + 1e-9


def test_bosonic_regimes():
    hot = qe.bosonic_capacity(1e-20, 300.0)
    assert hot.capacity == pytest.approx(hot.classical_limit, rel=0.01)
    cold = qe.bosonic_capacity(1e-3, 1.0)
    assert cold.capacity == pytest.approx(cold.quantum_limit, rel=0.01)
    zero = qe.bosonic_capacity(1e-3, 0.0)
    assert zero.capacity == zero.quantum_limit
    # a hotter background lowers the capacity, which never exceeds either limit
    caps = [qe.bosonic_capacity(1e-9, t) for t in (1.0, 10.0, 100.0)]
    assert caps[0].capacity > caps[1].capacity > caps[2].capacity
    assert all(c.capacity <= min(c.classical_limit, c.quantum_limit) for c in caps)


def test_quantum_limit_is_zero_temperature_limit():
    s = 1e-6
    vals = [qe.bosonic_capacity(s, t).capacity for t in (1e-2, 1e-4, 1e-6)]
    assert vals[-1] == pytest.approx(qe.bosonic_capacity(s, 0).quantum_limit, rel=1e-6)


def test_energy_per_bit_scale():
    e = qe.quantum_energy_per_bit()
    assert 1e-35 < e < 1e-33


def test_ensemble_json(rng):
    e = qe.Ensemble([0.25, 0.75], [qs.random_density(4, seed=rng) for _ in range(2)], (2, 2))
    back = qe.ensemble_from_json(qe.ensemble_to_json(e))
    assert back.dims == (2, 2) and np.allclose(back.average(), e.average())


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 3), st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_araki_lieb_subadditivity(da, db, seed):
    r = np.random.default_rng(seed)
    rho = qs.random_density(da * db, int(r.integers(1, da * db + 1)), r)
    ra, rb = qs.reduced_states(rho, (da, db))
    sa, sb, sab = qe.von_neumann(ra), qe.von_neumann(rb), qe.von_neumann(rho)
    assert abs(sa - sb) - 1e-9 <= sab <= sa + sb + 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_additivity_concavity_measurement(seed):
    r = np.random.default_rng(seed)
    a, b = qs.random_density(2, seed=r), qs.random_density(3, seed=r)
    assert abs(qe.von_neumann(np.kron(a, b)) - qe.von_neumann(a) - qe.von_neumann(b)) < 1e-9
    w = ci.random_distribution(3, r)
    rs = [qs.random_density(3, seed=r) for _ in range(3)]
    assert qe.von_neumann(sum(wi * x for wi, x in zip(w, rs))) >= sum(wi * qe.von_neumann(x) for wi, x in zip(w, rs)) - 1e-9
    effects = projective_measurement(qs.random_unitary(3, r))
    from releq.qchannel import povm_probs

    assert ci.shannon_entropy(povm_probs(effects, rs[0])) >= qe.von_neumann(rs[0]) - 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_holevo_forms_and_donald(n, seed):
    r = np.random.default_rng(seed)
    e = qe.Ensemble(ci.random_distribution(n, r), [qs.random_density(2, seed=r) for _ in range(n)])
    chi = qe.holevo(e)
    assert abs(chi - qe.holevo_as_relent(e)) < 1e-9
    assert abs(chi - qe.qmutual(qe.symbol_state(e), (n, 2))) < 1e-9
    sigma = qs.random_density(2, seed=r)
    avg = e.average()
    lhs = qe.qrelent(avg, sigma) + sum(p * qe.qrelent(x, avg) for p, x in e)
    rhs = sum(p * qe.qrelent(x, sigma) for p, x in e)
    assert abs(lhs - rhs) < 1e-9
