import math

import numpy as np
import pytest

from releq import entanglement as ent
from releq import qstate as qs
from releq.classical_info import binary_entropy, random_distribution
from releq.qchannel import KrausChannel, ppt_check, random_channel
from releq.qentropy import Ensemble, holevo, qrelent, von_neumann

SINGLET = qs.ket_to_density(qs.bell_state("psi-"))


def werner(f):
    """Singlet fraction ``f`` mixed with the other three Bell states equally."""
    return (4 * f - 1) / 3 * SINGLET + (1 - f) / 3 * np.eye(4)


def test_pure_entanglement_examples(rng):
    assert ent.pure_entanglement(np.kron([1, 0], [0, 1]), (2, 2)) == pytest.approx(0, abs=1e-12)
    assert ent.pure_entanglement(qs.bell_state(), (2, 2)) == pytest.approx(1)
    a2 = 0.3
    psi = np.array([math.sqrt(a2), 0, 0, math.sqrt(1 - a2)])
    assert ent.pure_entanglement(psi) == pytest.approx(binary_entropy(a2))


def test_log_derivative_matches_finite_difference(rng):
    s = qs.random_density(4, seed=rng) * 0.9 + 0.1 * np.eye(4) / 4
    x = qs.random_density(4, seed=rng) - np.eye(4) / 4
    from releq.matcore import mat_func

    h = 1e-6
    fd = (mat_func(s + h * x, np.log, psd=True) - mat_func(s - h * x, np.log, psd=True)) / (2 * h)
    assert np.max(np.abs(ent.log_derivative(s, x) - fd)) < 1e-6


def test_werner_oracle_closed_form():
    # For two-qubit Werner states with singlet fraction f > 1/2 the REE is 1 - H2(f).
    for f in (0.625, 0.8, 0.95):
        rho = werner(f)
        assert ent.ree(rho, (2, 2), restarts=4, seed=3).value == pytest.approx(1 - binary_entropy(f), abs=1e-6)
    assert ent.ree(werner(0.45), (2, 2), restarts=4, seed=3).value < 1e-6


def test_ree_examples():
    assert ent.ree(qs.bell_state(), (2, 2)).value == pytest.approx(1, abs=1e-3)
    sep = ent.random_separable((2, 3), 3, 4).assemble()
    assert ent.ree(sep, (2, 3), restarts=3).value < 1e-3
    rho = 0.5 * SINGLET + 0.5 * np.eye(4) / 4
    a = ent.ree(rho, (2, 2), restarts=8, seed=1)
    b = ent.ree(rho, (2, 2), components=32, restarts=8, seed=99)
    assert abs(a.value - b.value) < 2e-3
    assert (a.value > 1e-3) == (not ppt_check(rho).is_ppt)


def test_ree_result_consistency():
    r = ent.ree(werner(0.8), (2, 2), restarts=2, seed=5)
    assert r.value == pytest.approx(qrelent(werner(0.8), r.closest_state))
    assert ppt_check(r.closest_state).is_ppt


def test_ree_units_and_limits():
    bits = ent.ree(qs.bell_state(), (2, 2), restarts=2).value
    nats = ent.ree(qs.bell_state(), (2, 2), restarts=2, units="nats").value
    assert nats == pytest.approx(bits * math.log(2), abs=1e-8)
    from releq.errors import TooLargeError

    with pytest.raises(TooLargeError):
        ent.ree(np.eye(25) / 25, (5, 5))


def test_ree_local_unitary_and_local_channel(rng):
    rho = qs.random_density(4, 2, rng)
    u = np.kron(qs.random_unitary(2, rng), qs.random_unitary(2, rng))
    base = ent.ree(rho, (2, 2), restarts=4, seed=1).value
    assert ent.ree(u @ rho @ u.conj().T, (2, 2), restarts=4, seed=1).value == pytest.approx(base, abs=2e-3)
    ca, cb = random_channel(2, 2, rng), random_channel(2, 2, rng)
    local = KrausChannel([np.kron(a, b) for a in ca.ops for b in cb.ops])
    assert ent.ree(local.apply(rho), (2, 2), restarts=4, seed=1).value <= base + 2e-3


def test_ensemble_entanglement_examples(rng):
    psi = qs.random_state(4, rng)
    res = ent.ensemble_entanglement(Ensemble([1.0], [psi], (2, 2)))
    assert res.value == pytest.approx(ent.pure_entanglement(psi, (2, 2)))
    e = Ensemble([0.5, 0.5], [qs.bell_state("phi+"), qs.bell_state("phi-")], (2, 2))
    res = ent.ensemble_entanglement(e)
    assert res.value == pytest.approx(1)
    assert ent.ree(e.average(), (2, 2), restarts=3).value < 1e-3
    e = Ensemble(random_distribution(3, rng), [qs.random_state(4, rng) for _ in range(3)], (2, 2))
    assert ent.ensemble_entanglement(e).identity_gap < 1e-9


def test_ensemble_entanglement_rejects_mixed(rng):
    from releq.errors import NotPureError

    with pytest.raises(NotPureError):
        ent.ensemble_entanglement(Ensemble([1.0], [qs.random_density(4, seed=rng)], (2, 2)))


def test_loss_bound_examples(rng):
    e = Ensemble([0.5, 0.5], [qs.bell_state("phi+"), qs.bell_state("phi-")], (2, 2))
    measure = ent.ree_measure((2, 2), restarts=3)
    b = ent.entanglement_loss_bound(e, measure, slack=2e-3)
    assert b.holds and b.lhs == pytest.approx(1, abs=2e-3) and b.rhs == pytest.approx(holevo(e))
    b = ent.entanglement_loss_bound(Ensemble([1.0], [qs.random_state(4, rng)], (2, 2)), measure, slack=2e-3)
    assert b.lhs == pytest.approx(0, abs=2e-3) and b.rhs == pytest.approx(0, abs=1e-9) and b.holds


def test_loss_bound_sweep():
    r = np.random.default_rng(77)
    measure = ent.ree_measure((2, 2), restarts=2)
    for _ in range(100):
        e = Ensemble(random_distribution(2, r), [qs.random_state(4, r) for _ in range(2)], (2, 2))
        assert ent.entanglement_loss_bound(e, measure, slack=2e-3).holds


def test_decomposition_inequalities(rng):
    for _ in range(20):
        n = int(rng.integers(1, 4))
        e = Ensemble(random_distribution(n, rng), [qs.random_state(4, rng) for _ in range(n)], (2, 2))
        avg = e.average()
        _, rb = qs.reduced_states(avg, (2, 2))
        val = ent.ensemble_entanglement(e).value
        # mixing does not create entanglement
        assert ent.ree(avg, (2, 2), restarts=2, seed=1).value <= val + 2e-3
        # S(B) of the average is at most the decomposition value plus S(AB)
        w, v = np.linalg.eigh(avg)
        keep = w > 1e-12
        eig = Ensemble(w[keep] / w[keep].sum(), [v[:, i] for i in np.flatnonzero(keep)], (2, 2))
        assert von_neumann(rb) <= ent.ensemble_entanglement(eig).value + von_neumann(avg) + 1e-9


def test_cgdc_examples(rng):
    assert ent.cgdc_bound(qs.ket_to_density(qs.bell_state())) == pytest.approx(2)
    prod = qs.ket_to_density(np.kron(qs.random_state(2, rng), qs.random_state(2, rng)))
    assert ent.cgdc_bound(prod) == pytest.approx(1)
    assert ent.cgdc_bound(np.eye(4) / 4) == pytest.approx(0, abs=1e-12)
    assert ent.assistance_upper_bound(qs.ket_to_density(qs.bell_state())) == pytest.approx(1)
