import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from releq import qstate as qs
from releq.errors import InvalidStateError
from releq.matcore import partial_trace
from releq.qchannel import random_channel
from releq.qentropy import von_neumann


def test_schmidt_examples(rng):
    sd = qs.schmidt(np.kron([1, 0], [0, 1]), (2, 2))
    assert sd.rank == 1 and np.allclose(sd.coeffs, [1, 0])
    sd = qs.schmidt(qs.bell_state("psi+"), (2, 2))
    assert np.allclose(sd.coeffs, [1 / math.sqrt(2)] * 2)
    psi = qs.random_state(12, rng)
    sd = qs.schmidt(psi, (3, 4))
    assert np.max(np.abs(sd.reassemble() - psi)) < 1e-9
    ra, rb = qs.reduced_states(psi, (3, 4))
    spec = np.sort(np.linalg.eigvalsh(ra))[::-1]
    assert np.allclose(sd.coeffs**2, spec, atol=1e-9)
    assert np.allclose(np.sort(np.linalg.eigvalsh(rb))[::-1][:3], spec, atol=1e-9)


def test_schmidt_bases_orthonormal(rng):
    for dims in [(2, 3), (4, 2), (3, 3)]:
        sd = qs.schmidt(qs.random_state(dims[0] * dims[1], rng), dims)
        for b in (sd.basis_a, sd.basis_b):
            assert np.allclose(b.conj().T @ b, np.eye(b.shape[1]), atol=1e-9)


def test_schmidt_rank_deficient():
    psi = np.kron(qs.basis_ket(3, 1), qs.basis_ket(3, 2))
    sd = qs.schmidt(psi, (3, 3))
    assert sd.rank == 1
    assert np.allclose(sd.basis_b.conj().T @ sd.basis_b, np.eye(3), atol=1e-9)
    assert np.allclose(sd.reassemble(), psi)


def test_purify_examples(rng):
    psi = qs.purify(np.diag([1.0, 0.0]))
    assert abs(abs(np.vdot(np.kron([1, 0], [1, 0]), psi)) - 1) < 1e-12
    sd = qs.schmidt(qs.purify(np.eye(2) / 2), (2, 2))
    assert np.allclose(sd.coeffs, [1 / math.sqrt(2)] * 2)
    rho = qs.random_density(4, 3, rng)
    back = partial_trace(qs.ket_to_density(qs.purify(rho)), (4, 4), 0)
    assert np.max(np.abs(back - rho)) < 1e-9


def test_fidelity_examples():
    assert qs.fidelity(np.diag([1.0, 0]), np.diag([0, 1.0])) == pytest.approx(0, abs=1e-12)
    f = qs.fidelity(np.diag([0.5, 0.5]), np.diag([0.25, 0.75]))
    assert f == pytest.approx(math.sqrt(1 / 8) + math.sqrt(3 / 8)) and round(f, 4) == 0.9659


def test_bures_examples(rng):
    r = qs.random_density(3, seed=rng)
    assert qs.bures_distance(r, r) == pytest.approx(0, abs=1e-6)
    assert qs.bures_distance(np.diag([1.0, 0]), np.diag([0, 1.0])) == pytest.approx(1)


def test_bures_contracts_under_channels():
    r = np.random.default_rng(7)
    worst = -1.0
    for _ in range(500):
        d = int(r.integers(2, 4))
        a, b = qs.random_density(d, seed=r), qs.random_density(d, seed=r)
        ch = random_channel(d, int(r.integers(1, 4)), r)
        worst = max(worst, qs.bures_distance(ch.apply(a), ch.apply(b)) - qs.bures_distance(a, b))
    assert worst <= 1e-9


def test_random_determinism_and_rank():
    assert np.array_equal(qs.random_state(5, 3), qs.random_state(5, 3))
    assert np.array_equal(qs.random_density(4, 2, 9), qs.random_density(4, 2, 9))
    assert abs(qs.purity(qs.random_density(4, 1, 11)) - 1) < 1e-10
    assert np.linalg.matrix_rank(qs.random_density(5, 2, 1), tol=1e-10) == 2


def test_haar_isotropy():
    r = np.random.default_rng(2024)
    paulis = [qs.X, qs.Y, qs.Z]
    bloch = np.zeros(3)
    for _ in range(10_000):
        v = qs.random_state(2, r)
        bloch += [np.vdot(v, p @ v).real for p in paulis]
    assert np.linalg.norm(bloch / 10_000) < 0.05


def test_validation():
    with pytest.raises(InvalidStateError):
        qs.as_ket([1, 1])
    with pytest.raises(InvalidStateError):
        qs.as_density(np.diag([0.6, 0.6]))
    with pytest.raises(InvalidStateError):
        qs.as_density(np.diag([1.1, -0.1]))


def test_json_round_trip(rng):
    psi = qs.random_state(4, rng)
    back, dims = qs.ket_from_json(qs.ket_to_json(psi, (2, 2)))
    assert np.array_equal(back, psi) and dims == (2, 2)
    rho = qs.random_density(4, seed=rng)
    back, dims = qs.density_from_json(qs.density_to_json(rho, (2, 2)))
    assert np.allclose(back, rho) and dims == (2, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_schmidt_rank_and_equal_entropies(da, db, seed):
    psi = qs.random_state(da * db, np.random.default_rng(seed))
    sd = qs.schmidt(psi, (da, db))
    assert sd.rank <= min(da, db)
    ra, rb = qs.reduced_states(psi, (da, db))
    assert abs(von_neumann(ra) - von_neumann(rb)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_bures_fidelity_identity(d, seed):
    r = np.random.default_rng(seed)
    a, b = qs.random_density(d, seed=r), qs.random_density(d, seed=r)
    assert abs(qs.bures_distance(a, b) ** 2 + qs.fidelity(a, b) ** 2 - 1) < 1e-12
    assert qs.fidelity(a, b) == pytest.approx(qs.fidelity(b, a), abs=1e-9)
