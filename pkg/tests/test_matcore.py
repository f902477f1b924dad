import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from releq import matcore as mc
from releq.errors import DomainError, NonSquareError, NotHermitianError
from releq.qstate import bell_state, ket_to_density, random_density


def test_eig_identity_and_pauli_z():
    assert np.allclose(mc.hermitian_eig(np.eye(2)).eigenvalues, [1, 1])
    assert np.allclose(mc.hermitian_eig(np.diag([1.0, -1.0])).eigenvalues, [-1, 1])


def test_eig_reconstruction_8x8(rng):
    m = mc.random_hermitian(8, rng)
    assert np.max(np.abs(mc.hermitian_eig(m).reconstruct() - m)) < 1e-10


def test_eig_rejects_bad_input():
    with pytest.raises(NonSquareError):
        mc.hermitian_eig(np.zeros((2, 3)))
    with pytest.raises(NotHermitianError):
        mc.hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_clip_policy():
    assert np.array_equal(mc.clip_eigenvalues(np.array([-5e-11, 0.3])), [0.0, 0.3])
    with pytest.raises(DomainError):
        mc.clip_eigenvalues(np.array([-1e-8, 1.0]))


def test_mat_func_examples(rng):
    m = mc.random_hermitian(5, rng)
    assert np.allclose(mc.mat_func(m, lambda w: w), m, atol=1e-10)
    assert np.allclose(mc.mat_func(np.eye(2) / 2, np.log2, psd=True), -np.eye(2))
    rho = random_density(4, seed=rng)
    r = mc.sqrtm_psd(rho)
    assert np.max(np.abs(r @ r - rho)) < 1e-9


def test_mat_func_log_of_singular_raises():
    with pytest.raises(DomainError):
        mc.mat_func(np.diag([1.0, 0.0]), np.log, psd=True)


def test_tensor_examples(rng):
    assert np.array_equal(mc.tensor(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(mc.tensor(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))
    a, b = mc.random_hermitian(3, rng), mc.random_hermitian(3, rng)
    assert np.isclose(np.trace(mc.tensor(a, b)), np.trace(a) * np.trace(b))


def test_partial_trace_examples(rng):
    ra, rb = random_density(2, seed=rng), random_density(3, seed=rng)
    assert np.allclose(mc.partial_trace(np.kron(ra, rb), (2, 3), 0), ra, atol=1e-12)
    assert np.allclose(mc.partial_trace(np.kron(ra, rb), (2, 3), 1), rb, atol=1e-12)
    bell = ket_to_density(bell_state("phi+"))
    assert np.allclose(mc.partial_trace(bell, (2, 2), 0), np.eye(2) / 2)
    assert np.allclose(mc.partial_trace(np.eye(4) / 4, (2, 2), 0), np.eye(2) / 2)


def test_partial_trace_three_parties(rng):
    rs = [random_density(d, seed=rng) for d in (2, 3, 2)]
    full = mc.tensor(*rs)
    assert np.allclose(mc.partial_trace(full, (2, 3, 2), [0, 2]), np.kron(rs[0], rs[2]), atol=1e-12)


def test_partial_transpose_examples(rng):
    ra, rb = random_density(2, seed=rng), random_density(2, seed=rng)
    pt = mc.partial_transpose(np.kron(ra, rb), (2, 2), 0)
    assert np.allclose(pt, np.kron(ra.T, rb))
    assert np.linalg.eigvalsh(pt).min() > -1e-12
    singlet = ket_to_density(bell_state("psi-"))
    assert np.isclose(np.linalg.eigvalsh(mc.partial_transpose(singlet, (2, 2), 1)).min(), -0.5)
    m = mc.random_hermitian(6, rng)
    assert np.max(np.abs(mc.partial_transpose(mc.partial_transpose(m, (2, 3), 1), (2, 3), 1) - m)) < 1e-12


def test_json_round_trip(rng):
    m = mc.random_hermitian(3, rng)
    assert np.array_equal(mc.matrix_from_json(mc.matrix_to_json(m)), m)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_partial_trace_preserves_trace(da, db, seed):
    m = mc.random_hermitian(da * db, np.random.default_rng(seed))
    for keep in (0, 1):
        assert abs(np.trace(mc.partial_trace(m, (da, db), keep)) - np.trace(m)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_tensor_associative(d1, d2, d3, seed):
    r = np.random.default_rng(seed)
    a, b, c = (mc.random_hermitian(d, r) for d in (d1, d2, d3))
    assert np.max(np.abs(mc.tensor(mc.tensor(a, b), c) - mc.tensor(a, mc.tensor(b, c)))) < 1e-12


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_partial_transpose_trace_and_hermiticity(da, db, seed):
    m = mc.random_hermitian(da * db, np.random.default_rng(seed))
    t = mc.partial_transpose(m, (da, db), 1)
    assert abs(np.trace(t) - np.trace(m)) < 1e-12
    assert np.max(np.abs(t - t.conj().T)) < 1e-12
