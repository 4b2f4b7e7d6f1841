import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cavity_entangle.errors import CutoffError, ShapeError, StateError
from cavity_entangle.hilbert import (
    PAPER_LITERAL,
    CavityPrep,
    Operator,
    QuantumState,
    SpaceTag,
    annihilation,
    basis_vector,
    eigh_fixed,
    fock_space,
    identity,
    joint_space,
    minimal_cutoff,
    number_operator,
    partial_trace_cavity,
    pauli,
    prepare_cavity,
    purity,
    qubit_pair_space,
    qubit_state,
    resolve_cutoff,
    tensor,
    tensor_states,
    truncation_deficit,
)

Q = SpaceTag(qubit_pair_space().factors[:1])
SX = Operator([[0, 1], [1, 0]], Q)
SZ = Operator([[1, 0], [0, -1]], Q)
I2 = identity(Q)


def test_tensor_identity_and_bitflip():
    assert np.array_equal(tensor(I2, I2).matrix, np.eye(4))
    assert tensor(I2, I2).space == qubit_pair_space()
    xx = tensor(SX, SX)
    assert np.array_equal(xx.matrix @ basis_vector(4, 0), basis_vector(4, 3))


def test_tensor_sigma_z_on_01_has_eigenvalue_plus_one():
    psi = basis_vector(4, 1)  # |0>|1>
    assert np.allclose(tensor(SZ, I2).matrix @ psi, psi)


def test_tensor_dimension_and_space():
    op = tensor(SX, SZ, annihilation(3))
    assert op.dim == 12
    assert op.space == joint_space(3)


def _random_op(rng, space):
    # small Gaussian integers keep every product exact, so equality can be bitwise
    d = space.dim
    return Operator(rng.integers(-9, 10, size=(d, d)) + 1j * rng.integers(-9, 10, size=(d, d)), space)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 4))
def test_tensor_associative(seed, n):
    rng = np.random.default_rng(seed)
    a, b, c = _random_op(rng, Q), _random_op(rng, Q), _random_op(rng, fock_space(n))
    left, right = tensor(tensor(a, b), c), tensor(a, tensor(b, c))
    assert np.array_equal(left.matrix, right.matrix)
    assert left.space == right.space


def test_annihilation_matrix():
    a = annihilation(2).matrix
    assert np.allclose(a @ basis_vector(2, 1), basis_vector(2, 0))
    assert np.allclose(annihilation(4).matrix @ basis_vector(4, 0), 0)
    assert np.allclose(np.diag(number_operator(3).matrix), [0, 1, 2])


def test_annihilation_truncated_commutator():
    a = annihilation(3)
    comm = a.matrix @ a.dag().matrix - a.dag().matrix @ a.matrix
    assert np.allclose(comm, np.diag([1, 1, -2]))


def test_annihilation_rejects_zero_cutoff():
    with pytest.raises(CutoffError):
        annihilation(0)


def test_pauli_conventions():
    sp = joint_space(3)
    state = np.kron(basis_vector(4, 1), basis_vector(3, 2))  # |0>|1>|2>
    assert np.allclose(pauli("Z", 1, sp).matrix @ state, state)
    q = qubit_pair_space()
    assert np.allclose(pauli("X", 2, q).matrix @ basis_vector(4, 0), basis_vector(4, 1))
    total_z = pauli("Z", 1, q) + pauli("Z", 2, q)
    assert np.allclose(total_z.matrix @ basis_vector(4, 1), 0)


def test_pauli_needs_two_qubits():
    with pytest.raises(ShapeError):
        pauli("X", 1, fock_space(3))


def test_operator_space_mismatch():
    with pytest.raises(ShapeError):
        identity(qubit_pair_space()) + identity(joint_space(2))
    with pytest.raises(ShapeError):
        Operator(np.eye(3), qubit_pair_space())


def test_operator_matrix_is_read_only():
    op = identity(qubit_pair_space())
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 2


def test_state_invariants():
    with pytest.raises(StateError):
        QuantumState(np.array([1, 1, 0, 0], dtype=complex), qubit_pair_space())
    with pytest.raises(StateError):
        QuantumState(np.diag([0.5, 0.6, 0, 0]).astype(complex), qubit_pair_space())
    with pytest.raises(StateError):
        QuantumState(np.diag([1.5, -0.5, 0, 0]).astype(complex), qubit_pair_space())
    with pytest.raises(StateError):
        QuantumState(np.array([[0.5, 0.5], [0.1, 0.5]], dtype=complex), fock_space(2))


def test_qubit_state_labels():
    assert np.allclose(qubit_state("10").data, basis_vector(4, 2))
    assert np.allclose(qubit_state("bell+").data, np.array([1, 0, 0, 1]) / np.sqrt(2))
    with pytest.raises(ValueError):
        qubit_state("22")


def test_prepare_cavity_fock_and_vacuum():
    assert np.allclose(prepare_cavity(CavityPrep.fock(2), 4).data, basis_vector(4, 2))
    vac = prepare_cavity(CavityPrep.coherent(0), 1)
    assert np.array_equal(vac.data, [1.0])


def test_prepare_cavity_thermal_limit():
    rho = prepare_cavity(CavityPrep.thermal(50.0)).data
    target = np.zeros_like(rho)
    target[0, 0] = 1
    assert np.max(np.abs(rho - target)) < 1e-10


def test_coherent_mean_photon_number():
    psi = prepare_cavity(CavityPrep.coherent(1.1), 20).data
    mean = np.real(psi.conj() @ number_operator(20).matrix @ psi)
    assert abs(mean - 1.21) < 1e-8


def test_paper_literal_weights():
    alpha = 1.1
    n = 20
    p = np.abs(prepare_cavity(CavityPrep.coherent(alpha, PAPER_LITERAL), n).data) ** 2
    from math import factorial

    raw = np.array([alpha ** (2 * k) / factorial(k) ** 2 for k in range(n)])
    assert np.allclose(p, raw / raw.sum(), atol=1e-15)


def test_cutoff_too_small_carries_minimum():
    prep = CavityPrep.coherent(1.1)
    need = minimal_cutoff(prep)
    with pytest.raises(CutoffError) as err:
        prepare_cavity(prep, need - 1)
    assert err.value.minimal_cutoff == need
    assert truncation_deficit(prep, need) < 1e-10 <= truncation_deficit(prep, need - 1)
    assert resolve_cutoff(prep, None) == need


def test_thermal_cutoff_criterion():
    prep = CavityPrep.thermal(2.0)
    n = minimal_cutoff(prep)
    assert np.exp(-2.0 * n) < 1e-10 <= np.exp(-2.0 * (n - 1))


def test_deficit_decreases_with_cutoff():
    prep = CavityPrep.coherent(2.0)
    d = [truncation_deficit(prep, n) for n in range(1, 30)]
    assert all(x >= y for x, y in zip(d, d[1:]))
    assert d[-1] < d[0]


def test_partial_trace_product_and_branches():
    psi = tensor_states(qubit_state("00"), prepare_cavity(CavityPrep.fock(2), 4))
    assert np.allclose(partial_trace_cavity(psi).data, np.diag([1, 0, 0, 0]))
    # sum_n c_n |phi_n>|n> -> sum |c_n|^2 |phi_n><phi_n|
    c = np.array([0.6, 0.8])
    phis = [qubit_state("00").data, qubit_state("bell+").data]
    full = sum(c[k] * np.kron(phis[k], basis_vector(2, k)) for k in range(2))
    rho = partial_trace_cavity(QuantumState(full, joint_space(2))).data
    expect = sum(c[k] ** 2 * np.outer(phis[k], phis[k].conj()) for k in range(2))
    assert np.allclose(rho, expect)


def test_partial_trace_bell_pure():
    from cavity_entangle.metrics import concurrence

    psi = tensor_states(qubit_state("bell+"), prepare_cavity(CavityPrep.fock(0), 3))
    rho = partial_trace_cavity(psi)
    assert abs(purity(rho) - 1) < 1e-12
    assert abs(concurrence(rho) - 1) < 1e-12


def test_partial_trace_preserves_trace_for_mixed():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    rho = m @ m.conj().T
    rho /= np.trace(rho)
    out = partial_trace_cavity(QuantumState(rho, joint_space(3)))
    assert abs(np.trace(out.data) - 1) < 1e-12


def test_partial_trace_wrong_space():
    with pytest.raises(ShapeError):
        partial_trace_cavity(qubit_state("00"))


def test_purity_values():
    assert purity(qubit_state("01")) == 1.0
    assert abs(purity(np.eye(4) / 4) - 0.25) < 1e-15
    assert abs(purity(np.diag([0.5, 0, 0, 0.5])) - 0.5) < 1e-15


def test_eigh_fixed_gauge():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    h = m + m.conj().T
    w, v = eigh_fixed(h)
    assert np.all(np.diff(w) >= 0)
    piv = v[np.argmax(np.abs(v), axis=0), np.arange(5)]
    assert np.allclose(piv.imag, 0) and np.all(piv.real > 0)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, h)
