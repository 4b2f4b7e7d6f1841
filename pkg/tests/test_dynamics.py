import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cavity_entangle.dynamics import (
    block_coefficients,
    block_propagators,
    branch_states,
    evolve_effective,
    evolve_exact,
    evolve_exact_many,
    propagator,
    qubit_rdm,
)
from cavity_entangle.errors import CutoffError, HermiticityError
from cavity_entangle.froehlich import PRINTED, RWA, EffectiveForm, ModelParams, block_hamiltonian, delta_coefficients, effective_model_hamiltonian
from cavity_entangle.hilbert import (
    CavityPrep,
    Operator,
    QuantumState,
    SpaceTag,
    fock,
    joint_space,
    partial_trace_cavity,
    prepare_cavity,
    purity,
    qubit_pair_space,
    qubit_state,
    tensor_states,
)
from cavity_entangle.validation import ensemble_gap

TWO = SpaceTag((fock(2),))


def test_evolve_exact_trivial_cases():
    h = Operator(np.diag([0.3, -1.2]), TWO)
    psi = QuantumState(np.array([0, 1], dtype=complex), TWO)
    assert np.array_equal(evolve_exact(h, psi, 0.0).data, psi.data)
    out = evolve_exact(h, psi, 2.5).data
    assert np.allclose(np.abs(out) ** 2, [0, 1])
    assert np.allclose(out[1], np.exp(1.2j * 2.5))


def test_rabi_formula():
    e, lam = 0.7, 0.25
    h = Operator([[e, lam], [lam, -e]], TWO)
    psi = QuantumState(np.array([1, 0], dtype=complex), TWO)
    w = np.hypot(e, lam)
    for t in np.linspace(0, 30, 31):
        p1 = abs(evolve_exact(h, psi, t).data[1]) ** 2
        assert abs(p1 - lam**2 / w**2 * np.sin(w * t) ** 2) < 1e-12


def test_non_hermitian_rejected():
    h = Operator([[0, 1], [0, 0]], TWO)
    with pytest.raises(HermiticityError):
        propagator(h, 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0, 50), st.floats(0, 50))
def test_composition_and_norm(seed, t1, t2):
    rng = np.random.default_rng(seed)
    sp = joint_space(2)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = Operator(m + m.conj().T, sp)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi = QuantumState(v / np.linalg.norm(v), sp)
    once = evolve_exact(h, psi, t1 + t2).data
    twice = evolve_exact(h, evolve_exact(h, psi, t1), t2).data
    assert np.max(np.abs(once - twice)) < 1e-9
    assert abs(np.linalg.norm(once) - 1) < 1e-10


def test_evolve_many_matches_single_mixed():
    p = ModelParams(cutoff=5)
    h = effective_model_hamiltonian(p)
    rho = np.kron(np.diag([1, 0, 0, 0]), np.diag([0.5, 0.3, 0.1, 0.05, 0.05])).astype(complex)
    psi = QuantumState(rho, joint_space(5))
    many = evolve_exact_many(h, psi, [0.0, 17.0])
    assert np.allclose(many[1], evolve_exact(h, psi, 17.0).data, atol=1e-12)


def test_block_coefficients_basic(params):
    b = block_coefficients(2, 0.0, params)
    assert b.c1 == 0.0 and b.c2 == 1.0
    ts = np.linspace(0, 500, 101)
    b = block_coefficients(2, ts, params)
    assert np.max(np.abs(np.abs(b.c1) ** 2 + np.abs(b.c2) ** 2 - 1)) < 1e-12
    assert np.cos(b.theta_n) >= 0


def test_block_coefficients_weak_coupling_no_transfer():
    b = block_coefficients(1, np.linspace(0, 1000, 201), ModelParams(g=1e-4))
    assert abs(b.theta_n - np.pi / 2) < 1e-6
    assert np.max(np.abs(b.c1)) < 1e-6


def test_block_coefficients_printed_frequency():
    p = ModelParams()
    d = delta_coefficients(p)
    n = 4
    b = block_coefficients(n, 0.0, p, EffectiveForm(RWA, PRINTED))
    z2 = 2 * p.omega_j + 2 * p.g**2 * d.delta_minus * n
    om = np.hypot(z2, 0.5 * p.g**2 * d.delta_plus)
    assert abs(b.omega_n - om) < 1e-15
    assert abs(np.sin(b.theta_n) - z2 / om) < 1e-14


def test_block_coefficients_against_full_space_exponential():
    p = ModelParams(g=0.05, cutoff=6)
    h = effective_model_hamiltonian(p)
    psi = tensor_states(qubit_state("00"), prepare_cavity(CavityPrep.fock(1), 6))
    ts = np.linspace(0, 200, 401)
    states = evolve_exact_many(h, psi, ts).reshape(len(ts), 4, 6)
    b = block_coefficients(1, ts, p)
    assert np.max(np.abs(np.abs(b.c1) ** 2 - np.abs(states[:, 3, 1]) ** 2)) < 1e-10
    assert np.max(np.abs(np.abs(b.c2) ** 2 - np.abs(states[:, 0, 1]) ** 2)) < 1e-10


@pytest.mark.parametrize("form", [EffectiveForm(), EffectiveForm(RWA, PRINTED), EffectiveForm(coupling_sign=1)])
def test_block_propagators_equal_matrix_exponential(form):
    p = ModelParams()
    ts = np.array([0.0, 3.0, 77.0, 200.0])
    u = block_propagators([0, 3], ts, p, form)
    for k, n in enumerate((0, 3)):
        h = block_hamiltonian(n, p, form)
        for i, t in enumerate(ts):
            exact = propagator(h, t) * np.exp(1j * p.omega * n * t)
            assert np.max(np.abs(u[i, k] - exact)) < 1e-12


def test_evolve_effective_fock_single_branch(params):
    ens = evolve_effective(CavityPrep.fock(3), "00", 55.0, params)
    assert len(ens.branches) == 1 and ens.branches[0][0] == 1.0
    assert abs(purity(qubit_rdm(ens)) - 1) < 1e-12


def test_coherent_vacuum_equals_fock_zero(params):
    a = evolve_effective(CavityPrep.coherent(0.0), "00", 31.0, params)
    b = evolve_effective(CavityPrep.fock(0), "00", 31.0, params)
    assert np.array_equal(a.qubit_states, b.qubit_states)
    assert np.array_equal(a.weights, b.weights)


def test_ensemble_weights_and_norms(params):
    ens = evolve_effective(CavityPrep.coherent(1.1), "bell+", 12.0, params)
    assert abs(ens.weights.sum() - 1) < 1e-10
    assert np.max(np.abs(np.linalg.norm(ens.qubit_states, axis=1) - 1)) < 1e-12


def test_ensemble_joint_state_matches_full_space():
    p = ModelParams()
    prep = CavityPrep.coherent(1.1)
    ens = evolve_effective(prep, "00", 40.0, p)
    n = ens.cutoff
    h = effective_model_hamiltonian(p.with_cutoff(n))
    psi = tensor_states(qubit_state("00"), prepare_cavity(prep, n))
    exact = evolve_exact(h, psi, 40.0)
    assert np.max(np.abs(ens.joint_state().data - exact.data)) < 1e-9
    assert np.max(np.abs(qubit_rdm(ens).data - partial_trace_cavity(exact).data)) < 1e-9


def test_thermal_joint_state_is_mixed():
    ens = evolve_effective(CavityPrep.thermal(2.0), "01", 5.0, ModelParams())
    joint = ens.joint_state()
    assert not joint.is_pure
    assert np.max(np.abs(partial_trace_cavity(joint).data - qubit_rdm(ens).data)) < 1e-12


PREPS = [CavityPrep.fock(n) for n in range(4)] + [CavityPrep.coherent(0.5), CavityPrep.coherent(1.1), CavityPrep.thermal(2.0)]


@pytest.mark.parametrize("prep", PREPS, ids=lambda p: p.label())
@pytest.mark.parametrize("init", ["00", "01", "bell+"])
def test_ensemble_vs_full_space(prep, init):
    assert ensemble_gap(ModelParams(), prep, init, [0.0, 5.0, 20.0, 100.0]) < 1e-9


@pytest.mark.parametrize("prep", PREPS, ids=lambda p: p.label())
def test_dfs_purity_any_prep(prep):
    for init in ("01", "10", np.array([0, 0.6, 0.8j, 0])):
        b = branch_states(prep, init, np.linspace(0, 3000, 301), ModelParams())
        rho = np.einsum("k,tki,tkj->tij", b.weights, b.states, b.states.conj())
        pur = np.einsum("tij,tji->t", rho, rho).real
        assert np.max(np.abs(pur - 1)) < 1e-10


def test_two_orthogonal_branches_purity_half():
    rho = 0.5 * np.diag([1, 0, 0, 0]) + 0.5 * np.diag([0, 0, 0, 1])
    assert abs(purity(QuantumState(rho.astype(complex), qubit_pair_space())) - 0.5) < 1e-15


def test_cutoff_too_small_in_ensemble():
    with pytest.raises(CutoffError):
        evolve_effective(CavityPrep.coherent(2.0), "00", 1.0, ModelParams(cutoff=4))


def test_global_branch_phase_does_not_change_rdm():
    rng = np.random.default_rng(11)
    b = branch_states(CavityPrep.coherent(1.1), "00", [0.0, 50.0, 150.0], ModelParams())
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, len(b.weights)))
    rho = np.einsum("k,tki,tkj->tij", b.weights, b.states, b.states.conj())
    shifted = b.states * phases[None, :, None]
    rho2 = np.einsum("k,tki,tkj->tij", b.weights, shifted, shifted.conj())
    assert np.max(np.abs(rho - rho2)) < 1e-15
