"""Time evolution: exact propagation and closed-form photon-number blocks.

Under the photon-number-conserving effective Hamiltonian every Fock level
n carries its own two-qubit Hamiltonian

    H(n) = z_n (sz1 + sz2) + e_n + J sx1 sx2,

which splits into the span{|00>, |11>} and span{|01>, |10>} sectors.  The
first rotates at omega_n = sqrt((2 z_n)^2 + J^2) with mixing angle
sin(theta_n) = 2 z_n / omega_n; the second is a plain exchange at rate J and
does not depend on n at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HermiticityError, ShapeError
from .froehlich import RWA, EffectiveForm, ModelParams, effective_coefficients
from .hilbert import (
    CavityPrep,
    Operator,
    QuantumState,
    cavity_amplitudes,
    eigh_fixed,
    joint_space,
    qubit_pair_space,
    qubit_state,
    resolve_cutoff,
)


def propagator(h: Operator, t: float) -> np.ndarray:
    """exp(-i H t) via the eigendecomposition of H."""
    if not h.is_hermitian(1e-10 * max(1.0, h.max_abs())):
        raise HermiticityError(f"evolution requires a Hermitian Hamiltonian (defect {h.hermiticity_defect():.3e})")
    w, v = eigh_fixed(h.matrix)
    return (v * np.exp(-1j * w * t)[None, :]) @ v.conj().T


def evolve_exact(h: Operator, psi0: QuantumState, t: float) -> QuantumState:
    """Exact state at time t under a time-independent Hermitian H."""
    if h.space != psi0.space:
        raise ShapeError(f"Hamiltonian space {h.space} does not match state space {psi0.space}")
    u = Operator(propagator(h, t), h.space)
    return psi0.apply(u)


def evolve_exact_many(h: Operator, psi0: QuantumState, times) -> np.ndarray:
    """States at each time as an array: (T, d) for pure input, (T, d, d) for mixed."""
    if h.space != psi0.space:
        raise ShapeError(f"Hamiltonian space {h.space} does not match state space {psi0.space}")
    if not h.is_hermitian(1e-10 * max(1.0, h.max_abs())):
        raise HermiticityError("evolution requires a Hermitian Hamiltonian")
    w, v = eigh_fixed(h.matrix)
    phases = np.exp(-1j * np.outer(np.atleast_1d(times), w))
    if psi0.is_pure:
        coeff = v.conj().T @ psi0.data
        return (phases * coeff[None, :]) @ v.T
    rho_e = v.conj().T @ psi0.data @ v
    evolved = phases[:, :, None] * rho_e[None] * phases.conj()[:, None, :]
    return v[None] @ evolved @ v.conj().T[None]


# --------------------------------------------------------------------------
# closed-form blocks
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockCoefficients:
    """Rotation in the {|00>, |11>} sector of H(n).

    exp(-i H(n) t)|00> = e^{-i e_n t} (c2 |00> - i sign(J) c1 |11>), with
    c1 = sin(omega_n t) cos(theta_n) and c2 = cos(omega_n t) - i sin(omega_n t) sin(theta_n).
    """

    n: int
    omega_n: float
    theta_n: float
    c1: np.ndarray | float
    c2: np.ndarray | complex
    exchange: float
    qubit_shift: float
    energy_shift: float


def _sector_parameters(ns, params: ModelParams, form: EffectiveForm):
    if form.variant != RWA:
        raise ValueError("closed-form block dynamics needs the photon-number-conserving (rwa) form")
    c = effective_coefficients(params, form)
    ns = np.asarray(ns, dtype=float)
    z = params.omega_j + c.stark * ns + c.lamb
    return z, c.exchange, c.offset


def _angles(z, j):
    omega_n = np.sqrt((2.0 * z) ** 2 + j**2)
    safe = np.where(omega_n > 0, omega_n, 1.0)
    sin_t = np.where(omega_n > 0, 2.0 * z / safe, 1.0)
    cos_t = np.where(omega_n > 0, abs(j) / safe, 0.0)
    return omega_n, sin_t, cos_t


def block_coefficients(n: int, t, params: ModelParams, form: EffectiveForm = EffectiveForm()) -> BlockCoefficients:
    z, j, offset = _sector_parameters([n], params, form)
    omega_n, sin_t, cos_t = _angles(z[0], j)
    t = np.asarray(t, dtype=float)
    c1 = np.sin(omega_n * t) * cos_t
    c2 = np.cos(omega_n * t) - 1j * np.sin(omega_n * t) * sin_t
    if t.ndim == 0:
        c1, c2 = float(c1), complex(c2)
    return BlockCoefficients(
        n=int(n),
        omega_n=float(omega_n),
        theta_n=float(np.arctan2(sin_t, cos_t)),
        c1=c1,
        c2=c2,
        exchange=float(j),
        qubit_shift=float(z[0]),
        energy_shift=float(offset),
    )


def block_propagators(ns, times, params: ModelParams, form: EffectiveForm = EffectiveForm()) -> np.ndarray:
    """exp(-i (H(n) - omega n) t) for every time and photon number, shape (T, K, 4, 4).

    The cavity energy omega*n is left out; callers attach it to the branch
    amplitude.
    """
    z, j, offset = _sector_parameters(ns, params, form)
    omega_n, sin_t, cos_t = _angles(z, j)
    sgn = 1.0 if j >= 0 else -1.0
    t = np.atleast_1d(np.asarray(times, dtype=float))[:, None]
    ca, sa = np.cos(omega_n * t), np.sin(omega_n * t)
    cb, sb = np.cos(j * t), np.sin(j * t)
    u = np.zeros(t.shape[:1] + (len(z), 4, 4), dtype=complex)
    u[..., 0, 0] = ca - 1j * sa * sin_t
    u[..., 3, 3] = ca + 1j * sa * sin_t
    u[..., 0, 3] = u[..., 3, 0] = -1j * sgn * sa * cos_t
    u[..., 1, 1] = u[..., 2, 2] = cb
    u[..., 1, 2] = u[..., 2, 1] = -1j * sb
    return u * np.exp(-1j * offset * t)[..., None, None]


# --------------------------------------------------------------------------
# ensembles
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EvolvedEnsemble:
    """Qubit branches correlated with cavity photon numbers at one time.

    ``amplitudes`` (pure cavity fields only) carry the cavity phase
    e^{-i omega n t}, so ``joint_state()`` equals the full-space state.
    """

    weights: np.ndarray
    photon_n: np.ndarray
    qubit_states: np.ndarray
    amplitudes: np.ndarray | None
    prep: CavityPrep
    t: float
    cutoff: int

    @property
    def branches(self) -> list[tuple[float, int, np.ndarray]]:
        return [(float(w), int(n), s) for w, n, s in zip(self.weights, self.photon_n, self.qubit_states)]

    def joint_state(self) -> QuantumState:
        space = joint_space(self.cutoff)
        if self.amplitudes is not None:
            psi = np.zeros((4, self.cutoff), dtype=complex)
            psi[:, self.photon_n] = (self.amplitudes[:, None] * self.qubit_states).T
            return QuantumState(psi.reshape(-1), space)
        rho = np.zeros((4, self.cutoff, 4, self.cutoff), dtype=complex)
        for w, n, s in zip(self.weights, self.photon_n, self.qubit_states):
            rho[:, n, :, n] += w * np.outer(s, s.conj())
        return QuantumState(rho.reshape(4 * self.cutoff, 4 * self.cutoff), space)


@dataclass(frozen=True, eq=False)
class BranchSet:
    """Photon-number branches of a preparation evaluated on a whole time grid."""

    weights: np.ndarray  # (K,)
    photon_n: np.ndarray  # (K,)
    amplitudes: np.ndarray | None  # (K,), without the time-dependent cavity phase
    states: np.ndarray  # (T, K, 4)
    times: np.ndarray  # (T,)
    cutoff: int


def branch_states(prep: CavityPrep, qubit_init, times, params: ModelParams, form: EffectiveForm = EffectiveForm()) -> BranchSet:
    """Evolve ``qubit_init`` under H(n) for every populated photon number n."""
    psi0 = qubit_state(qubit_init).data
    cutoff = resolve_cutoff(prep, params.cutoff)
    probs, amps = cavity_amplitudes(prep, cutoff)
    keep = np.nonzero(probs > 0)[0]
    times = np.atleast_1d(np.asarray(times, dtype=float))
    u = block_propagators(keep, times, params, form)
    return BranchSet(
        weights=probs[keep],
        photon_n=keep,
        amplitudes=None if amps is None else amps[keep],
        states=u @ psi0,
        times=times,
        cutoff=cutoff,
    )


def evolve_effective(prep: CavityPrep, qubit_init, t: float, params: ModelParams, form: EffectiveForm = EffectiveForm()) -> EvolvedEnsemble:
    """Branch decomposition sum_n c_n |phi_n(t)> (x) |n> under the block Hamiltonians."""
    b = branch_states(prep, qubit_init, [t], params, form)
    amps = None
    if b.amplitudes is not None:
        amps = b.amplitudes * np.exp(-1j * params.omega * b.photon_n * float(t))
    return EvolvedEnsemble(
        weights=b.weights,
        photon_n=b.photon_n,
        qubit_states=b.states[0],
        amplitudes=amps,
        prep=prep,
        t=float(t),
        cutoff=b.cutoff,
    )


def rdm_from_branches(weights: np.ndarray, states: np.ndarray) -> np.ndarray:
    """sum_k w_k |s_k><s_k| over the branch axis; ``states`` is (..., K, 4)."""
    return np.einsum("k,...ki,...kj->...ij", weights, states, states.conj())


def qubit_rdm(ens: EvolvedEnsemble) -> QuantumState:
    return QuantumState(rdm_from_branches(ens.weights, ens.qubit_states), qubit_pair_space())
