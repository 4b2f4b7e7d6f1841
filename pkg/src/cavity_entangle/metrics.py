"""Figures of merit: fidelity, Bell-state overlaps, concurrence, DFS entangling times."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .dynamics import block_propagators, branch_states, evolve_effective, qubit_rdm, rdm_from_branches
from .errors import ConsistencyError, CutoffError, StateError
from .froehlich import EffectiveForm, ModelParams, effective_coefficients
from .hilbert import STANDARD, CavityPrep, QuantumState, cavity_amplitudes, check_density_matrix, qubit_state, resolve_cutoff

CLAMP_SLACK = 1e-8

_SY = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(_SY, _SY).real  # sy (x) sy is real


class BellState(enum.Enum):
    PHI_PLUS = "phi+"  # (|00> + |11>)/sqrt2
    PSI_01_MINUS_I = "psi01-i"  # (|01> - i|10>)/sqrt2
    PSI_10_PLUS_I = "psi10+i"  # (|01> + i|10>)/sqrt2

    def vector(self) -> np.ndarray:
        r = 1 / np.sqrt(2)
        if self is BellState.PHI_PLUS:
            return np.array([r, 0, 0, r], dtype=complex)
        if self is BellState.PSI_01_MINUS_I:
            return np.array([0, r, -1j * r, 0], dtype=complex)
        return np.array([0, r, 1j * r, 0], dtype=complex)


@dataclass
class MetricCurve:
    abscissa: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)
    bounded: bool = True  # False for printed closed forms, which may leave [0, 1]

    def __post_init__(self):
        self.abscissa = np.asarray(self.abscissa, dtype=float)
        if self.bounded:
            self.values = clamp_unit(self.values, self.meta.get("metric", "metric"))
        else:
            self.values = np.asarray(self.values, dtype=float)


def clamp_unit(values, name: str = "value"):
    """Clip to [0, 1] once the excursion is known to be round-off."""
    v = np.asarray(values, dtype=float)
    excess = max(float(np.max(-v, initial=0.0)), float(np.max(v - 1.0, initial=0.0)))
    if excess > CLAMP_SLACK:
        raise ConsistencyError(f"{name} left [0, 1] by {excess:.3e}")
    out = np.clip(v, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _branch_mean(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # same summation order in numerator and denominator, so equal branch values come back unchanged
    return (values * weights).sum(axis=-1) / weights.sum()


def _scalar_or_array(values, t):
    return float(values[0]) if np.ndim(t) == 0 else values


# --------------------------------------------------------------------------
# fidelity and Bell overlaps
# --------------------------------------------------------------------------


def fidelity_vs_target(m: int, prep: CavityPrep, qubit_init, t, params: ModelParams, form: EffectiveForm = EffectiveForm()):
    """Tr[rho_m(t) rho(t)]: overlap of the actual qubit state with the ideal Fock-m evolution."""
    if m < 0 or (params.cutoff is not None and m >= params.cutoff):
        raise CutoffError(f"target Fock index {m} outside the cutoff {params.cutoff}", minimal_cutoff=m + 1)
    psi0 = qubit_state(qubit_init).data
    b = branch_states(prep, psi0, t, params, form)
    target = (block_propagators([m], b.times, params, form) @ psi0)[:, 0, :]
    overlaps = np.abs(np.einsum("ti,tki->tk", target.conj(), b.states)) ** 2
    return clamp_unit(_scalar_or_array(_branch_mean(overlaps, b.weights), t), "fidelity")


def bell_overlap(prep: CavityPrep, t, params: ModelParams, form: EffectiveForm = EffectiveForm(), qubit_init="00", target=BellState.PHI_PLUS):
    """<target| rho(t) |target> for the qubit state reached from ``qubit_init``."""
    b = branch_states(prep, qubit_init, t, params, form)
    amp = np.abs(b.states @ target.vector().conj()) ** 2
    return clamp_unit(_scalar_or_array(_branch_mean(amp, b.weights), t), "bell overlap")


def bell_overlap_fock(m: int, t, params: ModelParams, form: EffectiveForm = EffectiveForm()):
    """|<phi+| exp(-i H(m) t) |00>|^2."""
    if m < 0 or (params.cutoff is not None and m >= params.cutoff):
        raise CutoffError(f"Fock index {m} outside the cutoff {params.cutoff}", minimal_cutoff=m + 1)
    return bell_overlap(CavityPrep.fock(m), t, params, form)


def bell_overlap_coherent(alpha: complex, t, params: ModelParams, form: EffectiveForm = EffectiveForm(), weights: str = STANDARD):
    return bell_overlap(CavityPrep.coherent(alpha, weights), t, params, form)


# --------------------------------------------------------------------------
# concurrence
# --------------------------------------------------------------------------


def wootters_lambdas(rho: np.ndarray) -> np.ndarray:
    """The decreasing lambda_i: square roots of the eigenvalues of rho (sy sy) rho* (sy sy).

    With rho = M M^dag they are the singular values of M^T (sy sy) M, which
    avoids square roots of round-off eigenvalues of the non-Hermitian product.
    Works on stacks of shape (..., 4, 4).
    """
    rho = np.asarray(rho, dtype=complex)
    herm = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
    d, v = np.linalg.eigh(herm)
    m = v * np.sqrt(np.clip(d, 0.0, None))[..., None, :]
    tau = np.swapaxes(m, -1, -2) @ SPIN_FLIP @ m
    return np.linalg.svd(tau, compute_uv=False)


def _concurrence_raw(rho) -> np.ndarray:
    lam = wootters_lambdas(rho)
    return np.maximum(0.0, lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3])


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state in the |00>, |01>, |10>, |11> basis."""
    if isinstance(rho, QuantumState):
        rho = rho.density()
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise StateError(f"concurrence needs a 4x4 density matrix, got shape {rho.shape}")
    check_density_matrix(rho)
    return clamp_unit(float(_concurrence_raw(rho)), "concurrence")


def _wootters_curve(prep: CavityPrep, t, params, form, qubit_init="00"):
    b = branch_states(prep, qubit_init, t, params, form)
    rhos = rdm_from_branches(b.weights, b.states)
    return clamp_unit(_scalar_or_array(_concurrence_raw(rhos), t), "concurrence")


def _closed_form_concurrence(prep: CavityPrep, t, params, form, thermal_d: bool):
    cutoff = resolve_cutoff(prep, params.cutoff)
    w, _ = cavity_amplitudes(prep, cutoff)
    c = effective_coefficients(params, form)
    k = np.arange(cutoff)
    z = params.omega_j + c.stark * k + c.lamb
    omega_k = np.sqrt((2 * z) ** 2 + c.exchange**2)
    sin_t = np.where(omega_k > 0, 2 * z / np.where(omega_k > 0, omega_k, 1), 1.0)
    cos_t = np.where(omega_k > 0, abs(c.exchange) / np.where(omega_k > 0, omega_k, 1), 0.0)
    tt = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
    s, co = np.sin(omega_k * tt), np.cos(omega_k * tt)
    a = (np.abs(co - 1j * s * sin_t) ** 2) @ w
    bb = (s**2 * cos_t**2) @ w
    front = s * (sin_t if thermal_d else cos_t)
    d = (front * (cos_t * co - 1j * s * sin_t)) @ w
    val = np.sqrt(2.0) * np.abs(np.sqrt(a * bb) - np.abs(d))
    return float(val[0]) if np.ndim(t) == 0 else val


def concurrence_coherent(alpha: complex, t, params: ModelParams, form: EffectiveForm = EffectiveForm(), mode: str = "wootters", weights: str = STANDARD):
    """Concurrence of the qubits started in |00> with the cavity in a coherent state.

    ``mode="wootters"`` evaluates the reduced density matrix exactly;
    ``mode="closed-form"`` evaluates the printed A, B, D sums with the chosen weights.
    """
    prep = CavityPrep.coherent(alpha, weights)
    if mode == "wootters":
        return _wootters_curve(prep, t, params, form)
    if mode == "closed-form":
        return _closed_form_concurrence(prep, t, params, form, thermal_d=False)
    raise ValueError(f"mode must be 'wootters' or 'closed-form', got {mode!r}")


def concurrence_thermal(beta_e: float, t, params: ModelParams, form: EffectiveForm = EffectiveForm(), mode: str = "wootters"):
    prep = CavityPrep.thermal(beta_e)
    if mode == "wootters":
        return _wootters_curve(prep, t, params, form)
    if mode == "closed-form":
        return _closed_form_concurrence(prep, t, params, form, thermal_d=True)
    raise ValueError(f"mode must be 'wootters' or 'closed-form', got {mode!r}")


def concurrence_curve(prep: CavityPrep, t, params: ModelParams, form: EffectiveForm = EffectiveForm(), qubit_init="00"):
    """Wootters concurrence of the reduced qubit state for any preparation and initial state."""
    return _wootters_curve(prep, t, params, form, qubit_init)


# --------------------------------------------------------------------------
# printed closed forms, kept for side-by-side comparison
# --------------------------------------------------------------------------


def _printed_angles(ns, params, form):
    c = effective_coefficients(params, form)
    z = params.omega_j + c.stark * np.asarray(ns, dtype=float) + c.lamb
    omega = np.sqrt((2 * z) ** 2 + c.exchange**2)
    return omega, 2 * z / omega, abs(c.exchange) / omega


def printed_bell_overlap(m: int, t, params: ModelParams, form: EffectiveForm = EffectiveForm()):
    """(1/2)|cos^2(w t) + sin^2(w t)(cos th + sin th)^2| as printed for the Fock case."""
    w, st, ct = _printed_angles([m], params, form)
    t = np.asarray(t, dtype=float)
    return 0.5 * np.abs(np.cos(w[0] * t) ** 2 + np.sin(w[0] * t) ** 2 * (ct[0] + st[0]) ** 2)


def printed_fidelity_expansion(m: int, weights: np.ndarray, t, params: ModelParams, form: EffectiveForm = EffectiveForm()):
    """The printed seven-term fidelity sum, with explicit branch weights."""
    ns = np.arange(len(weights))
    w, st, ct = _printed_angles(ns, params, form)
    wm, stm, ctm = _printed_angles([m], params, form)
    tt = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
    sn, cn = np.sin(w * tt), np.cos(w * tt)
    sm, cm = np.sin(wm * tt), np.cos(wm * tt)
    terms = (
        cn**2 * cm**2
        + sn**2 * st**2 * sm**2 * stm**2
        + cm**2 * sn**2 * st**2
        + cn**2 * sm**2 * stm**2
        + sn**2 * ct**2 * sm**2 * ctm**2
        + 2 * sn * cn * ct * sm * ctm * cm
        + 2 * sn**2 * sm**2 * ct * ctm * stm * st
    )
    return terms @ np.asarray(weights, dtype=float)


# --------------------------------------------------------------------------
# decoherence-free subspace
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DFSResult:
    target: BellState
    t_star: float
    achieved_concurrence: float
    printed_time: float
    exchange: float
    overlap: float

    @property
    def time_ratio(self) -> float:
        return self.t_star / self.printed_time if np.isfinite(self.printed_time) and self.printed_time else float("nan")


def dfs_entangling_time(params: ModelParams, form: EffectiveForm = EffectiveForm(), which: BellState = BellState.PSI_01_MINUS_I) -> float:
    """First t > 0 at which exp(-i H(n) t)|01> equals ``which`` up to a global phase.

    In the DFS, exp(-i J sx1 sx2 t)|01> = cos(Jt)|01> - i sin(Jt)|10>, so the
    -i target needs Jt = pi/4 (mod pi) and the +i target Jt = -pi/4 (mod pi).
    """
    j = effective_coefficients(params, form).exchange
    if j == 0.0:
        raise ValueError("no exchange coupling (g = 0): the DFS never becomes entangled")
    phase = {BellState.PSI_01_MINUS_I: np.pi / 4, BellState.PSI_10_PLUS_I: -np.pi / 4}.get(which)
    if phase is None:
        raise ValueError(f"{which} is not a DFS target")
    period = np.pi / abs(j)
    return float((phase / j) % period)


def printed_dfs_time(params: ModelParams, which: BellState = BellState.PSI_01_MINUS_I) -> float:
    """pi (omega^2 - 4 omega_j^2) / (16 g^2 omega_j), times 3 for the +i target."""
    mult = 1 if which is BellState.PSI_01_MINUS_I else 3
    if params.g == 0 or params.omega_j == 0:
        return float("inf")
    return mult * np.pi * (params.omega**2 - 4 * params.omega_j**2) / (16 * params.g**2 * params.omega_j)


def dfs_protocol(params: ModelParams, form: EffectiveForm = EffectiveForm(), which: BellState = BellState.PSI_01_MINUS_I, prep: CavityPrep | None = None) -> DFSResult:
    prep = prep or CavityPrep.fock(0)
    t_star = dfs_entangling_time(params, form, which)
    ens = evolve_effective(prep, "01", t_star, params, form)
    rho = qubit_rdm(ens)
    return DFSResult(
        target=which,
        t_star=t_star,
        achieved_concurrence=concurrence(rho),
        printed_time=printed_dfs_time(params, which),
        exchange=effective_coefficients(params, form).exchange,
        overlap=float(np.real(which.vector().conj() @ rho.data @ which.vector())),
    )
