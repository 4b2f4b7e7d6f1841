"""Model Hamiltonian and the second-order Froehlich (Schrieffer-Wolff) transformation.

Two routes produce the effective Hamiltonian:

* a generic engine that builds the generator S from the eigenbasis of any
  H0 and evaluates H0 + [HI, S]/2 numerically, and
* closed forms specialised to the two-qubit cavity model.

The generic engine is the reference.  The coefficients it produces are
collected in :func:`effective_coefficients` under the ``"derived"``
convention; the ``"printed"`` convention reproduces the printed closed
forms for comparison.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .errors import CutoffError, DegeneracyError, HermiticityError, ResonanceError, RegimeWarning, ShapeError
from .hilbert import (
    Operator,
    commutator,
    eigh_fixed,
    joint_space,
    qubit_pair_space,
    PAULI,
)

RESONANCE_HARD = 1e-6
RESONANCE_WARN = 0.1
DISPERSIVE_LIMIT = 0.1
DEGENERACY_TOL = 1e-9
COUPLING_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs (hbar = 1).

    omega    cavity frequency
    omega_j  qubit half-splitting (H0 contains omega_j * (sz1 + sz2))
    g        qubit-cavity coupling
    cutoff   number of retained Fock levels, or None to pick it per preparation
    """

    omega: float = 1.0
    omega_j: float = 0.3
    g: float = 0.02
    cutoff: int | None = None

    def __post_init__(self):
        if not np.isfinite(self.omega) or self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not (np.isfinite(self.omega_j) and np.isfinite(self.g)):
            raise ValueError("omega_j and g must be finite")
        if self.cutoff is not None and int(self.cutoff) < 1:
            raise CutoffError(f"Fock cutoff must be >= 1, got {self.cutoff}", minimal_cutoff=1)
        detuning = self.detuning
        if detuning < RESONANCE_HARD * self.omega:
            raise ResonanceError(
                f"omega_j={self.omega_j!r} puts the qubit splitting 2|omega_j| on resonance with "
                f"omega={self.omega!r} (detuning {detuning:.3e}); the dispersive coefficients diverge"
            )
        if abs(self.g) >= detuning:
            raise ResonanceError(
                f"detuning |omega - 2|omega_j|| = {detuning:.3e} is not larger than the coupling "
                f"g = {abs(self.g):.3e}; the second-order expansion is invalid this close to resonance "
                f"(omega={self.omega!r}, omega_j={self.omega_j!r})"
            )
        if detuning < RESONANCE_WARN * self.omega:
            warnings.warn(
                f"detuning {detuning:.3e} is below {RESONANCE_WARN} * omega; expect large corrections",
                RegimeWarning,
                stacklevel=3,
            )

    @property
    def detuning(self) -> float:
        return abs(self.omega - 2.0 * abs(self.omega_j))

    @property
    def dispersive(self) -> bool:
        """Advisory flag for g / omega << 1."""
        return abs(self.g) / self.omega < DISPERSIVE_LIMIT

    def with_cutoff(self, cutoff: int | None) -> "ModelParams":
        return replace(self, cutoff=cutoff)

    def require_cutoff(self) -> int:
        if self.cutoff is None:
            raise CutoffError("a Fock cutoff is required to build full-space operators", minimal_cutoff=1)
        return int(self.cutoff)

    def as_dict(self) -> dict:
        return {"omega": self.omega, "omega_j": self.omega_j, "g": self.g, "cutoff": self.cutoff}


@dataclass(frozen=True)
class DeltaCoefficients:
    delta_plus: float
    delta_minus: float


def delta_coefficients(params: ModelParams) -> DeltaCoefficients:
    """1/(omega - 2 omega_j) +/- 1/(omega + 2 omega_j)."""
    lo = 1.0 / (params.omega - 2.0 * params.omega_j)
    hi = 1.0 / (params.omega + 2.0 * params.omega_j)
    return DeltaCoefficients(lo + hi, lo - hi)


# --------------------------------------------------------------------------
# model operators
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _ModelOps:
    sz: np.ndarray  # sz1 + sz2
    sx: np.ndarray  # sx1 + sx2
    sy: np.ndarray  # sy1 + sy2
    xx: np.ndarray  # sx1 sx2
    a: np.ndarray
    num: np.ndarray


@lru_cache(maxsize=32)
def _model_ops(cutoff: int) -> _ModelOps:
    i2 = np.eye(2)
    a_f = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1).astype(complex)
    i_f = np.eye(cutoff)

    def on_qubits(m):
        return np.kron(m, i_f)

    def both(p):
        return on_qubits(np.kron(p, i2) + np.kron(i2, p))

    ops = _ModelOps(
        sz=both(PAULI["Z"]),
        sx=both(PAULI["X"]),
        sy=both(PAULI["Y"]),
        xx=on_qubits(np.kron(PAULI["X"], PAULI["X"])),
        a=np.kron(np.eye(4), a_f),
        num=np.kron(np.eye(4), a_f.conj().T @ a_f),
    )
    for arr in vars(ops).values():
        arr.flags.writeable = False
    return ops


def build_model(params: ModelParams) -> tuple[Operator, Operator]:
    """H0 = omega_j (sz1 + sz2) + omega a^dag a and HI = g (a + a^dag)(sx1 + sx2)."""
    n = params.require_cutoff()
    ops = _model_ops(n)
    space = joint_space(n)
    h0 = params.omega_j * ops.sz + params.omega * ops.num
    q = ops.a + ops.a.conj().T
    hi = params.g * (q @ ops.sx)
    return Operator(h0, space, {"role": "H0"}), Operator(hi, space, {"role": "HI"})


def generic_s_operator(h0: Operator, hi: Operator) -> Operator:
    """Generator S solving HI + [H0, S] = 0, built in the eigenbasis of H0.

    S_mn = <m|HI|n> / (E_n - E_m) for non-degenerate pairs and 0 otherwise.
    Raises DegeneracyError when HI connects degenerate levels (including a
    level with itself), because then no such S exists.
    """
    if h0.space != hi.space:
        raise ShapeError(f"space mismatch: {h0.space} vs {hi.space}")
    if not h0.is_hermitian(1e-10 * max(1.0, h0.max_abs())):
        raise HermiticityError("H0 must be Hermitian")
    energies, vecs = eigh_fixed(h0.matrix)
    hi_eig = vecs.conj().T @ hi.matrix @ vecs
    gap = energies[None, :] - energies[:, None]  # E_n - E_m at [m, n]
    degenerate = np.abs(gap) <= DEGENERACY_TOL * max(h0.max_abs(), 1e-300)
    coupled = np.abs(hi_eig) > COUPLING_TOL * max(hi.max_abs(), 1e-300)
    bad = np.argwhere(degenerate & coupled)
    if len(bad):
        pairs = [(int(m), int(n)) for m, n in bad if m <= n]
        shown = ", ".join(f"({m},{n})" for m, n in pairs[:8])
        raise DegeneracyError(
            f"HI couples degenerate eigenstates of H0 at {len(pairs)} pair(s): {shown}"
            + (" ..." if len(pairs) > 8 else ""),
            pairs,
        )
    s_eig = np.zeros_like(hi_eig)
    np.divide(hi_eig, gap, out=s_eig, where=~degenerate)
    return Operator(vecs @ s_eig @ vecs.conj().T, h0.space, {"role": "S", "route": "generic"})


def effective_hamiltonian(h0: Operator, hi: Operator, s: Operator) -> Operator:
    """H0 + [HI, S] / 2."""
    if not (h0.space == hi.space == s.space):
        raise ShapeError("H0, HI and S must share one space")
    return (h0 + 0.5 * commutator(hi, s)).with_meta(role="H_eff", route="generic")


def model_s_operator(params: ModelParams) -> Operator:
    """Closed-form generator (g/2){D+ (a - a^dag)(sx1+sx2) + i D- (a + a^dag)(sy1+sy2)}."""
    n = params.require_cutoff()
    ops = _model_ops(n)
    d = delta_coefficients(params)
    ad = ops.a.conj().T
    s = 0.5 * params.g * (d.delta_plus * (ops.a - ad) @ ops.sx + 1j * d.delta_minus * (ops.a + ad) @ ops.sy)
    return Operator(s, joint_space(n), {"role": "S", "route": "closed-form"})


# --------------------------------------------------------------------------
# effective forms
# --------------------------------------------------------------------------

FULL = "full"
RWA = "rwa"
DERIVED = "derived"
PRINTED = "printed"


@dataclass(frozen=True)
class EffectiveForm:
    """Which effective Hamiltonian to use.

    variant       "full" keeps the a^2, a^dag^2 terms; "rwa" drops them
    convention    "derived" uses the coefficients the generic engine yields;
                  "printed" uses the printed closed forms (full and rwa variants
                  as printed, including their disagreeing signs)
    coupling_sign sign multiplying the sx1 sx2 exchange; None resolves it
                  (from the generic engine for "derived", from the printed
                  equation for "printed")
    """

    variant: str = RWA
    convention: str = DERIVED
    coupling_sign: int | None = None

    def __post_init__(self):
        if self.variant not in (FULL, RWA):
            raise ValueError(f"variant must be {FULL!r} or {RWA!r}")
        if self.convention not in (DERIVED, PRINTED):
            raise ValueError(f"convention must be {DERIVED!r} or {PRINTED!r}")
        if self.coupling_sign not in (None, 1, -1):
            raise ValueError("coupling_sign must be +1, -1 or None")

    def resolved(self, params: ModelParams) -> "EffectiveForm":
        if self.coupling_sign is not None:
            return self
        if self.convention == DERIVED:
            sign = resolve_coupling_sign(params)
        else:
            sign = -1 if self.variant == FULL else 1
        return replace(self, coupling_sign=sign)

    def describe(self) -> dict:
        return {"variant": self.variant, "convention": self.convention, "coupling_sign": self.coupling_sign}


@dataclass(frozen=True)
class EffectiveCoefficients:
    """H_eff = (omega_j + stark a^dag a + lamb)(sz1+sz2) + squeeze (a^2 + a^dag^2)(sz1+sz2)
    + omega a^dag a + exchange sx1 sx2 + offset."""

    stark: float
    lamb: float
    squeeze: float
    exchange: float
    offset: float
    form: EffectiveForm = field(default_factory=EffectiveForm)


def effective_coefficients(params: ModelParams, form: EffectiveForm = EffectiveForm()) -> EffectiveCoefficients:
    form = form.resolved(params)
    d = delta_coefficients(params)
    g2 = params.g**2
    sign = form.coupling_sign
    if form.convention == DERIVED:
        # [HI, S]/2 = -(g^2/2) D- (a + a^dag)^2 (sz1+sz2) - g^2 D+ (1 + sx1 sx2)
        stark, lamb, squeeze = -g2 * d.delta_minus, -0.5 * g2 * d.delta_minus, -0.5 * g2 * d.delta_minus
        exchange, offset = sign * g2 * d.delta_plus, -g2 * d.delta_plus
        if form.variant == RWA:
            squeeze = 0.0
    elif form.variant == FULL:
        stark, lamb, squeeze = -g2 * d.delta_minus, -0.5 * g2 * d.delta_minus, -0.5 * g2 * d.delta_minus
        exchange, offset = sign * 0.5 * g2 * d.delta_plus, -0.5 * g2 * d.delta_plus
    else:
        stark, lamb, squeeze = g2 * d.delta_minus, 0.0, 0.0
        exchange, offset = sign * 0.5 * g2 * d.delta_plus, 0.0
    return EffectiveCoefficients(stark, lamb, squeeze, exchange, offset, form)


@lru_cache(maxsize=256)
def _oracle_exchange(omega: float, omega_j: float, g: float) -> float:
    params = ModelParams(omega, omega_j, g, cutoff=3)
    h0, hi = build_model(params)
    heff = effective_hamiltonian(h0, hi, generic_s_operator(h0, hi))
    n = 3
    return float(heff.matrix[1 * n, 2 * n].real)  # <01,0|H_eff|10,0>


def resolve_coupling_sign(params: ModelParams) -> int:
    """Sign of the sx1 sx2 exchange, relative to g^2 D+, as produced by the generic engine."""
    d = delta_coefficients(params)
    scale = params.g**2 * d.delta_plus
    if scale == 0.0:
        return -1
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        value = _oracle_exchange(float(params.omega), float(params.omega_j), float(params.g))
    return 1 if value / scale > 0 else -1


def effective_model_hamiltonian(params: ModelParams, form: EffectiveForm = EffectiveForm()) -> Operator:
    """Closed-form effective Hamiltonian on qubit x qubit x Fock(N)."""
    n = params.require_cutoff()
    c = effective_coefficients(params, form)
    ops = _model_ops(n)
    eye = np.eye(4 * n)
    ad = ops.a.conj().T
    h = (
        (params.omega_j + c.lamb) * ops.sz
        + c.stark * (ops.num @ ops.sz)
        + c.squeeze * ((ops.a @ ops.a + ad @ ad) @ ops.sz)
        + params.omega * ops.num
        + c.exchange * ops.xx
        + c.offset * eye
    )
    return Operator(h, joint_space(n), {"role": "H_eff", "route": "closed-form", **c.form.describe()})


def block_hamiltonian(n: int, params: ModelParams, form: EffectiveForm = EffectiveForm()) -> Operator:
    """Two-qubit Hamiltonian <n|H_eff|n> for the photon-number-conserving form."""
    if form.variant != RWA:
        raise ValueError("only the RWA form conserves photon number and splits into blocks")
    if n < 0 or (params.cutoff is not None and n >= params.cutoff):
        raise CutoffError(f"photon number {n} outside 0..{params.cutoff}", minimal_cutoff=n + 1)
    c = effective_coefficients(params, form)
    sz = np.kron(PAULI["Z"], np.eye(2)) + np.kron(np.eye(2), PAULI["Z"])
    xx = np.kron(PAULI["X"], PAULI["X"])
    h = (params.omega_j + c.stark * n + c.lamb) * sz + (params.omega * n + c.offset) * np.eye(4) + c.exchange * xx
    return Operator(h, qubit_pair_space(), {"role": "H(n)", "n": int(n), **c.form.describe()})


def photon_block(op: Operator, n: int) -> np.ndarray:
    """The 4x4 block <n| op |n> of a joint-space operator."""
    if not op.space.is_joint():
        raise ShapeError(f"expected a qubit x qubit x Fock operator, got {op.space}")
    cutoff = op.space.cutoff
    if not 0 <= n < cutoff:
        raise CutoffError(f"photon number {n} outside 0..{cutoff - 1}", minimal_cutoff=n + 1)
    return op.matrix.reshape(4, cutoff, 4, cutoff)[:, n, :, n]


def rwa_projection(op: Operator) -> Operator:
    """Keep only the photon-number-diagonal blocks of a joint-space operator."""
    cutoff = op.space.cutoff
    if not op.space.is_joint():
        raise ShapeError(f"expected a qubit x qubit x Fock operator, got {op.space}")
    m = op.matrix.reshape(4, cutoff, 4, cutoff)
    keep = np.eye(cutoff, dtype=bool)[None, :, None, :]
    return Operator(np.where(keep, m, 0).reshape(4 * cutoff, 4 * cutoff), op.space, op.meta)


def oracle_block(n: int, params: ModelParams) -> np.ndarray:
    """<n|H_eff|n> from the generic engine, evaluated away from the truncation edge."""
    p = params.with_cutoff(n + 3)
    h0, hi = build_model(p)
    heff = effective_hamiltonian(h0, hi, generic_s_operator(h0, hi))
    return photon_block(heff, n)
