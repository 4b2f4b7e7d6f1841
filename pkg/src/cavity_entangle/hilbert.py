"""Operators and states on the truncated qubit (x) qubit (x) Fock(N) space.

Basis ordering is qubit 1, qubit 2, cavity, with the flat index
``(2 * s1 + s2) * N + n``.  The charge state |0> is the +1 eigenstate of
sigma_z, so the two-qubit product basis reads (|00>, |01>, |10>, |11>).
All energies and rates are in units with hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Mapping

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import CutoffError, HermiticityError, ShapeError, StateError

STATE_TOL = 1e-10
TAIL_TOL = 1e-10


# --------------------------------------------------------------------------
# spaces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Factor:
    kind: str  # "qubit" | "fock"
    dim: int

    def __post_init__(self):
        if self.kind not in ("qubit", "fock"):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == "qubit" and self.dim != 2:
            raise ValueError("a qubit factor has dimension 2")
        if self.dim < 1:
            raise CutoffError(f"Fock cutoff must be >= 1, got {self.dim}", minimal_cutoff=1)


QUBIT = Factor("qubit", 2)


def fock(cutoff: int) -> Factor:
    return Factor("fock", int(cutoff))


@dataclass(frozen=True)
class SpaceTag:
    factors: tuple[Factor, ...]

    @property
    def dim(self) -> int:
        return int(np.prod([f.dim for f in self.factors], dtype=int))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    def qubit_positions(self) -> list[int]:
        return [i for i, f in enumerate(self.factors) if f.kind == "qubit"]

    @property
    def cutoff(self) -> int | None:
        focks = [f.dim for f in self.factors if f.kind == "fock"]
        return focks[0] if len(focks) == 1 else None

    def is_joint(self) -> bool:
        """True for the qubit (x) qubit (x) Fock(N) layout."""
        return (
            len(self.factors) == 3
            and self.factors[0].kind == "qubit"
            and self.factors[1].kind == "qubit"
            and self.factors[2].kind == "fock"
        )

    def __add__(self, other: "SpaceTag") -> "SpaceTag":
        return SpaceTag(self.factors + other.factors)

    def __str__(self):
        return " x ".join("Q" if f.kind == "qubit" else f"F({f.dim})" for f in self.factors)


def qubit_pair_space() -> SpaceTag:
    return SpaceTag((QUBIT, QUBIT))


def joint_space(cutoff: int) -> SpaceTag:
    return SpaceTag((QUBIT, QUBIT, fock(cutoff)))


def fock_space(cutoff: int) -> SpaceTag:
    return SpaceTag((fock(cutoff),))


# --------------------------------------------------------------------------
# operators and states
# --------------------------------------------------------------------------


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense complex matrix tagged with the space it acts on.

    Hermiticity is not enforced here; routines that need it check for it.
    ``meta`` holds provenance such as the effective-Hamiltonian variant.
    """

    matrix: np.ndarray
    space: SpaceTag
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] != self.space.dim:
            raise ShapeError(f"matrix dimension {m.shape[0]} does not match space {self.space} (dim {self.space.dim})")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def dim(self) -> int:
        return self.space.dim

    def _check(self, other: "Operator"):
        if not isinstance(other, Operator):
            return NotImplemented
        if other.space != self.space:
            raise ShapeError(f"space mismatch: {self.space} vs {other.space}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Operator(self.matrix + other.matrix, self.space)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Operator(self.matrix - other.matrix, self.space)

    def __neg__(self):
        return Operator(-self.matrix, self.space)

    def __mul__(self, scalar):
        if isinstance(scalar, Operator):
            return NotImplemented
        return Operator(scalar * self.matrix, self.space)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Operator(self.matrix @ other.matrix, self.space)

    def dag(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.space)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_defect() <= tol

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix), initial=0.0))

    def with_meta(self, **meta) -> "Operator":
        return Operator(self.matrix, self.space, {**self.meta, **meta})


def commutator(a: Operator, b: Operator) -> Operator:
    return a @ b - b @ a


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure state vector (1-D ``data``) or density matrix (2-D ``data``)."""

    data: np.ndarray
    space: SpaceTag

    def __post_init__(self):
        d = _frozen(self.data)
        if d.ndim == 1:
            if d.shape[0] != self.space.dim:
                raise ShapeError(f"vector length {d.shape[0]} does not match space {self.space}")
            norm = np.linalg.norm(d)
            if abs(norm - 1.0) > STATE_TOL:
                raise StateError(f"state vector norm {norm!r} differs from 1")
        elif d.ndim == 2:
            if d.shape != (self.space.dim, self.space.dim):
                raise ShapeError(f"density matrix shape {d.shape} does not match space {self.space}")
            check_density_matrix(d)
        else:
            raise ShapeError("state data must be a vector or a square matrix")
        object.__setattr__(self, "data", d)

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return np.array(self.data)

    def apply(self, op: Operator) -> "QuantumState":
        """Propagate by a unitary: psi -> U psi, rho -> U rho U^dag."""
        if op.space != self.space:
            raise ShapeError(f"space mismatch: {op.space} vs {self.space}")
        if self.is_pure:
            return QuantumState(op.matrix @ self.data, self.space)
        return QuantumState(op.matrix @ self.data @ op.matrix.conj().T, self.space)


def check_density_matrix(rho: np.ndarray, tol: float = STATE_TOL) -> None:
    rho = np.asarray(rho)
    herm = np.max(np.abs(rho - rho.conj().T), initial=0.0)
    if herm > tol:
        raise StateError(f"density matrix is not Hermitian (defect {herm:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise StateError(f"density matrix trace {tr!r} differs from 1")
    lo = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
    if lo < -tol:
        raise StateError(f"density matrix has negative eigenvalue {lo:.3e}")


# --------------------------------------------------------------------------
# primitives
# --------------------------------------------------------------------------


def tensor(*ops: Operator) -> Operator:
    """Kronecker product; the factor lists are concatenated in order."""
    if not ops:
        raise ValueError("tensor needs at least one operand")
    matrix = reduce(np.kron, [o.matrix for o in ops])
    space = reduce(lambda s, t: s + t, [o.space for o in ops])
    return Operator(matrix, space)


def tensor_states(*states: QuantumState) -> QuantumState:
    space = reduce(lambda s, t: s + t, [s.space for s in states])
    if all(s.is_pure for s in states):
        return QuantumState(reduce(np.kron, [s.data for s in states]), space)
    return QuantumState(reduce(np.kron, [s.density() for s in states]), space)


def identity(space: SpaceTag) -> Operator:
    return Operator(np.eye(space.dim), space)


def annihilation(cutoff: int) -> Operator:
    """Truncated annihilation operator, a|n> = sqrt(n)|n-1>."""
    if int(cutoff) < 1:
        raise CutoffError(f"Fock cutoff must be >= 1, got {cutoff}", minimal_cutoff=1)
    n = int(cutoff)
    return Operator(np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1), fock_space(n))


def number_operator(cutoff: int) -> Operator:
    a = annihilation(cutoff)
    return a.dag() @ a


PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "I": np.eye(2, dtype=complex),
}


def pauli(axis: str, which_qubit: int, space: SpaceTag) -> Operator:
    """Pauli matrix on qubit 1 or 2 of ``space``, identity on every other factor."""
    axis = axis.upper()
    if axis not in ("X", "Y", "Z"):
        raise ValueError(f"axis must be X, Y or Z, got {axis!r}")
    qpos = space.qubit_positions()
    if len(qpos) != 2:
        raise ShapeError(f"pauli needs a space with two qubit factors, got {space}")
    if which_qubit not in (1, 2):
        raise ValueError("which_qubit must be 1 or 2")
    target = qpos[which_qubit - 1]
    mats = [PAULI[axis] if i == target else np.eye(f.dim) for i, f in enumerate(space.factors)]
    return Operator(reduce(np.kron, mats), space)


def embed_cavity(op: Operator, space: SpaceTag) -> Operator:
    """Lift a Fock-space operator onto the joint space (identity on the qubits)."""
    if not space.is_joint() or op.space != fock_space(space.cutoff):
        raise ShapeError(f"cannot embed {op.space} into {space}")
    return Operator(np.kron(np.eye(4), op.matrix), space)


def embed_qubits(op: Operator, space: SpaceTag) -> Operator:
    """Lift a two-qubit operator onto the joint space (identity on the cavity)."""
    if not space.is_joint() or op.space != qubit_pair_space():
        raise ShapeError(f"cannot embed {op.space} into {space}")
    return Operator(np.kron(op.matrix, np.eye(space.cutoff)), space)


def basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


QUBIT_LABELS = ("00", "01", "10", "11")


def qubit_state(label_or_vector) -> QuantumState:
    """Two-qubit pure state from a label ('00', '01', '10', '11', 'bell+') or a 4-vector."""
    if isinstance(label_or_vector, QuantumState):
        return label_or_vector
    if isinstance(label_or_vector, str):
        label = label_or_vector.lower()
        if label in QUBIT_LABELS:
            vec = basis_vector(4, QUBIT_LABELS.index(label))
        elif label in ("bell+", "phi+"):
            vec = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
        else:
            raise ValueError(f"unknown two-qubit state label {label_or_vector!r}")
        return QuantumState(vec, qubit_pair_space())
    vec = np.asarray(label_or_vector, dtype=complex)
    if vec.shape != (4,):
        raise ShapeError(f"two-qubit state must have 4 amplitudes, got shape {vec.shape}")
    return QuantumState(vec, qubit_pair_space())


def eigh_fixed(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition with a reproducible gauge.

    Eigenvalues ascend; each eigenvector is rotated so that its
    largest-magnitude component is real and positive.
    """
    m = np.asarray(matrix)
    defect = np.max(np.abs(m - m.conj().T), initial=0.0)
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if defect > 1e-10 * scale:
        raise HermiticityError(f"matrix is not Hermitian (defect {defect:.3e})")
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    pivots = v[np.argmax(np.abs(v), axis=0), np.arange(v.shape[1])]
    v = v * (np.abs(pivots) / pivots)[None, :]
    return w, v


def partial_trace_cavity(state: QuantumState) -> QuantumState:
    """Reduced two-qubit density matrix obtained by tracing out the cavity."""
    if not state.space.is_joint():
        raise ShapeError(f"partial_trace_cavity expects qubit x qubit x Fock, got {state.space}")
    n = state.space.cutoff
    if state.is_pure:
        psi = state.data.reshape(4, n)
        rho = psi @ psi.conj().T
    else:
        rho = np.trace(state.data.reshape(4, n, 4, n), axis1=1, axis2=3)
    return QuantumState(rho, qubit_pair_space())


def purity(rho) -> float:
    """Tr(rho^2) for a QuantumState or a bare density matrix."""
    if isinstance(rho, QuantumState):
        if rho.is_pure:
            return 1.0
        rho = rho.data
    rho = np.asarray(rho)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


# --------------------------------------------------------------------------
# cavity preparations
# --------------------------------------------------------------------------

STANDARD = "standard"
PAPER_LITERAL = "paper-literal"


@dataclass(frozen=True)
class CavityPrep:
    """Initial cavity field: Fock(n), Coherent(alpha) or Thermal(beta*E).

    ``weights`` only matters for coherent fields: ``"standard"`` uses Poisson
    amplitudes alpha^n / sqrt(n!) e^{-|alpha|^2/2}; ``"paper-literal"`` uses
    amplitudes alpha^n / n!, i.e. probabilities |alpha|^{2n} / (n!)^2.
    """

    kind: str
    value: complex | float | int
    weights: str = STANDARD

    def __post_init__(self):
        if self.kind not in ("fock", "coherent", "thermal"):
            raise ValueError(f"unknown cavity preparation {self.kind!r}")
        if self.weights not in (STANDARD, PAPER_LITERAL):
            raise ValueError(f"weights must be {STANDARD!r} or {PAPER_LITERAL!r}")
        if self.kind == "fock" and (int(self.value) != self.value or self.value < 0):
            raise ValueError(f"Fock photon number must be a non-negative integer, got {self.value}")
        if self.kind == "thermal" and not float(self.value) > 0:
            raise ValueError(f"thermal beta*E must be positive, got {self.value}")

    @classmethod
    def fock(cls, n: int) -> "CavityPrep":
        return cls("fock", int(n))

    @classmethod
    def coherent(cls, alpha: complex, weights: str = STANDARD) -> "CavityPrep":
        return cls("coherent", complex(alpha), weights)

    @classmethod
    def thermal(cls, beta_e: float) -> "CavityPrep":
        return cls("thermal", float(beta_e))

    @property
    def is_pure(self) -> bool:
        return self.kind != "thermal"

    def label(self) -> str:
        if self.kind == "fock":
            return f"fock({self.value})"
        if self.kind == "coherent":
            a = complex(self.value)
            s = f"{a.real:g}" if a.imag == 0 else f"{a:g}"
            return f"coherent({s}{', paper-literal' if self.weights == PAPER_LITERAL else ''})"
        return f"thermal({self.value:g})"


def _log_weights(prep: CavityPrep, nmax: int) -> np.ndarray:
    """Unnormalised log-probabilities for n = 0..nmax-1 (infinite-series convention)."""
    n = np.arange(nmax, dtype=float)
    if prep.kind == "thermal":
        return -float(prep.value) * n
    x = abs(complex(prep.value)) ** 2
    if x == 0.0:
        out = np.full(nmax, -np.inf)
        out[0] = 0.0
        return out
    if prep.weights == STANDARD:
        return n * np.log(x) - gammaln(n + 1)
    return n * np.log(x) - 2.0 * gammaln(n + 1)


def _series_length(prep: CavityPrep) -> int:
    if prep.kind == "thermal":
        return int(np.ceil(60.0 / float(prep.value))) + 10
    mu = abs(complex(prep.value)) ** 2
    return int(mu + 20.0 * np.sqrt(mu) + 60)


def _normalised_probabilities(prep: CavityPrep) -> np.ndarray:
    """Probabilities over a window long enough that the neglected tail is < 1e-25."""
    lw = _log_weights(prep, _series_length(prep))
    return np.exp(lw - logsumexp(lw))


def truncation_deficit(prep: CavityPrep, cutoff: int) -> float:
    """Probability mass the untruncated preparation puts on levels >= cutoff."""
    if prep.kind == "fock":
        return 0.0 if prep.value < cutoff else 1.0
    if prep.kind == "thermal":
        return float(np.exp(-float(prep.value) * cutoff))
    p = _normalised_probabilities(prep)
    tail = np.cumsum(p[::-1])[::-1]
    return float(tail[cutoff]) if cutoff < len(tail) else 0.0


def minimal_cutoff(prep: CavityPrep, tol: float = TAIL_TOL) -> int:
    """Smallest number of Fock levels whose neglected tail mass is below ``tol``."""
    if prep.kind == "fock":
        return int(prep.value) + 1
    if prep.kind == "thermal":
        # e^{-beta E N} < tol
        n = int(np.floor(-np.log(tol) / float(prep.value))) + 1
        while n > 1 and np.exp(-float(prep.value) * (n - 1)) < tol:
            n -= 1
        return max(n, 1)
    p = _normalised_probabilities(prep)
    tail = np.cumsum(p[::-1])[::-1]
    below = np.nonzero(tail < tol)[0]
    return max(int(below[0]), 1) if len(below) else len(p)


def resolve_cutoff(prep: CavityPrep, cutoff: int | None = None) -> int:
    """Validate a user cutoff against the tail criterion, or pick the minimal one."""
    need = minimal_cutoff(prep)
    if cutoff is None:
        return need
    cutoff = int(cutoff)
    if cutoff < 1:
        raise CutoffError(f"Fock cutoff must be >= 1, got {cutoff}", minimal_cutoff=need)
    if cutoff < need:
        raise CutoffError(
            f"cutoff {cutoff} too small for {prep.label()}: need at least {need} levels "
            f"for tail mass < {TAIL_TOL:g}",
            minimal_cutoff=need,
        )
    return cutoff


def cavity_amplitudes(prep: CavityPrep, cutoff: int) -> tuple[np.ndarray, np.ndarray | None]:
    """Probabilities p_n (n < cutoff) and, for pure fields, complex amplitudes c_n.

    Both are renormalised over the retained levels.
    """
    n = np.arange(cutoff)
    if prep.kind == "fock":
        amp = np.zeros(cutoff, dtype=complex)
        amp[int(prep.value)] = 1.0
        return np.abs(amp) ** 2, amp
    lw = _log_weights(prep, cutoff)
    p = np.exp(lw - logsumexp(lw))
    if prep.kind == "thermal":
        return p, None
    phase = np.exp(1j * n * np.angle(complex(prep.value)))
    amp = np.sqrt(p) * phase
    return p, amp


def prepare_cavity(prep: CavityPrep, cutoff: int | None = None) -> QuantumState:
    """Cavity state on Fock(N): a vector for Fock/coherent fields, a density matrix for thermal."""
    n = resolve_cutoff(prep, cutoff)
    p, amp = cavity_amplitudes(prep, n)
    if amp is None:
        return QuantumState(np.diag(p).astype(complex), fock_space(n))
    return QuantumState(amp, fock_space(n))
