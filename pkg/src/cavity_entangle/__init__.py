"""Two charge qubits entangled through an off-resonant cavity mode.

The package builds the qubit-cavity model, derives its second-order
effective Hamiltonian (generic Froehlich transformation and closed forms),
propagates states exactly or branch by branch, and evaluates fidelities,
Bell overlaps, concurrences and decoherence-free-subspace protocols.
"""

from .dynamics import (
    BlockCoefficients,
    EvolvedEnsemble,
    block_coefficients,
    block_propagators,
    branch_states,
    evolve_effective,
    evolve_exact,
    evolve_exact_many,
    propagator,
    qubit_rdm,
)
from .errors import (
    ConsistencyError,
    CutoffError,
    DegeneracyError,
    HermiticityError,
    RegimeWarning,
    ResonanceError,
    ShapeError,
    StateError,
)
from .froehlich import (
    DeltaCoefficients,
    EffectiveCoefficients,
    EffectiveForm,
    ModelParams,
    block_hamiltonian,
    build_model,
    delta_coefficients,
    effective_coefficients,
    effective_hamiltonian,
    effective_model_hamiltonian,
    generic_s_operator,
    model_s_operator,
    oracle_block,
    resolve_coupling_sign,
    rwa_projection,
)
from .hilbert import (
    PAPER_LITERAL,
    STANDARD,
    CavityPrep,
    Operator,
    QuantumState,
    SpaceTag,
    annihilation,
    joint_space,
    minimal_cutoff,
    partial_trace_cavity,
    pauli,
    prepare_cavity,
    purity,
    qubit_pair_space,
    qubit_state,
    tensor,
    tensor_states,
)
from .metrics import (
    BellState,
    DFSResult,
    MetricCurve,
    bell_overlap,
    bell_overlap_coherent,
    bell_overlap_fock,
    concurrence,
    concurrence_coherent,
    concurrence_curve,
    concurrence_thermal,
    dfs_protocol,
    fidelity_vs_target,
)

__version__ = "0.1.0"
