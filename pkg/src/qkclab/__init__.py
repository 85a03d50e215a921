"""qkclab: a desk-scale quantum Kolmogorov complexity laboratory.

A fixed reference machine -- straight-line programs over an exact
Gaussian-rational gate set, fed through a self-delimiting prefix-free binary
encoding -- plus estimators that minimize (program length + redescription
penalty) by enumeration, a sampled measurement-driven approximation, and an
experiment suite for the counting, consistency and additivity properties the
construction supports.
"""

__version__ = "0.1.0"

from .census import (
    CensusReport,
    ConsistencyRecord,
    ConsistencySweep,
    JointBoundReport,
    SubadditivityReport,
    SuperposedBitReport,
    consistency_report,
    consistency_sweep,
    incompressibility_census,
    joint_bound_report,
    product_witness,
    rotated_basis,
    rotation_circuit,
    subadditivity_report,
    superposed_bit_example,
    uniform_sweep,
)
from .estimator import (
    EstimateRecord,
    ExactEstimate,
    SampledEstimate,
    SamplingPlan,
    TrialResult,
    bernoulli,
    directly_computable,
    exact_estimate,
    ideal_value,
    k_from_bound,
    projection_oracle,
    run_trials,
    sampled_estimate,
    shortest_exact_program,
    upper_bound_witness,
)
from .executor import (
    DECODE_FAILED,
    HALTED,
    Dovetailer,
    RunResult,
    cached_outputs,
    dovetail,
    run,
    simulation_count,
)
from .proglang import (
    CALLC,
    ENCODING,
    ENCODING_VERSION,
    EncodingSpec,
    DecodedProgram,
    Program,
    decode,
    decode_prefix,
    encode,
    enumerate_programs,
    kraft_sum,
    program_from_json,
    program_to_json,
    verify_prefix_free,
)
from .statevec import (
    CNOT,
    INFINITE,
    PHASE,
    ROT,
    X,
    Basis,
    Gate,
    GaussianRational,
    StateVector,
    apply_circuit,
    apply_gate,
    basis_state,
    classical_state,
    fidelity,
    gr,
    inner_product,
    penalty_bits,
    random_state,
    shannon_fano_code,
    shannon_fano_lengths,
    standard_basis,
    state_from_json,
    state_to_json,
    tensor,
    transformed_basis,
    zero_state,
)
