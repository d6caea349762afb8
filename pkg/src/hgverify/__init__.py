"""Verification of hypergraph states with sequential single-qubit Pauli
measurements: statevector simulation, stabilizer-test algebra, the full
verifier/prover protocol, dense-matrix oracles, and outcome-distribution
audits."""

__version__ = "0.1.0"

from .hypergraph import (
    Hypergraph,
    HypergraphError,
    HypergraphFormatError,
    Neighborhood,
    load_hypergraph,
    neighborhood,
    parse_hypergraph,
    relabel,
    serialize_hypergraph,
)
from .statevector import (
    DEFAULT_QUBIT_CAP,
    MeasurementRecord,
    QubitCapError,
    StateVector,
    apply_generalized_cz,
    apply_pauli,
    apply_pauli_noise,
    basis_state,
    build_hypergraph_state,
    fidelity_with,
    measure_pauli,
    pauli_expectation,
    plus_state,
    state_fidelity,
)
from .stabilizer import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    StabilizerTerm,
    TestOutcome,
    enumerate_terms,
    expand_term,
    generator_expectation,
    pass_probability,
    run_stabilizer_test,
    sample_term,
)
from .oracle import (
    ORACLE_QUBIT_CAP,
    OracleCapError,
    OracleReport,
    OracleViolation,
    depolarizing_like_channel,
    oracle_checks,
    pure_density,
    rho_fidelity_with,
    rho_generator_expectations,
    stabilizer_matrix,
    term_matrix,
)
from .protocol import (
    DEFAULT_REGISTER_BUDGET,
    BudgetExceededError,
    FixedState,
    GroupResult,
    Honest,
    IIDNoisy,
    ProtocolParams,
    ProtocolReport,
    ProverStrategy,
    RoleAssignment,
    Scripted,
    SoundnessSummary,
    StrategyError,
    acceptance_probability_iid,
    assign_roles,
    compute_params,
    de_finetti_correction,
    group_threshold,
    hoeffding_completeness_bound,
    run_protocol,
    scaled_soundness_bound,
    soundness_audit,
    threshold_count,
)
from .distributions import (
    OutcomeDistribution,
    exact_distribution,
    l1_distance,
    parse_bases,
    product_of_marginals,
    sample_outcomes,
    uniform_distribution,
)
from .rng import derive_seed, fresh_master_seed, stream
