"""Quasiprobability work statistics of qubit circuits.

The package computes Kirkwood-Dirac quasiprobability tables of two-point
energy measurements for unitary qubit circuits that start and end in the
same noninteracting Hamiltonian, splits them into population and coherence
parts, resolves the extractable work into per-transition components,
detects anomalous (negative real part) processes, verifies fluctuation
identities, and relates deep circuits to their constituent gates through
gap operators, commutation screening and product factorization.
"""

from .decomposition import (
    CommutationReport,
    ConditionCheck,
    DecompositionReport,
    GateGapReport,
    classicality_check,
    commutation_screen,
    decomposition_identity,
    decomposition_json,
    factorization_check,
    kdq_gap,
    m_operator,
)
from .dsl import (
    CircuitFile,
    CircuitSyntaxError,
    parse_circuit,
    serialize_circuit,
    substitute_placeholders,
)
from .gates import (
    Circuit,
    Gate,
    circuit_unitary,
    cnot_gate,
    custom_gate,
    gate_matrix,
    h_gate,
    p_gate,
    prefix_unitary,
    r_gate,
    rotation_matrix,
    suffix_unitary,
    t_gate,
)
from .kdq import (
    KdqSplit,
    KdqTable,
    TransitionAmplitudes,
    imag_part,
    kdq_hadamard_evolution,
    kdq_rotation_analytic,
    kdq_split,
    kdq_table,
    mhq,
    table_json_dict,
    tpm_distribution,
    transition_amplitudes,
)
from .system import (
    Hamiltonian,
    QubitStateParams,
    StateSplit,
    ValidationError,
    build_hamiltonian,
    dephase_split,
    effective_beta,
    pure_state_bloch,
    pure_state_pop_phase,
    qubit_state,
    thermal_state,
    validate_density_matrix,
)
from .thermo import (
    AnomalyNorms,
    JarzynskiReport,
    WorkReport,
    anomaly_norms,
    build_work_report,
    extractable_work,
    first_moment_imag_check,
    jarzynski,
    jarzynski_json,
    work_components,
    work_evolution_analytic,
    work_report_json,
    work_rotation_analytic,
    work_split,
    work_variance_imag,
)

__version__ = "0.1.0"

__all__ = [
    "AnomalyNorms",
    "Circuit",
    "CircuitFile",
    "CircuitSyntaxError",
    "CommutationReport",
    "ConditionCheck",
    "DecompositionReport",
    "Gate",
    "GateGapReport",
    "Hamiltonian",
    "JarzynskiReport",
    "KdqSplit",
    "KdqTable",
    "QubitStateParams",
    "StateSplit",
    "TransitionAmplitudes",
    "ValidationError",
    "WorkReport",
    "anomaly_norms",
    "build_hamiltonian",
    "build_work_report",
    "circuit_unitary",
    "classicality_check",
    "cnot_gate",
    "commutation_screen",
    "custom_gate",
    "decomposition_identity",
    "decomposition_json",
    "dephase_split",
    "effective_beta",
    "extractable_work",
    "factorization_check",
    "first_moment_imag_check",
    "gate_matrix",
    "h_gate",
    "imag_part",
    "jarzynski",
    "jarzynski_json",
    "kdq_gap",
    "kdq_hadamard_evolution",
    "kdq_rotation_analytic",
    "kdq_split",
    "kdq_table",
    "m_operator",
    "mhq",
    "p_gate",
    "parse_circuit",
    "prefix_unitary",
    "pure_state_bloch",
    "pure_state_pop_phase",
    "qubit_state",
    "r_gate",
    "rotation_matrix",
    "serialize_circuit",
    "substitute_placeholders",
    "suffix_unitary",
    "t_gate",
    "table_json_dict",
    "thermal_state",
    "tpm_distribution",
    "transition_amplitudes",
    "validate_density_matrix",
    "work_components",
    "work_evolution_analytic",
    "work_report_json",
    "work_rotation_analytic",
    "work_split",
    "work_variance_imag",
]
