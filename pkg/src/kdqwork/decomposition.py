"""Deep-circuit quasiprobability decomposition and factorization laws.

A depth-N circuit U = G_N ... G_1 visits the intermediate states
rho_j = (G_j ... G_1) rho (G_j ... G_1)^dag. The quasiprobability of the
full circuit generally differs from that of a single constituent gate
evaluated on its incoming state; the difference is the expectation of a gap
operator M built from commutators of the projectors with partial products.
Summing the gaps over all gates yields a correction table Q such that

    full = (1/N) ( sum_j constituent_j + Q )

entrywise, which is the decomposition identity this module verifies and
reports. When the relevant commutators vanish the gaps collapse and the
full table coincides with the constituents'; the commutation screen checks
exactly those conditions for depth-2 and depth-3 circuits.

For product circuits on two qubits, U x V acting on sigma x tau factorizes
the table entrywise into single-qubit tables; the index map between the
four two-qubit eigenstates and pairs of single-qubit ones is
k in {0,1,2,3} <-> (alpha, beta) = (k >> 1, k & 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import Circuit, circuit_unitary, gate_matrix, prefix_unitary, suffix_unitary
from .kdq import KdqTable, kdq_table, table_json_dict
from .linalg import as_cmatrix, frobenius_norm, is_unitary
from .system import Hamiltonian, ValidationError, build_hamiltonian

#: A commutator is "zero" when its Frobenius norm stays at or below this.
COMMUTATOR_TOL = 1e-10

#: Entrywise tolerance for the gap and weighted-sum identities.
IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class GateGapReport:
    """Gap data for one constituent gate (0-based ``gate_index``)."""

    gate_index: int
    constituent: KdqTable
    gap: np.ndarray


@dataclass(frozen=True)
class DecompositionReport:
    full: KdqTable
    per_gate: tuple[GateGapReport, ...]
    correction: np.ndarray
    residual_max: float


@dataclass(frozen=True)
class ConditionCheck:
    """One screening condition: max commutator norm per projector index."""

    name: str
    norms: tuple[float, ...]
    satisfied: bool


@dataclass(frozen=True)
class CommutationReport:
    conditions: tuple[ConditionCheck, ...]

    @property
    def any_satisfied(self) -> bool:
        return any(c.satisfied for c in self.conditions)


def m_operator(
    circuit: Circuit, j: int, i: int, f: int, h: Hamiltonian
) -> np.ndarray:
    """Gap operator for gate j and the (i, f) eigenstate pair.

    Satisfies Tr[M rho] = q_if(full circuit on rho) - q_if(gate j+1 on
    rho_j). A single-gate circuit has no gap; its operator is zero.
    """
    n = circuit.depth
    if not 0 <= j < max(n, 1):
        raise ValueError(f"gate index {j} out of range for a depth-{n} circuit")
    d = h.dim
    if not 0 <= i < d or not 0 <= f < d:
        raise ValueError(f"eigenstate pair ({i}, {f}) out of range for dimension {d}")
    if n <= 1:
        return np.zeros((d, d), dtype=complex)
    proj_i = h.projectors[i]
    proj_f = h.projectors[f]
    full = circuit_unitary(circuit)
    gate = gate_matrix(circuit.gates[j], circuit.num_qubits)
    if j == 0:
        after = suffix_unitary(circuit, 1)
        return full.conj().T @ _comm(proj_f, after) @ gate @ proj_i
    before = prefix_unitary(circuit, j)
    if j == n - 1:
        return -full.conj().T @ proj_f @ gate @ _comm(proj_i, before)
    after = suffix_unitary(circuit, j + 1)
    first = _comm(proj_f, after) @ gate @ proj_i @ before
    second = proj_f @ suffix_unitary(circuit, j) @ _comm(proj_i, before)
    return full.conj().T @ (first - second)


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def kdq_gap(circuit: Circuit, j: int, rho: np.ndarray, h: Hamiltonian) -> GateGapReport:
    """Constituent table of gate j on rho_j plus the per-entry gap to the full table."""
    n = circuit.depth
    if not 0 <= j < max(n, 1):
        raise ValueError(f"gate index {j} out of range for a depth-{n} circuit")
    rho = as_cmatrix(rho, "state")
    d = h.dim
    before = prefix_unitary(circuit, j)
    rho_j = before @ rho @ before.conj().T
    gate = (
        gate_matrix(circuit.gates[j], circuit.num_qubits)
        if n > 0
        else np.eye(d, dtype=complex)
    )
    constituent = kdq_table(gate, rho_j, h)
    gap = np.empty((d, d), dtype=complex)
    for i in range(d):
        for f in range(d):
            gap[i, f] = np.trace(m_operator(circuit, j, i, f, h) @ rho)
    full = kdq_table(circuit_unitary(circuit), rho, h)
    if np.max(np.abs(full.entries - constituent.entries - gap)) > IDENTITY_TOL:
        raise ValidationError("gap identity failed; inputs are inconsistent")
    return GateGapReport(gate_index=j, constituent=constituent, gap=gap)


def decomposition_identity(
    circuit: Circuit, rho: np.ndarray, h: Hamiltonian
) -> DecompositionReport:
    """Verify full = (1/N)(sum of constituents + correction) entrywise.

    The correction table is the sum of all per-gate gaps. Depth must be at
    least 1; a single gate yields a zero correction and a zero residual.
    """
    n = circuit.depth
    if n < 1:
        raise ValueError("decomposition needs at least one gate")
    full = kdq_table(circuit_unitary(circuit), rho, h)
    reports = tuple(kdq_gap(circuit, j, rho, h) for j in range(n))
    correction = np.sum([r.gap for r in reports], axis=0)
    reconstructed = (
        np.sum([r.constituent.entries for r in reports], axis=0) + correction
    ) / n
    residual = float(np.max(np.abs(full.entries - reconstructed)))
    return DecompositionReport(
        full=full, per_gate=reports, correction=correction, residual_max=residual
    )


def commutation_screen(circuit: Circuit, h: Hamiltonian) -> CommutationReport:
    """Screening conditions under which constituents reproduce the full table.

    Depth 2 (circuit G2 G1): either [P_f, G2] = 0 for all f, or
    [P_i, G1] = 0 for all i. Depth 3 (G3 G2 G1): [P_f, G3 G2] = 0 for all f;
    or [P_f, G3] = 0 for all f and [P_i, G1] = 0 for all i; or
    [P_i, G2 G1] = 0 for all i. A condition counts as satisfied only when
    every required commutator norm stays at or below 1e-10.
    """
    n = circuit.depth
    if n not in (2, 3):
        raise ValueError(
            f"commutation screening covers depth 2 and 3 circuits, got depth {n}; "
            f"use decomposition_identity for the general case"
        )
    mats = [gate_matrix(g, circuit.num_qubits) for g in circuit.gates]
    projs = h.projectors
    if n == 2:
        conditions = (
            _condition("final_with_last", [mats[1]], projs),
            _condition("initial_with_first", [mats[0]], projs),
        )
    else:
        cond_outer = _condition("final_with_last_two", [mats[2] @ mats[1]], projs)
        final_last = _norms(mats[2], projs)
        initial_first = _norms(mats[0], projs)
        cond_middle = ConditionCheck(
            name="final_with_last_and_initial_with_first",
            norms=final_last + initial_first,
            satisfied=max(final_last + initial_first) <= COMMUTATOR_TOL,
        )
        cond_inner = _condition("initial_with_first_two", [mats[1] @ mats[0]], projs)
        conditions = (cond_outer, cond_middle, cond_inner)
    return CommutationReport(conditions=conditions)


def _norms(mat: np.ndarray, projs) -> tuple[float, ...]:
    return tuple(frobenius_norm(_comm(p, mat)) for p in projs)


def _condition(name: str, mats, projs) -> ConditionCheck:
    norms: tuple[float, ...] = ()
    for m in mats:
        norms = norms + _norms(m, projs)
    return ConditionCheck(name=name, norms=norms, satisfied=max(norms) <= COMMUTATOR_TOL)


#: Two-qubit eigenstate k as the pair (qubit-0 state, qubit-1 state).
INDEX_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


def factorization_check(
    U: np.ndarray,
    V: np.ndarray,
    sigma: np.ndarray,
    tau: np.ndarray,
    h: Hamiltonian,
) -> float:
    """Max residual of the product-circuit factorization law.

    The two-qubit table of U x V on sigma x tau must factor entrywise into
    the single-qubit tables of (U, sigma) and (V, tau). Returns the largest
    entrywise deviation; product inputs give rounding-level values while
    entangled states report a large residual.
    """
    U = as_cmatrix(U, "first factor")
    V = as_cmatrix(V, "second factor")
    sigma = as_cmatrix(sigma, "first state")
    tau = as_cmatrix(tau, "second state")
    for name, m in (("U", U), ("V", V), ("sigma", sigma), ("tau", tau)):
        if m.shape != (2, 2):
            raise ValidationError(f"{name} must be 2x2, got {m.shape}")
    if h.num_qubits != 2:
        raise ValidationError("factorization is defined on the two-qubit spectrum")
    h1 = build_hamiltonian(1, h.energy_scale)
    table2 = kdq_table(np.kron(U, V), np.kron(sigma, tau), h)
    tu = kdq_table(U, sigma, h1).entries
    tv = kdq_table(V, tau, h1).entries
    worst = 0.0
    for ki, (ai, bi) in enumerate(INDEX_PAIRS):
        for kf, (af, bf) in enumerate(INDEX_PAIRS):
            predicted = tu[ai, af] * tv[bi, bf]
            worst = max(worst, abs(table2.entries[ki, kf] - predicted))
    return worst


def classicality_check(
    U: np.ndarray, h: Hamiltonian, trials: int, seed: int = 0
) -> bool:
    """True when U yields real nonnegative tables on ``trials`` random states.

    States are Wishart-normalized draws (full-rank mixed states, including
    entangled ones for multi-qubit registers). Entries must satisfy
    |Im q| <= 1e-10 and Re q >= -1e-10 on every draw.
    """
    U = as_cmatrix(U, "unitary")
    if not is_unitary(U):
        raise ValidationError("operator is not unitary within 1e-10")
    rng = np.random.default_rng(seed)
    d = h.dim
    for _ in range(trials):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        entries = kdq_table(U, rho, h).entries
        if np.max(np.abs(entries.imag)) > 1e-10 or entries.real.min() < -1e-10:
            return False
    return True


def decomposition_json(report: DecompositionReport) -> dict:
    """JSON payload with the fixed external field names."""
    return {
        "full": table_json_dict(report.full),
        "per_gate": [
            {
                "j": r.gate_index,
                "table": table_json_dict(r.constituent),
                "gap": _complex_array_json(r.gap),
            }
            for r in report.per_gate
        ],
        "correction": _complex_array_json(report.correction),
        "residual_max": report.residual_max,
    }


def _complex_array_json(a: np.ndarray) -> list:
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in a]
