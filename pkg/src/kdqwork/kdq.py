"""Quasiprobability tables for cyclic circuit transformations.

The central object is the table of complex joint quasiprobabilities

    q_if = Tr[U^dag P_f U P_i rho]

over initial eigenstate i (rows) and final eigenstate f (columns) of the
system Hamiltonian. Because all projectors here are rank-1 in the stored
basis, the trace collapses to a product of two matrix elements,

    q_if = <b_f|U|b_i> * <b_i| rho U^dag |b_f>,

with b_k the basis index of eigenstate k; the implementation evaluates that
elementwise product directly. Row sums recover the initial populations,
column sums the final ones, and the whole table sums to one; every
constructor validates those marginal identities before returning, so a table
object in hand is already certified.

The real part of a table entry is the Margenau-Hill quasiprobability (MHQ);
a negative MHQ flags an anomalous energy transition. The population /
coherence split separates the two-point-measurement distribution from the
interference contribution; its coherent part is computed from the amplitude
sum over off-diagonal state elements, deliberately NOT as full minus
dephased, so the additivity of the split stays an independently testable
identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_cmatrix, is_unitary
from .system import Hamiltonian, QubitStateParams, ValidationError, build_hamiltonian

#: Marginal/normalization tolerance enforced on every constructed table.
TABLE_TOL = 1e-12

#: Tolerance for the split additivity identity.
SPLIT_TOL = 1e-12


@dataclass(frozen=True)
class KdqTable:
    """Joint quasiprobability table; ``entries[i, f]`` is complex q_if."""

    entries: np.ndarray
    hamiltonian: Hamiltonian

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def row_marginals(self) -> np.ndarray:
        """Initial-state populations (real)."""
        return self.entries.sum(axis=1).real

    @property
    def col_marginals(self) -> np.ndarray:
        """Final-state populations (real)."""
        return self.entries.sum(axis=0).real


@dataclass(frozen=True)
class KdqSplit:
    """Population (two-point-measurement) and coherence parts of a table."""

    population: np.ndarray
    coherent: np.ndarray
    hamiltonian: Hamiltonian

    @property
    def total(self) -> np.ndarray:
        return self.population + self.coherent


@dataclass(frozen=True)
class TransitionAmplitudes:
    """Matrix of amplitudes k_if = <E_f|U|E_i> between eigenstates."""

    entries: np.ndarray


def _eigenbasis_views(U: np.ndarray, rho: np.ndarray, h: Hamiltonian):
    """Amplitude matrix K (k_if) and rho in eigenstate indexing."""
    perm = np.asarray(h.basis_index)
    grid = np.ix_(perm, perm)
    K = U.T[grid]
    rho_e = rho[grid]
    return K, rho_e


def _check_inputs(U, rho, h: Hamiltonian, *, require_unitary: bool = True):
    U = as_cmatrix(U, "unitary")
    rho = as_cmatrix(rho, "state")
    d = h.dim
    if U.shape != (d, d):
        raise ValidationError(f"unitary has shape {U.shape}, expected ({d}, {d})")
    if rho.shape != (d, d):
        raise ValidationError(f"state has shape {rho.shape}, expected ({d}, {d})")
    if require_unitary and not is_unitary(U):
        raise ValidationError("circuit operator is not unitary within 1e-10")
    return U, rho


def kdq_table(U: np.ndarray, rho: np.ndarray, h: Hamiltonian) -> KdqTable:
    """Build the quasiprobability table of ``U`` acting on ``rho``.

    Raises :class:`ValidationError` for shape mismatches, a non-unitary
    operator, or (defensively) a table whose marginals fail to reproduce the
    state populations at 1e-12.
    """
    U, rho = _check_inputs(U, rho, h)
    K, rho_e = _eigenbasis_views(U, rho, h)
    entries = K * (rho_e @ K.conj())
    table = KdqTable(entries=entries, hamiltonian=h)
    _validate_marginals(table, U, rho, h)
    return table


def _validate_marginals(table: KdqTable, U, rho, h: Hamiltonian) -> None:
    perm = np.asarray(h.basis_index)
    initial = np.real(np.diag(rho))[perm]
    final = np.real(np.diag(U @ rho @ U.conj().T))[perm]
    total = table.entries.sum()
    if (
        abs(total - 1.0) > TABLE_TOL
        or np.max(np.abs(table.row_marginals - initial)) > TABLE_TOL
        or np.max(np.abs(table.col_marginals - final)) > TABLE_TOL
    ):
        raise ValidationError(
            "quasiprobability table failed its marginal identities; "
            "the input state is likely not normalized"
        )


def mhq(table: KdqTable) -> np.ndarray:
    """Margenau-Hill part (entrywise real part) of the table."""
    return table.entries.real.copy()


def imag_part(table: KdqTable) -> np.ndarray:
    return table.entries.imag.copy()


def kdq_split(U: np.ndarray, rho: np.ndarray, h: Hamiltonian) -> KdqSplit:
    """Population and coherence components of the table.

    population[i, f] = |k_if|^2 * lambda_ii is the two-point-measurement
    distribution; coherent[i, f] = k_if * sum_{k != i} conj(k_kf) lambda_ik
    collects the interference terms. Their sum must reproduce
    ``kdq_table(U, rho, h)`` to 1e-12, which is verified here.
    """
    U, rho = _check_inputs(U, rho, h)
    K, rho_e = _eigenbasis_views(U, rho, h)
    population = (np.abs(K) ** 2) * np.real(np.diag(rho_e))[:, None]
    rho_off = rho_e.copy()
    np.fill_diagonal(rho_off, 0.0)
    coherent = K * (rho_off @ K.conj())
    full = K * (rho_e @ K.conj())
    if np.max(np.abs(population + coherent - full)) > SPLIT_TOL:
        raise ValidationError("population/coherence split failed to add up to the full table")
    if population.min() < -1e-14:
        raise ValidationError("population component went negative")
    return KdqSplit(population=population, coherent=coherent, hamiltonian=h)


def tpm_distribution(U: np.ndarray, rho: np.ndarray, h: Hamiltonian) -> np.ndarray:
    """Two-point-measurement joint distribution (the population component)."""
    U, rho = _check_inputs(U, rho, h)
    K, rho_e = _eigenbasis_views(U, rho, h)
    return (np.abs(K) ** 2) * np.real(np.diag(rho_e))[:, None]


def transition_amplitudes(U: np.ndarray, h: Hamiltonian) -> TransitionAmplitudes:
    """Amplitudes k_if between eigenstates; rows and columns are unit vectors."""
    U = as_cmatrix(U, "unitary")
    if U.shape != (h.dim, h.dim):
        raise ValidationError(f"unitary has shape {U.shape}, expected ({h.dim}, {h.dim})")
    if not is_unitary(U):
        raise ValidationError("operator is not unitary within 1e-10")
    perm = np.asarray(h.basis_index)
    K = U.T[np.ix_(perm, perm)]
    norms = np.concatenate([np.abs(K @ K.conj().T).diagonal(), np.abs(K.conj().T @ K).diagonal()])
    if np.max(np.abs(norms - 1.0)) > 1e-12:
        raise ValidationError("transition amplitudes lost unitarity")
    return TransitionAmplitudes(entries=K)


def kdq_rotation_analytic(
    theta: float,
    axis: tuple[float, float, float],
    params: QubitStateParams,
    h: Hamiltonian | None = None,
) -> KdqTable:
    """Closed-form single-qubit table for the rotation R(theta, n).

    With f = n_x + i n_y, g = cos(theta/2) + i n_z sin(theta/2),
    s = sin(theta/2) and gamma the state coherence:

        q_dd = (1-p)|g|^2 + i s conj(f) g conj(gamma)
        q_du = (1-p)|f|^2 s^2 - i s conj(f) g conj(gamma)
        q_ud = p |f|^2 s^2 - i s f conj(g) gamma
        q_uu = p |g|^2 + i s f conj(g) gamma

    The axis must be unit length within 1e-6 (it is renormalized exactly).
    """
    nx, ny, nz = (float(v) for v in axis)
    norm = math.sqrt(nx * nx + ny * ny + nz * nz)
    if not math.isfinite(norm) or abs(norm - 1.0) > 1e-6:
        raise ValidationError(f"rotation axis must be unit length, got norm {norm:.6g}")
    nx, ny, nz = nx / norm, ny / norm, nz / norm
    if h is None:
        h = build_hamiltonian(1, 1.0)
    elif h.num_qubits != 1:
        raise ValidationError("analytic rotation tables are single-qubit only")
    f = complex(nx, ny)
    half = theta / 2.0
    s = math.sin(half)
    g = complex(math.cos(half), nz * s)
    p = params.p
    gamma = params.gamma
    cross = 1j * s * np.conj(f) * g * np.conj(gamma)
    cross_conj = 1j * s * f * np.conj(g) * gamma
    entries = np.array(
        [
            [(1 - p) * abs(g) ** 2 + cross, (1 - p) * abs(f) ** 2 * s ** 2 - cross],
            [p * abs(f) ** 2 * s ** 2 - cross_conj, p * abs(g) ** 2 + cross_conj],
        ],
        dtype=complex,
    )
    table = KdqTable(entries=entries, hamiltonian=h)
    rho = np.array([[1 - p, np.conj(gamma)], [gamma, p]], dtype=complex)
    from .gates import rotation_matrix  # local import to avoid a cycle

    _validate_marginals(table, rotation_matrix(theta, (nx, ny, nz)), rho, h)
    return table


def kdq_hadamard_evolution(
    omega_t: float, params: QubitStateParams, h: Hamiltonian | None = None
) -> KdqTable:
    """Closed-form table for the Hadamard-generating evolution U_h(t).

    The evolution is the rotation by angle 2*omega_t about the axis
    (1, 0, 1)/sqrt2; at omega_t = pi/2 it reproduces the Hadamard gate's
    table (the operator itself differs by a global phase, which the
    quasiprobabilities cannot see).
    """
    inv = 1.0 / math.sqrt(2.0)
    return kdq_rotation_analytic(2.0 * omega_t, (inv, 0.0, inv), params, h)


def table_json_dict(table: KdqTable) -> dict:
    """JSON payload with fixed field names for the external interface."""
    return {
        "dim": table.dim,
        "entries": [
            [{"re": float(z.real), "im": float(z.imag)} for z in row]
            for row in table.entries
        ],
        "row_marginals": [float(x) for x in table.row_marginals],
        "col_marginals": [float(x) for x in table.col_marginals],
    }
