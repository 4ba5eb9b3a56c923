"""Gate set, circuit representation and embedding into the L-qubit space.

Matrices follow the package storage convention (ground state |down> = index
0), so the Pauli Z here is diag(-1, +1) and the Hadamard is
(1/sqrt2)[[-1, 1], [1, 1]]. The phase gate puts its phase on |down>, and T
is the quarter-pi instance of it. CNOT flips the target when the control is
in the ground state, matching the energy-labelled permutation used by the
two-qubit worked examples.

A circuit applies its gate list in order: the first listed gate acts first,
i.e. it is the rightmost factor of the circuit unitary.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_cmatrix, identity, is_unitary
from .system import ValidationError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)
HADAMARD = (SIGMA_X + SIGMA_Z) / math.sqrt(2.0)

PROJ_DOWN = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ_UP = np.array([[0, 0], [0, 1]], dtype=complex)

#: Axis of the Hadamard-like rotation, (x + z)/sqrt2.
HADAMARD_AXIS = (1.0 / math.sqrt(2.0), 0.0, 1.0 / math.sqrt(2.0))


def phase_matrix(phi: float) -> np.ndarray:
    """P_phi = e^{i phi}|down><down| + |up><up|."""
    return np.array([[complex(math.cos(phi), math.sin(phi)), 0], [0, 1]], dtype=complex)


T_MATRIX = phase_matrix(math.pi / 4.0)


def rotation_matrix(theta: float, axis: tuple[float, float, float]) -> np.ndarray:
    """cos(theta/2) I - i sin(theta/2) (n . sigma) for a unit axis n."""
    nx, ny, nz = _unit_axis(axis)
    half = theta / 2.0
    return (
        math.cos(half) * identity(2)
        - 1j * math.sin(half) * (nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z)
    )


def _unit_axis(axis) -> tuple[float, float, float]:
    nx, ny, nz = (float(v) for v in axis)
    norm = math.sqrt(nx * nx + ny * ny + nz * nz)
    if norm == 0.0 or not math.isfinite(norm):
        raise ValidationError(f"rotation axis {axis!r} has no direction")
    if abs(norm - 1.0) <= 1e-12:
        # Already unit to storage precision; keep the exact input bits so
        # that parse/serialize round-trips are true fixed points.
        return nx, ny, nz
    if abs(norm - 1.0) > 1e-6:
        warnings.warn(
            f"rotation axis norm {norm:.6g} deviates from 1; normalizing",
            stacklevel=3,
        )
    return nx / norm, ny / norm, nz / norm


@dataclass(frozen=True)
class Gate:
    """One circuit element.

    ``kind`` is one of H, T, P, CNOT, R, U. Targets are qubit indices
    (control first for CNOT); params hold the phase for P, and theta plus
    the normalized axis for R. Custom gates (kind U) carry their matrix.
    """

    kind: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()
    matrix: np.ndarray | None = field(default=None, compare=False)


def h_gate(target: int) -> Gate:
    return Gate("H", (_qubit(target),))


def t_gate(target: int) -> Gate:
    return Gate("T", (_qubit(target),))


def p_gate(target: int, phi: float) -> Gate:
    return Gate("P", (_qubit(target),), (float(phi),))


def cnot_gate(control: int, target: int) -> Gate:
    control, target = _qubit(control), _qubit(target)
    if control == target:
        raise ValidationError(f"control equals target (qubit {control})")
    return Gate("CNOT", (control, target))


def r_gate(target: int, theta: float, axis: tuple[float, float, float]) -> Gate:
    nx, ny, nz = _unit_axis(axis)
    return Gate("R", (_qubit(target),), (float(theta), nx, ny, nz))


def custom_gate(matrix, targets) -> Gate:
    targets = tuple(_qubit(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValidationError(f"custom gate targets repeat a qubit: {targets}")
    m = as_cmatrix(matrix, "custom gate")
    want = 2 ** len(targets)
    if m.shape != (want, want):
        raise ValidationError(
            f"custom gate on {len(targets)} qubit(s) needs shape ({want}, {want}), got {m.shape}"
        )
    if not is_unitary(m):
        raise ValidationError("custom gate matrix is not unitary within 1e-10")
    return Gate("U", targets, (), m)


def _qubit(q) -> int:
    q = int(q)
    if q < 0:
        raise ValidationError(f"qubit index must be nonnegative, got {q}")
    return q


def single_qubit_matrix(gate: Gate) -> np.ndarray:
    """The 2x2 matrix of a one-qubit gate, before embedding."""
    if gate.kind == "H":
        return HADAMARD.copy()
    if gate.kind == "T":
        return T_MATRIX.copy()
    if gate.kind == "P":
        return phase_matrix(gate.params[0])
    if gate.kind == "R":
        theta, nx, ny, nz = gate.params
        return rotation_matrix(theta, (nx, ny, nz))
    raise ValueError(f"gate kind {gate.kind} has no single-qubit matrix")


def gate_matrix(gate: Gate, num_qubits: int) -> np.ndarray:
    """Embed a gate into the full 2^L space (qubit 0 = slow kron factor)."""
    for t in gate.targets:
        if t >= num_qubits:
            raise ValidationError(
                f"gate {gate.kind} targets qubit {t} but the register has {num_qubits}"
            )
    if gate.kind in ("H", "T", "P", "R"):
        return _embed_single(single_qubit_matrix(gate), gate.targets[0], num_qubits)
    if gate.kind == "CNOT":
        control, target = gate.targets
        flip = _embed_single(SIGMA_X, target, num_qubits)
        pdn = _embed_single(PROJ_DOWN, control, num_qubits)
        pup = _embed_single(PROJ_UP, control, num_qubits)
        return pup + pdn @ flip
    if gate.kind == "U":
        return _embed_multi(gate.matrix, gate.targets, num_qubits)
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def _embed_single(m: np.ndarray, target: int, num_qubits: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for q in range(num_qubits):
        out = np.kron(out, m if q == target else identity(2))
    return out


def _embed_multi(m: np.ndarray, targets: tuple[int, ...], num_qubits: int) -> np.ndarray:
    dim = 2 ** num_qubits
    out = np.zeros((dim, dim), dtype=complex)
    spectators = [q for q in range(num_qubits) if q not in targets]

    def sub_index(basis: int) -> int:
        idx = 0
        for t in targets:
            idx = (idx << 1) | _bit(basis, t, num_qubits)
        return idx

    def spectator_bits(basis: int) -> tuple[int, ...]:
        return tuple(_bit(basis, q, num_qubits) for q in spectators)

    for row in range(dim):
        for col in range(dim):
            if spectator_bits(row) != spectator_bits(col):
                continue
            out[row, col] = m[sub_index(row), sub_index(col)]
    return out


def _bit(basis: int, qubit: int, num_qubits: int) -> int:
    return (basis >> (num_qubits - 1 - qubit)) & 1


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list on a fixed register; empty circuits are legal."""

    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValidationError(f"circuit needs at least one qubit, got {self.num_qubits}")
        for g in self.gates:
            for t in g.targets:
                if t >= self.num_qubits:
                    raise ValidationError(
                        f"gate {g.kind} targets qubit {t} outside the"
                        f" {self.num_qubits}-qubit register"
                    )

    @property
    def depth(self) -> int:
        return len(self.gates)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full operator: last listed gate leftmost, first listed gate rightmost."""
    return suffix_unitary(circuit, 0)


def prefix_unitary(circuit: Circuit, j: int) -> np.ndarray:
    """Product of the first j gates (the part applied before gate j+1)."""
    _check_cut(circuit, j)
    out = identity(2 ** circuit.num_qubits)
    for g in circuit.gates[:j]:
        out = gate_matrix(g, circuit.num_qubits) @ out
    return out


def suffix_unitary(circuit: Circuit, j: int) -> np.ndarray:
    """Product of the gates after position j (everything not in the prefix)."""
    _check_cut(circuit, j)
    out = identity(2 ** circuit.num_qubits)
    for g in circuit.gates[j:]:
        out = gate_matrix(g, circuit.num_qubits) @ out
    return out


def _check_cut(circuit: Circuit, j: int) -> None:
    if not 0 <= j <= len(circuit.gates):
        raise ValueError(
            f"cut position {j} out of range for a {len(circuit.gates)}-gate circuit"
        )
