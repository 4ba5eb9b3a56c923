"""Physical setting: noninteracting Z-sum Hamiltonian and state constructors.

Storage convention, used everywhere in the package: the computational basis
is ordered lexicographically with the ground state first, so index 0 of a
single qubit is ``|down>`` (energy -E) and index 1 is ``|up>`` (energy +E).
Qubit 0 is the slow (left) Kronecker factor. Eigenstates are labelled by
ascending energy with a lexicographic tie-break, which is the identity
relabelling for one and two qubits; the :class:`Hamiltonian` carries the
resulting permutation so projectors and energies always line up with
eigenstate indices.

Single-qubit mixed states are parametrized by the excited population ``p``
and the coherence ``gamma = |gamma| e^{i phi}``, where gamma is the
up-row/down-column element of the density matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import PSD_TOL, as_cmatrix, hermitian_eigenvalues, is_hermitian

#: Largest qubit count accepted by the constructors. Dense storage only.
MAX_QUBITS = 10

_STATE_TRACE_TOL = 1e-12
_STATE_HERM_TOL = 1e-12


class ValidationError(ValueError):
    """A physically invalid input: bad density matrix, non-unitary gate, etc."""


@dataclass(frozen=True)
class Hamiltonian:
    """Noninteracting Hamiltonian E * sum_j Z_j with its eigenstructure.

    ``eigenvalues[k]`` and ``projectors[k]`` refer to eigenstate ``k`` in the
    ordering described in the module docstring; ``basis_index[k]`` is the
    computational-basis index the eigenstate occupies, and ``basis_labels[k]``
    spells it as a d/u string (ground state 'd').
    """

    num_qubits: int
    energy_scale: float
    eigenvalues: tuple[float, ...]
    basis_index: tuple[int, ...]
    basis_labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return 2 ** self.num_qubits

    @property
    def projectors(self) -> tuple[np.ndarray, ...]:
        projs = []
        for b in self.basis_index:
            pk = np.zeros((self.dim, self.dim), dtype=complex)
            pk[b, b] = 1.0
            projs.append(pk)
        return tuple(projs)

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for ek, b in zip(self.eigenvalues, self.basis_index):
            m[b, b] = ek
        return m


def build_hamiltonian(num_qubits: int, energy_scale: float) -> Hamiltonian:
    """Construct E * sum_j Z_j for ``num_qubits`` qubits.

    Raises ValueError for a non-positive qubit count or energy scale.
    """
    if not isinstance(num_qubits, int) or num_qubits < 1:
        raise ValueError(f"num_qubits must be a positive integer, got {num_qubits!r}")
    if num_qubits > MAX_QUBITS:
        raise ValueError(f"num_qubits {num_qubits} exceeds the dense-storage cap {MAX_QUBITS}")
    energy_scale = float(energy_scale)
    if not math.isfinite(energy_scale) or energy_scale <= 0:
        raise ValueError(f"energy_scale must be positive and finite, got {energy_scale}")
    dim = 2 ** num_qubits
    # Energy of basis index b: each '1' bit contributes +E, each '0' bit -E.
    diag = [energy_scale * (2 * _popcount(b, num_qubits) - num_qubits) for b in range(dim)]
    order = sorted(range(dim), key=lambda b: (diag[b], b))
    labels = tuple(_spin_label(b, num_qubits) for b in order)
    return Hamiltonian(
        num_qubits=num_qubits,
        energy_scale=energy_scale,
        eigenvalues=tuple(diag[b] for b in order),
        basis_index=tuple(order),
        basis_labels=labels,
    )


def _popcount(b: int, width: int) -> int:
    return bin(b & ((1 << width) - 1)).count("1")


def _spin_label(b: int, width: int) -> str:
    bits = format(b, f"0{width}b")
    return bits.replace("0", "d").replace("1", "u")


@dataclass(frozen=True)
class QubitStateParams:
    """Single-qubit state parameters (p, |gamma|, phase of gamma)."""

    p: float
    gamma_abs: float
    gamma_phase: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"population p must lie in [0, 1], got {self.p}")
        bound = math.sqrt(self.p * (1.0 - self.p))
        if self.gamma_abs < 0 or self.gamma_abs > bound + 1e-12:
            raise ValidationError(
                f"|gamma| = {self.gamma_abs} violates the positivity bound "
                f"sqrt(p(1-p)) = {bound:.6g}"
            )

    @property
    def gamma(self) -> complex:
        return self.gamma_abs * complex(math.cos(self.gamma_phase), math.sin(self.gamma_phase))


def qubit_state(p: float, gamma_abs: float, gamma_phase: float) -> np.ndarray:
    """Density matrix [[1-p, gamma*], [gamma, p]] in the stored (down-first) basis."""
    params = QubitStateParams(float(p), float(gamma_abs), float(gamma_phase))
    g = params.gamma
    return np.array([[1.0 - params.p, np.conj(g)], [g, params.p]], dtype=complex)


def pure_state_bloch(theta: float, phi: float) -> np.ndarray:
    """Projector onto cos(theta/2)|down> + e^{i phi} sin(theta/2)|up>."""
    ket = np.array(
        [math.cos(theta / 2.0), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0)],
        dtype=complex,
    )
    return np.outer(ket, ket.conj())


def pure_state_pop_phase(p: float, phi: float) -> np.ndarray:
    """Projector onto sqrt(p)|up> + e^{i phi} sqrt(1-p)|down>.

    Note the resulting coherence is gamma = sqrt(p(1-p)) e^{-i phi}: the ket
    phase sits on the ground component, so it enters gamma conjugated.
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"population p must lie in [0, 1], got {p}")
    ket = np.array(
        [complex(math.cos(phi), math.sin(phi)) * math.sqrt(1.0 - p), math.sqrt(p)],
        dtype=complex,
    )
    return np.outer(ket, ket.conj())


@dataclass(frozen=True)
class StateSplit:
    """Decomposition of a state into its diagonal and coherence parts."""

    dephased: np.ndarray
    coherent: np.ndarray


def dephase_split(rho: np.ndarray) -> StateSplit:
    """Split rho into the dephased (diagonal) state and the coherence remainder.

    The coherent part has an exactly zero diagonal and dephased + coherent
    reproduces the input bit for bit.
    """
    rho = as_cmatrix(rho, "state")
    dephased = np.diag(np.diag(rho)).astype(complex)
    coherent = rho - dephased
    np.fill_diagonal(coherent, 0.0)
    return StateSplit(dephased=dephased, coherent=coherent)


def thermal_state(h: Hamiltonian, beta: float) -> np.ndarray:
    """Gibbs state exp(-beta H)/Z, diagonal in the stored basis.

    Negative beta is legal and produces population inversion.
    """
    beta = float(beta)
    if not math.isfinite(beta):
        raise ValidationError(f"beta must be finite, got {beta}")
    # Subtract the minimum for overflow-safe exponentials at large |beta|.
    exponents = -beta * np.asarray(h.eigenvalues)
    weights = np.exp(exponents - np.max(exponents))
    weights /= weights.sum()
    rho = np.zeros((h.dim, h.dim), dtype=complex)
    for w, b in zip(weights, h.basis_index):
        rho[b, b] = w
    return rho


def effective_beta(rho: np.ndarray, h: Hamiltonian) -> float:
    """Inverse temperature whose Gibbs state matches a diagonal qubit state.

    Defined for a single qubit only. Raises for coherent input and for
    populations 0 or 1 (the matching beta diverges).
    """
    rho = as_cmatrix(rho, "state")
    if h.num_qubits != 1 or rho.shape != (2, 2):
        raise ValidationError("effective_beta is defined for single-qubit states")
    if abs(rho[0, 1]) > 1e-12 or abs(rho[1, 0]) > 1e-12:
        raise ValidationError("effective_beta requires a diagonal (dephased) state")
    p = rho[1, 1].real
    if not 1e-300 < p < 1.0 - 1e-16:
        raise ValidationError(f"excited population {p} admits no finite inverse temperature")
    gap = 2.0 * h.energy_scale
    return -math.log(p / (1.0 - p)) / gap


def validate_density_matrix(rho: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the coerced array."""
    rho = as_cmatrix(rho, "state")
    if rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"state must be square, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise ValidationError(f"state has dimension {rho.shape[0]}, expected {dim}")
    if not is_hermitian(rho, _STATE_HERM_TOL):
        raise ValidationError("state is not Hermitian within 1e-12")
    tr = np.trace(rho)
    if abs(tr - 1.0) > _STATE_TRACE_TOL:
        raise ValidationError(f"state trace is {tr:.15g}, expected 1")
    floor = hermitian_eigenvalues(rho)[0]
    if floor < -PSD_TOL:
        raise ValidationError(f"state has negative eigenvalue {floor:.3e}")
    return rho
