"""Work functionals over quasiprobability tables.

The extractable work of a cyclic transformation is the first moment of the
energy DROP, W = sum_{i != f} Re q_if (E_i - E_f); only the Margenau-Hill
(real) part of a table contributes, and a positive W means the cycle yields
net energy. The helpers here split W into population and coherence parts,
resolve it into per-transition components, quantify anomalous (negative MHQ)
weight through the positive/negative-part norms of the weighted MHQ vectors,
and evaluate the Jarzynski sum with its coherence correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kdq import KdqSplit, KdqTable, kdq_split, kdq_table
from .system import Hamiltonian, QubitStateParams, ValidationError, thermal_state

#: Pairs entering the two-qubit component resolution and anomaly vectors,
#: in vector order. The degenerate pair (1,2) carries no energy and is
#: excluded; the extreme pair (0,3) is double-weighted.
TWO_QUBIT_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 3), (2, 3))


@dataclass(frozen=True)
class AnomalyNorms:
    """Euclidean norms of the positive/negative parts of the MHQ vectors.

    ``up`` refers to the upward vector (entries i < f), ``down`` to the
    downward one (i > f).
    """

    pos_up: float
    neg_up: float
    pos_down: float
    neg_down: float


@dataclass(frozen=True)
class WorkReport:
    """Work of one table: total, split, per-transition components, norms."""

    total: float
    population: float
    coherent: float
    components: dict[str, float]
    norms: AnomalyNorms | None


@dataclass(frozen=True)
class JarzynskiReport:
    beta: float
    expectation: complex
    gamma_correction: complex


def _energy_drop(h: Hamiltonian) -> np.ndarray:
    e = np.asarray(h.eigenvalues)
    return e[:, None] - e[None, :]


def extractable_work(table: KdqTable) -> float:
    """First moment sum_{if} Re q_if (E_i - E_f)."""
    return float(np.sum(table.entries.real * _energy_drop(table.hamiltonian)))


def work_split(split: KdqSplit) -> tuple[float, float]:
    """(population, coherent) work parts of a split table.

    For a single qubit the coherent part must equal -4E Re q_du(chi); this
    exact algebraic identity is asserted here as a self-check.
    """
    drop = _energy_drop(split.hamiltonian)
    population = float(np.sum(split.population.real * drop))
    coherent = float(np.sum(split.coherent.real * drop))
    if split.hamiltonian.dim == 2:
        closed = -4.0 * split.hamiltonian.energy_scale * split.coherent[0, 1].real
        if abs(coherent - closed) > 1e-12:
            raise ValidationError(
                "single-qubit coherent work disagrees with its closed form; "
                "the split input is inconsistent"
            )
    return population, coherent


def work_components(table: KdqTable) -> dict[str, float]:
    """Two-qubit resolution W_if = 2E(1 + [i=0][f=3])(Re q_fi - Re q_if).

    Defined on the two-qubit spectrum only; the five contributing pairs are
    (0,1), (0,2), (0,3), (1,3), (2,3) and the degenerate (1,2) pair drops
    out. The values sum to the total extractable work.
    """
    if table.dim != 4:
        raise ValidationError(
            f"work components are defined for two-qubit tables, got dim {table.dim}"
        )
    e2 = table.hamiltonian.energy_scale
    re = table.entries.real
    out: dict[str, float] = {}
    for i, f in TWO_QUBIT_PAIRS:
        weight = 2.0 * e2 * (2.0 if (i, f) == (0, 3) else 1.0)
        out[f"{i}-{f}"] = float(weight * (re[f, i] - re[i, f]))
    return out


def _general_components(table: KdqTable) -> dict[str, float]:
    """Per-pair resolution (E_f - E_i)(Re q_fi - Re q_if) for any dimension.

    Reduces to :func:`work_components` on the two-qubit spectrum (there
    E_3 - E_0 = 4E reproduces the double weight) and always sums to the
    total work. Pairs with equal energies are omitted.
    """
    e = np.asarray(table.hamiltonian.eigenvalues)
    re = table.entries.real
    out: dict[str, float] = {}
    for i in range(table.dim):
        for f in range(i + 1, table.dim):
            gap = e[f] - e[i]
            if gap == 0.0:
                continue
            out[f"{i}-{f}"] = float(gap * (re[f, i] - re[i, f]))
    return out


def anomaly_norms(table: KdqTable) -> AnomalyNorms:
    """Positive/negative-part norms of the weighted MHQ vectors.

    The upward vector is (q_01, q_02, 2 q_03, q_13, q_23) over MHQs, the
    downward one its transpose-image; each is split into positive and
    negative parts whose Euclidean norms are reported as magnitudes.
    """
    if table.dim != 4:
        raise ValidationError(
            f"anomaly norms are defined for two-qubit tables, got dim {table.dim}"
        )
    re = table.entries.real
    up = np.array([_pair_weight(i, f) * re[i, f] for i, f in TWO_QUBIT_PAIRS])
    down = np.array([_pair_weight(i, f) * re[f, i] for i, f in TWO_QUBIT_PAIRS])
    return AnomalyNorms(
        pos_up=float(np.linalg.norm(np.clip(up, 0.0, None))),
        neg_up=float(np.linalg.norm(np.clip(up, None, 0.0))),
        pos_down=float(np.linalg.norm(np.clip(down, 0.0, None))),
        neg_down=float(np.linalg.norm(np.clip(down, None, 0.0))),
    )


def _pair_weight(i: int, f: int) -> float:
    return 2.0 if (i, f) == (0, 3) else 1.0


def build_work_report(U: np.ndarray, rho: np.ndarray, h: Hamiltonian) -> WorkReport:
    """Full work analysis of one (U, rho) pair."""
    table = kdq_table(U, rho, h)
    population, coherent = work_split(kdq_split(U, rho, h))
    components = work_components(table) if table.dim == 4 else _general_components(table)
    norms = anomaly_norms(table) if table.dim == 4 else None
    return WorkReport(
        total=extractable_work(table),
        population=population,
        coherent=coherent,
        components=components,
        norms=norms,
    )


def jarzynski(
    U: np.ndarray,
    rho: np.ndarray,
    beta: float,
    h: Hamiltonian,
    allow_nonthermal: bool = False,
) -> JarzynskiReport:
    """Exponentiated-work sum <e^{-beta W}> and its coherence correction.

    The fluctuation identity presumes the dephased input is the beta-Gibbs
    state; by default a mismatch beyond 1e-10 in any population raises.
    Passing ``allow_nonthermal=True`` computes the raw sums anyway. The
    correction Gamma is the same sum evaluated on the coherence part alone,
    and the expectation equals 1 + Gamma whenever the thermal precondition
    holds. Both values are reported as complex; no real-part truncation.
    """
    beta = float(beta)
    if not math.isfinite(beta):
        raise ValidationError(f"beta must be finite, got {beta}")
    if not allow_nonthermal:
        gibbs = thermal_state(h, beta)
        pops = np.real(np.diag(rho))
        mismatch = np.max(np.abs(pops - np.real(np.diag(gibbs))))
        if mismatch > 1e-10:
            raise ValidationError(
                f"dephased input deviates from the beta={beta:g} Gibbs state "
                f"by {mismatch:.3e}; pass allow_nonthermal=True to proceed"
            )
    e = np.asarray(h.eigenvalues)
    weights = np.exp(-beta * (e[None, :] - e[:, None]))
    table = kdq_table(U, rho, h)
    split = kdq_split(U, rho, h)
    expectation = complex(np.sum(table.entries * weights))
    gamma = complex(np.sum(split.coherent * weights))
    return JarzynskiReport(beta=beta, expectation=expectation, gamma_correction=gamma)


def work_variance_imag(table: KdqTable) -> float:
    """Imaginary part of the second work moment, -2 sum E_i E_f Im q_if."""
    e = np.asarray(table.hamiltonian.eigenvalues)
    return float(-2.0 * np.sum(e[:, None] * e[None, :] * table.entries.imag))


def first_moment_imag_check(table: KdqTable) -> float:
    """Diagnostic sum Im q_if (E_i - E_f); vanishes for every valid table."""
    return float(np.sum(table.entries.imag * _energy_drop(table.hamiltonian)))


def work_rotation_analytic(
    theta: float,
    axis: tuple[float, float, float],
    params: QubitStateParams,
    energy_scale: float = 1.0,
) -> float:
    """Closed-form rotation work 2E[(n_x^2 + n_y^2) sin^2(theta/2) - 2 Re q_du]."""
    from .kdq import kdq_rotation_analytic

    table = kdq_rotation_analytic(theta, axis, params)
    nx, ny, nz = (float(v) for v in axis)
    # The analytic table constructor has already vetted the axis length.
    planar = (nx * nx + ny * ny) / (nx * nx + ny * ny + nz * nz)
    s2 = math.sin(theta / 2.0) ** 2
    return 2.0 * energy_scale * (planar * s2 - 2.0 * table.entries[0, 1].real)


def work_evolution_analytic(
    omega_t: float, params: QubitStateParams, energy_scale: float = 1.0
) -> tuple[float, float, float]:
    """(total, population, coherent) work of the Hadamard-generating evolution.

    population = E (2p - 1) sin^2(omega_t)
    coherent   = (4 E |gamma| / sqrt2)
                 (sin(phi) cos(omega_t) sin(omega_t)
                  - cos(phi) sin^2(omega_t) / sqrt2)
    """
    e2 = float(energy_scale)
    s = math.sin(omega_t)
    c = math.cos(omega_t)
    population = e2 * (2.0 * params.p - 1.0) * s * s
    coherent = (
        4.0
        * e2
        * params.gamma_abs
        / math.sqrt(2.0)
        * (math.sin(params.gamma_phase) * c * s - math.cos(params.gamma_phase) * s * s / math.sqrt(2.0))
    )
    return population + coherent, population, coherent


def work_report_json(report: WorkReport) -> dict:
    """JSON payload with the fixed external field names."""
    payload: dict = {
        "total": report.total,
        "population": report.population,
        "coherent": report.coherent,
        "components": {k: v for k, v in report.components.items()},
    }
    if report.norms is None:
        payload["norms"] = None
    else:
        payload["norms"] = {
            "pos_up": report.norms.pos_up,
            "neg_up": report.norms.neg_up,
            "pos_down": report.norms.pos_down,
            "neg_down": report.norms.neg_down,
        }
    return payload


def jarzynski_json(report: JarzynskiReport) -> dict:
    return {
        "beta": report.beta,
        "expectation": {"re": report.expectation.real, "im": report.expectation.imag},
        "gamma_correction": {
            "re": report.gamma_correction.real,
            "im": report.gamma_correction.imag,
        },
    }
