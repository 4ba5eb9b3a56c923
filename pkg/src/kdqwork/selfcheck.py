"""Randomized invariant suite behind the ``verify`` command.

Every module's structural invariants are exercised on seeded random draws:
algebraic identities of the linear-algebra kernel, state-constructor
validity, circuit cut consistency, quasiprobability table laws (linearity,
global-phase invariance, marginals, the anticommutator cross-check of the
real part), work bookkeeping, fluctuation identities, and the deep-circuit
decomposition laws. ``quick`` uses 100 draws per randomized check and
``full`` uses 10000, except where an invariant pins its own count or where
a structurally heavy check is capped (noted in the check).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import gates
from .decomposition import (
    classicality_check,
    commutation_screen,
    decomposition_identity,
    factorization_check,
)
from .dsl import CircuitFile, parse_circuit, serialize_circuit
from .kdq import (
    kdq_hadamard_evolution,
    kdq_rotation_analytic,
    kdq_split,
    kdq_table,
    tpm_distribution,
    transition_amplitudes,
)
from .linalg import (
    adjoint,
    anticommutator,
    commutator,
    frobenius_norm,
    hermitian_eigenvalues,
    is_unitary,
    kron,
    mat_mul,
    trace,
)
from .system import (
    QubitStateParams,
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
    anomaly_norms,
    extractable_work,
    first_moment_imag_check,
    jarzynski,
    work_components,
    work_evolution_analytic,
    work_rotation_analytic,
    work_split,
    work_variance_imag,
)

LEVEL_DRAWS = {"quick": 100, "full": 10_000}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def _random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def _random_axis(rng: np.random.Generator) -> tuple[float, float, float]:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return (float(v[0]), float(v[1]), float(v[2]))


def _random_qubit_params(rng: np.random.Generator, p_max: float = 1.0):
    p = float(rng.uniform(0.0, p_max))
    gabs = float(rng.uniform(0.0, 1.0) * math.sqrt(p * (1.0 - p)))
    phase = float(rng.uniform(0.0, 2.0 * math.pi))
    return p, gabs, phase


def _random_circuit(rng: np.random.Generator, num_qubits: int, depth: int) -> gates.Circuit:
    pool = []
    for _ in range(depth):
        kind = rng.integers(0, 4 if num_qubits > 1 else 3)
        q = int(rng.integers(0, num_qubits))
        if kind == 0:
            pool.append(gates.h_gate(q))
        elif kind == 1:
            pool.append(gates.t_gate(q))
        elif kind == 2:
            pool.append(gates.r_gate(q, float(rng.uniform(0, 2 * math.pi)), _random_axis(rng)))
        else:
            t = int(rng.integers(0, num_qubits))
            while t == q:
                t = int(rng.integers(0, num_qubits))
            pool.append(gates.cnot_gate(q, t))
    return gates.Circuit(num_qubits=num_qubits, gates=tuple(pool))


def _worst(label: str, worst: float, tol: float, n: int) -> tuple[bool, str]:
    return worst <= tol, f"{label} {worst:.3g} over {n} draws (tol {tol:g})"


# ---------------------------------------------------------------- kernel


def _check_kron_associativity(rng, draws):
    worst = 0.0
    for _ in range(draws):
        a, b, c = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
        worst = max(worst, float(np.max(np.abs(kron(kron(a, b), c) - kron(a, kron(b, c))))))
    return _worst("max deviation", worst, 1e-13, draws)


def _check_trace_cyclicity(rng, draws):
    worst = 0.0
    for _ in range(draws):
        a, b, c = (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(3))
        lhs = trace(mat_mul(mat_mul(a, b), c))
        rhs = trace(mat_mul(mat_mul(c, a), b))
        worst = max(worst, abs(lhs - rhs))
    return _worst("max deviation", worst, 1e-13, draws)


def _check_adjoint_antihomomorphism(rng, draws):
    worst = 0.0
    for _ in range(draws):
        d = int(rng.integers(2, 5))
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        b = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        worst = max(
            worst,
            float(np.max(np.abs(adjoint(mat_mul(a, b)) - mat_mul(adjoint(b), adjoint(a))))),
        )
    return _worst("max deviation", worst, 1e-14, draws)


def _check_eigenvalue_solver(rng, draws):
    worst = 0.0
    for _ in range(draws):
        d = int(rng.integers(2, 5))
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m = (a + a.conj().T) / 2.0
        ev = hermitian_eigenvalues(m)
        worst = max(worst, abs(float(np.sum(ev)) - trace(m).real))
        worst = max(worst, abs(float(np.sum(ev**2)) - frobenius_norm(m) ** 2))
        if np.any(np.diff(ev) < 0):
            return False, "eigenvalues not sorted ascending"
        psd_floor = hermitian_eigenvalues(a @ a.conj().T)[0]
        if psd_floor < -1e-10:
            return False, f"Gram matrix reported negative eigenvalue {psd_floor:.3g}"
    return _worst("max moment deviation", worst, 1e-10, draws)


# ---------------------------------------------------------------- states


def _check_thermal_beta_roundtrip(rng, draws):
    h = build_hamiltonian(1, 1.0)
    worst = 0.0
    for _ in range(draws):
        beta = float(rng.uniform(-5.0, 5.0))
        worst = max(worst, abs(effective_beta(thermal_state(h, beta), h) - beta))
    return _worst("max |beta' - beta|", worst, 1e-10, draws)


def _check_state_constructors(rng, draws):
    h2 = build_hamiltonian(2, 1.0)
    h1 = build_hamiltonian(1, 1.0)
    for k in range(draws):
        p, gabs, phase = _random_qubit_params(rng)
        validate_density_matrix(qubit_state(p, gabs, phase), 2)
        validate_density_matrix(
            pure_state_bloch(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi))), 2
        )
        validate_density_matrix(pure_state_pop_phase(p, phase), 2)
        beta = float(rng.uniform(-5.0, 5.0))
        validate_density_matrix(thermal_state(h1 if k % 2 else h2, beta))
    return True, f"{4 * draws} constructor outputs validated"


def _check_dephase_split(rng, draws):
    for _ in range(draws):
        num_qubits = int(rng.integers(1, 3))
        h = build_hamiltonian(num_qubits, float(rng.uniform(0.5, 2.0)))
        rho = _random_state(rng, h.dim)
        split = dephase_split(rho)
        if np.any(np.diagonal(split.coherent) != 0.0):
            return False, "coherence part has a nonzero diagonal"
        if not np.array_equal(split.dephased + split.coherent, rho):
            return False, "split does not reassemble the input bit for bit"
        if np.any(commutator(split.dephased, h.matrix) != 0.0):
            return False, "dephased part does not commute with the Hamiltonian exactly"
    return True, f"{draws} splits exact"


# ---------------------------------------------------------------- circuits


def _check_circuit_cuts(rng, draws):
    worst = 0.0
    n_total = 0
    for _ in range(draws):
        num_qubits = int(rng.integers(1, 3))
        c = _random_circuit(rng, num_qubits, int(rng.integers(1, 7)))
        full = gates.circuit_unitary(c)
        if not is_unitary(full):
            return False, "circuit unitary failed the unitarity gate"
        for j in range(c.depth + 1):
            recon = mat_mul(gates.suffix_unitary(c, j), gates.prefix_unitary(c, j))
            worst = max(worst, float(np.max(np.abs(recon - full))))
            n_total += 1
    return _worst("max cut deviation", worst, 1e-13, n_total)


_STATE_SPEC_HEADS = ("pure_bloch", "pure_pop", "qubit", "thermal", "product")


def _random_file_text(rng: np.random.Generator) -> str:
    num_qubits = int(rng.integers(1, 3))
    lines = [f"qubits {num_qubits}", f"E {float(rng.uniform(0.5, 2.0))!r}"]
    head = _STATE_SPEC_HEADS[int(rng.integers(0, len(_STATE_SPEC_HEADS)))]
    p, gabs, phase = _random_qubit_params(rng)
    theta = float(rng.uniform(0, math.pi))
    if head == "pure_bloch":
        spec = f"pure_bloch {theta!r} {phase!r}"
    elif head == "pure_pop":
        spec = f"pure_pop {p!r} {phase!r}"
    elif head == "qubit":
        spec = f"qubit {p!r} {gabs!r} {phase!r}"
    elif head == "thermal":
        spec = f"thermal {float(rng.uniform(-2, 2))!r}"
    else:
        num_qubits = 2
        lines[0] = "qubits 2"
        spec = f"product pure_bloch {theta!r} {phase!r} ; qubit {p!r} {gabs!r} {phase!r}"
    if head == "product" or num_qubits == 1:
        lines.append(f"state {spec}")
    circuit = _random_circuit(rng, num_qubits, int(rng.integers(1, 5)))
    model = parse_circuit("\n".join(lines) + "\n")
    return serialize_circuit(
        CircuitFile(
            circuit=circuit,
            hamiltonian=model.hamiltonian,
            state=model.state,
            state_spec=model.state_spec,
        )
    )


def _check_dsl_roundtrip(rng, draws):
    n = min(draws, 500)
    for _ in range(n):
        text = _random_file_text(rng)
        once = serialize_circuit(parse_circuit(text))
        twice = serialize_circuit(parse_circuit(once))
        if once != twice:
            return False, "serialize/parse is not a fixed point"
        a, b = parse_circuit(text), parse_circuit(once)
        if not np.array_equal(
            gates.circuit_unitary(a.circuit), gates.circuit_unitary(b.circuit)
        ):
            return False, "round-trip changed the circuit unitary"
        if (a.state is None) != (b.state is None) or (
            a.state is not None and not np.array_equal(a.state, b.state)
        ):
            return False, "round-trip changed the state"
    return True, f"{n} files round-tripped bit for bit"


# ---------------------------------------------------------------- tables


def _table_draw(rng, num_qubits=None):
    if num_qubits is None:
        num_qubits = int(rng.integers(1, 3))
    h = build_hamiltonian(num_qubits, float(rng.uniform(0.5, 2.0)))
    return _haar_unitary(rng, h.dim), _random_state(rng, h.dim), h


def _check_table_linearity(rng, draws):
    worst = 0.0
    for _ in range(draws):
        U, rho1, h = _table_draw(rng)
        rho2 = _random_state(rng, h.dim)
        alpha = float(rng.uniform(0, 1))
        mix = kdq_table(U, alpha * rho1 + (1 - alpha) * rho2, h).entries
        direct = alpha * kdq_table(U, rho1, h).entries + (1 - alpha) * kdq_table(U, rho2, h).entries
        worst = max(worst, float(np.max(np.abs(mix - direct))))
    return _worst("max deviation", worst, 1e-13, draws)


def _check_global_phase(rng, draws):
    worst = 0.0
    for _ in range(draws):
        U, rho, h = _table_draw(rng)
        alpha = float(rng.uniform(0, 2 * math.pi))
        shifted = kdq_table(np.exp(1j * alpha) * U, rho, h).entries
        worst = max(worst, float(np.max(np.abs(shifted - kdq_table(U, rho, h).entries))))
    return _worst("max deviation", worst, 1e-13, draws)


def _check_marginals(rng, draws):
    worst = 0.0
    for _ in range(draws):
        U, rho, h = _table_draw(rng)
        table = kdq_table(U, rho, h)
        perm = list(h.basis_index)
        pops_in = np.real(np.diagonal(rho))[perm]
        rho_out = U @ rho @ U.conj().T
        pops_out = np.real(np.diagonal(rho_out))[perm]
        worst = max(worst, float(np.max(np.abs(table.row_marginals - pops_in))))
        worst = max(worst, float(np.max(np.abs(table.col_marginals - pops_out))))
        worst = max(worst, abs(complex(np.sum(table.entries)) - 1.0))
        tpm = tpm_distribution(U, rho, h)
        if np.any(tpm < -1e-14):
            return False, "two-point distribution has a negative entry"
        worst = max(worst, float(np.max(np.abs(tpm.sum(axis=1) - pops_in))))
        amp = transition_amplitudes(U, h).entries
        prob = np.abs(amp) ** 2
        worst = max(worst, float(np.max(np.abs(prob.sum(axis=0) - 1.0))))
        worst = max(worst, float(np.max(np.abs(prob.sum(axis=1) - 1.0))))
    return _worst("max deviation", worst, 1e-12, draws)


def _check_anticommutator_crosscheck(rng, draws):
    # d^2 operator products per draw; capped to keep the full level quick.
    n = min(draws, 2000)
    worst = 0.0
    for _ in range(n):
        U, rho, h = _table_draw(rng)
        table = kdq_table(U, rho, h)
        projs = h.projectors
        for i in range(h.dim):
            for f in range(h.dim):
                heis = adjoint(U) @ projs[f] @ U
                re_ref = 0.5 * trace(anticommutator(heis, projs[i]) @ rho).real
                im_ref = (trace(commutator(heis, projs[i]) @ rho) / 2j).real
                worst = max(worst, abs(table.entries[i, f].real - re_ref))
                worst = max(worst, abs(table.entries[i, f].imag - im_ref))
    return _worst("max deviation", worst, 1e-12, n)


def _check_coherent_row_symmetry(rng, draws):
    worst = 0.0
    for _ in range(draws):
        theta = float(rng.uniform(0, 2 * math.pi))
        U = gates.rotation_matrix(theta, _random_axis(rng))
        p, gabs, phase = _random_qubit_params(rng)
        h = build_hamiltonian(1, float(rng.uniform(0.5, 2.0)))
        chi = kdq_split(U, qubit_state(p, gabs, phase), h).coherent
        worst = max(worst, abs(chi[1, 1].real - chi[0, 1].real))
        worst = max(worst, abs(chi[1, 1].imag + chi[0, 1].imag))
    return _worst("max deviation", worst, 1e-13, draws)


def _check_split_routes(rng, draws):
    worst = 0.0
    for _ in range(draws):
        U, rho, h = _table_draw(rng)
        table = kdq_table(U, rho, h)
        split = kdq_split(U, rho, h)
        worst = max(
            worst, float(np.max(np.abs(split.population + split.coherent - table.entries)))
        )
        parts = dephase_split(rho)
        dephased_route = kdq_table(U, parts.dephased, h).entries
        worst = max(worst, float(np.max(np.abs(split.population - dephased_route))))
        worst = max(worst, float(np.max(np.abs(split.coherent - (table.entries - dephased_route)))))
    return _worst("max route deviation", worst, 1e-12, draws)


def _check_product_square(rng, draws):
    h2 = build_hamiltonian(2, 1.0)
    h1 = build_hamiltonian(1, 1.0)
    single = pure_state_pop_phase(0.5, 3 * math.pi / 4)
    u1 = gates.HADAMARD
    q1 = kdq_table(u1, single, h1).entries
    table = kdq_table(kron(u1, u1), kron(single, single), h2)
    target = (1.0 - math.sqrt(2.0)) / 16.0
    dev = abs(table.entries[0, 3].real - target)
    dev = max(dev, abs(table.entries[0, 3] - q1[0, 1] ** 2))
    return _worst("deviation from analytic square", dev, 1e-12, 1)


def _check_rotation_closed_form(rng, draws):
    worst = 0.0
    for _ in range(draws):
        theta = float(rng.uniform(0, 2 * math.pi))
        axis = _random_axis(rng)
        p, gabs, phase = _random_qubit_params(rng)
        params = QubitStateParams(p, gabs, phase)
        scale = float(rng.uniform(0.5, 2.0))
        h = build_hamiltonian(1, scale)
        analytic = kdq_rotation_analytic(theta, axis, params, h)
        direct = kdq_table(gates.rotation_matrix(theta, axis), qubit_state(p, gabs, phase), h)
        worst = max(worst, float(np.max(np.abs(analytic.entries - direct.entries))))
        w_analytic = work_rotation_analytic(theta, axis, params, scale)
        worst = max(worst, abs(w_analytic - extractable_work(direct)))
    return _worst("max deviation", worst, 1e-12, draws)


def _check_hadamard_evolution(rng, draws):
    worst = 0.0
    axis = gates.HADAMARD_AXIS
    h1 = build_hamiltonian(1, 1.0)
    for _ in range(draws):
        omega_t = float(rng.uniform(0, math.pi))
        p, gabs, phase = _random_qubit_params(rng)
        params = QubitStateParams(p, gabs, phase)
        scale = float(rng.uniform(0.5, 2.0))
        h = build_hamiltonian(1, scale)
        evo = kdq_hadamard_evolution(omega_t, params, h)
        direct = kdq_table(
            gates.rotation_matrix(2 * omega_t, axis), qubit_state(p, gabs, phase), h
        )
        worst = max(worst, float(np.max(np.abs(evo.entries - direct.entries))))
        totals = work_evolution_analytic(omega_t, params, scale)
        worst = max(worst, abs(totals[0] - extractable_work(direct)))
    p, gabs, phase = _random_qubit_params(rng)
    at_gate = kdq_hadamard_evolution(math.pi / 2, QubitStateParams(p, gabs, phase))
    literal = kdq_table(gates.HADAMARD, qubit_state(p, gabs, phase), h1)
    worst = max(worst, float(np.max(np.abs(at_gate.entries - literal.entries))))
    return _worst("max deviation", worst, 1e-12, draws)


# ---------------------------------------------------------------- work


def _check_component_resolution(rng, draws):
    worst = 0.0
    for _ in range(draws):
        U, rho, h = _table_draw(rng, num_qubits=2)
        table = kdq_table(U, rho, h)
        comps = work_components(table)
        worst = max(worst, abs(sum(comps.values()) - extractable_work(table)))
        re = table.entries.real
        e = h.energy_scale
        worst = max(worst, abs(comps["0-3"] - 4.0 * e * (re[3, 0] - re[0, 3])))
        norms = anomaly_norms(table)
        up = np.array(
            [
                re[0, 1],
                re[0, 2],
                2.0 * re[0, 3],
                re[1, 3],
                re[2, 3],
            ]
        )
        down = np.array(
            [
                re[1, 0],
                re[2, 0],
                2.0 * re[3, 0],
                re[3, 1],
                re[3, 2],
            ]
        )
        worst = max(worst, abs(norms.pos_up - np.linalg.norm(up[up > 0])))
        worst = max(worst, abs(norms.neg_up - np.linalg.norm(up[up < 0])))
        worst = max(worst, abs(norms.pos_down - np.linalg.norm(down[down > 0])))
        worst = max(worst, abs(norms.neg_down - np.linalg.norm(down[down < 0])))
    return _worst("max deviation", worst, 1e-12, draws)


def _check_gibbs_no_work(rng, draws):
    worst = -math.inf
    for _ in range(draws):
        num_qubits = int(rng.integers(1, 3))
        h = build_hamiltonian(num_qubits, float(rng.uniform(0.5, 2.0)))
        beta = float(rng.uniform(0.0, 5.0))
        U = _haar_unitary(rng, h.dim)
        worst = max(worst, extractable_work(kdq_table(U, thermal_state(h, beta), h)))
    return _worst("max extractable work", worst, 1e-12, draws)


def _check_qubit_work_implication(rng, draws):
    h = build_hamiltonian(1, 1.0)
    positives = 0
    for _ in range(draws):
        p, gabs, phase = _random_qubit_params(rng, p_max=0.5)
        U = _haar_unitary(rng, 2)
        split = kdq_split(U, qubit_state(p, gabs, phase), h)
        population, coherent = work_split(split)
        total = population + coherent
        if population > 1e-12:
            return False, f"population work {population:.3g} positive at p <= 1/2"
        if total > 1e-12:
            positives += 1
            if coherent < total - 1e-12:
                return False, "positive work without a dominant coherent part"
    return True, f"{positives}/{draws} draws extracted work, all coherence-driven"


def _check_jarzynski(rng, draws):
    worst = 0.0
    for _ in range(draws):
        num_qubits = int(rng.integers(1, 3))
        h = build_hamiltonian(num_qubits, float(rng.uniform(0.5, 2.0)))
        beta = float(rng.uniform(-2.0, 2.0))
        U = _haar_unitary(rng, h.dim)
        gibbs = thermal_state(h, beta)
        report = jarzynski(U, gibbs, beta, h)
        worst = max(worst, abs(report.expectation - 1.0))
        # Re-dress the Gibbs populations with a random coherence block,
        # scaled by a Weyl bound so the state stays positive.
        chi = rng.normal(size=(h.dim, h.dim)) + 1j * rng.normal(size=(h.dim, h.dim))
        chi = (chi + chi.conj().T) / 2.0
        np.fill_diagonal(chi, 0.0)
        floor = abs(hermitian_eigenvalues(chi)[0])
        min_pop = float(np.min(np.real(np.diagonal(gibbs))))
        scale = min(1.0, 0.9 * min_pop / max(floor, 1e-30))
        dressed = jarzynski(U, gibbs + scale * chi, beta, h)
        worst = max(
            worst, abs(dressed.expectation - (1.0 + dressed.gamma_correction))
        )
    return _worst("max identity deviation", worst, 1e-10, draws)


def _check_moment_identities(rng, draws):
    worst = 0.0
    for _ in range(draws):
        U, rho, h = _table_draw(rng)
        table = kdq_table(U, rho, h)
        worst = max(worst, abs(first_moment_imag_check(table)))
        heis = adjoint(U) @ h.matrix @ U
        reference = 1j * trace(commutator(heis, h.matrix) @ rho)
        if abs(reference.imag) > 1e-12:
            return False, "commutator trace is not real"
        worst = max(worst, abs(work_variance_imag(table) - reference.real))
    return _worst("max deviation", worst, 1e-12, draws)


# ---------------------------------------------------------------- circuits, deep


def _check_gap_telescoping(rng, draws):
    n = min(draws, 1000)
    worst = 0.0
    for _ in range(n):
        num_qubits = int(rng.integers(1, 3))
        depth = int(rng.integers(1, 7))
        c = _random_circuit(rng, num_qubits, depth)
        h = build_hamiltonian(num_qubits, float(rng.uniform(0.5, 2.0)))
        report = decomposition_identity(c, _random_state(rng, h.dim), h)
        worst = max(worst, report.residual_max)
        if depth == 1 and float(np.max(np.abs(report.correction))) != 0.0:
            return False, "single-gate circuit produced a nonzero correction"
    return _worst("max residual", worst, 1e-12, n)


_WORD_PATTERNS = {
    "HHH": (True, False, True),
    "HHT": (False, False, True),
    "HTH": (False, False, False),
    "HTT": (True, False, False),
    "THH": (True, False, False),
    "THT": (False, True, False),
    "TTH": (False, False, True),
    "TTT": (True, True, True),
}


def _check_commutation_words(rng, draws):
    h = build_hamiltonian(1, 1.0)
    builders = {"H": gates.h_gate, "T": gates.t_gate}
    all_fail = []
    for word, expected in _WORD_PATTERNS.items():
        c = gates.Circuit(num_qubits=1, gates=tuple(builders[ch](0) for ch in word))
        report = commutation_screen(c, h)
        got = tuple(cond.satisfied for cond in report.conditions)
        if got != expected:
            return False, f"word {word} screened as {got}, expected {expected}"
        if not report.any_satisfied:
            all_fail.append(word)
    if all_fail != ["HTH"]:
        return False, f"words failing every condition: {all_fail}"
    return True, "8/8 depth-3 words match; HTH alone fails all conditions"


def _check_factorization(rng, draws):
    n = min(draws, 1000)
    h2 = build_hamiltonian(2, 1.0)
    worst = 0.0
    for _ in range(n):
        worst = max(
            worst,
            factorization_check(
                _haar_unitary(rng, 2),
                _haar_unitary(rng, 2),
                _random_state(rng, 2),
                _random_state(rng, 2),
                h2,
            ),
        )
    return _worst("max factorization residual", worst, 1e-12, n)


def _check_classicality(rng, draws):
    n = min(draws, 2000)
    h2 = build_hamiltonian(2, 1.0)
    h1 = build_hamiltonian(1, 1.0)
    seed = int(rng.integers(0, 2**31))
    cnot = gates.gate_matrix(gates.cnot_gate(0, 1), 2)
    if not classicality_check(cnot, h2, n, seed=seed):
        return False, "controlled flip misreported as non-classical"
    if not classicality_check(gates.T_MATRIX, h1, n, seed=seed):
        return False, "diagonal phase gate misreported as non-classical"
    if classicality_check(gates.HADAMARD, h1, min(n, 50), seed=seed):
        return False, "Hadamard misreported as classical"
    return True, f"{n} draws: controlled flip and phase classical, Hadamard not"


_CHECKS = (
    ("kron_associativity", _check_kron_associativity),
    ("trace_cyclicity", _check_trace_cyclicity),
    ("adjoint_antihomomorphism", _check_adjoint_antihomomorphism),
    ("eigenvalue_solver", _check_eigenvalue_solver),
    ("thermal_beta_roundtrip", _check_thermal_beta_roundtrip),
    ("state_constructors", _check_state_constructors),
    ("dephase_split_exact", _check_dephase_split),
    ("circuit_cut_consistency", _check_circuit_cuts),
    ("dsl_roundtrip", _check_dsl_roundtrip),
    ("table_linearity", _check_table_linearity),
    ("global_phase_invariance", _check_global_phase),
    ("table_marginals", _check_marginals),
    ("anticommutator_crosscheck", _check_anticommutator_crosscheck),
    ("coherent_row_symmetry", _check_coherent_row_symmetry),
    ("split_route_agreement", _check_split_routes),
    ("product_square_value", _check_product_square),
    ("rotation_closed_form", _check_rotation_closed_form),
    ("hadamard_evolution", _check_hadamard_evolution),
    ("work_component_resolution", _check_component_resolution),
    ("gibbs_no_work", _check_gibbs_no_work),
    ("qubit_work_implication", _check_qubit_work_implication),
    ("jarzynski_identity", _check_jarzynski),
    ("moment_identities", _check_moment_identities),
    ("gap_telescoping", _check_gap_telescoping),
    ("commutation_words", _check_commutation_words),
    ("factorization_products", _check_factorization),
    ("cnot_classicality", _check_classicality),
)


def run_all(level: str = "quick", seed: int = 0) -> tuple[CheckResult, ...]:
    """Run every invariant check at the given level with seeded randomness."""
    if level not in LEVEL_DRAWS:
        raise ValueError(f"level must be one of {sorted(LEVEL_DRAWS)}, got {level!r}")
    draws = LEVEL_DRAWS[level]
    results = []
    for index, (name, fn) in enumerate(_CHECKS):
        rng = np.random.default_rng([seed, index])
        start = time.perf_counter()
        try:
            passed, detail = fn(rng, draws)
        except Exception as exc:  # a check must never take the suite down
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(
            CheckResult(
                name=name,
                passed=bool(passed),
                detail=detail,
                elapsed=time.perf_counter() - start,
            )
        )
    return tuple(results)
