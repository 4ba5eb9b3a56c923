"""Tests for work statistics, anomaly norms and fluctuation relations."""

import math

import numpy as np
import pytest

from kdqwork import (
    Circuit,
    QubitStateParams,
    ValidationError,
    anomaly_norms,
    build_hamiltonian,
    build_work_report,
    circuit_unitary,
    cnot_gate,
    extractable_work,
    first_moment_imag_check,
    h_gate,
    jarzynski,
    jarzynski_json,
    kdq_split,
    kdq_table,
    pure_state_bloch,
    qubit_state,
    rotation_matrix,
    t_gate,
    thermal_state,
    work_components,
    work_evolution_analytic,
    work_report_json,
    work_rotation_analytic,
    work_split,
    work_variance_imag,
)
from kdqwork.gates import HADAMARD, HADAMARD_AXIS

H1 = build_hamiltonian(1, 1.0)
H2 = build_hamiltonian(2, 1.0)

SQ2 = math.sqrt(2.0)


def haar_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def cnot_hh_circuit():
    return Circuit(2, (h_gate(0), h_gate(1), cnot_gate(0, 1)))


def test_extractable_work_definition():
    rng = np.random.default_rng(3)
    U = haar_unitary(rng, 4)
    rho = random_state(rng, 4)
    table = kdq_table(U, rho, H2)
    expected = sum(
        table.entries[i, f].real * (H2.eigenvalues[i] - H2.eigenvalues[f])
        for i in range(4)
        for f in range(4)
    )
    assert extractable_work(table) == pytest.approx(expected, abs=1e-12)


def test_hth_work_value():
    c = Circuit(1, (h_gate(0), t_gate(0), h_gate(0)))
    table = kdq_table(circuit_unitary(c), pure_state_bloch(math.pi / 2, math.pi / 2), H1)
    assert extractable_work(table) == pytest.approx(SQ2 / 2, abs=1e-12)


def test_worked_hadamard_case_work():
    table = kdq_table(HADAMARD, qubit_state(0.5, 0.5, math.pi), H1)
    assert extractable_work(table) == pytest.approx(1.0, abs=1e-14)


def test_work_split_closed_form_single_qubit():
    # p = 1/2 kills the population term; the coherent term is -4E Re chi_du.
    split = kdq_split(HADAMARD, qubit_state(0.5, 0.5, 0.0), H1)
    w_pop, w_coh = work_split(split)
    assert w_pop == pytest.approx(0.0, abs=1e-14)
    assert w_coh == pytest.approx(-4.0 * split.coherent[0, 1].real, abs=1e-14)
    assert w_coh == pytest.approx(-1.0, abs=1e-14)


def test_work_split_adds_up():
    rng = np.random.default_rng(5)
    U = haar_unitary(rng, 4)
    rho = random_state(rng, 4)
    split = kdq_split(U, rho, H2)
    w_pop, w_coh = work_split(split)
    assert w_pop + w_coh == pytest.approx(extractable_work(kdq_table(U, rho, H2)), abs=1e-12)


def test_population_work_sign_for_passive_qubit():
    # Majority ground population can never yield positive population work.
    rng = np.random.default_rng(7)
    for _ in range(50):
        p = rng.uniform(0.0, 0.5)
        gabs = rng.uniform(0.0, math.sqrt(p * (1 - p))) if p > 0 else 0.0
        rho = qubit_state(p, gabs, rng.uniform(-math.pi, math.pi))
        U = haar_unitary(rng, 2)
        w_pop, _ = work_split(kdq_split(U, rho, H1))
        assert w_pop <= 1e-12


def test_work_components_sum_and_keys():
    rng = np.random.default_rng(11)
    U = haar_unitary(rng, 4)
    rho = random_state(rng, 4)
    table = kdq_table(U, rho, H2)
    comps = work_components(table)
    assert set(comps) == {"0-1", "0-2", "0-3", "1-3", "2-3"}
    assert sum(comps.values()) == pytest.approx(extractable_work(table), abs=1e-12)


def test_work_components_frozen_values_phi_zero():
    # CNOT(H x H) on the theta=pi/2, phi=0 product ket.
    U = circuit_unitary(cnot_hh_circuit())
    psi = pure_state_bloch(math.pi / 2, 0.0)
    table = kdq_table(U, np.kron(psi, psi), H2)
    comps = work_components(table)
    assert extractable_work(table) == pytest.approx(-2.0, abs=1e-12)
    assert comps["0-3"] == pytest.approx(-1.0, abs=1e-12)
    assert comps["1-3"] == pytest.approx(-0.5, abs=1e-12)
    assert comps["2-3"] == pytest.approx(-0.5, abs=1e-12)
    assert comps["0-1"] == pytest.approx(0.0, abs=1e-12)
    assert comps["0-2"] == pytest.approx(0.0, abs=1e-12)


def test_work_components_frozen_values_at_maximum():
    # phi = 2*pi/3 is the positive-work maximum: W = E/4, dominated by 0-3.
    U = circuit_unitary(cnot_hh_circuit())
    psi = pure_state_bloch(math.pi / 2, 2 * math.pi / 3)
    table = kdq_table(U, np.kron(psi, psi), H2)
    comps = work_components(table)
    assert extractable_work(table) == pytest.approx(0.25, abs=1e-12)
    assert comps["0-3"] == pytest.approx(0.5, abs=1e-12)
    assert comps["0-1"] == pytest.approx(-0.1875, abs=1e-12)
    assert comps["0-2"] == pytest.approx(-0.1875, abs=1e-12)
    assert comps["1-3"] == pytest.approx(0.0625, abs=1e-12)
    assert comps["2-3"] == pytest.approx(0.0625, abs=1e-12)


def test_anomaly_norms_frozen_and_rebuilt():
    U = circuit_unitary(cnot_hh_circuit())
    psi = pure_state_bloch(math.pi / 2, 0.0)
    table = kdq_table(U, np.kron(psi, psi), H2)
    norms = anomaly_norms(table)
    assert norms.pos_up == pytest.approx(math.sqrt(6) / 4, abs=1e-12)
    assert norms.neg_up == pytest.approx(0.0, abs=1e-12)
    assert norms.pos_down == pytest.approx(0.0, abs=1e-12)
    assert norms.neg_down == pytest.approx(0.0, abs=1e-12)
    # Rebuild from the raised/lowered MHQ vectors by hand.
    re = table.entries.real
    up = np.array([re[0, 1], re[0, 2], 2 * re[0, 3], re[1, 3], re[2, 3]])
    down = np.array([re[1, 0], re[2, 0], 2 * re[3, 0], re[3, 1], re[3, 2]])
    assert norms.pos_up == pytest.approx(np.linalg.norm(up[up > 0]), abs=1e-12)
    assert norms.neg_up == pytest.approx(np.linalg.norm(up[up < 0]), abs=1e-12)
    assert norms.pos_down == pytest.approx(np.linalg.norm(down[down > 0]), abs=1e-12)
    assert norms.neg_down == pytest.approx(np.linalg.norm(down[down < 0]), abs=1e-12)


def test_anomaly_norms_requires_two_qubits():
    table = kdq_table(HADAMARD, qubit_state(0.5, 0.0, 0.0), H1)
    with pytest.raises(ValueError):
        anomaly_norms(table)


def test_build_work_report_shapes():
    rng = np.random.default_rng(13)
    rep1 = build_work_report(haar_unitary(rng, 2), random_state(rng, 2), H1)
    assert set(rep1.components) == {"0-1"}
    assert rep1.norms is None
    assert rep1.total == pytest.approx(rep1.population + rep1.coherent, abs=1e-12)
    rep2 = build_work_report(haar_unitary(rng, 4), random_state(rng, 4), H2)
    assert rep2.norms is not None
    payload = work_report_json(rep2)
    assert set(payload) == {"total", "population", "coherent", "components", "norms"}
    assert set(payload["norms"]) == {"pos_up", "neg_up", "pos_down", "neg_down"}
    payload1 = work_report_json(rep1)
    assert payload1["norms"] is None


def test_jarzynski_gibbs_is_unity():
    for beta in (0.2, 1.0, 3.0, -0.5):
        rho = thermal_state(H2, beta)
        rng = np.random.default_rng(17)
        rep = jarzynski(haar_unitary(rng, 4), rho, beta, H2)
        assert rep.expectation.real == pytest.approx(1.0, abs=1e-12)
        assert rep.expectation.imag == pytest.approx(0.0, abs=1e-12)
        assert abs(rep.gamma_correction) == pytest.approx(0.0, abs=1e-12)


def test_jarzynski_definition_matches_direct_sum():
    beta = 0.8
    rho = thermal_state(H1, beta)
    rng = np.random.default_rng(19)
    U = haar_unitary(rng, 2)
    table = kdq_table(U, rho, H1)
    direct = sum(
        table.entries[i, f] * np.exp(-beta * (H1.eigenvalues[f] - H1.eigenvalues[i]))
        for i in range(2)
        for f in range(2)
    )
    rep = jarzynski(U, rho, beta, H1)
    assert rep.expectation == pytest.approx(direct, abs=1e-13)


def test_jarzynski_rejects_nonthermal_populations():
    rho = qubit_state(0.3, 0.2, 0.4)
    with pytest.raises(ValidationError):
        jarzynski(HADAMARD, rho, 1.0, H1)
    # With the override the raw sums are still computed.
    rep = jarzynski(HADAMARD, rho, 1.0, H1, allow_nonthermal=True)
    assert np.isfinite(rep.expectation.real)


def test_jarzynski_coherence_correction_closes_budget():
    # Gibbs populations with injected coherence: <e^{-beta W}> = 1 + Gamma.
    beta = 1.0
    p_up = math.exp(-beta) / (2 * math.cosh(beta))
    rho = qubit_state(p_up, 0.6 * math.sqrt(p_up * (1 - p_up)), 0.8)
    rep = jarzynski(HADAMARD, rho, beta, H1)
    assert rep.expectation == pytest.approx(1.0 + rep.gamma_correction, abs=1e-12)
    assert abs(rep.gamma_correction) > 1e-3


def test_jarzynski_rejects_nonfinite_beta():
    rho = thermal_state(H1, 1.0)
    with pytest.raises(ValueError):
        jarzynski(HADAMARD, rho, math.inf, H1)


def test_first_moment_imag_vanishes():
    rng = np.random.default_rng(23)
    for _ in range(20):
        table = kdq_table(haar_unitary(rng, 4), random_state(rng, 4), H2)
        assert abs(first_moment_imag_check(table)) <= 1e-12


def test_work_variance_imag_matches_commutator_route():
    rng = np.random.default_rng(29)
    hmat = H2.matrix
    for _ in range(20):
        U = haar_unitary(rng, 4)
        rho = random_state(rng, 4)
        table = kdq_table(U, rho, H2)
        hh = U.conj().T @ hmat @ U
        expected = np.real(1j * np.trace((hh @ hmat - hmat @ hh) @ rho))
        assert work_variance_imag(table) == pytest.approx(expected, abs=1e-11)


def test_rotation_work_closed_form():
    rng = np.random.default_rng(31)
    for _ in range(20):
        theta = rng.uniform(-2 * math.pi, 2 * math.pi)
        v = rng.standard_normal(3)
        axis = tuple(v / np.linalg.norm(v))
        p = rng.uniform(0.05, 0.95)
        gabs = rng.uniform(0.0, math.sqrt(p * (1 - p)))
        phase = rng.uniform(-math.pi, math.pi)
        params = QubitStateParams(p, gabs, phase)
        w_closed = work_rotation_analytic(theta, axis, params, energy_scale=1.0)
        table = kdq_table(rotation_matrix(theta, axis), qubit_state(p, gabs, phase), H1)
        assert w_closed == pytest.approx(extractable_work(table), abs=1e-12)


def test_evolution_work_split_closed_form():
    params = QubitStateParams(0.3, 0.35, 1.1)
    rho = qubit_state(0.3, 0.35, 1.1)
    for omega_t in (0.0, 0.4, math.pi / 4, 1.3, math.pi / 2):
        total, w_pop, w_coh = work_evolution_analytic(omega_t, params, energy_scale=1.0)
        assert w_pop == pytest.approx((2 * 0.3 - 1) * math.sin(omega_t) ** 2, abs=1e-13)
        assert total == pytest.approx(w_pop + w_coh, abs=1e-13)
        U = rotation_matrix(2 * omega_t, HADAMARD_AXIS)
        split = kdq_split(U, rho, H1)
        ref_pop, ref_coh = work_split(split)
        assert w_pop == pytest.approx(ref_pop, abs=1e-12)
        assert w_coh == pytest.approx(ref_coh, abs=1e-12)


def test_jarzynski_json_shape():
    rho = thermal_state(H1, 0.3)
    rep = jarzynski(HADAMARD, rho, 0.3, H1)
    payload = jarzynski_json(rep)
    assert set(payload) == {"beta", "expectation", "gamma_correction"}
    assert set(payload["expectation"]) == {"re", "im"}
    assert payload["expectation"]["re"] == pytest.approx(1.0, abs=1e-12)
