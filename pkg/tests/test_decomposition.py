"""Tests for the per-gate decomposition, commutation screen and
factorization/classicality checks."""

import math

import numpy as np
import pytest

from kdqwork import (
    Circuit,
    build_hamiltonian,
    circuit_unitary,
    classicality_check,
    cnot_gate,
    commutation_screen,
    decomposition_identity,
    decomposition_json,
    factorization_check,
    h_gate,
    kdq_gap,
    kdq_table,
    m_operator,
    p_gate,
    prefix_unitary,
    pure_state_bloch,
    qubit_state,
    r_gate,
    t_gate,
)
from kdqwork.gates import HADAMARD, T_MATRIX, phase_matrix, rotation_matrix

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


def word_circuit(word):
    table = {"H": h_gate, "T": t_gate}
    return Circuit(1, tuple(table[ch](0) for ch in word))


def test_m_operator_single_gate_is_zero():
    c = Circuit(1, (h_gate(0),))
    np.testing.assert_allclose(m_operator(c, 0, 0, 1, H1), np.zeros((2, 2)), atol=0)


def test_m_operator_range_checks():
    c = word_circuit("HTH")
    with pytest.raises(ValueError):
        m_operator(c, 3, 0, 1, H1)
    with pytest.raises(ValueError):
        m_operator(c, 0, 0, 2, H1)


def test_m_operator_trace_reproduces_gap():
    # Tr[M_j rho] must equal q_full - q_constituent for every slot j.
    rng = np.random.default_rng(3)
    c = word_circuit("HTH")
    rho = random_state(rng, 2)
    full = kdq_table(circuit_unitary(c), rho, H1)
    for j in range(3):
        pre = prefix_unitary(c, j)
        rho_j = pre @ rho @ pre.conj().T
        gate_u = prefix_unitary(c, j + 1) @ pre.conj().T
        const = kdq_table(gate_u, rho_j, H1)
        for i in range(2):
            for f in range(2):
                gap = np.trace(m_operator(c, j, i, f, H1) @ rho)
                assert full.entries[i, f] - const.entries[i, f] == pytest.approx(
                    gap, abs=1e-12
                )


def test_kdq_gap_report_consistency():
    rng = np.random.default_rng(5)
    c = Circuit(2, (h_gate(0), cnot_gate(0, 1), t_gate(1)))
    rho = random_state(rng, 4)
    full = kdq_table(circuit_unitary(c), rho, H2)
    for j in range(3):
        rep = kdq_gap(c, j, rho, H2)
        assert rep.gate_index == j
        np.testing.assert_allclose(
            rep.constituent.entries + rep.gap, full.entries, atol=1e-12
        )


def test_decomposition_identity_reconstructs_full_table():
    rng = np.random.default_rng(7)
    c = Circuit(2, (h_gate(1), cnot_gate(1, 0), t_gate(0), h_gate(0)))
    rho = random_state(rng, 4)
    rep = decomposition_identity(c, rho, H2)
    n = len(c.gates)
    total = sum(g.constituent.entries for g in rep.per_gate) + rep.correction
    np.testing.assert_allclose(total / n, rep.full.entries, atol=1e-12)
    assert rep.residual_max <= 1e-12


def test_decomposition_single_gate_has_zero_correction():
    rng = np.random.default_rng(9)
    c = Circuit(1, (h_gate(0),))
    rep = decomposition_identity(c, random_state(rng, 2), H1)
    np.testing.assert_allclose(rep.correction, np.zeros((2, 2)), atol=0)


def test_hth_per_gate_walk_frozen_values():
    # Constituent MHQ walk on the equatorial Bloch state. The (d -> u)
    # series ends at (2-sqrt2)/8 while the (u -> d) series ends at
    # (2+sqrt2)/8; together with the shared 1/4 and 0 these are the four
    # intermediate values of the three-gate walk.
    rho = pure_state_bloch(math.pi / 2, math.pi / 2)
    rep = decomposition_identity(word_circuit("HTH"), rho, H1)
    walk_du = [g.constituent.entries[0, 1].real for g in rep.per_gate]
    walk_ud = [g.constituent.entries[1, 0].real for g in rep.per_gate]
    np.testing.assert_allclose(walk_du, [0.25, 0.0, (2 - SQ2) / 8], atol=1e-12)
    np.testing.assert_allclose(walk_ud, [0.25, 0.0, (2 + SQ2) / 8], atol=1e-12)
    assert rep.full.entries[0, 1].real == pytest.approx((1 - SQ2) / 4, abs=1e-12)
    assert rep.full.entries[1, 0].real == pytest.approx(0.25, abs=1e-12)


def test_commutation_screen_depth_three_patterns():
    # Expected (final_with_last_two, final_with_last_and_initial_with_first,
    # initial_with_first_two) per word, letters applied first to last.
    expected = {
        "HHH": (True, False, True),
        "HHT": (False, False, True),
        "HTH": (False, False, False),
        "HTT": (True, False, False),
        "THH": (True, False, False),
        "THT": (False, True, False),
        "TTH": (False, False, True),
        "TTT": (True, True, True),
    }
    for word, flags in expected.items():
        rep = commutation_screen(word_circuit(word), H1)
        assert tuple(c.satisfied for c in rep.conditions) == flags, word
        assert rep.any_satisfied == any(flags)
    # HTH alone fails every condition.
    all_fail = [w for w, flags in expected.items() if not any(flags)]
    assert all_fail == ["HTH"]


def test_commutation_screen_depth_two():
    rep_ht = commutation_screen(word_circuit("HT"), H1)
    names = [c.name for c in rep_ht.conditions]
    assert names == ["final_with_last", "initial_with_first"]
    assert [c.satisfied for c in rep_ht.conditions] == [True, False]
    rep_th = commutation_screen(word_circuit("TH"), H1)
    assert [c.satisfied for c in rep_th.conditions] == [False, True]


def test_commutation_screen_rejects_other_depths():
    with pytest.raises(ValueError):
        commutation_screen(word_circuit("H"), H1)
    with pytest.raises(ValueError):
        commutation_screen(word_circuit("HTHT"), H1)


def test_factorization_exact_for_products():
    rng = np.random.default_rng(11)
    for _ in range(20):
        U = haar_unitary(rng, 2)
        V = haar_unitary(rng, 2)
        sigma = random_state(rng, 2)
        tau = random_state(rng, 2)
        assert factorization_check(U, V, sigma, tau, H2) <= 1e-12


def test_factorization_detects_entangled_deviation():
    # A Bell state is not a product, so comparing the joint table built
    # from it against the factored product must show a large deviation.
    bell = np.zeros((4, 4), dtype=complex)
    for a in (0, 3):
        for b in (0, 3):
            bell[a, b] = 0.5
    U = HADAMARD
    V = HADAMARD
    joint = kdq_table(np.kron(U, V), bell, H2)
    sigma = np.diag([0.5, 0.5]).astype(complex)
    left = kdq_table(U, sigma, H1).entries
    right = kdq_table(V, sigma, H1).entries
    product = np.einsum("ac,bd->abcd", left, right).reshape(4, 4)
    assert np.max(np.abs(joint.entries - product)) > 0.1


def test_phase_gate_factor_zero_pattern():
    # H (x) P: the phase factor is diagonal, so any entry that changes the
    # second qubit's eigenstate vanishes identically.
    rng = np.random.default_rng(13)
    sigma = random_state(rng, 2)
    tau = random_state(rng, 2)
    U2 = np.kron(HADAMARD, phase_matrix(0.77))
    table = kdq_table(U2, np.kron(sigma, tau), H2)
    for ai in range(2):
        for bi in range(2):
            for af in range(2):
                for bf in range(2):
                    if bi != bf:
                        k_i, k_f = 2 * ai + bi, 2 * af + bf
                        assert table.entries[k_i, k_f] == 0.0


def test_classicality_check_outcomes():
    cnot = circuit_unitary(Circuit(2, (cnot_gate(0, 1),)))
    assert classicality_check(cnot, H2, 100)
    hh = np.kron(HADAMARD, np.eye(2))
    assert not classicality_check(hh, H2, 100)
    tt = np.kron(T_MATRIX, T_MATRIX)
    assert classicality_check(tt, H2, 100)


def test_decomposition_json_shape():
    rng = np.random.default_rng(17)
    rep = decomposition_identity(word_circuit("HTH"), random_state(rng, 2), H1)
    payload = decomposition_json(rep)
    assert set(payload) == {"full", "per_gate", "correction", "residual_max"}
    assert len(payload["per_gate"]) == 3
    item = payload["per_gate"][1]
    assert set(item) == {"j", "table", "gap"}
    assert item["j"] == 1
    assert set(item["table"]) == {"dim", "entries", "row_marginals", "col_marginals"}
    assert payload["residual_max"] <= 1e-12


def test_decomposition_with_rotation_and_phase_gates():
    rng = np.random.default_rng(19)
    c = Circuit(
        2,
        (
            r_gate(0, 1.2, (0.6, 0.0, 0.8)),
            p_gate(1, 0.4),
            cnot_gate(1, 0),
            h_gate(1),
            t_gate(0),
        ),
    )
    rep = decomposition_identity(c, random_state(rng, 4), H2)
    assert rep.residual_max <= 1e-12
