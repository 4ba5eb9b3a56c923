"""Tests for the gate library, circuit composition and the circuit DSL."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdqwork import (
    Circuit,
    CircuitSyntaxError,
    ValidationError,
    circuit_unitary,
    cnot_gate,
    custom_gate,
    gate_matrix,
    h_gate,
    p_gate,
    parse_circuit,
    prefix_unitary,
    r_gate,
    rotation_matrix,
    serialize_circuit,
    substitute_placeholders,
    suffix_unitary,
    t_gate,
)
from kdqwork.dsl import complex_token, placeholder_names
from kdqwork.gates import HADAMARD, HADAMARD_AXIS, SIGMA_X, SIGMA_Z, T_MATRIX, phase_matrix

A = np.exp(1j * math.pi / 4)


def test_stored_gate_literals():
    np.testing.assert_allclose(
        HADAMARD, np.array([[-1.0, 1.0], [1.0, 1.0]]) / math.sqrt(2.0), atol=1e-15
    )
    np.testing.assert_allclose(T_MATRIX, np.diag([A, 1.0]), atol=1e-15)
    np.testing.assert_allclose(phase_matrix(0.9), np.diag([np.exp(0.9j), 1.0]), atol=1e-15)
    np.testing.assert_allclose(phase_matrix(math.pi / 4), T_MATRIX, atol=1e-15)


def test_basis_flip_recovers_textbook_hadamard():
    # Conjugating by the bit flip maps the ground-first storage convention
    # to the usual excited-first textbook matrices.
    flipped = SIGMA_X @ HADAMARD @ SIGMA_X
    np.testing.assert_allclose(
        flipped, np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0), atol=1e-15
    )
    np.testing.assert_allclose(SIGMA_X @ SIGMA_Z @ SIGMA_X, np.diag([1.0, -1.0]), atol=0)


def test_hadamard_squares_to_identity():
    np.testing.assert_allclose(HADAMARD @ HADAMARD, np.eye(2), atol=1e-15)


def test_rotation_matrix_special_angles():
    np.testing.assert_allclose(rotation_matrix(0.0, (0.0, 0.0, 1.0)), np.eye(2), atol=0)
    np.testing.assert_allclose(rotation_matrix(math.pi, (1.0, 0.0, 0.0)), -1j * SIGMA_X, atol=1e-15)
    np.testing.assert_allclose(
        rotation_matrix(2 * math.pi, (0.0, 1.0, 0.0)), -np.eye(2), atol=1e-15
    )
    # A half turn about the diagonal axis is the Hadamard up to phase -i.
    np.testing.assert_allclose(rotation_matrix(math.pi, HADAMARD_AXIS), -1j * HADAMARD, atol=1e-15)


def test_rotation_composes_along_fixed_axis():
    axis = (0.6, 0.0, 0.8)
    r1 = rotation_matrix(0.7, axis)
    r2 = rotation_matrix(1.1, axis)
    np.testing.assert_allclose(r1 @ r2, rotation_matrix(1.8, axis), atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(min_value=-10.0, max_value=10.0),
    st.floats(min_value=-1.0, max_value=1.0),
    st.floats(min_value=-1.0, max_value=1.0),
)
def test_rotation_matrix_is_unitary(theta, nx, nz):
    norm = math.sqrt(nx * nx + 0.25 + nz * nz)
    r = rotation_matrix(theta, (nx / norm, 0.5 / norm, nz / norm))
    np.testing.assert_allclose(r @ r.conj().T, np.eye(2), atol=1e-12)


def test_r_gate_normalizes_axis_with_warning():
    with pytest.warns(UserWarning, match="normalizing"):
        g = r_gate(0, 1.0, (2.0, 0.0, 0.0))
    np.testing.assert_allclose(gate_matrix(g, 1), rotation_matrix(1.0, (1.0, 0.0, 0.0)), atol=1e-15)
    with pytest.raises(ValueError):
        r_gate(0, 1.0, (0.0, 0.0, 0.0))


def test_cnot_matrix_flips_target_on_ground_control():
    c = Circuit(2, (cnot_gate(0, 1),))
    expected = np.array(
        [
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )
    np.testing.assert_allclose(circuit_unitary(c), expected, atol=0)


def test_cnot_reversed_roles():
    c = Circuit(2, (cnot_gate(1, 0),))
    expected = np.zeros((4, 4), dtype=complex)
    expected[2, 0] = expected[0, 2] = 1.0
    expected[1, 1] = expected[3, 3] = 1.0
    np.testing.assert_allclose(circuit_unitary(c), expected, atol=0)


def test_cnot_rejects_equal_control_target():
    with pytest.raises(ValueError):
        cnot_gate(1, 1)


def test_gate_matrix_embedding():
    np.testing.assert_allclose(gate_matrix(h_gate(0), 2), np.kron(HADAMARD, np.eye(2)), atol=0)
    np.testing.assert_allclose(gate_matrix(h_gate(1), 2), np.kron(np.eye(2), HADAMARD), atol=0)
    np.testing.assert_allclose(
        gate_matrix(t_gate(2), 3), np.kron(np.eye(4), T_MATRIX), atol=0
    )


def test_gate_matrix_range_check():
    with pytest.raises(ValueError):
        gate_matrix(h_gate(2), 2)


def test_custom_gate_validation():
    with pytest.raises(ValidationError):
        custom_gate(np.array([[1.0, 1.0], [0.0, 1.0]]), (0,))
    with pytest.raises(ValueError):
        custom_gate(np.eye(4), (0,))  # size does not match one target
    g = custom_gate(T_MATRIX, (0,))
    np.testing.assert_allclose(gate_matrix(g, 1), T_MATRIX, atol=0)


def test_circuit_unitary_hth_literal():
    c = Circuit(1, (h_gate(0), t_gate(0), h_gate(0)))
    expected = 0.5 * np.array([[1 + A, 1 - A], [1 - A, 1 + A]])
    np.testing.assert_allclose(circuit_unitary(c), expected, atol=1e-15)


def test_gate_order_is_file_order():
    # First gate listed acts first, so the unitary is the reversed product.
    c = Circuit(1, (h_gate(0), t_gate(0)))
    np.testing.assert_allclose(circuit_unitary(c), T_MATRIX @ HADAMARD, atol=0)


def test_prefix_suffix_partition():
    c = Circuit(1, (h_gate(0), t_gate(0), h_gate(0)))
    full = circuit_unitary(c)
    for j in range(4):
        pre = prefix_unitary(c, j)
        suf = suffix_unitary(c, j)
        np.testing.assert_allclose(suf @ pre, full, atol=1e-14)
    np.testing.assert_allclose(prefix_unitary(c, 0), np.eye(2), atol=0)
    np.testing.assert_allclose(prefix_unitary(c, 2), T_MATRIX @ HADAMARD, atol=0)


def test_circuit_rejects_out_of_range_target():
    with pytest.raises(ValueError):
        Circuit(1, (h_gate(1),))


# ---------------------------------------------------------------------------
# DSL


FULL_TEXT = """\
# exercise every statement kind
qubits 2
E 0.5
state product pure_bloch 0.4 1.0 ; qubit 0.3 0.2 -0.5
gate H 0
gate T 1
gate P 0 0.25
gate CNOT 0 1
gate R 1 1.5707963267948966 0.7071067811865476 0.0 0.7071067811865476
gate U 0 0.0+0.0i 1.0+0.0i 1.0+0.0i 0.0+0.0i
"""


def test_parse_full_file():
    cf = parse_circuit(FULL_TEXT)
    assert cf.hamiltonian.num_qubits == 2
    assert cf.hamiltonian.energy_scale == 0.5
    assert [g.kind for g in cf.circuit.gates] == ["H", "T", "P", "CNOT", "R", "U"]
    assert cf.state is not None
    assert np.trace(cf.state).real == pytest.approx(1.0)


def test_serialize_is_a_fixed_point():
    cf = parse_circuit(FULL_TEXT)
    text = serialize_circuit(cf)
    cf2 = parse_circuit(text)
    assert serialize_circuit(cf2) == text
    np.testing.assert_allclose(circuit_unitary(cf2.circuit), circuit_unitary(cf.circuit), atol=0)
    np.testing.assert_allclose(cf2.state, cf.state, atol=0)


def test_parse_state_kinds():
    for spec in (
        "state pure_bloch 0.7 0.2",
        "state pure_pop 0.3 1.0",
        "state qubit 0.4 0.1 0.0",
        "state thermal 1.5",
        "state matrix 0.5+0.0i 0.0+0.0i 0.0+0.0i 0.5+0.0i",
    ):
        cf = parse_circuit(f"qubits 1\n{spec}\ngate H 0\n")
        assert np.trace(cf.state).real == pytest.approx(1.0)


def test_parse_errors_carry_line_numbers():
    cases = [
        ("qubits 1\ngate Q 0\n", 2, "unknown gate"),
        ("qubits 1\nqubits 2\n", 2, "duplicate"),
        ("gate H 0\nqubits 1\n", 1, "qubits"),
        ("qubits 1\ngate H 5\n", 2, "range"),
        ("qubits 1\ngate CNOT 0 0\n", 2, None),
        ("qubits 1\nstate qubit 0.5\n", 2, "usage"),
        ("qubits 1\nbogus 3\n", 2, None),
        ("qubits 1\nstate matrix 1.0+0.0i\n", 2, None),
    ]
    for text, lineno, fragment in cases:
        with pytest.raises(CircuitSyntaxError) as err:
            parse_circuit(text)
        assert err.value.line == lineno
        if fragment is not None:
            assert fragment in str(err.value)


def test_parse_invalid_physics_is_validation_error():
    # Well-formed syntax, physically impossible content.
    with pytest.raises(ValidationError):
        parse_circuit("qubits 1\nstate qubit 0.5 0.9 0.0\ngate H 0\n")
    with pytest.raises(ValidationError):
        parse_circuit("qubits 1\ngate U 0 1.0+0.0i 1.0+0.0i 0.0+0.0i 1.0+0.0i\n")


def test_complex_token_round_trip():
    assert complex_token(1 + 2j) == "1.0+2.0i"
    assert complex_token(complex(0.0, -0.5)) == "0.0-0.5i"
    z = 0.2 + 0.1j
    text = f"qubits 1\ngate P 0 0.0\nstate matrix 0.9+0.0i {complex_token(np.conj(z))} {complex_token(z)} 0.1+0.0i\n"
    cf = parse_circuit(text)
    assert cf.state[1, 0] == z


def test_placeholder_substitution():
    text = "qubits 1\nstate qubit $p 0.0 0.0\ngate P 0 $phi\n"
    assert placeholder_names(text) == {"p", "phi"}
    filled = substitute_placeholders(text, {"p": 0.25, "phi": 1.5})
    cf = parse_circuit(filled)
    assert cf.state[1, 1].real == pytest.approx(0.25)
    assert cf.circuit.gates[0].params[0] == pytest.approx(1.5)


def test_placeholder_missing_value_reports_line():
    text = "qubits 1\nstate qubit $p 0.0 $phi\n"
    with pytest.raises(CircuitSyntaxError) as err:
        substitute_placeholders(text, {"p": 0.25})
    assert err.value.line == 2
    assert "phi" in str(err.value)


def test_placeholder_second_on_line_is_found():
    # Both placeholders live on one line; providing the first must not
    # hide the second from the missing-value scan.
    text = "qubits 1\nstate qubit $p 0.1 $phi\ngate H 0\n"
    out = substitute_placeholders(text, {"p": 0.5, "phi": 0.75})
    assert "$" not in out
    parse_circuit(out)
