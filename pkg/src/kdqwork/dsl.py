"""Line-oriented circuit description language.

A circuit file looks like::

    # one qubit, natural units
    qubits 1
    E 1.0
    state qubit 0.5 0.5 3.14159265
    gate H 0

Grammar (one statement per line, ``#`` starts a comment):

    qubits <L>
    E <real>                                  (optional, default 1.0)
    state pure_bloch <theta> <phi>
    state pure_pop <p> <phi>
    state qubit <p> <|gamma|> <phi>
    state thermal <beta>
    state product <sub> ; <sub> [; <sub> ...]
    state matrix <d*d complex entries>
    gate H <q> | gate T <q> | gate P <q> <phi>
    gate CNOT <ctrl> <tgt>
    gate R <q> <theta> <nx> <ny> <nz>
    gate U <q...> <row-major complex entries a+bi>

Gates are applied in file order (the first gate line acts first). The
``qubits`` line must precede any line whose meaning depends on the register
size. Structural problems (unknown statements, bad arity, malformed numbers,
out-of-range qubit indices, control equal to target) raise
:class:`CircuitSyntaxError`; physically invalid content in a well-formed file
(a state violating positivity, a non-unitary custom gate) raises
:class:`~kdqwork.system.ValidationError`. Both carry the offending line
number.

Files may contain ``$name`` placeholders; :func:`substitute_placeholders`
fills them in before parsing and complains about names with no value.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import gates, system
from .system import Hamiltonian, ValidationError

_PLACEHOLDER = re.compile(r"\$([A-Za-z_][A-Za-z_0-9]*)")

_GATE_USAGE = {
    "H": "gate H <qubit>",
    "T": "gate T <qubit>",
    "P": "gate P <qubit> <phi>",
    "CNOT": "gate CNOT <control> <target>",
    "R": "gate R <qubit> <theta> <nx> <ny> <nz>",
    "U": "gate U <qubit...> <row-major complex entries a+bi>",
}

_PRODUCT_HEADS = ("pure_bloch", "pure_pop", "qubit", "matrix")


class CircuitSyntaxError(ValueError):
    """Malformed circuit text; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class CircuitFile:
    """Parsed circuit file: the circuit, its Hamiltonian and optional state."""

    circuit: gates.Circuit
    hamiltonian: Hamiltonian
    state: np.ndarray | None
    state_spec: str | None


def placeholder_names(text: str) -> set[str]:
    """Names of all ``$name`` placeholders appearing in the text."""
    return {m.group(1) for m in _PLACEHOLDER.finditer(text)}


def substitute_placeholders(text: str, values: dict[str, object]) -> str:
    """Replace every ``$name`` with its value; missing names are an error."""
    missing = sorted({m.group(1) for m in _PLACEHOLDER.finditer(text)} - set(values))
    if missing:
        for lineno, line in enumerate(text.splitlines(), start=1):
            for hit in _PLACEHOLDER.finditer(line):
                if hit.group(1) in missing:
                    raise CircuitSyntaxError(
                        lineno, f"placeholder ${hit.group(1)} has no value"
                    )
        raise CircuitSyntaxError(1, f"placeholders with no value: {missing}")

    def fill(match: re.Match) -> str:
        value = values[match.group(1)]
        return repr(float(value)) if isinstance(value, (int, float)) else str(value)

    return _PLACEHOLDER.sub(fill, text)


def parse_circuit(text: str) -> CircuitFile:
    """Parse circuit text into its model; see the module docstring for errors."""
    num_qubits: int | None = None
    qubits_line = 0
    energy = 1.0
    energy_seen = False
    state_tokens: list[str] | None = None
    state_line = 0
    gate_list: list[gates.Gate] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        hit = _PLACEHOLDER.search(line)
        if hit:
            raise CircuitSyntaxError(
                lineno, f"placeholder ${hit.group(1)} was never substituted"
            )
        tokens = line.split()
        head, rest = tokens[0], tokens[1:]
        if head == "qubits":
            if num_qubits is not None:
                raise CircuitSyntaxError(
                    lineno, f"duplicate qubits line (first one at line {qubits_line})"
                )
            if len(rest) != 1:
                raise CircuitSyntaxError(lineno, "usage: qubits <L>")
            num_qubits = _parse_int(rest[0], lineno, "qubit count")
            qubits_line = lineno
            if num_qubits < 1:
                raise CircuitSyntaxError(lineno, f"qubit count must be positive, got {num_qubits}")
        elif head == "E":
            if energy_seen:
                raise CircuitSyntaxError(lineno, "duplicate E line")
            if len(rest) != 1:
                raise CircuitSyntaxError(lineno, "usage: E <real>")
            energy = _parse_real(rest[0], lineno, "energy scale")
            energy_seen = True
        elif head == "state":
            if state_tokens is not None:
                raise CircuitSyntaxError(
                    lineno, f"duplicate state line (first one at line {state_line})"
                )
            if not rest:
                raise CircuitSyntaxError(lineno, "usage: state <spec>")
            state_tokens = rest
            state_line = lineno
        elif head == "gate":
            if num_qubits is None:
                raise CircuitSyntaxError(lineno, "gate line before the qubits line")
            if not rest:
                raise CircuitSyntaxError(
                    lineno, "usage: gate <H|T|P|CNOT|R|U> <arguments>"
                )
            gate_list.append(_parse_gate(rest[0], rest[1:], num_qubits, lineno))
        else:
            raise CircuitSyntaxError(
                lineno,
                f"unknown statement {head!r}; expected qubits, E, state or gate",
            )

    if num_qubits is None:
        raise CircuitSyntaxError(1, "missing qubits line")
    try:
        h = system.build_hamiltonian(num_qubits, energy)
    except ValueError as exc:
        raise ValidationError(f"line {qubits_line}: {exc}") from exc
    state = None
    spec_text = None
    if state_tokens is not None:
        spec_text = " ".join(state_tokens)
        state = _build_state(state_tokens, h, state_line)
    circuit = gates.Circuit(num_qubits=num_qubits, gates=tuple(gate_list))
    return CircuitFile(circuit=circuit, hamiltonian=h, state=state, state_spec=spec_text)


def serialize_circuit(model: CircuitFile) -> str:
    """Render a parsed model back to circuit text (a parse fixed point)."""
    lines = [f"qubits {model.circuit.num_qubits}", f"E {model.hamiltonian.energy_scale!r}"]
    if model.state_spec is not None:
        lines.append(f"state {model.state_spec}")
    for g in model.circuit.gates:
        lines.append(_gate_line(g))
    return "\n".join(lines) + "\n"


def _gate_line(g: gates.Gate) -> str:
    if g.kind in ("H", "T"):
        return f"gate {g.kind} {g.targets[0]}"
    if g.kind == "P":
        return f"gate P {g.targets[0]} {g.params[0]!r}"
    if g.kind == "CNOT":
        return f"gate CNOT {g.targets[0]} {g.targets[1]}"
    if g.kind == "R":
        theta, nx, ny, nz = g.params
        return f"gate R {g.targets[0]} {theta!r} {nx!r} {ny!r} {nz!r}"
    if g.kind == "U":
        entries = " ".join(complex_token(z) for z in g.matrix.reshape(-1))
        targets = " ".join(str(t) for t in g.targets)
        return f"gate U {targets} {entries}"
    raise ValueError(f"cannot serialize gate kind {g.kind!r}")


def complex_token(z: complex) -> str:
    """Format a complex number as ``a+bi`` with exact float round-trip."""
    re_part, im_part = float(z.real), float(z.imag)
    sign = "+" if im_part >= 0 else "-"
    return f"{re_part!r}{sign}{abs(im_part)!r}i"


def _parse_gate(name: str, args: list[str], num_qubits: int, lineno: int) -> gates.Gate:
    usage = _GATE_USAGE.get(name)
    if usage is None:
        raise CircuitSyntaxError(
            lineno, f"unknown gate {name!r}; expected one of {sorted(_GATE_USAGE)}"
        )
    try:
        if name in ("H", "T"):
            _arity(args, 1, usage, lineno)
            q = _parse_qubit(args[0], num_qubits, lineno)
            built = gates.h_gate(q) if name == "H" else gates.t_gate(q)
        elif name == "P":
            _arity(args, 2, usage, lineno)
            built = gates.p_gate(
                _parse_qubit(args[0], num_qubits, lineno),
                _parse_real(args[1], lineno, "phase"),
            )
        elif name == "CNOT":
            _arity(args, 2, usage, lineno)
            built = gates.cnot_gate(
                _parse_qubit(args[0], num_qubits, lineno),
                _parse_qubit(args[1], num_qubits, lineno),
            )
        elif name == "R":
            _arity(args, 5, usage, lineno)
            built = gates.r_gate(
                _parse_qubit(args[0], num_qubits, lineno),
                _parse_real(args[1], lineno, "angle"),
                (
                    _parse_real(args[2], lineno, "axis component"),
                    _parse_real(args[3], lineno, "axis component"),
                    _parse_real(args[4], lineno, "axis component"),
                ),
            )
        else:
            built = _parse_custom_gate(args, num_qubits, lineno, usage)
    except ValidationError as exc:
        message = str(exc)
        if "not unitary" in message:
            # Well-formed line, physically invalid content.
            raise ValidationError(f"line {lineno}: {message}") from exc
        raise CircuitSyntaxError(lineno, message) from exc
    return built


def _parse_custom_gate(args, num_qubits, lineno, usage) -> gates.Gate:
    split = None
    for k in range(1, num_qubits + 1):
        if len(args) == k + 4 ** k:
            split = k
            break
    if split is None:
        raise CircuitSyntaxError(
            lineno,
            f"gate U expects k qubit indices then 4^k entries; "
            f"got {len(args)} arguments ({usage})",
        )
    targets = [_parse_qubit(a, num_qubits, lineno) for a in args[:split]]
    dim = 2 ** split
    entries = [_parse_complex(a, lineno) for a in args[split:]]
    matrix = np.array(entries, dtype=complex).reshape(dim, dim)
    return gates.custom_gate(matrix, targets)


def _build_state(tokens: list[str], h: Hamiltonian, lineno: int) -> np.ndarray:
    head, args = tokens[0], tokens[1:]
    try:
        if head == "product":
            rho = _build_product(args, lineno)
        elif head == "thermal":
            _arity(args, 1, "state thermal <beta>", lineno)
            rho = system.thermal_state(h, _parse_real(args[0], lineno, "beta"))
        else:
            rho = _build_plain_state(head, args, lineno)
    except ValidationError as exc:
        raise ValidationError(f"line {lineno}: {exc}") from exc
    if rho.shape[0] != h.dim:
        raise ValidationError(
            f"line {lineno}: state has dimension {rho.shape[0]}, "
            f"but the register needs {h.dim}"
        )
    return system.validate_density_matrix(rho, h.dim)


def _build_plain_state(head: str, args: list[str], lineno: int) -> np.ndarray:
    if head == "pure_bloch":
        _arity(args, 2, "state pure_bloch <theta> <phi>", lineno)
        return system.pure_state_bloch(
            _parse_real(args[0], lineno, "theta"), _parse_real(args[1], lineno, "phi")
        )
    if head == "pure_pop":
        _arity(args, 2, "state pure_pop <p> <phi>", lineno)
        return system.pure_state_pop_phase(
            _parse_real(args[0], lineno, "p"), _parse_real(args[1], lineno, "phi")
        )
    if head == "qubit":
        _arity(args, 3, "state qubit <p> <|gamma|> <phi>", lineno)
        return system.qubit_state(
            _parse_real(args[0], lineno, "p"),
            _parse_real(args[1], lineno, "|gamma|"),
            _parse_real(args[2], lineno, "phi"),
        )
    if head == "matrix":
        count = len(args)
        dim = math.isqrt(count)
        if dim * dim != count or dim < 2:
            raise CircuitSyntaxError(
                lineno, f"state matrix needs d*d complex entries, got {count}"
            )
        entries = [_parse_complex(a, lineno) for a in args]
        return np.array(entries, dtype=complex).reshape(dim, dim)
    raise CircuitSyntaxError(
        lineno,
        f"unknown state form {head!r}; expected pure_bloch, pure_pop, qubit, "
        f"thermal, product or matrix",
    )


def _build_product(args: list[str], lineno: int) -> np.ndarray:
    parts: list[list[str]] = [[]]
    for tok in args:
        if tok == ";":
            parts.append([])
        elif tok.endswith(";"):
            parts[-1].append(tok[:-1])
            parts.append([])
        else:
            parts[-1].append(tok)
    parts = [p for p in parts if p]
    if len(parts) < 2:
        raise CircuitSyntaxError(
            lineno, "state product needs at least two ';'-separated factors"
        )
    rho = None
    for part in parts:
        if part[0] not in _PRODUCT_HEADS:
            raise CircuitSyntaxError(
                lineno,
                f"product factor must start with one of {_PRODUCT_HEADS}, got {part[0]!r}",
            )
        factor = _build_plain_state(part[0], part[1:], lineno)
        rho = factor if rho is None else np.kron(rho, factor)
    return rho


def _arity(args, want: int, usage: str, lineno: int) -> None:
    if len(args) != want:
        raise CircuitSyntaxError(
            lineno, f"expected {want} argument(s), got {len(args)} (usage: {usage})"
        )


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitSyntaxError(lineno, f"{what} must be an integer, got {token!r}") from None


def _parse_qubit(token: str, num_qubits: int, lineno: int) -> int:
    q = _parse_int(token, lineno, "qubit index")
    if not 0 <= q < num_qubits:
        raise CircuitSyntaxError(
            lineno, f"qubit index {q} out of range for {num_qubits} qubit(s)"
        )
    return q


def _parse_real(token: str, lineno: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CircuitSyntaxError(lineno, f"{what} must be a real number, got {token!r}") from None
    if not math.isfinite(value):
        raise CircuitSyntaxError(lineno, f"{what} must be finite, got {token!r}")
    return value


def _parse_complex(token: str, lineno: int) -> complex:
    try:
        value = complex(token.replace("i", "j"))
    except ValueError:
        raise CircuitSyntaxError(
            lineno, f"malformed complex number {token!r} (expected a+bi form)"
        ) from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise CircuitSyntaxError(lineno, f"complex entry must be finite, got {token!r}")
    return value
