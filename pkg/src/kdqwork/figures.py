"""Prebuilt sweep recipes: quasiprobability data behind the standard plots.

Each recipe computes a parameter sweep of a fixed physical scenario, writes
the grid as a CSV file (long format: one row per grid point) and renders a
PNG with the same stem. The five recipes:

``2a``  Hadamard-generating evolution, pure state with p = 1/2: the real
        part of the down-up entry and the work versus omega_t, one curve
        per coherence phase in {0, pi/4, pi/2, 3pi/4, pi}. The phase is the
        phase of the coherence gamma itself (density-matrix convention):
        only that reading produces the negative down-up region before the
        gate time, which is the point of the panel.
``2b``  Same evolution at coherence phase pi/2, maximal |gamma|, one curve
        per excited population p in {0.1, 0.2, 0.3, 0.4, 0.5}; work split
        into population and coherent parts.
``3``   The H T H circuit on the Bloch ket cos(theta/2)|down> +
        e^{i phi} sin(theta/2)|up>: both off-diagonal real parts and the
        work on a (theta, phi) grid.
``4``   CNOT after H on both qubits, input Bloch ket squared: the four
        anomaly norms, the work and its coherent part on a (theta, phi)
        grid.
``5``   The same two-qubit circuit cut at theta = pi/2: work, its five
        per-transition components and the real ground-to-top entry versus
        phi.

Energies are in units of E (the recipes fix E = 1).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .gates import Circuit, circuit_unitary, cnot_gate, h_gate, t_gate
from .kdq import kdq_hadamard_evolution, kdq_split, kdq_table
from .linalg import kron
from .system import QubitStateParams, build_hamiltonian, pure_state_bloch, qubit_state
from .thermo import (
    anomaly_norms,
    extractable_work,
    work_components,
    work_evolution_analytic,
    work_split,
)

#: Significant digits used for every CSV number.
CSV_FORMAT = "%.17g"


def format_value(x: float) -> str:
    return CSV_FORMAT % float(x)


def write_csv(path: Path | str, header: list[str], rows: list[list[float]]) -> Path:
    """Write a delimited table: comma separators, '.' decimal, 17 digits."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(
                f"row has {len(row)} values for {len(header)} columns"
            )
        lines.append(",".join(format_value(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


# ------------------------------------------------------------------ data


_EVOLUTION_PHASES = (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi)
_EVOLUTION_POPULATIONS = (0.1, 0.2, 0.3, 0.4, 0.5)


def _data_2a():
    header = ["omega_t", "phi", "re_q_01", "work"]
    rows = []
    for phi in _EVOLUTION_PHASES:
        params = QubitStateParams(0.5, 0.5, phi)
        for omega_t in np.linspace(0.0, math.pi, 201):
            table = kdq_hadamard_evolution(float(omega_t), params)
            total, _, _ = work_evolution_analytic(float(omega_t), params)
            rows.append([float(omega_t), phi, table.entries[0, 1].real, total])
    return header, rows


def _data_2b():
    header = ["omega_t", "p", "re_q_01", "work", "work_pop", "work_coh"]
    rows = []
    for p in _EVOLUTION_POPULATIONS:
        params = QubitStateParams(p, math.sqrt(p * (1.0 - p)), math.pi / 2)
        for omega_t in np.linspace(0.0, math.pi, 201):
            table = kdq_hadamard_evolution(float(omega_t), params)
            total, population, coherent = work_evolution_analytic(float(omega_t), params)
            rows.append(
                [float(omega_t), p, table.entries[0, 1].real, total, population, coherent]
            )
    return header, rows


def _data_3():
    header = ["theta", "phi", "re_q_01", "re_q_10", "work"]
    h = build_hamiltonian(1, 1.0)
    circuit = Circuit(num_qubits=1, gates=(h_gate(0), t_gate(0), h_gate(0)))
    U = circuit_unitary(circuit)
    rows = []
    for theta in np.linspace(0.0, math.pi / 2, 51):
        for phi in np.linspace(0.0, 2 * math.pi, 101):
            table = kdq_table(U, pure_state_bloch(float(theta), float(phi)), h)
            rows.append(
                [
                    float(theta),
                    float(phi),
                    table.entries[0, 1].real,
                    table.entries[1, 0].real,
                    extractable_work(table),
                ]
            )
    return header, rows


def _two_qubit_setup():
    h = build_hamiltonian(2, 1.0)
    circuit = Circuit(num_qubits=2, gates=(h_gate(0), h_gate(1), cnot_gate(0, 1)))
    return h, circuit_unitary(circuit)


def _data_4():
    header = [
        "theta",
        "phi",
        "work",
        "work_pop",
        "work_coh",
        "norm_pos_up",
        "norm_neg_up",
        "norm_pos_down",
        "norm_neg_down",
    ]
    h, U = _two_qubit_setup()
    rows = []
    for theta in np.linspace(0.0, math.pi, 51):
        for phi in np.linspace(0.0, 2 * math.pi, 101):
            single = pure_state_bloch(float(theta), float(phi))
            rho = kron(single, single)
            table = kdq_table(U, rho, h)
            population, coherent = work_split(kdq_split(U, rho, h))
            norms = anomaly_norms(table)
            rows.append(
                [
                    float(theta),
                    float(phi),
                    extractable_work(table),
                    population,
                    coherent,
                    norms.pos_up,
                    norms.neg_up,
                    norms.pos_down,
                    norms.neg_down,
                ]
            )
    return header, rows


def _data_5():
    header = [
        "phi",
        "work",
        "work_01",
        "work_02",
        "work_03",
        "work_13",
        "work_23",
        "re_q_03",
    ]
    h, U = _two_qubit_setup()
    rows = []
    for phi in np.linspace(0.0, 2 * math.pi, 401):
        single = pure_state_bloch(math.pi / 2, float(phi))
        rho = kron(single, single)
        table = kdq_table(U, rho, h)
        comps = work_components(table)
        rows.append(
            [
                float(phi),
                extractable_work(table),
                comps["0-1"],
                comps["0-2"],
                comps["0-3"],
                comps["1-3"],
                comps["2-3"],
                table.entries[0, 3].real,
            ]
        )
    return header, rows


# ------------------------------------------------------------------ plots


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _curve_panels(header, rows, group_label, png_path):
    plt = _pyplot()
    data = np.asarray(rows)
    x = data[:, 0]
    groups = sorted(set(data[:, 1]))
    n_series = len(header) - 2
    fig, axes = plt.subplots(n_series, 1, figsize=(6.4, 2.6 * n_series), sharex=True)
    if n_series == 1:
        axes = [axes]
    for k, ax in enumerate(axes, start=2):
        for g in groups:
            mask = data[:, 1] == g
            ax.plot(x[mask], data[mask, k], label=f"{group_label}={g:.3g}")
        ax.set_ylabel(header[k])
        ax.axhline(0.0, color="k", lw=0.5)
    axes[0].legend(fontsize=8, ncol=2)
    axes[-1].set_xlabel(header[0])
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def _heatmap_panels(header, rows, png_path):
    plt = _pyplot()
    data = np.asarray(rows)
    thetas = np.unique(data[:, 0])
    phis = np.unique(data[:, 1])
    n_panels = len(header) - 2
    n_cols = min(3, n_panels)
    n_rows = (n_panels + n_cols - 1) // n_cols
    fig, axes = plt.subplots(
        n_rows, n_cols, figsize=(4.0 * n_cols, 3.2 * n_rows), squeeze=False
    )
    for k in range(n_panels):
        ax = axes[k // n_cols][k % n_cols]
        grid = data[:, k + 2].reshape(len(thetas), len(phis))
        mesh = ax.pcolormesh(phis, thetas, grid, shading="nearest", cmap="RdBu_r")
        fig.colorbar(mesh, ax=ax)
        ax.set_title(header[k + 2], fontsize=9)
        ax.set_xlabel(header[1])
        ax.set_ylabel(header[0])
    for k in range(n_panels, n_rows * n_cols):
        axes[k // n_cols][k % n_cols].set_axis_off()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def _line_panels(header, rows, png_path):
    plt = _pyplot()
    data = np.asarray(rows)
    x = data[:, 0]
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.4, 6.0), sharex=True)
    for k in range(1, len(header) - 1):
        style = "-" if header[k] == "work" else "--"
        width = 1.8 if header[k] == "work" else 1.0
        top.plot(x, data[:, k], style, lw=width, label=header[k])
    top.axhline(0.0, color="k", lw=0.5)
    top.set_ylabel("work and components")
    top.legend(fontsize=8, ncol=3)
    bottom.plot(x, data[:, -1], color="tab:purple")
    bottom.axhline(0.0, color="k", lw=0.5)
    bottom.set_ylabel(header[-1])
    bottom.set_xlabel(header[0])
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def _render_2a(header, rows, png_path):
    _curve_panels(header, rows, "phi", png_path)


def _render_2b(header, rows, png_path):
    _curve_panels(header, rows, "p", png_path)


RECIPES = {
    "2a": (_data_2a, _render_2a),
    "2b": (_data_2b, _render_2b),
    "3": (_data_3, _heatmap_panels),
    "4": (_data_4, _heatmap_panels),
    "5": (_data_5, _line_panels),
}


def run_recipe(name: str, stem: Path | str) -> tuple[Path, Path]:
    """Compute recipe ``name`` and write ``<stem>.csv`` and ``<stem>.png``."""
    if name not in RECIPES:
        raise ValueError(f"unknown recipe {name!r}; choose from {sorted(RECIPES)}")
    build, render = RECIPES[name]
    header, rows = build()
    stem = Path(stem)
    csv_path = write_csv(stem.with_suffix(".csv"), header, rows)
    png_path = stem.with_suffix(".png")
    render(header, rows, png_path)
    return csv_path, png_path
