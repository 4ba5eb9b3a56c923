"""Command-line front end.

Subcommands:

``kdq <file>``        quasiprobability table of the file's circuit and state
                      as JSON; ``--split`` adds the population/coherent parts.
``work <file>``       work report (total, split, components, norms) as JSON;
                      ``--beta <b>`` adds the exponentiated-work identity.
``decompose <file>``  per-gate constituent tables, gaps and the weighted-sum
                      reconstruction as JSON.
``sweep <file>``      evaluate requested columns over a placeholder grid and
                      write a CSV file.
``verify``            run the randomized invariant suite; one line per check.
``figures <name>``    write the CSV and PNG of a prebuilt recipe
                      (2a, 2b, 3, 4, 5).

Circuit files may contain ``$name`` placeholders; ``--set name=value``
fills them (sweep fills the swept one per grid point). Exit codes: 0 on
success, 2 for unreadable/malformed requests or files, 3 for physically
invalid inputs, 4 for verification failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .decomposition import decomposition_identity, decomposition_json
from .dsl import (
    CircuitSyntaxError,
    parse_circuit,
    placeholder_names,
    substitute_placeholders,
)
from .figures import RECIPES, run_recipe, write_csv
from .gates import circuit_unitary
from .kdq import kdq_split, kdq_table, table_json_dict
from .selfcheck import LEVEL_DRAWS, run_all
from .system import ValidationError
from .thermo import (
    anomaly_norms,
    build_work_report,
    extractable_work,
    jarzynski,
    jarzynski_json,
    work_report_json,
    work_split,
)


class RequestError(Exception):
    """A malformed request: bad column name, bad grid, bad --set syntax."""


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CircuitSyntaxError, RequestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdqwork",
        description="Quasiprobability work statistics of qubit circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_kdq = sub.add_parser("kdq", help="quasiprobability table of a circuit file")
    _file_options(p_kdq)
    p_kdq.add_argument(
        "--split",
        action="store_true",
        help="include the population and coherent parts of every entry",
    )
    p_kdq.set_defaults(func=cmd_kdq)

    p_work = sub.add_parser("work", help="work report of a circuit file")
    _file_options(p_work)
    p_work.add_argument(
        "--beta",
        type=float,
        default=None,
        metavar="B",
        help="also evaluate the exponentiated-work identity at inverse temperature B",
    )
    p_work.set_defaults(func=cmd_work)

    p_dec = sub.add_parser("decompose", help="per-gate decomposition of a circuit file")
    _file_options(p_dec)
    p_dec.set_defaults(func=cmd_decompose)

    p_sweep = sub.add_parser("sweep", help="evaluate columns over a placeholder grid")
    p_sweep.add_argument("file", help="circuit file with a $param placeholder")
    p_sweep.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                         help="fill a non-swept placeholder (repeatable)")
    p_sweep.add_argument("--param", required=True, help="placeholder name to sweep")
    p_sweep.add_argument("--start", type=float, required=True, help="first grid value")
    p_sweep.add_argument("--stop", type=float, required=True, help="last grid value")
    p_sweep.add_argument("--count", type=int, required=True, help="number of grid points")
    p_sweep.add_argument(
        "--columns",
        required=True,
        help="comma-separated outputs: re_q_IF, im_q_IF, work, work_pop, "
        "work_coh, norm_pos_up, norm_neg_up, norm_pos_down, norm_neg_down",
    )
    p_sweep.add_argument("--out", required=True, help="CSV file to write")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the invariant suite")
    p_verify.add_argument(
        "--level",
        choices=sorted(LEVEL_DRAWS),
        default="quick",
        help="quick: 100 random draws per check; full: 10000",
    )
    p_verify.add_argument("--seed", type=int, default=0, help="base random seed")
    p_verify.set_defaults(func=cmd_verify)

    p_fig = sub.add_parser("figures", help="write a prebuilt recipe's CSV and PNG")
    p_fig.add_argument("name", choices=sorted(RECIPES), help="recipe name")
    p_fig.add_argument(
        "--out",
        default=None,
        metavar="STEM",
        help="output stem (default figure_<name>); .csv and .png are appended",
    )
    p_fig.set_defaults(func=cmd_figures)
    return parser


def _file_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", help="circuit file")
    p.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                   help="fill a $name placeholder (repeatable)")
    p.add_argument(
        "--json-indent",
        type=int,
        default=2,
        metavar="N",
        help="indentation of the JSON output; 0 emits one compact line",
    )
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")


def _parse_set_values(pairs: list[str]) -> dict[str, object]:
    values: dict[str, object] = {}
    for pair in pairs:
        name, sep, raw = pair.partition("=")
        if not sep or not name:
            raise RequestError(f"--set needs NAME=VALUE, got {pair!r}")
        try:
            values[name] = float(raw)
        except ValueError:
            values[name] = raw
    return values


def _load(args, *, require_state: bool):
    text = Path(args.file).read_text(encoding="utf-8")
    filled = substitute_placeholders(text, _parse_set_values(args.set))
    model = parse_circuit(filled)
    if require_state and model.state is None:
        raise ValidationError(f"{args.file} has no state line; this command needs one")
    return model


def _emit(payload: dict, args) -> int:
    if args.json_indent < 0:
        raise RequestError(f"--json-indent must be >= 0, got {args.json_indent}")
    if args.json_indent == 0:
        text = json.dumps(payload, separators=(",", ":"))
    else:
        text = json.dumps(payload, indent=args.json_indent)
    if args.out is None:
        print(text)
    else:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return 0


def _complex_grid(a: np.ndarray) -> list:
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in a]


def cmd_kdq(args) -> int:
    model = _load(args, require_state=True)
    U = circuit_unitary(model.circuit)
    table = kdq_table(U, model.state, model.hamiltonian)
    payload = table_json_dict(table)
    if args.split:
        split = kdq_split(U, model.state, model.hamiltonian)
        payload["population"] = _complex_grid(split.population)
        payload["coherent"] = _complex_grid(split.coherent)
    return _emit(payload, args)


def cmd_work(args) -> int:
    model = _load(args, require_state=True)
    U = circuit_unitary(model.circuit)
    report = build_work_report(U, model.state, model.hamiltonian)
    payload = work_report_json(report)
    if args.beta is not None:
        fluct = jarzynski(U, model.state, args.beta, model.hamiltonian)
        payload["jarzynski"] = jarzynski_json(fluct)
    return _emit(payload, args)


def cmd_decompose(args) -> int:
    model = _load(args, require_state=True)
    if model.circuit.depth < 1:
        raise ValidationError(f"{args.file} has no gates; nothing to decompose")
    report = decomposition_identity(model.circuit, model.state, model.hamiltonian)
    return _emit(decomposition_json(report), args)


def cmd_sweep(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    fixed = _parse_set_values(args.set)
    if args.param in fixed:
        raise RequestError(f"--param {args.param} also appears in --set")
    if args.param not in placeholder_names(text):
        raise RequestError(f"{args.file} has no ${args.param} placeholder to sweep")
    if args.count < 1:
        raise RequestError(f"--count must be at least 1, got {args.count}")
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    if not columns:
        raise RequestError("--columns named no outputs")
    rows = []
    for value in np.linspace(args.start, args.stop, args.count):
        filled = substitute_placeholders(text, {args.param: float(value), **fixed})
        model = parse_circuit(filled)
        if model.state is None:
            raise ValidationError(f"{args.file} has no state line; sweeps need one")
        row = [float(value)]
        row.extend(_evaluate_columns(columns, model))
        rows.append(row)
    write_csv(Path(args.out), [args.param] + columns, rows)
    return 0


def _evaluate_columns(columns: list[str], model) -> list[float]:
    U = circuit_unitary(model.circuit)
    table = kdq_table(U, model.state, model.hamiltonian)
    split_work = None
    norms = None
    out = []
    for name in columns:
        if name.startswith(("re_q_", "im_q_")):
            i, f = _parse_entry_indices(name, table.dim)
            z = table.entries[i, f]
            out.append(z.real if name.startswith("re_") else z.imag)
        elif name == "work":
            out.append(extractable_work(table))
        elif name in ("work_pop", "work_coh"):
            if split_work is None:
                split_work = work_split(kdq_split(U, model.state, model.hamiltonian))
            out.append(split_work[0] if name == "work_pop" else split_work[1])
        elif name.startswith("norm_"):
            if norms is None:
                norms = anomaly_norms(table)
            try:
                out.append(getattr(norms, name[len("norm_"):]))
            except AttributeError:
                raise RequestError(f"unknown column {name!r}") from None
        else:
            raise RequestError(f"unknown column {name!r}")
    return out


def _parse_entry_indices(name: str, dim: int) -> tuple[int, int]:
    digits = name[len("re_q_"):]
    if len(digits) != 2 or not digits.isdigit():
        raise RequestError(
            f"unknown column {name!r}; entry columns look like re_q_01 or im_q_23"
        )
    i, f = int(digits[0]), int(digits[1])
    if i >= dim or f >= dim:
        raise RequestError(
            f"column {name!r} addresses entry ({i}, {f}) outside a "
            f"{dim}-state spectrum"
        )
    return i, f


def cmd_verify(args) -> int:
    results = run_all(level=args.level, seed=args.seed)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark} {r.name}: {r.detail}")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} checks passed ({args.level} level, seed {args.seed})")
    return 0 if n_pass == len(results) else 4


def cmd_figures(args) -> int:
    stem = args.out if args.out is not None else f"figure_{args.name}"
    csv_path, png_path = run_recipe(args.name, stem)
    print(csv_path)
    print(png_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
