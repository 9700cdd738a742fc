"""Command-line interface.

Subcommands::

    weaklogic hardy                      Hardy's paradox report
    weaklogic threebox                   three-box paradox report
    weaklogic eval SCENARIO              report for a scenario file (or built-in name)
    weaklogic simulate SCENARIO LABEL    pointer sweep for one observable
    weaklogic lattice SCENARIO P Q       lattice checks for two projectors

Exit statuses: 0 success, 1 internal error, 2 validation error, 3 orthogonal
pre/post selection.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from . import logic, pointer, scenarios
from .core import COMPARISON_TOL, StateVector, op_norm, commutator
from .errors import NotProjector, NotProportional, OrthogonalSelection, ValidationError
from .weak import weak_value

EXIT_OK, EXIT_INTERNAL, EXIT_VALIDATION, EXIT_ORTHOGONAL = 0, 1, 2, 3
SIG_DIGITS = 12
DISPLAY_ZERO = 1e-14


def fmt_real(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if abs(x) < DISPLAY_ZERO:
        x = 0.0
    return f"{x:#.{SIG_DIGITS}g}"


def fmt_complex(z) -> str:
    if z is None:
        return ""
    z = complex(z)
    im = 0.0 if abs(z.imag) < DISPLAY_ZERO else z.imag
    sign = "-" if im < 0 else "+"
    return f"{fmt_real(z.real)}{sign}{fmt_real(abs(im))}i"


def parse_complex(text: str) -> complex:
    """Inverse of :func:`fmt_complex` (also accepts plain reals)."""
    text = text.strip()
    if not text.endswith("i"):
        return complex(float(text))
    return complex(text[:-1] + "j")


@dataclass
class OutputTable:
    headers: List[str]
    rows: List[List[str]] = field(default_factory=list)
    metadata: List[Tuple[str, List[str]]] = field(default_factory=list)

    def add_row(self, row: Sequence[str]):
        if len(row) != len(self.headers):
            raise ValueError(f"row has {len(row)} cells, table has {len(self.headers)} columns")
        self.rows.append([str(c) for c in row])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for key, values in self.metadata:
            writer.writerow([f"# {key}"] + list(values))
        writer.writerow(self.headers)
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"{key}: {', '.join(values)}" for key, values in self.metadata]
        if lines:
            lines.append("")
        widths = [max(len(h), *(len(r[i]) for r in self.rows)) if self.rows else len(h)
                  for i, h in enumerate(self.headers)]
        lines.append("  ".join(h.ljust(w) for h, w in zip(self.headers, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for r in self.rows:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else self.to_text()


def read_csv_output(text: str):
    """Parse CSV written by :meth:`OutputTable.to_csv` back into (metadata, headers, rows)."""
    metadata, table = {}, []
    for row in csv.reader(io.StringIO(text)):
        if row and row[0].startswith("# "):
            metadata[row[0][2:]] = row[1:]
        else:
            table.append(row)
    return metadata, table[0], table[1:]


REPORT_HEADERS = [
    "label", "kind", "weak_value", "classification", "conditions",
    "comm_post", "comm_pre", "comm_pre_post", "psi_coeff", "phi_coeff",
]


def report_table(rep: scenarios.ScenarioReport) -> OutputTable:
    table = OutputTable(list(REPORT_HEADERS))
    table.metadata.append(("scenario", [rep.name]))
    table.metadata.append(("overlap_probability", [fmt_real(rep.overlap_probability)]))
    if rep.ratio_labels:
        table.metadata.append(("ratio_labels", list(rep.ratio_labels)))
        table.metadata.append(("ratio_table", [fmt_real(v) for v in rep.ratio_table]))
    if rep.identity_coefficients is not None:
        table.metadata.append((f"identity_coefficients {rep.identity_label}",
                               [fmt_real(c) for c in rep.identity_coefficients]))
    for row in rep.rows:
        w = row.weak
        table.add_row([
            row.label,
            row.kind.value,
            fmt_complex(row.value),
            "" if w is None else str(w.classification),
            "" if w is None else "|".join(sorted(str(c) for c in w.which_condition)),
            *(("", "", "") if w is None else (fmt_real(n) for n in w.commutator_norms)),
            fmt_real(row.psi_coeff),
            fmt_real(row.phi_coeff),
        ])
    return table


def cmd_eval(scenario_path, tol: float = COMPARISON_TOL, format: str = "table") -> OutputTable:
    return report_table(scenarios.report(scenarios.load_scenario(scenario_path), tol))


def cmd_hardy(format: str = "table", tol: float = COMPARISON_TOL) -> OutputTable:
    return report_table(scenarios.report(scenarios.hardy_scenario(), tol))


def cmd_threebox(format: str = "table", tol: float = COMPARISON_TOL) -> OutputTable:
    return report_table(scenarios.report(scenarios.three_box_scenario(), tol))


def cmd_simulate(scenario_path, observable_label: str, g_list: Sequence[float] = (0.05, 0.02, 0.01),
                 grid_points: int = 1024, sigma: float = 1.0, extent: float = 10.0) -> OutputTable:
    """Pointer sweep; ``g_list`` and ``extent`` are in units of ``sigma``."""
    if any(g <= 0 for g in g_list):
        raise ValidationError("coupling must be positive")
    s = scenarios.load_scenario(scenario_path)
    op = s.observable(observable_label)
    grid = pointer.PointerGrid(grid_points, extent * sigma, sigma)
    gs = sorted((g * sigma for g in g_list), reverse=True)
    estimate, stats = pointer.extract_weak_value(op, s.pre, s.post, gs, grid)
    exact = weak_value(op, s.pre, s.post)
    table = OutputTable(["g", "post_selection_probability", "mean_position", "mean_momentum"])
    table.metadata.append(("scenario", [s.name]))
    table.metadata.append(("observable", [observable_label]))
    table.metadata.append(("estimate", [fmt_complex(estimate)]))
    table.metadata.append(("exact", [fmt_complex(exact)]))
    for st in stats:
        table.add_row([fmt_real(st.coupling), fmt_real(st.post_selection_probability),
                       fmt_real(st.mean_position), fmt_real(st.mean_momentum)])
    return table


def _rank_one_state(op):
    if round(op.trace().real) != 1:
        return None
    vals, vecs = np.linalg.eigh(op.matrix)
    return StateVector(vecs[:, -1])


def cmd_lattice(scenario_path, p_label: str, q_label: str, tol: float = COMPARISON_TOL,
                relative_error: float = 0.1) -> OutputTable:
    s = scenarios.load_scenario(scenario_path)
    p, q = s.observable(p_label), s.observable(q_label)
    for label, op in ((p_label, p), (q_label, q)):
        if not op.is_projector:
            raise NotProjector(f"observable {label!r} is not a projector")
    table = OutputTable(["quantity", "value"])
    table.metadata.append(("scenario", [s.name]))
    table.metadata.append(("pair", [p_label, q_label]))
    add = lambda k, v: table.add_row([k, v])
    add("commutes", str(logic.commutes(p, q, tol)))
    add("commutator_norm", fmt_real(op_norm(commutator(p, q))))
    add("meet_trace", fmt_real(logic.meet(p, q).trace().real))
    add("join_trace", fmt_real(logic.join(p, q).trace().real))
    if logic.is_below(p, q, tol):
        verdict = logic.check_orthomodular(p, q, tol)
        add("orthomodular", str(verdict.holds))
        add("orthomodular_defect", fmt_real(verdict.defect))
    else:
        add("orthomodular", "n/a (p not below q)")
    try:
        coeff, residual = logic.product_coefficient(p, q, tol)
        add("product_coefficient", fmt_complex(coeff) if isinstance(coeff, complex) else fmt_real(coeff))
        add("product_residual", fmt_real(residual))
    except NotProportional as exc:
        add("product_coefficient", f"n/a ({exc})")
    y, x = _rank_one_state(p), _rank_one_state(q)
    if y is not None and x is not None:
        try:
            check = logic.effective_commutativity(p, q, relative_error, pre=x, post=y)
        except OrthogonalSelection:
            add("commutator_weak_value", "n/a (orthogonal)")
        else:
            add("commutator_weak_value", fmt_complex(check.commutator_weak_value))
            add("identity_coefficient", fmt_complex(check.coefficient))
            add("identity_residual", fmt_real(check.identity_residual))
            add(f"effectively_commuting@{relative_error:g}", str(check.holds))
    return table


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=COMPARISON_TOL,
                        help="commutator / comparison tolerance (default 1e-10)")
    common.add_argument("--format", choices=("table", "csv"), default="table")

    parser = argparse.ArgumentParser(prog="weaklogic", description="Weak values and quantum logic of projectors.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("hardy", parents=[common], help="Hardy's paradox report")
    sub.add_parser("threebox", parents=[common], help="three-box paradox report")
    ev = sub.add_parser("eval", parents=[common], help="report for a scenario file")
    ev.add_argument("scenario")
    sim = sub.add_parser("simulate", parents=[common], help="weak-measurement pointer sweep")
    sim.add_argument("scenario")
    sim.add_argument("label")
    sim.add_argument("--g", type=float, action="append", dest="g_list",
                     help="coupling in units of sigma (repeatable; default 0.05 0.02 0.01)")
    sim.add_argument("--grid-points", type=int, default=1024)
    sim.add_argument("--sigma", type=float, default=1.0)
    sim.add_argument("--extent", type=float, default=10.0, help="grid half-width in units of sigma")
    lat = sub.add_parser("lattice", parents=[common], help="lattice checks for two projectors")
    lat.add_argument("scenario")
    lat.add_argument("p")
    lat.add_argument("q")
    lat.add_argument("--relative-error", type=float, default=0.1)
    return parser


def run(args) -> OutputTable:
    if args.command == "hardy":
        return cmd_hardy(args.format, args.tol)
    if args.command == "threebox":
        return cmd_threebox(args.format, args.tol)
    if args.command == "eval":
        return cmd_eval(args.scenario, args.tol, args.format)
    if args.command == "simulate":
        return cmd_simulate(args.scenario, args.label, args.g_list or (0.05, 0.02, 0.01),
                            args.grid_points, args.sigma, args.extent)
    if args.command == "lattice":
        return cmd_lattice(args.scenario, args.p, args.q, args.tol, args.relative_error)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        table = run(args)
    except OrthogonalSelection as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORTHOGONAL
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(table.render(args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
