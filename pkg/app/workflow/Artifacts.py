"""Plain-text outputs of a run or sweep: solution dump, CSV tables, config echo and summary line.

Floats are written with repr so identical runs give byte-identical files.
"""
import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.workflow.RunConfig import RunConfig, serialize_config
from app.workflow.RunState import RunDiagnostics

logger = logging.getLogger(__name__)

ENERGY_COLUMNS = ("E0", "E1", "E2", "E3", "E4", "E5", "F", "F1", "F2")
DIAGNOSTIC_COLUMNS = ("slab",) + ENERGY_COLUMNS + (
    "l2_sup", "linf_max", "picard_converged", "coefficient_change", "ratio_thm41", "ratio_thm51", "bln_max_violation",
)
SWEEP_COLUMNS = (
    "level", "cells", "slabs", "h", "l1_error", "l2_error", "ratio_thm41", "ratio_thm51", "linf_max", "shock_position",
)


def diagnostic_columns(q_list: Sequence[int]) -> Tuple[str, ...]:
    """DIAGNOSTIC_COLUMNS plus a sign-check flag for q = 2 and each q, and the L-infinity scaling per q."""
    exponents = (2,) + tuple(q for q in q_list if q != 2)
    return DIAGNOSTIC_COLUMNS + tuple(f"signs_q{q}" for q in exponents) + tuple(f"q_scaling_{q}" for q in q_list)


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Mapping]) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(column)) for column in columns])
    return path


def diagnostics_rows(diagnostics: RunDiagnostics) -> List[Dict]:
    """One row per solved slab, then a summary row with totals, maxima and bound ratios."""
    energy, norms = diagnostics.energy, diagnostics.norms
    reports = {report.slab: report for report in diagnostics.slab_reports}
    rows = []
    for n in range(len(norms.l2_sup)):
        row = {"slab": n, "l2_sup": float(norms.l2_sup[n]), "linf_max": float(norms.linf_max[n])}
        row.update({name: float(energy.terms[name][n]) for name in ENERGY_COLUMNS})
        report = reports.get(n)
        if report is not None:
            row.update(picard_converged=report.picard_converged, coefficient_change=float(report.coefficient_change))
        rows.append(row)
    summary = {
        "slab": "summary",
        "l2_sup": float(norms.l2_sup.max(initial=0.0)),
        "linf_max": diagnostics.linf_max,
        "ratio_thm41": diagnostics.ratio_thm41,
        "ratio_thm51": diagnostics.ratio_thm51,
        "picard_converged": diagnostics.unconverged_slabs == 0,
        "coefficient_change": diagnostics.max_coefficient_change,
        "bln_max_violation": diagnostics.bln.max_violation,
    }
    summary.update({f"signs_q{q}": passed for q, passed in diagnostics.sign_passes.items()})
    summary.update({f"q_scaling_{q}": float(value) for q, value in diagnostics.boundedness.q_scaling.items()})
    summary.update({name: energy.total(name) for name in ENERGY_COLUMNS})
    rows.append(summary)
    return rows


def summary_line(config: RunConfig, diagnostics: Optional[RunDiagnostics], errors: Sequence[str], solved: int) -> str:
    head = f"law={config.law} scenario={config.scenario} cells={config.cells} slabs={config.slabs} p={config.p}"
    if errors:
        return f"status=failed {head} solved_slabs={solved} reason={errors[0]}"
    if diagnostics is None:
        return f"status=ok {head} solved_slabs={solved}"
    identity = diagnostics.energy.identity_residual
    parts = [
        f"status=ok {head} solved_slabs={solved}",
        f"ratio_thm41={diagnostics.ratio_thm41:.6g}",
        f"ratio_thm51={diagnostics.ratio_thm51:.6g}",
        f"linf_max={diagnostics.linf_max:.6g}",
        f"conservation={max(map(abs, diagnostics.conservation), default=0.0):.3e}",
        f"unconverged_slabs={diagnostics.unconverged_slabs}",
        f"max_coefficient_change={diagnostics.max_coefficient_change:.3e}",
        " ".join(f"signs_q{q}={'pass' if passed else 'fail'}" for q, passed in diagnostics.sign_passes.items()),
        f"bln_max_violation={diagnostics.bln.max_violation:.3e}",
        " ".join(f"q_scaling_{q}={value:.6g}" for q, value in diagnostics.boundedness.q_scaling.items()),
    ]
    if identity is not None:
        parts.append(f"identity_residual={identity:.3e}")
    if diagnostics.l1_error is not None:
        parts.append(f"l1_error={diagnostics.l1_error:.6g} l2_error={diagnostics.l2_error:.6g}")
    if diagnostics.shock_position is not None:
        parts.append(f"shock_position={diagnostics.shock_position:.6g}")
    return " ".join(parts)


def write_run_artifacts(
    output_dir,
    config: RunConfig,
    solution=None,
    diagnostics: Optional[RunDiagnostics] = None,
    errors: Sequence[str] = (),
) -> Dict[str, str]:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = {}

    config_path = out / "config.txt"
    config_path.write_text(serialize_config(config), encoding="utf-8")
    written["config"] = str(config_path)

    if solution is not None:
        written["solution"] = str(solution.dump(out / "solution.txt"))
    if diagnostics is not None:
        columns = diagnostic_columns(config.q_list)
        written["diagnostics"] = str(write_csv(out / "diagnostics.csv", columns, diagnostics_rows(diagnostics)))

    solved = 0 if solution is None else solution.solved
    summary_path = out / "summary.txt"
    summary_path.write_text(summary_line(config, diagnostics, errors, solved) + "\n", encoding="utf-8")
    written["summary"] = str(summary_path)
    logger.info("artifacts written to %s: %s", out, ", ".join(sorted(written)))
    return written


def sweep_row(level: int, config: RunConfig, h: float, diagnostics: RunDiagnostics) -> Dict:
    return {
        "level": level,
        "cells": config.cells,
        "slabs": config.slabs,
        "h": h,
        "l1_error": diagnostics.l1_error,
        "l2_error": diagnostics.l2_error,
        "ratio_thm41": diagnostics.ratio_thm41,
        "ratio_thm51": diagnostics.ratio_thm51,
        "linf_max": diagnostics.linf_max,
        "shock_position": diagnostics.shock_position,
    }


def write_sweep(output_dir, rows: Sequence[Mapping]) -> Path:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = write_csv(out / "sweep.csv", SWEEP_COLUMNS, rows)
    logger.info("sweep table written to %s", path)
    return path
