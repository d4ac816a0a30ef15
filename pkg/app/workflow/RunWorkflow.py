"""LangGraph run pipeline plus the sweep and verify-lemma drivers.

    prepare -> build_mesh -> march -> diagnose -> write_artifacts -> END

A failing step records "<step> failed: <reason>" and jumps to write_artifacts, so a
diverged run still leaves its partial solution and a summary line behind.
"""
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from langgraph.graph import END, StateGraph

from app.diagnostics.EnergyDiagnostics import energy_terms
from app.diagnostics.StabilityChecks import (
    boundary_bln_report,
    boundedness_check_Linf,
    error_norm,
    observed_orders,
    shock_position,
    slab_norms,
    stability_check_L2,
)
from app.element.AffineMap import AffineMap
from app.element.ReferenceElement import build_reference
from app.law.EntropyPair import entropy_flux_build, power_entropy
from app.mesh.SpaceTimeMesh import build_mesh
from app.solver.SlabSolver import MarchError, conservation_balance, march
from app.spectral.CoercivityLemma import LemmaReport, verify_lemma
from app.workflow.Artifacts import sweep_row, write_run_artifacts, write_sweep
from app.workflow.RunConfig import RunConfig
from app.workflow.RunState import RunDiagnostics, RunState, StepResult, StepStatus, initial_state
from app.workflow.Scenarios import Scenario, build_scenario

logger = logging.getLogger(__name__)

OUTPUT_ENV = "DGSHOCK_OUT"


def resolve_output_dir(config: RunConfig, explicit: Optional[str] = None) -> str:
    """An explicit directory wins, then $DGSHOCK_OUT, then the config's output_dir."""
    return explicit or os.environ.get(OUTPUT_ENV) or config.output_dir


def collect_diagnostics(config: RunConfig, scenario: Scenario, solution) -> RunDiagnostics:
    problem, law = scenario.problem, scenario.law
    bound = problem.state_bound()
    entropies = {q: entropy_flux_build(law, power_entropy(q), 0.0, (-bound, bound)) for q in (2,) + config.q_list}
    energy = energy_terms(solution, entropies[2], 2)
    energy_q = {q: energy_terms(solution, entropies[q], q) for q in config.q_list}

    diagnostics = RunDiagnostics(
        energy=energy,
        energy_q=energy_q,
        norms=slab_norms(solution),
        ratio_thm41=stability_check_L2(solution, problem),
        boundedness=boundedness_check_Linf(solution, problem, config.q_list),
        conservation=[conservation_balance(solution, n) for n in range(solution.solved)],
        bln=boundary_bln_report(solution),
        slab_reports=list(solution.reports),
    )
    if diagnostics.unconverged_slabs:
        logger.warning(
            "%d of %d slabs accepted with moving stabilization coefficients (largest change %.3e)",
            diagnostics.unconverged_slabs, solution.solved, diagnostics.max_coefficient_change,
        )
    if solution.solved < solution.mesh.num_slabs:
        return diagnostics
    T = solution.mesh.T_final
    if scenario.exact is not None:
        diagnostics.l1_error = error_norm(solution, scenario.exact, T, 1)
        diagnostics.l2_error = error_norm(solution, scenario.exact, T, 2)
    if scenario.front_level is not None:
        try:
            diagnostics.shock_position = shock_position(solution, scenario.front_level, T)
        except ValueError as error:
            logger.warning("no shock position: %s", error)
    return diagnostics


class RunWorkflow:
    def __init__(self, config: RunConfig, output_dir: Optional[str] = None):
        self.config = config
        self.output_dir = output_dir
        self.workflow = self._build_workflow()

    def _build_workflow(self):
        workflow = StateGraph(RunState)

        workflow.add_node("prepare", self._step("prepare", self.prepare))
        workflow.add_node("build_mesh", self._step("build_mesh", self.build_mesh))
        workflow.add_node("march", self._step("march", self.march))
        workflow.add_node("diagnose", self._step("diagnose", self.diagnose))
        workflow.add_node("write_artifacts", self.write_artifacts)

        for step, following in (("prepare", "build_mesh"), ("build_mesh", "march"), ("march", "diagnose")):
            workflow.add_conditional_edges(
                step, self._route, {"next": following, "failed": "write_artifacts"}
            )
        workflow.add_edge("diagnose", "write_artifacts")
        workflow.add_edge("write_artifacts", END)

        workflow.set_entry_point("prepare")
        return workflow.compile()

    @staticmethod
    def _route(state: RunState) -> str:
        return "failed" if state["errors"] else "next"

    @staticmethod
    def _step(name: str, action: Callable[[RunState], Dict]) -> Callable[[RunState], Dict]:
        def node(state: RunState) -> Dict:
            steps = dict(state["steps"])
            steps[name] = StepStatus.RUNNING
            logger.debug("step %s started", name)
            try:
                update = action(state)
            except Exception as error:
                logger.error("%s failed: %s", name, error)
                steps[name] = StepStatus.FAILED
                update = {"errors": state["errors"] + [f"{name} failed: {error}"]}
                if isinstance(error, MarchError):
                    update["solution"] = error.partial
            else:
                steps[name] = StepStatus.COMPLETED
            update.update({"steps": steps, "current_step": name})
            return update

        return node

    def prepare(self, state: RunState) -> Dict:
        config = state["config"]
        output_dir = resolve_output_dir(config, state["output_dir"] or None)
        Path(output_dir).mkdir(parents=True, exist_ok=True)
        metadata = dict(state["metadata"], law=config.law, scenario=config.scenario, p=config.p)
        return {"output_dir": output_dir, "scenario": build_scenario(config), "metadata": metadata}

    def build_mesh(self, state: RunState) -> Dict:
        config = state["config"]
        mesh = build_mesh(config.domain, config.t_final, config.cells, config.slabs)
        reference = build_reference(config.p, dim=2)
        logger.info("mesh %d slabs x %d cells, h=%.4g, p=%d", mesh.num_slabs, mesh.num_cells, mesh.h, config.p)
        return {"mesh": mesh, "reference": reference}

    def march(self, state: RunState) -> Dict:
        config, scenario = state["config"], state["scenario"]
        solution = march(
            scenario.problem, scenario.law, config.stabilization(), state["mesh"], state["reference"], config.newton()
        )
        metadata = dict(state["metadata"], newton_iterations=sum(r.newton_iterations for r in solution.reports))
        return {"solution": solution, "metadata": metadata}

    def diagnose(self, state: RunState) -> Dict:
        return {"diagnostics": collect_diagnostics(state["config"], state["scenario"], state["solution"])}

    def write_artifacts(self, state: RunState) -> Dict:
        errors = list(state["errors"])
        steps = dict(state["steps"])
        output_dir = state["output_dir"] or resolve_output_dir(state["config"])
        try:
            artifacts = write_run_artifacts(
                output_dir, state["config"], state["solution"], state["diagnostics"], errors
            )
            steps["write_artifacts"] = StepStatus.COMPLETED
        except OSError as error:
            logger.error("write_artifacts failed: %s", error)
            errors.append(f"write_artifacts failed: {error}")
            steps["write_artifacts"] = StepStatus.FAILED
            artifacts = {}
        return {"artifacts": artifacts, "errors": errors, "steps": steps, "current_step": "write_artifacts"}

    def run(self) -> RunState:
        return self.workflow.invoke(initial_state(self.config, self.output_dir))


def run(config: RunConfig, output_dir: Optional[str] = None) -> RunState:
    result = RunWorkflow(config, output_dir).run()
    if result["errors"]:
        logger.error("run finished with errors: %s", "; ".join(result["errors"]))
    return result


@dataclass
class SweepResult:
    rows: List[Dict] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    orders: Dict[str, List[float]] = field(default_factory=dict)
    table: Optional[str] = None


def run_level(level: int, config: RunConfig, output_dir: str) -> StepResult:
    """One refinement level in its own directory; safe to call in a worker process."""
    state = RunWorkflow(config, output_dir).run()
    if state["errors"]:
        return StepResult(False, None, "; ".join(state["errors"]), f"level {level}")
    row = sweep_row(level, config, state["mesh"].h, state["diagnostics"])
    return StepResult(True, row, f"level {level} done", f"level {level}")


def sweep(config: RunConfig, refine: int = 3, jobs: int = 1, output_dir: Optional[str] = None) -> SweepResult:
    if refine < 1:
        raise ValueError(f"refine must be at least 1, got {refine}")
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1, got {jobs}")
    base = Path(resolve_output_dir(config, output_dir))
    levels = [(k, config.refined(k), str(base / f"level_{k}")) for k in range(refine)]

    if jobs == 1:
        outcomes = [run_level(*level) for level in levels]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_level, *level) for level in levels]
            outcomes = [future.result() for future in futures]

    result = SweepResult()
    for outcome in outcomes:
        if outcome.success:
            result.rows.append(outcome.data)
        else:
            result.errors.append(f"{outcome.step} failed: {outcome.message}")
    result.table = str(write_sweep(base, result.rows))

    if len(result.rows) > 1:
        hs = [row["h"] for row in result.rows]
        for name in ("l1_error", "l2_error"):
            errors = [row[name] for row in result.rows]
            if all(e is not None and e > 0.0 for e in errors):
                result.orders[name] = observed_orders(hs, errors)
                logger.info("observed orders (%s): %s", name, ", ".join(f"{o:.3f}" for o in result.orders[name]))
    return result


def parse_map(text: Optional[str], dim: int) -> Optional[AffineMap]:
    """`t_scale,x_scale` (or a single scale for dim 1) as a diagonal affine map."""
    if not text:
        return None
    scales = [float(part) for part in text.split(",") if part.strip()]
    if len(scales) != dim:
        raise ValueError(f"--map needs {dim} scale(s), got {len(scales)}")
    return AffineMap.diagonal(np.asarray(scales))


def lemma_reports(
    p_list: Sequence[int],
    q_list: Sequence[int] = (2, 4, 6, 8),
    trials: int = 1000,
    seed: int = 0,
    dim: int = 1,
    map_text: Optional[str] = None,
) -> List[LemmaReport]:
    amap = parse_map(map_text, dim)
    reports = []
    for p in p_list:
        report = verify_lemma(build_reference(p, dim=dim), amap, trials, q_list, seed)
        for line in report.lines():
            logger.info("%s", line)
        failing = [q for q, case in report.cases.items() if not case.holds_q]
        if failing:
            logger.warning("p=%d dim=%d: coercivity bound fails for q in %s", p, dim, failing)
        reports.append(report)
    return reports


def write_lemma_report(output_dir, reports: Sequence[LemmaReport]) -> Path:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "lemma.txt"
    path.write_text("".join(line + "\n" for report in reports for line in report.lines()), encoding="utf-8")
    return path
