from app.workflow.RunConfig import RunConfig, load_config, parse_config, serialize_config
from app.workflow.RunWorkflow import RunWorkflow, lemma_reports, run, sweep
from app.workflow.Scenarios import Scenario, build_scenario

__all__ = [
    "RunConfig",
    "load_config",
    "parse_config",
    "serialize_config",
    "RunWorkflow",
    "lemma_reports",
    "run",
    "sweep",
    "Scenario",
    "build_scenario",
]
