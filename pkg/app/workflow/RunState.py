from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, TypedDict


class StepStatus(Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class StepResult:
    success: bool
    data: Any
    message: str
    step: str


# State passed between the nodes of the run graph
class RunState(TypedDict):
    config: Any
    output_dir: str
    scenario: Any
    mesh: Any
    reference: Any
    solution: Any
    diagnostics: Any
    artifacts: Dict[str, str]
    current_step: str
    steps: Dict[str, StepStatus]
    errors: List[str]
    metadata: Dict[str, Any]


def initial_state(config, output_dir: Optional[str] = None) -> RunState:
    return {
        "config": config,
        "output_dir": output_dir or "",
        "scenario": None,
        "mesh": None,
        "reference": None,
        "solution": None,
        "diagnostics": None,
        "artifacts": {},
        "current_step": "prepare",
        "steps": {},
        "errors": [],
        "metadata": {},
    }


@dataclass
class RunDiagnostics:
    """Everything the diagnose step measures on a solved run."""

    energy: Any
    energy_q: Dict[int, Any]
    norms: Any
    ratio_thm41: float
    boundedness: Any
    conservation: List[float]
    bln: Any
    l1_error: Optional[float] = None
    l2_error: Optional[float] = None
    shock_position: Optional[float] = None
    slab_reports: List[Any] = field(default_factory=list)

    @property
    def ratio_thm51(self) -> float:
        return self.boundedness.ratio

    @property
    def linf_max(self) -> float:
        return self.boundedness.max_abs

    @property
    def sign_passes(self) -> Dict[int, bool]:
        """Whether every sign check holds, per entropy exponent q (2 first)."""
        reports = {2: self.energy, **self.energy_q}
        return {q: all(report.sign_checks().values()) for q, report in reports.items()}

    @property
    def unconverged_slabs(self) -> int:
        return sum(not report.picard_converged for report in self.slab_reports)

    @property
    def max_coefficient_change(self) -> float:
        return max((report.coefficient_change for report in self.slab_reports), default=0.0)
