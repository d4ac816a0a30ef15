"""Run configuration: flat `key = value` files validated into a frozen pydantic model.

Defaults for everything except the mandatory keys come from app/config.yaml.
"""
import logging
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.law.ConservationLaw import ConservationLaw, law_from_name
from app.solver.NumericalFlux import flux_family
from app.solver.SlabSolver import NewtonSettings
from app.solver.Stabilization import StabilizationConfig
from app.util.safe_config_parsing import ConfigError, safe_key_values

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).resolve().parent.parent / "config.yaml"
MANDATORY_KEYS = ("law", "scenario", "cells", "slabs", "p", "t_final")
MAX_DEGREE = 4


def load_defaults(path: Path = DEFAULTS_PATH) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as handle:
        return yaml.safe_load(handle)


_DEFAULTS = load_defaults()
_RUN = _DEFAULTS["run"]
_STAB = _DEFAULTS["stabilization"]
_NEWTON = _DEFAULTS["newton"]
_SCENARIOS = _DEFAULTS["scenarios"]


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)

    law: str
    scenario: Literal["constant", "riemann", "sine", "piecewise"]
    cells: int = Field(ge=1)
    slabs: int = Field(ge=1)
    p: int = Field(ge=0, le=MAX_DEGREE)
    t_final: float = Field(gt=0.0)
    x_left: float = _RUN["x_left"]
    x_right: float = _RUN["x_right"]

    # scenario parameters
    value: float = _SCENARIOS["constant"]["value"]
    u_left: float = _SCENARIOS["riemann"]["u_left"]
    u_right: float = _SCENARIOS["riemann"]["u_right"]
    x0: float = _SCENARIOS["riemann"]["x0"]
    amplitude: float = _SCENARIOS["sine"]["amplitude"]
    breaks: Tuple[float, ...] = tuple(_SCENARIOS["piecewise"]["breaks"])
    values: Tuple[float, ...] = tuple(_SCENARIOS["piecewise"]["values"])

    C1: float = Field(default=_STAB["C1"], gt=0.0)
    C2: float = Field(default=_STAB["C2"], gt=0.0)
    C3: float = Field(default=_STAB["C3"], gt=0.0)
    beta: float = _STAB["beta"]
    flux: str = _STAB["flux"]
    C0_interior: Optional[float] = Field(default=_STAB.get("C0_interior"), gt=0.0)
    C0_boundary: Optional[float] = Field(default=_STAB.get("C0_boundary"), gt=0.0)

    max_iter: int = Field(default=_NEWTON["max_iter"], ge=1)
    abs_tol: float = Field(default=_NEWTON["abs_tol"], gt=0.0)
    min_damping: float = _NEWTON["min_damping"]
    max_outer: int = Field(default=_NEWTON["max_outer"], ge=1)
    outer_rtol: float = Field(default=_NEWTON["outer_rtol"], gt=0.0)

    q_list: Tuple[int, ...] = tuple(_RUN["q_list"])
    output_dir: str = _RUN["output_dir"]
    seed: int = Field(default=_RUN["seed"], ge=0)

    @field_validator("breaks", "values", "q_list", mode="before")
    @classmethod
    def split_list(cls, value):
        if isinstance(value, str):
            return tuple(part.strip() for part in value.split(",") if part.strip())
        return value

    @field_validator("law")
    @classmethod
    def known_law(cls, value: str) -> str:
        key = value.strip().lower()
        law_from_name(key)
        return key

    @field_validator("flux")
    @classmethod
    def known_flux(cls, value: str) -> str:
        return flux_family(value.strip().lower()).value

    @field_validator("beta")
    @classmethod
    def beta_range(cls, value: float) -> float:
        if not 0.0 < value < 0.5:
            raise ValueError(f"beta must lie in (0, 0.5), got {value}")
        return value

    @field_validator("min_damping")
    @classmethod
    def damping_range(cls, value: float) -> float:
        if not 0.0 < value <= 1.0:
            raise ValueError(f"min_damping must lie in (0, 1], got {value}")
        return value

    @field_validator("q_list")
    @classmethod
    def even_exponents(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        bad = [q for q in value if q < 2 or q % 2]
        if bad:
            raise ValueError(f"q_list entries must be even integers >= 2, got {bad}")
        return value

    @field_validator("output_dir")
    @classmethod
    def plain_directory(cls, value: str) -> str:
        value = value.strip()
        if not value or "#" in value:
            raise ValueError(f"output_dir must be a non-empty path without '#', got '{value}'")
        return value

    @model_validator(mode="after")
    def consistent_geometry(self) -> "RunConfig":
        if not self.x_left < self.x_right:
            raise ValueError(f"x_right must exceed x_left, got [{self.x_left}, {self.x_right}]")
        if self.scenario == "riemann" and not self.x_left < self.x0 < self.x_right:
            raise ValueError(f"x0 must lie inside ({self.x_left}, {self.x_right}), got {self.x0}")
        if self.scenario == "piecewise":
            if len(self.values) != len(self.breaks) + 1:
                raise ValueError(
                    f"values needs one entry more than breaks, got {len(self.values)} and {len(self.breaks)}"
                )
            edges = (self.x_left,) + self.breaks + (self.x_right,)
            if any(a >= b for a, b in zip(edges[:-1], edges[1:])):
                raise ValueError(f"breaks must increase strictly inside the domain, got {self.breaks}")
        return self

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.x_left, self.x_right)

    def conservation_law(self) -> ConservationLaw:
        return law_from_name(self.law)

    def stabilization(self) -> StabilizationConfig:
        return StabilizationConfig(
            C1=self.C1,
            C2=self.C2,
            C3=self.C3,
            beta=self.beta,
            flux_family=self.flux,
            C0_interior=self.C0_interior,
            C0_boundary=self.C0_boundary,
        )

    def newton(self) -> NewtonSettings:
        return NewtonSettings(
            max_iter=self.max_iter,
            abs_tol=self.abs_tol,
            min_damping=self.min_damping,
            max_outer=self.max_outer,
            outer_rtol=self.outer_rtol,
        )

    def refined(self, level: int) -> "RunConfig":
        """The same run with cells and slabs doubled `level` times."""
        factor = 2**level
        return self.model_copy(update={"cells": self.cells * factor, "slabs": self.slabs * factor})


def _error_key(error: Mapping[str, Any]) -> str:
    if error["loc"]:
        return str(error["loc"][0])
    reason = error["msg"].removeprefix("Value error, ")
    return reason.split(" ", 1)[0]


def validate_config(entries: Mapping[str, Any]) -> RunConfig:
    """RunConfig from already-split entries; the first validation failure becomes a ConfigError."""
    try:
        return RunConfig.model_validate(dict(entries))
    except ValidationError as error:
        first = error.errors()[0]
        raise ConfigError(_error_key(first), first["msg"].removeprefix("Value error, ")) from None


def parse_config(text: str) -> RunConfig:
    entries = safe_key_values(text)
    unknown = sorted(set(entries) - set(RunConfig.model_fields))
    if unknown:
        raise ConfigError(unknown[0], f"unknown key (known keys: {', '.join(RunConfig.model_fields)})")
    missing = [key for key in MANDATORY_KEYS if key not in entries]
    if missing:
        raise ConfigError(", ".join(missing), f"missing mandatory key{'s' if len(missing) > 1 else ''}")
    config = validate_config(entries)
    logger.debug("parsed config: %s", config)
    return config


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _format(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_format(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(config: RunConfig) -> str:
    """Canonical `key = value` text in declaration order; unset optional fields are left out."""
    values = ((name, getattr(config, name)) for name in RunConfig.model_fields)
    return "".join(f"{name} = {_format(value)}\n" for name, value in values if value is not None)
