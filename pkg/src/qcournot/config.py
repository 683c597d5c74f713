"""Scenario configuration: a versioned JSON document, overridable from the CLI."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from qcournot.dhoyer import Schedule, SearchBudget
from qcournot.errors import DomainError
from qcournot.game import OracleRestriction, default_entangled_state
from qcournot.market import CsConvention, MarketParams
from qcournot.statevec import JointState, StrategySpace

CONFIG_VERSION = 1

ScenarioName = Literal["classical", "entangled", "grover", "dhoyer"]
QuantumSide = Literal["grover", "entangled", "dhoyer", "classical"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MarketConfig(_Strict):
    a: float = 100.0
    b: float = 1.0
    c: float = 10.0

    @model_validator(mode="after")
    def _valid(self) -> "MarketConfig":
        try:
            MarketParams(self.a, self.b, self.c)
        except DomainError as exc:
            raise ValueError(str(exc)) from None
        return self

    def params(self) -> MarketParams:
        return MarketParams(self.a, self.b, self.c)


class BudgetConfig(_Strict):
    max_rounds: Optional[int] = Field(default=None, ge=1)
    schedule: Schedule = Schedule.EXACT

    def budget(self) -> SearchBudget:
        return SearchBudget(self.max_rounds, self.schedule)


class TermConfig(_Strict):
    q1: float = Field(ge=0)
    q2: float = Field(ge=0)
    # None means equal weight across all terms
    amplitude: Optional[float] = None


def _default_terms() -> list[TermConfig]:
    joint = default_entangled_state()
    return [
        TermConfig(q1=q1, q2=q2, amplitude=a)
        for (q1, q2), (_, _, a) in zip(joint.outputs(), joint.terms)
    ]


class ScenarioConfig(_Strict):
    version: Literal[1] = CONFIG_VERSION
    scenario: Optional[ScenarioName] = None
    market: MarketConfig = Field(default_factory=MarketConfig)
    grid: Optional[list[float]] = None
    terms: list[TermConfig] = Field(default_factory=_default_terms)
    paper_rounded: bool = False
    iterations: int = Field(default=2, ge=0)
    restriction: OracleRestriction = OracleRestriction.SYMMETRIC
    opponent_q: float = Field(default=20.0, ge=0)
    initial_index: Optional[int] = Field(default=None, ge=0)
    budget: BudgetConfig = Field(default_factory=BudgetConfig)
    seed: int = Field(default=0, ge=0, lt=2**64)
    cs_convention: CsConvention = CsConvention.PAPER
    format: Literal["table", "csv", "json"] = "table"
    trace: bool = False
    attach_grover: bool = False
    # compare: which scenario plays the quantum side, plus its overrides
    quantum: QuantumSide = "grover"
    quantum_overrides: dict[str, Any] = Field(default_factory=dict)
    # mortgage
    principal: float = Field(default=200000.0, gt=0)
    rate: float = Field(default=0.05, ge=0)
    months: int = Field(default=360, ge=1)

    @field_validator("grid")
    @classmethod
    def _grid(cls, v: Optional[list[float]]) -> Optional[list[float]]:
        if v is None:
            return v
        if not v:
            raise ValueError("grid must not be empty")
        if any(q < 0 or not math.isfinite(q) for q in v):
            raise ValueError("grid quantities must be finite and non-negative")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("grid must be strictly increasing")
        return v

    @field_validator("terms")
    @classmethod
    def _terms(cls, v: list[TermConfig]) -> list[TermConfig]:
        if not v:
            raise ValueError("at least one entangled term is required")
        given = [t.amplitude is not None for t in v]
        if any(given) and not all(given):
            raise ValueError("give an amplitude for every term or for none")
        return v

    @model_validator(mode="after")
    def _initial_on_grid(self) -> "ScenarioConfig":
        if self.initial_index is not None and self.initial_index >= len(self.grid_or_default()):
            raise ValueError(f"initial_index {self.initial_index} is outside the grid")
        return self

    def grid_or_default(self) -> list[float]:
        return list(self.grid) if self.grid is not None else [10.0, 20.0, 30.0, 40.0]

    def strategy_space(self) -> StrategySpace:
        return StrategySpace(tuple(self.grid_or_default()))

    def joint_state(self) -> JointState:
        if self.grid is not None:
            space1 = space2 = StrategySpace(tuple(self.grid))
        else:
            qs = sorted({t.q1 for t in self.terms} | {t.q2 for t in self.terms})
            space1 = space2 = StrategySpace(tuple(qs))
        if self.terms[0].amplitude is None:
            amp = 1.0 / math.sqrt(len(self.terms))
            triples = [(t.q1, t.q2, amp) for t in self.terms]
        else:
            triples = [(t.q1, t.q2, t.amplitude) for t in self.terms]
        return JointState.from_outputs(space1, space2, triples, paper_rounded=self.paper_rounded)


def load_config(path: Optional[Path], overrides: dict[str, Any]) -> ScenarioConfig:
    """Read a JSON config (if given) and apply command-line overrides on top."""
    data: dict[str, Any] = {}
    if path is not None:
        data = json.loads(Path(path).read_text())
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            data[key] = {**data[key], **value}
        else:
            data[key] = value
    return ScenarioConfig.model_validate(data)
