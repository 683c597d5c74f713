"""Duopoly scenarios built from the market, state, Grover and Durr-Hoyer layers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

from qcournot import market
from qcournot.dhoyer import SearchBudget, ThresholdSearchTrace, durr_hoyer_max
from qcournot.errors import DomainError
from qcournot.grover import GroverTrace, grover_iterate, marked_probability, oracle_from_argmax
from qcournot.market import CsConvention, MarketParams
from qcournot.statevec import (
    JointState,
    ProductSpace,
    RngLike,
    StrategySpace,
    measure,
    uniform_state,
)

PARETO_TOL = 1e-9

Trace = Union[GroverTrace, ThresholdSearchTrace]


class ScenarioKind(str, Enum):
    CLASSICAL = "classical"
    ENTANGLED = "entangled"
    GROVER_JOINT = "grover-joint"
    DURR_HOYER_BEST_RESPONSE = "durr-hoyer-best-response"


class OracleRestriction(str, Enum):
    SYMMETRIC = "symmetric"
    NONE = "none"


class Verdict(str, Enum):
    QUANTUM_PARETO_IMPROVES = "QuantumParetoImproves"
    CLASSICAL_PARETO_IMPROVES = "ClassicalParetoImproves"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"

    def swapped(self) -> "Verdict":
        if self is Verdict.QUANTUM_PARETO_IMPROVES:
            return Verdict.CLASSICAL_PARETO_IMPROVES
        if self is Verdict.CLASSICAL_PARETO_IMPROVES:
            return Verdict.QUANTUM_PARETO_IMPROVES
        return self


@dataclass(frozen=True)
class Outcome:
    q1: float
    q2: float
    probability: float


@dataclass(frozen=True)
class ScenarioResult:
    """Economics of one scenario run.

    When ``selected`` is set, profits, CS and welfare are evaluated at that
    output pair. Otherwise they are probability-weighted over ``outcomes``.
    """

    kind: ScenarioKind
    params: MarketParams
    conv: CsConvention
    outcomes: tuple[Outcome, ...]
    profits: tuple[float, float]
    cs: float
    welfare: float
    selected: Optional[tuple[float, float]] = None
    selection_probability: Optional[float] = None
    trace: Optional[Trace] = None
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def total_profit(self) -> float:
        return self.profits[0] + self.profits[1]

    def to_dict(self) -> dict:
        if isinstance(self.trace, GroverTrace):
            trace = {"type": "grover", **self.trace.to_dict()}
        elif isinstance(self.trace, ThresholdSearchTrace):
            trace = {"type": "threshold-search", **self.trace.to_dict()}
        else:
            trace = None
        return {
            "kind": self.kind.value,
            "params": {"a": self.params.a, "b": self.params.b, "c": self.params.c},
            "cs_convention": self.conv.value,
            "selected": list(self.selected) if self.selected is not None else None,
            "selection_probability": self.selection_probability,
            "profits": list(self.profits),
            "cs": self.cs,
            "welfare": self.welfare,
            "outcomes": [[o.q1, o.q2, o.probability] for o in self.outcomes],
            "detail": self.detail,
            "trace": trace,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioResult":
        trace = d.get("trace")
        if trace is not None:
            body = {k: v for k, v in trace.items() if k != "type"}
            if trace["type"] == "grover":
                trace = GroverTrace.from_dict(body)
            else:
                trace = ThresholdSearchTrace.from_dict(body)
        sel = d.get("selected")
        return cls(
            kind=ScenarioKind(d["kind"]),
            params=MarketParams(**d["params"]),
            conv=CsConvention(d["cs_convention"]),
            outcomes=tuple(Outcome(*o) for o in d["outcomes"]),
            profits=tuple(d["profits"]),
            cs=d["cs"],
            welfare=d["welfare"],
            selected=tuple(sel) if sel is not None else None,
            selection_probability=d.get("selection_probability"),
            trace=trace,
            detail=d.get("detail", {}),
        )


@dataclass(frozen=True)
class ComparisonRow:
    classical_output: Optional[tuple[float, float]]
    classical_profits: tuple[float, float]
    classical_cs: float
    quantum_output: Optional[tuple[float, float]]
    quantum_profits: tuple[float, float]
    quantum_cs: float
    verdict: Verdict

    @property
    def classical_cs_split(self) -> tuple[float, float]:
        # per-firm attribution of CS is undefined; an even split is reported
        return self.classical_cs / 2, self.classical_cs / 2

    @property
    def quantum_cs_split(self) -> tuple[float, float]:
        return self.quantum_cs / 2, self.quantum_cs / 2

    def to_dict(self) -> dict:
        return {
            "classical_output": list(self.classical_output) if self.classical_output else None,
            "classical_profits": list(self.classical_profits),
            "classical_cs": self.classical_cs,
            "classical_cs_split": list(self.classical_cs_split),
            "quantum_output": list(self.quantum_output) if self.quantum_output else None,
            "quantum_profits": list(self.quantum_profits),
            "quantum_cs": self.quantum_cs,
            "quantum_cs_split": list(self.quantum_cs_split),
            "verdict": self.verdict.value,
        }


def _economics(params: MarketParams, q1: float, q2: float, conv: CsConvention) -> dict:
    row = market.payoff_row(params, q1, q2, conv)
    return {
        "profits": (row.firm1.profit, row.firm2.profit),
        "cs": row.cs,
        "welfare": row.welfare,
    }


def _pure_result(
    kind: ScenarioKind, params: MarketParams, conv: CsConvention, q1: float, q2: float, **extra
) -> ScenarioResult:
    return ScenarioResult(
        kind=kind,
        params=params,
        conv=conv,
        outcomes=(Outcome(q1, q2, 1.0),),
        selected=(q1, q2),
        **_economics(params, q1, q2, conv),
        **extra,
    )


def classical_scenario(
    params: MarketParams, conv: CsConvention = CsConvention.PAPER
) -> ScenarioResult:
    q, _ = market.nash_equilibrium(params)
    return _pure_result(ScenarioKind.CLASSICAL, params, CsConvention(conv), q, q)


def default_entangled_state() -> JointState:
    """``(|30>|30> + |40>|20>)/sqrt(2)`` over outputs {20, 30, 40}."""
    space = StrategySpace((20, 30, 40))
    amp = 1.0 / math.sqrt(2.0)
    return JointState.from_outputs(space, space, [(30, 30, amp), (40, 20, amp)])


def entangled_scenario(
    params: MarketParams, joint: JointState, conv: CsConvention = CsConvention.PAPER
) -> ScenarioResult:
    """Expected economics of a fixed joint state.

    CS and welfare are expectations over realized output pairs, the same
    way the profits are averaged.
    """
    conv = CsConvention(conv)
    probs = joint.probabilities()
    e1 = e2 = cs = w = 0.0
    outcomes = []
    for (q1, q2), p in zip(joint.outputs(), probs):
        econ = _economics(params, q1, q2, conv)
        p1, p2 = econ["profits"]
        c, wel = econ["cs"], econ["welfare"]
        e1 += p * p1
        e2 += p * p2
        cs += p * c
        w += p * wel
        outcomes.append(Outcome(q1, q2, float(p)))
    return ScenarioResult(
        kind=ScenarioKind.ENTANGLED,
        params=params,
        conv=conv,
        outcomes=tuple(outcomes),
        profits=(float(e1), float(e2)),
        cs=float(cs),
        welfare=float(w),
        selected=joint.outputs()[0] if len(outcomes) == 1 else None,
        selection_probability=1.0 if len(outcomes) == 1 else None,
    )


def joint_oracle(
    table: market.PayoffTable, space: ProductSpace, restriction: OracleRestriction
):
    values = [r.total_profit for r in table]
    if OracleRestriction(restriction) is OracleRestriction.SYMMETRIC:
        labels = space.labels
        return oracle_from_argmax(values, lambda i: labels[i][0] == labels[i][1])
    return oracle_from_argmax(values)


def grover_joint_scenario(
    params: MarketParams,
    grid: Union[StrategySpace, Sequence[float]],
    k: int = 2,
    restriction: OracleRestriction = OracleRestriction.SYMMETRIC,
    rng: RngLike = None,
    conv: CsConvention = CsConvention.PAPER,
) -> ScenarioResult:
    """Grover search over all output pairs for the highest industry profit.

    Builds the ``|grid|**2`` joint space, marks the best total-profit pairs
    (symmetric pairs only under ``SYMMETRIC``), runs ``k`` iterations and
    measures one pair.
    """
    grid = grid if isinstance(grid, StrategySpace) else StrategySpace(tuple(grid))
    conv = CsConvention(conv)
    space = ProductSpace(grid, grid)
    table = market.payoff_table(params, grid, grid, conv)
    oracle = joint_oracle(table, space, restriction)
    final, trace = grover_iterate(uniform_state(space), oracle, k)
    pick = measure(final, rng)
    q1, q2 = space.labels[pick]
    probs = final.probabilities()
    outcomes = tuple(Outcome(a, b, float(p)) for (a, b), p in zip(space.labels, probs))
    return ScenarioResult(
        kind=ScenarioKind.GROVER_JOINT,
        params=params,
        conv=conv,
        outcomes=outcomes,
        selected=(q1, q2),
        selection_probability=float(probs[pick]),
        trace=trace,
        detail={
            "iterations": int(k),
            "restriction": OracleRestriction(restriction).value,
            "marked": [list(space.labels[i]) for i in sorted(oracle.marked)],
            "marked_probability": marked_probability(final, oracle),
        },
        **_economics(params, q1, q2, conv),
    )


def durr_hoyer_best_response_scenario(
    params: MarketParams,
    grid: Union[StrategySpace, Sequence[float]],
    opponent_q: float,
    rng: RngLike,
    budget: SearchBudget = SearchBudget(),
    conv: CsConvention = CsConvention.PAPER,
    initial_index: Optional[int] = None,
) -> ScenarioResult:
    """Firm 1 searches its grid for the best reply to a fixed firm 2 output."""
    grid = grid if isinstance(grid, StrategySpace) else StrategySpace(tuple(grid))
    conv = CsConvention(conv)
    values = market.profit_vector(params, grid.labels, opponent_q)
    idx, value, trace = durr_hoyer_max(values, rng, budget, initial_index)
    q1 = grid.labels[idx]
    return _pure_result(
        ScenarioKind.DURR_HOYER_BEST_RESPONSE,
        params,
        conv,
        q1,
        float(opponent_q),
        trace=trace,
        detail={
            "grid": list(grid.labels),
            "profit_vector": values,
            "best_value": value,
            "budget_terminated": trace.budget_terminated,
        },
    )


def compare(classical: ScenarioResult, quantum: ScenarioResult) -> ComparisonRow:
    """Pareto comparison over (firm 1 profit, firm 2 profit, consumer surplus)."""
    if classical.params != quantum.params:
        raise DomainError("cannot compare scenarios with different market parameters")
    if classical.conv is not quantum.conv:
        raise DomainError("cannot compare scenarios under different CS conventions")
    before = (*classical.profits, classical.cs)
    after = (*quantum.profits, quantum.cs)
    diffs = [q - c for c, q in zip(before, after)]
    up = any(d > PARETO_TOL for d in diffs)
    down = any(d < -PARETO_TOL for d in diffs)
    if up and down:
        verdict = Verdict.INCOMPARABLE
    elif up:
        verdict = Verdict.QUANTUM_PARETO_IMPROVES
    elif down:
        verdict = Verdict.CLASSICAL_PARETO_IMPROVES
    else:
        verdict = Verdict.EQUIVALENT
    return ComparisonRow(
        classical_output=classical.selected,
        classical_profits=classical.profits,
        classical_cs=classical.cs,
        quantum_output=quantum.selected,
        quantum_profits=quantum.profits,
        quantum_cs=quantum.cs,
        verdict=verdict,
    )
