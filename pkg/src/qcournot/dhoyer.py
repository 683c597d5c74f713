"""Durr-Hoyer style maximum finding on top of simulated Grover search.

Each round marks every value strictly above the current best, amplifies
with Grover, measures one candidate and keeps it if it beats the current
best. The run ends naturally once nothing is marked, which means the
current best is the maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from qcournot.errors import DomainError
from qcournot.grover import Oracle, grover_iterate, optimal_iterations
from qcournot.statevec import RngLike, as_generator, measure, uniform_state

# Constant of the expected-round bound in the Durr-Hoyer analysis.
DH_ROUND_CONSTANT = 22.5
# Growth factor of the randomized iteration scale (Boyer-Brassard-Hoyer-Tapp).
_GROWTH = 6.0 / 5.0


class Schedule(str, Enum):
    EXACT = "exact"
    RANDOMIZED = "randomized"


@dataclass(frozen=True)
class SearchBudget:
    """``max_rounds=None`` means ``ceil(22.5 * sqrt(N))`` for the given N."""

    max_rounds: Optional[int] = None
    schedule: Schedule = Schedule.EXACT

    def __post_init__(self) -> None:
        if self.max_rounds is not None and self.max_rounds < 1:
            raise DomainError(f"max_rounds must be at least 1, got {self.max_rounds}")
        object.__setattr__(self, "schedule", Schedule(self.schedule))

    def rounds_for(self, n: int) -> int:
        if self.max_rounds is not None:
            return self.max_rounds
        return math.ceil(DH_ROUND_CONSTANT * math.sqrt(n))


@dataclass(frozen=True)
class Round:
    best_index: int
    best_value: float
    threshold: float
    marked_count: int
    iterations: int
    measured_index: Optional[int]
    accepted: bool

    def to_dict(self) -> dict:
        return {
            "best_index": self.best_index,
            "best_value": self.best_value,
            "threshold": self.threshold,
            "marked_count": self.marked_count,
            "iterations": self.iterations,
            "measured_index": self.measured_index,
            "accepted": self.accepted,
        }


@dataclass(frozen=True)
class ThresholdSearchTrace:
    rounds: tuple[Round, ...]
    natural: bool
    schedule: Schedule = Schedule.EXACT
    marked_sets: tuple[tuple[int, ...], ...] = field(default=(), compare=True)

    @property
    def budget_terminated(self) -> bool:
        return not self.natural

    @property
    def accepted_rounds(self) -> int:
        return sum(r.accepted for r in self.rounds)

    def to_dict(self) -> dict:
        return {
            "natural": self.natural,
            "schedule": self.schedule.value,
            "rounds": [r.to_dict() for r in self.rounds],
            "marked_sets": [list(m) for m in self.marked_sets],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdSearchTrace":
        return cls(
            rounds=tuple(Round(**r) for r in d["rounds"]),
            natural=bool(d["natural"]),
            schedule=Schedule(d.get("schedule", "exact")),
            marked_sets=tuple(tuple(m) for m in d.get("marked_sets", ())),
        )


class SearchResult(NamedTuple):
    index: int
    value: float
    trace: ThresholdSearchTrace


def threshold_oracle(values: Sequence[float], threshold: float) -> Oracle:
    """Mark exactly the indices whose value is strictly above ``threshold``."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise DomainError("cannot build an oracle from no values")
    return Oracle(v.size, frozenset(np.flatnonzero(v > threshold).tolist()))


def durr_hoyer_max(
    values: Sequence[float],
    rng: RngLike,
    budget: SearchBudget = SearchBudget(),
    initial_index: Optional[int] = None,
) -> SearchResult:
    """Adaptive threshold search for an index of the largest value.

    The first guess is drawn uniformly from ``rng`` unless ``initial_index``
    is given. If the round budget runs out first, the best-so-far is
    returned and ``trace.budget_terminated`` is set.
    """
    v = np.asarray(values, dtype=float)
    n = v.size
    if n == 0:
        raise DomainError("cannot search an empty value list")
    gen = as_generator(rng)
    if initial_index is None:
        best = int(gen.integers(n))
    else:
        if not 0 <= initial_index < n:
            raise DomainError(f"initial_index {initial_index} outside [0, {n})")
        best = int(initial_index)

    start = uniform_state(n)
    scale = 1.0
    rounds: list[Round] = []
    marked_sets: list[tuple[int, ...]] = []
    natural = False
    for _ in range(budget.rounds_for(n)):
        threshold = float(v[best])
        oracle = threshold_oracle(v, threshold)
        marked_sets.append(tuple(sorted(oracle.marked)))
        if oracle.m == 0:
            rounds.append(Round(best, threshold, threshold, 0, 0, None, False))
            natural = True
            break
        if budget.schedule is Schedule.EXACT:
            k = optimal_iterations(n, oracle.m)
        else:
            k = int(gen.integers(math.ceil(scale)))
        state, _ = grover_iterate(start, oracle, k)
        got = measure(state, gen)
        accepted = bool(v[got] > threshold)
        rounds.append(Round(best, threshold, threshold, oracle.m, k, got, accepted))
        if accepted:
            best = got
            scale = 1.0
        else:
            scale = min(scale * _GROWTH, math.sqrt(n))

    trace = ThresholdSearchTrace(tuple(rounds), natural, budget.schedule, tuple(marked_sets))
    return SearchResult(best, float(v[best]), trace)


def durr_hoyer_min(
    values: Sequence[float],
    rng: RngLike,
    budget: SearchBudget = SearchBudget(),
    initial_index: Optional[int] = None,
) -> SearchResult:
    """Minimum search: maximum search over the negated values."""
    v = np.asarray(values, dtype=float)
    idx, _, trace = durr_hoyer_max(-v, rng, budget, initial_index)
    return SearchResult(idx, float(v[idx]), trace)
