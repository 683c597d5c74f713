"""Simulated Grover search on real amplitudes.

One iteration is a sign-flip oracle on the marked basis states followed by
the diffusion step, which reflects every amplitude about the mean. Runs
record a :class:`GroverTrace` holding the full amplitude vector at each stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from qcournot.errors import DimensionError, DomainError
from qcournot.statevec import RngLike, StateVector, measure, uniform_state, Space

Restriction = Union[Callable[[int], bool], Iterable[int], None]


class Stage(str, Enum):
    INIT = "init"
    POST_ORACLE = "post-oracle"
    POST_DIFFUSION = "post-diffusion"


@dataclass(frozen=True)
class Oracle:
    dimension: int
    marked: frozenset[int]

    def __post_init__(self) -> None:
        marked = frozenset(int(i) for i in self.marked)
        if self.dimension < 1:
            raise DomainError(f"oracle dimension must be positive, got {self.dimension}")
        bad = [i for i in marked if not 0 <= i < self.dimension]
        if bad:
            raise DimensionError(f"marked indices {sorted(bad)} outside [0, {self.dimension})")
        object.__setattr__(self, "marked", marked)

    @property
    def m(self) -> int:
        return len(self.marked)

    def signs(self) -> np.ndarray:
        s = np.ones(self.dimension)
        s[sorted(self.marked)] = -1.0
        return s


@dataclass(frozen=True)
class Snapshot:
    stage: Stage
    iteration: int
    amplitudes: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "stage": self.stage.value,
            "iteration": self.iteration,
            "amplitudes": list(self.amplitudes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Snapshot":
        return cls(Stage(d["stage"]), int(d["iteration"]), tuple(float(a) for a in d["amplitudes"]))


@dataclass(frozen=True)
class GroverTrace:
    snapshots: tuple[Snapshot, ...]
    marked: tuple[int, ...] = ()

    @property
    def iterations(self) -> int:
        return max((s.iteration for s in self.snapshots), default=0)

    def final(self) -> np.ndarray:
        return np.array(self.snapshots[-1].amplitudes)

    def stage(self, stage: Stage | str, iteration: int) -> np.ndarray:
        stage = Stage(stage)
        for s in self.snapshots:
            if s.stage is stage and s.iteration == iteration:
                return np.array(s.amplitudes)
        raise KeyError((stage.value, iteration))

    def to_dict(self) -> dict:
        return {"marked": list(self.marked), "snapshots": [s.to_dict() for s in self.snapshots]}

    @classmethod
    def from_dict(cls, d: dict) -> "GroverTrace":
        return cls(
            snapshots=tuple(Snapshot.from_dict(s) for s in d["snapshots"]),
            marked=tuple(int(i) for i in d.get("marked", ())),
        )


def _allowed(n: int, restriction: Restriction) -> list[int]:
    if restriction is None:
        return list(range(n))
    if callable(restriction):
        return [i for i in range(n) if restriction(i)]
    allowed = sorted(set(int(i) for i in restriction))
    if any(not 0 <= i < n for i in allowed):
        raise DimensionError("restriction names an index outside the value range")
    return allowed


def oracle_from_argmax(values: Sequence[float], restriction: Restriction = None) -> Oracle:
    """Mark every index attaining the maximum over the allowed indices.

    ``restriction`` is either a predicate on indices or an explicit
    collection of allowed indices. Ties mark all maximizers.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise DomainError("cannot build an oracle from no values")
    allowed = _allowed(v.size, restriction)
    if not allowed:
        raise DomainError("restriction excludes every index")
    best = max(v[i] for i in allowed)
    return Oracle(v.size, frozenset(i for i in allowed if v[i] == best))


def _check_dims(state: StateVector, oracle: Oracle) -> None:
    if state.size != oracle.dimension:
        raise DimensionError(f"state dimension {state.size} != oracle dimension {oracle.dimension}")


def apply_oracle(state: StateVector, oracle: Oracle) -> StateVector:
    _check_dims(state, oracle)
    return state.replace(state.amplitudes * oracle.signs())


def diffusion(state: StateVector) -> StateVector:
    """Reflect each amplitude about the mean: ``a_i -> 2*mean - a_i``."""
    a = state.amplitudes
    return state.replace(2.0 * a.mean() - a)


def grover_iterate(
    state: StateVector, oracle: Oracle, k: int
) -> tuple[StateVector, GroverTrace]:
    """Apply ``k`` rounds of oracle then diffusion, recording each stage."""
    if k < 0 or int(k) != k:
        raise DomainError(f"iteration count must be a non-negative integer, got {k}")
    _check_dims(state, oracle)
    snaps = [Snapshot(Stage.INIT, 0, tuple(state.amplitudes.tolist()))]
    for it in range(1, int(k) + 1):
        state = apply_oracle(state, oracle)
        snaps.append(Snapshot(Stage.POST_ORACLE, it, tuple(state.amplitudes.tolist())))
        state = diffusion(state)
        snaps.append(Snapshot(Stage.POST_DIFFUSION, it, tuple(state.amplitudes.tolist())))
    return state, GroverTrace(tuple(snaps), tuple(sorted(oracle.marked)))


def marked_probability(state: StateVector, oracle: Oracle) -> float:
    _check_dims(state, oracle)
    return float(sum(state.amplitudes[i] ** 2 for i in oracle.marked))


def closed_form_probability(n: int, m: int, k: int) -> float:
    """Total marked probability after ``k`` iterations from the uniform state."""
    theta = math.asin(math.sqrt(m / n))
    return math.sin((2 * k + 1) * theta) ** 2


def optimal_iterations(n: int, m: int) -> int:
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    if not 1 <= m <= n:
        raise DomainError(f"marked count must be in [1, {n}], got {m}")
    theta = math.asin(math.sqrt(m / n))
    return max(0, round(math.pi / (4.0 * theta) - 0.5))


def grover_search(
    values: Sequence[float],
    oracle: Oracle,
    k: Optional[int] = None,
    rng: RngLike = None,
    space: Optional[Space] = None,
) -> tuple[int, GroverTrace]:
    """Uniform start, ``k`` Grover iterations, one measurement.

    ``k`` defaults to :func:`optimal_iterations`. ``values`` only fixes the
    dimension here; which indices are good is the oracle's business.
    """
    n = len(values)
    if n != oracle.dimension:
        raise DimensionError(f"{n} values for an oracle of dimension {oracle.dimension}")
    if oracle.m == 0:
        raise DomainError("nothing to amplify: the oracle marks no index")
    if space is None:
        space = n
    elif space.size != n:
        raise DimensionError(f"space dimension {space.size} != {n} values")
    if k is None:
        k = optimal_iterations(n, oracle.m)
    final, trace = grover_iterate(uniform_state(space), oracle, k)
    return measure(final, rng), trace
