"""Real-amplitude state vectors over discrete output grids.

Amplitudes are signed reals; an outcome's probability is its squared
amplitude. States never renormalize silently: malformed input raises.
Measurement always takes an explicit seed or ``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

from qcournot.errors import DimensionError, DomainError, NormalizationError
from qcournot.market import MarketParams, profit

NORM_TOL = 1e-9
# Accepts amplitudes written to three decimals, e.g. 0.707 for 1/sqrt(2).
PAPER_ROUNDED_TOL = 1e-3

RngLike = Union[int, np.random.Generator]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Turn a seed into a generator. ``None`` is refused on purpose."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None or isinstance(rng, bool) or not isinstance(rng, (int, np.integer)):
        raise TypeError("an explicit integer seed or numpy Generator is required")
    if rng < 0:
        raise DomainError(f"seed must be non-negative, got {rng}")
    return np.random.default_rng(int(rng))


@dataclass(frozen=True)
class StrategySpace:
    """Ordered output levels; position ``i`` is basis state ``|i>``."""

    labels: tuple[float, ...]

    def __post_init__(self) -> None:
        labels = tuple(float(q) for q in self.labels)
        if not labels:
            raise DomainError("strategy space must be non-empty")
        if any(b <= a for a, b in zip(labels, labels[1:])):
            raise DomainError(f"labels must be strictly increasing, got {labels}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def indices(cls, n: int) -> "StrategySpace":
        """Anonymous space labelled ``0..n-1``."""
        return cls(tuple(range(n)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[float]:
        return iter(self.labels)

    def index(self, q: float) -> int:
        try:
            return self.labels.index(float(q))
        except ValueError:
            raise DomainError(f"output {q} is not on the grid {self.labels}") from None


@dataclass(frozen=True)
class ProductSpace:
    """Joint outputs of two firms, flattened row-major (firm 1 slowest)."""

    space1: StrategySpace
    space2: StrategySpace

    @property
    def size(self) -> int:
        return self.space1.size * self.space2.size

    def __len__(self) -> int:
        return self.size

    @property
    def labels(self) -> tuple[tuple[float, float], ...]:
        return tuple((q1, q2) for q1 in self.space1 for q2 in self.space2)

    def pair(self, flat: int) -> tuple[int, int]:
        return divmod(flat, self.space2.size)

    def flat(self, i: int, j: int) -> int:
        return i * self.space2.size + j


Space = Union[StrategySpace, ProductSpace]


def _norm_error(total: float, tol: float) -> None:
    if not abs(total - 1.0) < tol:
        raise NormalizationError(f"squared amplitudes sum to {total!r}, not 1 (tolerance {tol})")


@dataclass(frozen=True, eq=False)
class StateVector:
    space: Space
    amplitudes: np.ndarray
    tol: float = field(default=NORM_TOL, repr=False)

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=float).reshape(-1)
        if amps.size != self.space.size:
            raise DimensionError(
                f"{amps.size} amplitudes for a space of dimension {self.space.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        _norm_error(float(np.dot(amps, amps)), self.tol)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def size(self) -> int:
        return self.amplitudes.size

    def probabilities(self) -> np.ndarray:
        return self.amplitudes**2

    def replace(self, amplitudes: np.ndarray) -> "StateVector":
        """Same space, new amplitudes, always checked at the strict tolerance."""
        return StateVector(self.space, amplitudes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class JointState:
    """Sparse joint state: ``(index1, index2, amplitude)`` terms over two grids."""

    space1: StrategySpace
    space2: StrategySpace
    terms: tuple[tuple[int, int, float], ...]
    tol: float = field(default=NORM_TOL, repr=False, compare=False)

    def __post_init__(self) -> None:
        terms = tuple((int(i), int(j), float(a)) for i, j, a in self.terms)
        if not terms:
            raise DomainError("joint state needs at least one term")
        seen = set()
        for i, j, a in terms:
            if not (0 <= i < self.space1.size and 0 <= j < self.space2.size):
                raise DimensionError(f"term index ({i}, {j}) out of range")
            if (i, j) in seen:
                raise DomainError(f"duplicate term ({i}, {j})")
            if not math.isfinite(a):
                raise DomainError("amplitudes must be finite")
            seen.add((i, j))
        _norm_error(math.fsum(a * a for _, _, a in terms), self.tol)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_outputs(
        cls,
        space1: StrategySpace,
        space2: StrategySpace,
        terms: Sequence[tuple[float, float, float]],
        paper_rounded: bool = False,
    ) -> "JointState":
        """Build from ``(q1, q2, amplitude)`` triples given as output levels."""
        idx = [(space1.index(q1), space2.index(q2), a) for q1, q2, a in terms]
        return cls(space1, space2, tuple(idx), PAPER_ROUNDED_TOL if paper_rounded else NORM_TOL)

    @classmethod
    def pure(cls, space1: StrategySpace, space2: StrategySpace, q1: float, q2: float) -> "JointState":
        return cls.from_outputs(space1, space2, [(q1, q2, 1.0)])

    def outputs(self) -> list[tuple[float, float]]:
        return [(self.space1.labels[i], self.space2.labels[j]) for i, j, _ in self.terms]

    def probabilities(self) -> np.ndarray:
        return np.array([a * a for _, _, a in self.terms])

    def distribution(self) -> dict[tuple[float, float], float]:
        return dict(zip(self.outputs(), self.probabilities().tolist()))

    def to_state_vector(self) -> StateVector:
        space = ProductSpace(self.space1, self.space2)
        amps = np.zeros(space.size)
        for i, j, a in self.terms:
            amps[space.flat(i, j)] = a
        return StateVector(space, amps, self.tol)

    @classmethod
    def from_state_vector(cls, state: StateVector) -> "JointState":
        if not isinstance(state.space, ProductSpace):
            raise DimensionError("state is not over a product space")
        sp = state.space
        terms = tuple(
            (*sp.pair(k), float(a)) for k, a in enumerate(state.amplitudes) if a != 0.0
        )
        return cls(sp.space1, sp.space2, terms, state.tol)


@dataclass(frozen=True, eq=False)
class Observable:
    """Diagonal observable: one real value per basis state."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float).reshape(-1)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return self.values.size


def uniform_state(space: Union[Space, int]) -> StateVector:
    if isinstance(space, int):
        space = StrategySpace.indices(space)
    n = space.size
    return StateVector(space, np.full(n, 1.0 / math.sqrt(n)))


def from_amplitudes(
    space: Space, amps: Sequence[float], paper_rounded: bool = False
) -> StateVector:
    """Validate caller-supplied amplitudes.

    ``paper_rounded`` loosens the normalization check to ``1e-3`` so that
    three-decimal amplitudes such as ``0.707`` are accepted as written.
    """
    return StateVector(space, amps, PAPER_ROUNDED_TOL if paper_rounded else NORM_TOL)


def probabilities(state: Union[StateVector, JointState]) -> np.ndarray:
    """Squared amplitudes, per basis state or per joint term."""
    return state.probabilities()


def _sample(p: np.ndarray, gen: np.random.Generator, size: int | None) -> np.ndarray:
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    u = gen.random(size)
    return np.minimum(np.searchsorted(cdf, u, side="right"), p.size - 1)


def measure(
    state: Union[StateVector, JointState], rng: RngLike, size: int | None = None
):
    """Sample basis outcomes with probability equal to squared amplitude.

    Returns an index for a :class:`StateVector` or an ``(index1, index2)``
    pair for a :class:`JointState`. With ``size`` set, returns an array of
    indices (shape ``(size,)``, or ``(size, 2)`` for joint states).
    """
    gen = as_generator(rng)
    drawn = _sample(state.probabilities(), gen, size)
    if isinstance(state, JointState):
        pairs = np.array([(i, j) for i, j, _ in state.terms])
        if size is None:
            i, j = pairs[int(drawn)]
            return int(i), int(j)
        return pairs[drawn]
    if size is None:
        return int(drawn)
    return drawn


def expected_value(state: StateVector, obs: Observable) -> float:
    """``<psi|O|psi>`` for a diagonal observable."""
    if obs.size != state.size:
        raise DimensionError(f"observable has {obs.size} entries, state has {state.size}")
    return float(np.dot(state.probabilities(), obs.values))


def term_profits(joint: JointState, params: MarketParams) -> np.ndarray:
    """Per-term ``(profit1, profit2)``, shape ``(n_terms, 2)``."""
    rows = []
    for q1, q2 in joint.outputs():
        Q = q1 + q2
        rows.append((profit(params, q1, Q), profit(params, q2, Q)))
    return np.array(rows, dtype=float)


def expected_profits(joint: JointState, params: MarketParams) -> tuple[float, float]:
    e1, e2 = joint.probabilities() @ term_profits(joint, params)
    return float(e1), float(e2)
