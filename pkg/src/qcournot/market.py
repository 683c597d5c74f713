"""Classical Cournot duopoly with linear demand and constant marginal cost.

Inverse demand is ``P(Q) = a - b*Q`` and each firm pays ``c`` per unit.
Everything here is a pure function of immutable values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Iterable, Iterator, Sequence

from qcournot.errors import DomainError, NegativePriceWarning

# Slack for "q_i <= Q" when Q was itself computed as a float sum.
_QTY_SLACK = 1e-12


class CsConvention(str, Enum):
    """How consumer surplus is measured.

    ``PAPER`` is ``P(Q)*Q/2``, the triangle used by the reference
    spreadsheet. ``STANDARD`` is the textbook ``b*Q**2/2``.
    """

    PAPER = "paper"
    STANDARD = "standard"


@dataclass(frozen=True)
class MarketParams:
    """Linear demand intercept ``a``, slope ``b`` and marginal cost ``c``."""

    a: float = 100.0
    b: float = 1.0
    c: float = 10.0

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
        if self.a <= 0:
            raise DomainError(f"a must be positive, got {self.a}")
        if self.b <= 0:
            raise DomainError(f"b must be positive, got {self.b}")
        if self.c < 0:
            raise DomainError(f"c must be non-negative, got {self.c}")
        if self.a <= self.c:
            raise DomainError(f"a ({self.a}) must exceed c ({self.c}); no output is profitable")


@dataclass(frozen=True)
class FirmOutcome:
    quantity: float
    revenue: float
    cost: float
    profit: float


@dataclass(frozen=True)
class PayoffRow:
    """One (q1, q2) line of the payoff spreadsheet."""

    q1: float
    q2: float
    Q: float
    P: float
    firm1: FirmOutcome
    firm2: FirmOutcome
    total_profit: float
    cs: float
    welfare: float

    @property
    def negative_price(self) -> bool:
        return self.P < 0


@dataclass(frozen=True)
class PayoffTable:
    """Rows in grid order: ``q1`` outer, ``q2`` inner."""

    params: MarketParams
    conv: CsConvention
    grid1: tuple[float, ...]
    grid2: tuple[float, ...]
    rows: tuple[PayoffRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[PayoffRow]:
        return iter(self.rows)

    def __getitem__(self, i: int) -> PayoffRow:
        return self.rows[i]

    def row(self, q1: float, q2: float) -> PayoffRow:
        for r in self.rows:
            if r.q1 == q1 and r.q2 == q2:
                return r
        raise KeyError((q1, q2))

    @property
    def has_negative_price(self) -> bool:
        return any(r.negative_price for r in self.rows)


def _check_quantity(name: str, q: float) -> None:
    if not q >= 0:  # also rejects NaN
        raise DomainError(f"{name} must be non-negative, got {q}")


def price(params: MarketParams, Q: float) -> float:
    """Market price at total output ``Q``.

    Not clamped at zero. A negative result triggers a
    :class:`NegativePriceWarning` so generalized runs stay honest.
    """
    _check_quantity("Q", Q)
    p = params.a - params.b * Q
    if p < 0:
        warnings.warn(
            f"price is negative ({p}) at total output {Q}", NegativePriceWarning, stacklevel=2
        )
    return p


def firm_outcome(params: MarketParams, q_i: float, Q: float) -> FirmOutcome:
    _check_quantity("q_i", q_i)
    if q_i > Q + _QTY_SLACK:
        raise DomainError(f"firm output {q_i} exceeds total output {Q}")
    p = price(params, Q)
    revenue = p * q_i
    cost = params.c * q_i
    return FirmOutcome(quantity=q_i, revenue=revenue, cost=cost, profit=revenue - cost)


def profit(params: MarketParams, q_i: float, Q: float) -> float:
    """Profit of a firm producing ``q_i`` when industry output is ``Q``."""
    return firm_outcome(params, q_i, Q).profit


def best_response(params: MarketParams, q_j: float) -> float:
    """Profit-maximizing output against an opponent producing ``q_j``."""
    _check_quantity("q_j", q_j)
    return max(0.0, (params.a - params.c - params.b * q_j) / (2.0 * params.b))


def nash_equilibrium(params: MarketParams) -> tuple[float, float]:
    """Symmetric Cournot equilibrium as ``(output per firm, profit per firm)``."""
    q = (params.a - params.c) / (3.0 * params.b)
    return q, profit(params, q, 2.0 * q)


def consumer_surplus(
    params: MarketParams, Q: float, conv: CsConvention = CsConvention.PAPER
) -> float:
    _check_quantity("Q", Q)
    conv = CsConvention(conv)
    if conv is CsConvention.STANDARD:
        return params.b * Q * Q / 2.0
    p = params.a - params.b * Q
    if p < 0:
        raise DomainError(f"paper-convention consumer surplus undefined at negative price {p}")
    return p * Q / 2.0


def welfare(
    params: MarketParams, q1: float, q2: float, conv: CsConvention = CsConvention.PAPER
) -> float:
    """Industry profit plus consumer surplus at ``(q1, q2)``."""
    _check_quantity("q1", q1)
    _check_quantity("q2", q2)
    Q = q1 + q2
    return profit(params, q1, Q) + profit(params, q2, Q) + consumer_surplus(params, Q, conv)


def payoff_row(
    params: MarketParams, q1: float, q2: float, conv: CsConvention = CsConvention.PAPER
) -> PayoffRow:
    Q = q1 + q2
    f1 = firm_outcome(params, q1, Q)
    f2 = firm_outcome(params, q2, Q)
    with warnings.catch_warnings():
        # firm_outcome already warned once for this Q
        warnings.simplefilter("ignore", NegativePriceWarning)
        p = price(params, Q)
    total = f1.profit + f2.profit
    cs = consumer_surplus(params, Q, conv)
    return PayoffRow(
        q1=q1, q2=q2, Q=Q, P=p, firm1=f1, firm2=f2, total_profit=total, cs=cs, welfare=total + cs
    )


def payoff_table(
    params: MarketParams,
    grid1: Iterable[float],
    grid2: Iterable[float],
    conv: CsConvention = CsConvention.PAPER,
) -> PayoffTable:
    """Evaluate every output pair of ``grid1 x grid2``, ``q1`` varying slowest."""
    g1 = tuple(float(q) for q in grid1)
    g2 = tuple(float(q) for q in grid2)
    if not g1 or not g2:
        raise DomainError("payoff table needs non-empty grids")
    conv = CsConvention(conv)
    rows = tuple(payoff_row(params, q1, q2, conv) for q1 in g1 for q2 in g2)
    return PayoffTable(params=params, conv=conv, grid1=g1, grid2=g2, rows=rows)


def profit_vector(params: MarketParams, grid: Sequence[float], opponent_q: float) -> list[float]:
    """Firm 1's profit at each grid output with firm 2 fixed at ``opponent_q``."""
    _check_quantity("opponent_q", opponent_q)
    return [profit(params, q, q + opponent_q) for q in grid]


def round_cents(x: float) -> float:
    """Round half-up to two decimals, working from the shortest decimal repr."""
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def amortized_payment(principal: float, annual_rate: float, months: int) -> tuple[float, float]:
    """Fixed monthly payment on a fully amortizing loan, and the total paid.

    Interest compounds monthly at ``annual_rate / 12``. Values are not
    rounded; use :func:`round_cents` for display.
    """
    if not principal > 0:
        raise DomainError(f"principal must be positive, got {principal}")
    if not annual_rate >= 0:
        raise DomainError(f"annual_rate must be non-negative, got {annual_rate}")
    if int(months) != months or months < 1:
        raise DomainError(f"months must be a positive integer, got {months}")
    months = int(months)
    r = annual_rate / 12.0
    if r == 0:
        payment = principal / months
    else:
        # 1 - (1+r)**-n without cancellation for tiny r
        payment = principal * r / -math.expm1(-months * math.log1p(r))
    return payment, payment * months
