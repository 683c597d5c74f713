"""Text, CSV and JSON rendering of scenario results, tables and traces.

Money is rounded half-up to 2 decimals, amplitudes to 6 and probabilities
to 4. Money and amplitudes drop trailing zeros so integral spreadsheet
values print as integers.
"""

from __future__ import annotations

import csv
import io
import json
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional, Sequence

from qcournot.dhoyer import ThresholdSearchTrace
from qcournot.game import ComparisonRow, ScenarioResult
from qcournot.grover import GroverTrace, Oracle, Stage
from qcournot.market import PayoffTable

SPREADSHEET_BASE = ["q1", "q2", "Q", "P", "P.q1", "tc1", "Pi1", "p.q2", "tc2", "Pi2", "totalPi"]
SPREADSHEET_TAIL = ["CS", "W"]


def _half_up(x: float, places: int) -> Decimal:
    return Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)


def _trim(d: Decimal) -> str:
    if d == d.to_integral_value():
        return str(int(d))
    return format(d.normalize(), "f")


def money(x: float) -> str:
    return _trim(_half_up(x, 2))


def money_fixed(x: float) -> str:
    return format(_half_up(x, 2), "f")


def amplitude(x: float) -> str:
    return _trim(_half_up(x, 6))


def prob(x: float) -> str:
    return format(_half_up(x, 4), "f")


qty = money


def pair(p: Optional[Sequence[float]], fmt=qty) -> str:
    if p is None:
        return "-"
    return f"({fmt(p[0])},{fmt(p[1])})"


def to_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def amplitude_columns(iterations: int) -> list[str]:
    cols = ["amp", "oracle"]
    for it in range(1, iterations + 1):
        if it == 1:
            cols += ["diff", "NEW AMP"]
        else:
            cols += [f"DIFF {it}", f"NEW AMP{it}"]
    return cols


def payoff_rows(
    table: PayoffTable, trace: Optional[GroverTrace] = None, oracle: Optional[Oracle] = None
) -> tuple[list[str], list[list[str]]]:
    """Payoff spreadsheet: economics, then amplitude ladder, then CS and W."""
    header = list(SPREADSHEET_BASE)
    ladders: list[list[str]] = [[] for _ in table.rows]
    if trace is not None:
        k = trace.iterations
        header += amplitude_columns(k)
        init = trace.stage(Stage.INIT, 0)
        signs = oracle.signs()
        stages = []
        for it in range(1, k + 1):
            stages.append(trace.stage(Stage.POST_ORACLE, it))
            stages.append(trace.stage(Stage.POST_DIFFUSION, it))
        for i, ladder in enumerate(ladders):
            ladder.append(amplitude(init[i]))
            ladder.append(str(int(signs[i])))
            ladder.extend(amplitude(s[i]) for s in stages)
    header += SPREADSHEET_TAIL
    rows = []
    for r, ladder in zip(table.rows, ladders):
        rows.append(
            [
                qty(r.q1),
                qty(r.q2),
                qty(r.Q),
                money(r.P),
                money(r.firm1.revenue),
                money(r.firm1.cost),
                money(r.firm1.profit),
                money(r.firm2.revenue),
                money(r.firm2.cost),
                money(r.firm2.profit),
                money(r.total_profit),
                *ladder,
                money(r.cs),
                money(r.welfare),
            ]
        )
    return header, rows


def render_payoff_table(
    table: PayoffTable,
    fmt: str,
    trace: Optional[GroverTrace] = None,
    oracle: Optional[Oracle] = None,
) -> str:
    header, rows = payoff_rows(table, trace, oracle)
    if fmt == "json":
        out = {
            "cs_convention": table.conv.value,
            "columns": header,
            "rows": [dict(zip(header, _numeric(row))) for row in rows],
        }
        return to_json(out)
    if fmt == "csv":
        return _csv(header, rows)
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows]
    return "\n".join(lines) + "\n"


def _numeric(row: list[str]) -> list[float | int]:
    out = []
    for cell in row:
        d = Decimal(cell)
        out.append(int(d) if d == d.to_integral_value() else float(d))
    return out


def grover_trace_lines(trace: GroverTrace) -> list[str]:
    lines = ["iteration  stage           amplitudes"]
    for s in trace.snapshots:
        amps = " ".join(amplitude(a) for a in s.amplitudes)
        lines.append(f"{s.iteration:>9}  {s.stage.value:<14}  {amps}")
    return lines


def dh_trace_lines(trace: ThresholdSearchTrace, labels: Sequence[float]) -> list[str]:
    lines = ["round  best_q  best  threshold  marked  k  measured_q  accepted"]
    for n, r in enumerate(trace.rounds, start=1):
        measured = "-" if r.measured_index is None else qty(labels[r.measured_index])
        lines.append(
            f"{n:>5}  {qty(labels[r.best_index]):>6}  {money(r.best_value):>4}  "
            f"{money(r.threshold):>9}  {r.marked_count:>6}  {r.iterations}  "
            f"{measured:>10}  {'yes' if r.accepted else 'no'}"
        )
    return lines


def _economics_line(res: ScenarioResult) -> str:
    return (
        f"Π=({money(res.profits[0])},{money(res.profits[1])}) "
        f"CS={money(res.cs)} W={money(res.welfare)}"
    )


def scenario_text(res: ScenarioResult, show_trace: bool = False) -> str:
    kind = res.kind.value
    lines: list[str] = []
    if kind == "classical":
        lines.append(f"classical Cournot: q*={pair(res.selected)} {_economics_line(res)}")
    elif kind == "entangled":
        for o in res.outcomes:
            lines.append(f"outcome ({qty(o.q1)},{qty(o.q2)}) p={prob(o.probability)}")
        lines.append(
            f"entangled: E[Π]=({money(res.profits[0])},{money(res.profits[1])}) "
            f"E[CS]={money(res.cs)} E[W]={money(res.welfare)}"
        )
    elif kind == "grover-joint":
        d = res.detail
        marked = ",".join(pair(m) for m in d["marked"])
        lines.append(
            f"grover: iterations={d['iterations']} restriction={d['restriction']} "
            f"marked={marked} marked_p={prob(d['marked_probability'])}"
        )
        lines.append(
            f"selected={pair(res.selected)} p={prob(res.selection_probability)} "
            f"{_economics_line(res)}"
        )
        if show_trace and res.trace is not None:
            lines += grover_trace_lines(res.trace)
    else:
        d = res.detail
        lines.append(
            "profit vector: " + " ".join(
                f"{qty(q)}:{money(v)}" for q, v in zip(d["grid"], d["profit_vector"])
            )
        )
        if show_trace and res.trace is not None:
            lines += dh_trace_lines(res.trace, d["grid"])
        status = "budget-terminated" if d["budget_terminated"] else "natural termination"
        lines.append(
            f"dhoyer: q1={qty(res.selected[0])} best={money(d['best_value'])} "
            f"rounds={len(res.trace.rounds)} ({status}) {_economics_line(res)}"
        )
    return "\n".join(lines) + "\n"


def scenario_csv(res: ScenarioResult) -> str:
    header = ["row", "q1", "q2", "probability", "Pi1", "Pi2", "CS", "W"]
    rows = [
        ["outcome", qty(o.q1), qty(o.q2), prob(o.probability), "", "", "", ""]
        for o in res.outcomes
    ]
    tag = "selected" if res.selected is not None else "expected"
    q1, q2 = res.selected if res.selected is not None else ("", "")
    p = res.selection_probability if res.selected is not None else None
    rows.append(
        [
            tag,
            qty(q1) if q1 != "" else "",
            qty(q2) if q2 != "" else "",
            prob(p) if p is not None else "",
            money(res.profits[0]),
            money(res.profits[1]),
            money(res.cs),
            money(res.welfare),
        ]
    )
    return _csv(header, rows)


def render_scenario(res: ScenarioResult, fmt: str, show_trace: bool = False) -> str:
    if fmt == "json":
        return to_json(res.to_dict())
    if fmt == "csv":
        return scenario_csv(res)
    return scenario_text(res, show_trace)


COMPARE_HEADER = [
    "Classical Output",
    "Classical Profit (Firm)",
    "Classical Consumer Surplus",
    "Quantum Output",
    "Quantum Profit (Firm)",
    "Quantum Consumer Surplus",
    "Verdict",
]


def render_comparison(row: ComparisonRow, fmt: str) -> str:
    if fmt == "json":
        return to_json(row.to_dict())
    cells = [
        pair(row.classical_output),
        pair(row.classical_profits, money),
        pair(row.classical_cs_split, money),
        pair(row.quantum_output),
        pair(row.quantum_profits, money),
        pair(row.quantum_cs_split, money),
        row.verdict.value,
    ]
    if fmt == "csv":
        return _csv(COMPARE_HEADER, [cells])
    lines = [f"{h}: {c}" for h, c in zip(COMPARE_HEADER, cells)]
    lines.insert(
        6, f"Total Consumer Surplus: {money(row.classical_cs)} -> {money(row.quantum_cs)}"
    )
    return "\n".join(lines) + "\n"


def render_mortgage(payment: float, total: float, fmt: str) -> str:
    if fmt == "json":
        return to_json({"payment": float(money_fixed(payment)), "total": float(money_fixed(total))})
    if fmt == "csv":
        return _csv(["payment", "total"], [[money_fixed(payment), money_fixed(total)]])
    return f"payment={money_fixed(payment)} total={money_fixed(total)}\n"
