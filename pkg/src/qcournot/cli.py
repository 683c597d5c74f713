"""Command-line driver.

Exit codes: 0 success, 2 configuration error, 3 domain error while running.
Results go to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from qcournot import __version__, game, market, render
from qcournot.config import ScenarioConfig, load_config
from qcournot.errors import DomainError
from qcournot.grover import grover_iterate
from qcournot.statevec import ProductSpace, uniform_state

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3


def _grid(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _terms(text: str) -> list[dict[str, float]]:
    out = []
    for chunk in text.split(","):
        parts = chunk.strip().split(":")
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError(f"term {chunk!r} is not q1:q2 or q1:q2:amplitude")
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise argparse.ArgumentTypeError(f"term {chunk!r} has a non-numeric part")
        term = {"q1": nums[0], "q2": nums[1]}
        if len(nums) == 3:
            term["amplitude"] = nums[2]
        out.append(term)
    return out


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common")
    g.add_argument("--config", type=Path, help="JSON scenario config; flags override it")
    g.add_argument("--seed", type=int)
    g.add_argument("--format", choices=["table", "csv", "json"])
    g.add_argument("--cs-convention", choices=["paper", "standard"])
    g.add_argument("--out", type=Path, help="write the rendering here instead of stdout")
    m = p.add_argument_group("market")
    m.add_argument("--a", type=float, help="demand intercept")
    m.add_argument("--b", type=float, help="demand slope")
    m.add_argument("--c", type=float, help="marginal cost")
    s = p.add_argument_group("scenario")
    s.add_argument("--grid", type=_grid, help="output levels, e.g. 10,20,30,40")
    s.add_argument("--iterations", type=int, help="Grover iterations")
    s.add_argument("--restriction", choices=["symmetric", "none"])
    s.add_argument("--opponent", type=float, help="fixed output of firm 2")
    s.add_argument("--initial-index", type=int, help="first Durr-Hoyer guess (grid index)")
    s.add_argument("--max-rounds", type=int)
    s.add_argument("--schedule", choices=["exact", "randomized"])
    s.add_argument("--terms", type=_terms, help="entangled terms q1:q2[:amp],...")
    s.add_argument("--paper-rounded", action="store_true", default=None,
                   help="accept 3-decimal amplitudes such as 0.707")
    s.add_argument("--trace", action="store_true", default=None, help="print the search trace")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="qcournot", description="Quantum-inspired Cournot duopoly scenarios."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classical", parents=[common], help="Cournot-Nash equilibrium")
    sub.add_parser("entangled", parents=[common], help="expected profits of a joint state")
    sub.add_parser("grover", parents=[common], help="Grover search over output pairs")
    sub.add_parser("dhoyer", parents=[common], help="Durr-Hoyer best reply of firm 1")
    t = sub.add_parser("table", parents=[common], help="payoff spreadsheet")
    t.add_argument("--attach-grover", action="store_true", default=None,
                   help="append the Grover amplitude columns")
    c = sub.add_parser("compare", parents=[common], help="Pareto comparison")
    c.add_argument("--quantum", choices=["grover", "entangled", "dhoyer", "classical"],
                   help="scenario on the quantum side (default grover)")
    mo = sub.add_parser("mortgage", parents=[common], help="amortized loan payment")
    mo.add_argument("--principal", type=float)
    mo.add_argument("--rate", type=float, help="annual rate, e.g. 0.05")
    mo.add_argument("--months", type=int)
    return parser


_FLAT = {
    "seed": "seed",
    "format": "format",
    "cs_convention": "cs_convention",
    "grid": "grid",
    "iterations": "iterations",
    "restriction": "restriction",
    "opponent": "opponent_q",
    "initial_index": "initial_index",
    "terms": "terms",
    "paper_rounded": "paper_rounded",
    "trace": "trace",
    "attach_grover": "attach_grover",
    "quantum": "quantum",
    "principal": "principal",
    "rate": "rate",
    "months": "months",
}


def overrides_from_args(args: argparse.Namespace) -> dict[str, Any]:
    ns = vars(args)
    out: dict[str, Any] = {}
    for flag, key in _FLAT.items():
        if ns.get(flag) is not None:
            out[key] = ns[flag]
    mkt = {k: ns[k] for k in ("a", "b", "c") if ns.get(k) is not None}
    if mkt:
        out["market"] = mkt
    budget = {}
    if ns.get("max_rounds") is not None:
        budget["max_rounds"] = ns["max_rounds"]
    if ns.get("schedule") is not None:
        budget["schedule"] = ns["schedule"]
    if budget:
        out["budget"] = budget
    return out


def run_scenario(cfg: ScenarioConfig, name: str) -> game.ScenarioResult:
    params = cfg.market.params()
    conv = cfg.cs_convention
    if name == "classical":
        return game.classical_scenario(params, conv)
    if name == "entangled":
        return game.entangled_scenario(params, cfg.joint_state(), conv)
    if name == "grover":
        return game.grover_joint_scenario(
            params, cfg.strategy_space(), cfg.iterations, cfg.restriction, cfg.seed, conv
        )
    if name == "dhoyer":
        return game.durr_hoyer_best_response_scenario(
            params,
            cfg.strategy_space(),
            cfg.opponent_q,
            cfg.seed,
            cfg.budget.budget(),
            conv,
            cfg.initial_index,
        )
    raise DomainError(f"unknown scenario {name!r}")


def cmd_scenario(cfg: ScenarioConfig, name: str) -> str:
    res = run_scenario(cfg, name)
    return render.render_scenario(res, cfg.format, cfg.trace)


def cmd_table(cfg: ScenarioConfig) -> str:
    params = cfg.market.params()
    space = cfg.strategy_space()
    table = market.payoff_table(params, space, space, cfg.cs_convention)
    trace = oracle = None
    if cfg.attach_grover:
        joint = ProductSpace(space, space)
        oracle = game.joint_oracle(table, joint, cfg.restriction)
        _, trace = grover_iterate(uniform_state(joint), oracle, cfg.iterations)
    return render.render_payoff_table(table, cfg.format, trace, oracle)


def cmd_compare(cfg: ScenarioConfig) -> str:
    classical = run_scenario(cfg, "classical")
    quantum_cfg = cfg
    if cfg.quantum_overrides:
        merged = {**cfg.model_dump(mode="json"), **cfg.quantum_overrides}
        quantum_cfg = ScenarioConfig.model_validate(merged)
    quantum = run_scenario(quantum_cfg, cfg.quantum)
    return render.render_comparison(game.compare(classical, quantum), cfg.format)


def cmd_mortgage(cfg: ScenarioConfig) -> str:
    payment, total = market.amortized_payment(cfg.principal, cfg.rate, cfg.months)
    return render.render_mortgage(payment, total, cfg.format)


def _describe(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "config"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, overrides_from_args(args))
    except ValidationError as exc:
        print(f"qcournot: invalid configuration: {_describe(exc)}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"qcournot: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "table":
            text = cmd_table(cfg)
        elif args.command == "compare":
            text = cmd_compare(cfg)
        elif args.command == "mortgage":
            text = cmd_mortgage(cfg)
        else:
            text = cmd_scenario(cfg, args.command)
    except ValidationError as exc:
        print(f"qcournot: invalid configuration: {_describe(exc)}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"qcournot: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
