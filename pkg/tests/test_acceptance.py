"""Exit criteria, each at its pinned tolerance."""

import math
from pathlib import Path

import numpy as np
import pytest

from qcournot.cli import main
from qcournot.dhoyer import SearchBudget, durr_hoyer_max
from qcournot.game import (
    Verdict,
    classical_scenario,
    compare,
    durr_hoyer_best_response_scenario,
    entangled_scenario,
    grover_joint_scenario,
    default_entangled_state,
)
from qcournot.grover import (
    Oracle,
    Stage,
    apply_oracle,
    closed_form_probability,
    diffusion,
    grover_iterate,
    marked_probability,
    oracle_from_argmax,
)
from qcournot.market import MarketParams, amortized_payment, nash_equilibrium, payoff_table
from qcournot.render import money_fixed, payoff_rows
from qcournot.statevec import (
    JointState,
    ProductSpace,
    StrategySpace,
    expected_profits,
    from_amplitudes,
    measure,
    uniform_state,
)

from test_statevec import chi_square_passes

BASE = MarketParams(100, 1, 10)
GRID4 = StrategySpace((10, 20, 30, 40))
GOLDEN = Path(__file__).parent / "golden" / "payoff_spreadsheet.csv"
# monetary equality for float-derived reference values
MONEY_TOL = 1e-6

pytestmark = pytest.mark.acceptance


@pytest.mark.criterion(1, "Classical Nash (100,1,10) -> q*=(30,30), profits (900,900)")
def test_c01_classical_nash():
    q, p = nash_equilibrium(BASE)
    assert (q, p) == (30, 900)
    res = classical_scenario(BASE)
    assert res.selected == (30, 30)
    assert res.profits == (900, 900)


@pytest.mark.criterion(2, "Entangled expectations (1050,750); cases (900,900), (1200,600)")
def test_c02_entangled():
    e1, e2 = expected_profits(default_entangled_state(), BASE)
    assert e1 == pytest.approx(1050, abs=MONEY_TOL)
    assert e2 == pytest.approx(750, abs=MONEY_TOL)
    space = StrategySpace((20, 30, 40))
    assert expected_profits(JointState.pure(space, space, 30, 30), BASE) == (900, 900)
    assert expected_profits(JointState.pure(space, space, 40, 20), BASE) == (1200, 600)
    assert entangled_scenario(BASE, default_entangled_state()).profits == (
        pytest.approx(1050, abs=MONEY_TOL), pytest.approx(750, abs=MONEY_TOL)
    )


@pytest.mark.criterion(3, "8-option diffusion: mean 0.3093, unmarked 0.2651, marked 0.9721 (+-5e-5)")
def test_c03_eight_option_diffusion():
    post = apply_oracle(uniform_state(8), Oracle(8, frozenset({3})))
    mean = float(post.amplitudes.mean())
    out = diffusion(post).amplitudes
    print(f"computed mean={mean:.6f} unmarked={out[0]:.6f} marked={out[3]:.6f}")
    assert mean == pytest.approx(0.3093, abs=5e-5)
    assert out[0] == pytest.approx(0.2651, abs=5e-5)
    assert out[3] == pytest.approx(0.9721, abs=5e-5)


@pytest.mark.criterion(4, "4x4 joint-grid ladder 0.6875/0.1875 then 0.953125/0.078125, p=0.908447")
def test_c04_amplitude_ladder():
    res = grover_joint_scenario(BASE, GRID4, 2, "symmetric", 7)
    space = ProductSpace(GRID4, GRID4)
    m = space.labels.index((20.0, 20.0))
    trace = res.trace
    r1 = trace.stage(Stage.POST_DIFFUSION, 1)
    r2 = trace.stage(Stage.POST_DIFFUSION, 2)
    assert r1[m] == 0.6875 and np.all(np.delete(r1, m) == 0.1875)
    assert r2[m] == 0.953125 and np.all(np.delete(r2, m) == 0.078125)
    assert res.detail["marked_probability"] == 0.953125**2 == 0.908447265625


@pytest.mark.criterion(5, "Payoff spreadsheet golden file: 16 rows byte-match (paper CS convention)")
def test_c05_golden_table():
    table = payoff_table(BASE, GRID4, GRID4)
    header, rows = payoff_rows(table)
    golden = [line.split(",") for line in GOLDEN.read_text().splitlines()]
    econ_cols = [golden[0].index(h) for h in header]
    assert len(rows) == len(golden) - 1 == 16
    for mine, theirs in zip(rows, golden[1:]):
        assert mine == [theirs[i] for i in econ_cols]


@pytest.mark.criterion(6, "Best reply profits [600,1000,1200,1200]; Durr-Hoyer from q1=20 ends in 2 rounds at 1200")
def test_c06_best_reply():
    res = durr_hoyer_best_response_scenario(BASE, GRID4, 20, 1, initial_index=1)
    assert res.detail["profit_vector"] == [600, 1000, 1200, 1200]
    trace = res.trace
    assert trace.rounds[0].best_index == 1 and trace.rounds[0].best_value == 1000
    assert len(trace.rounds) == 2 and trace.natural
    assert res.detail["best_value"] == 1200


@pytest.mark.criterion(7, "Pareto comparison: (900,900)->(1000,1000), CS 1200->1200, QuantumParetoImproves")
def test_c07_pareto():
    quantum = grover_joint_scenario(BASE, GRID4, 2, "symmetric", 7)
    assert quantum.selected == (20, 20)
    row = compare(classical_scenario(BASE), quantum)
    assert row.classical_profits == (900, 900) and row.quantum_profits == (1000, 1000)
    assert row.classical_cs == 1200 and row.quantum_cs == 1200
    assert row.verdict is Verdict.QUANTUM_PARETO_IMPROVES


@pytest.mark.criterion(8, "Mortgage (200000, 5%, 360) -> 1073.64 / 386511.60 at 2-decimal rounding")
def test_c08_mortgage():
    payment, total = amortized_payment(200000, 0.05, 360)
    print(f"computed payment={payment!r} total={total!r}")
    assert money_fixed(payment) == "1073.64"
    assert money_fixed(total) == "386511.60"


@pytest.mark.criterion(9, "Grover closed form within 1e-9, N 2..64, m 1..N, k 0..10")
def test_c09_grover_closed_form():
    worst = 0.0
    for n in range(2, 65):
        start = uniform_state(n)
        for m in range(1, n + 1):
            oracle = Oracle(n, frozenset(range(m)))
            state = start
            for k in range(11):
                if k:
                    state, _ = grover_iterate(state, oracle, 1)
                err = abs(marked_probability(state, oracle) - closed_form_probability(n, m, k))
                worst = max(worst, err)
    print(f"worst deviation {worst:.3e}")
    assert worst < 1e-9


@pytest.mark.criterion(10, "Durr-Hoyer: 1000 instances x 10 seeds, natural runs return the true max")
def test_c10_durr_hoyer_optimality():
    gen = np.random.default_rng(20250427)
    failures = natural = 0
    for _ in range(1000):
        n = int(gen.integers(1, 65))
        values = gen.integers(-1000, 1000, size=n).astype(float)
        truth = max(values.tolist())  # brute force
        for seed in range(10):
            idx, value, trace = durr_hoyer_max(values, seed, SearchBudget())
            if trace.natural:
                natural += 1
                failures += value != truth or values[idx] != truth
    print(f"{natural} naturally terminated runs, {failures} failures")
    assert natural > 0 and failures == 0


@pytest.mark.criterion(11, "Measurement chi-square, 1e5 draws x 20 random states, alpha=0.001")
def test_c11_measurement_chi_square():
    gen = np.random.default_rng(31337)
    passed = 0
    for i in range(20):
        n = int(gen.integers(2, 33))
        v = gen.normal(size=n)
        state = from_amplitudes(StrategySpace.indices(n), v / np.linalg.norm(v))
        draws = measure(state, 500 + i, size=100_000)
        passed += chi_square_passes(state.probabilities(), draws, alpha=0.001)
    assert passed == 20


@pytest.mark.criterion(12, "Determinism: same config + seed gives byte-identical output")
def test_c12_determinism(tmp_path):
    runs = [
        ["classical"],
        ["entangled", "--format", "json"],
        ["grover", "--seed", "99", "--format", "json"],
        ["dhoyer", "--seed", "42", "--trace", "--schedule", "randomized"],
        ["table", "--attach-grover", "--format", "csv"],
        ["compare", "--seed", "8"],
        ["mortgage"],
    ]
    for argv in runs:
        outs = []
        for rep in range(2):
            dest = tmp_path / f"{argv[0]}-{rep}.out"
            assert main([*argv, "--out", str(dest)]) == 0
            outs.append(dest.read_bytes())
        assert outs[0] == outs[1], argv
