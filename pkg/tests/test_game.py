import math

import numpy as np
import pytest

from qcournot.errors import DomainError, NegativePriceWarning
from qcournot.game import (
    OracleRestriction,
    ScenarioResult,
    Verdict,
    classical_scenario,
    compare,
    durr_hoyer_best_response_scenario,
    entangled_scenario,
    grover_joint_scenario,
    default_entangled_state,
)
from qcournot.grover import closed_form_probability
from qcournot.market import CsConvention, MarketParams, payoff_row
from qcournot.statevec import JointState, StrategySpace

BASE = MarketParams()
GRID4 = [10, 20, 30, 40]
S3 = StrategySpace((20, 30, 40))


def assert_consistent(res: ScenarioResult):
    if res.selected is not None:
        row = payoff_row(res.params, *res.selected, res.conv)
        assert res.profits == (pytest.approx(row.firm1.profit, abs=1e-9),
                               pytest.approx(row.firm2.profit, abs=1e-9))
        assert res.cs == pytest.approx(row.cs, abs=1e-9)
        assert res.welfare == pytest.approx(row.welfare, abs=1e-9)


def test_classical():
    res = classical_scenario(BASE)
    assert res.selected == (pytest.approx(30), pytest.approx(30))
    assert res.profits == (pytest.approx(900), pytest.approx(900))
    assert (res.cs, res.welfare) == (pytest.approx(1200), pytest.approx(3000))
    assert_consistent(res)


def test_classical_other_params():
    res = classical_scenario(MarketParams(120, 2, 30))
    assert res.selected == (15, 15)
    assert_consistent(res)
    tiny = classical_scenario(MarketParams(100, 1, 100 - 1e-9))
    assert tiny.selected[0] < 1e-9


def test_entangled_default_state():
    res = entangled_scenario(BASE, default_entangled_state())
    assert res.profits == (pytest.approx(1050), pytest.approx(750))
    # both realizations sit at Q=60
    assert res.cs == pytest.approx(1200)
    assert res.selected is None


def test_entangled_pure_matches_classical():
    pure = entangled_scenario(BASE, JointState.pure(S3, S3, 30, 30))
    classical = classical_scenario(BASE)
    assert pure.profits == (pytest.approx(900), pytest.approx(900))
    assert compare(classical, pure).verdict is Verdict.EQUIVALENT


def test_entangled_sign_invariance():
    a = 1 / math.sqrt(2)
    flipped = JointState.from_outputs(S3, S3, [(30, 30, a), (40, 20, -a)])
    r1 = entangled_scenario(BASE, default_entangled_state())
    r2 = entangled_scenario(BASE, flipped)
    assert r1.profits == r2.profits and r1.cs == r2.cs
    assert [o.probability for o in r1.outcomes] == [o.probability for o in r2.outcomes]


def test_entangled_is_term_weighted():
    grid = StrategySpace(GRID4)
    joint = JointState(grid, grid, ((0, 1, 0.6), (2, 3, -0.8)))
    res = entangled_scenario(BASE, joint, CsConvention.STANDARD)
    rows = [payoff_row(BASE, 10, 20, "standard"), payoff_row(BASE, 30, 40, "standard")]
    p = [0.36, 0.64]
    assert res.cs == pytest.approx(sum(pi * r.cs for pi, r in zip(p, rows)), abs=1e-9)
    assert res.welfare == pytest.approx(sum(pi * r.welfare for pi, r in zip(p, rows)), abs=1e-9)


def test_grover_joint_default():
    res = grover_joint_scenario(BASE, GRID4, 2, OracleRestriction.SYMMETRIC, 7)
    assert res.selected == (20, 20)
    assert res.selection_probability == pytest.approx(0.908447, abs=1e-6)
    assert res.profits == (1000, 1000) and res.cs == 1200 and res.welfare == 3200
    assert_consistent(res)


def test_grover_joint_unrestricted_closed_form():
    res = grover_joint_scenario(BASE, GRID4, 2, OracleRestriction.NONE, 3)
    assert len(res.detail["marked"]) == 7
    assert res.detail["marked_probability"] == pytest.approx(
        closed_form_probability(16, 7, 2), abs=1e-9
    )


def test_grover_joint_trivial_and_k0():
    res = grover_joint_scenario(BASE, [30], 0, "symmetric", 0)
    assert res.selected == (30, 30) and res.selection_probability == 1.0
    flat = grover_joint_scenario(BASE, GRID4, 0, "symmetric", 0)
    assert np.allclose([o.probability for o in flat.outcomes], 1 / 16)


def test_dhoyer_scenario_best_reply():
    res = durr_hoyer_best_response_scenario(BASE, GRID4, 20, 1)
    assert res.detail["profit_vector"] == [600, 1000, 1200, 1200]
    assert res.detail["best_value"] == 1200 and res.selected[0] in (30, 40)
    assert_consistent(res)


def test_dhoyer_scenario_trivial_and_fine_grid():
    assert durr_hoyer_best_response_scenario(BASE, [30], 55, 0).selected[0] == 30
    grid = list(range(0, 91))
    profits = [(100 - q - 20 - 10) * q for q in grid]
    brute = grid[int(np.argmax(profits))]
    assert brute == 35
    with pytest.warns(NegativePriceWarning):  # q1 > 70 drives Q past the intercept
        res = durr_hoyer_best_response_scenario(BASE, grid, 20, 4)
    assert res.selected[0] == brute


def test_compare_pareto():
    row = compare(classical_scenario(BASE), grover_joint_scenario(BASE, GRID4, 2, "symmetric", 7))
    assert row.verdict is Verdict.QUANTUM_PARETO_IMPROVES
    assert row.classical_cs_split == (600, 600) and row.quantum_cs_split == (600, 600)


def test_compare_incomparable_and_antisymmetry():
    classical = classical_scenario(BASE)
    case2 = entangled_scenario(BASE, JointState.pure(S3, S3, 40, 20))
    assert compare(classical, case2).verdict is Verdict.INCOMPARABLE
    grover = grover_joint_scenario(BASE, GRID4, 2, "symmetric", 7)
    for a, b in [(classical, grover), (classical, case2), (classical, classical)]:
        assert compare(b, a).verdict is compare(a, b).verdict.swapped()


def test_compare_guards():
    with pytest.raises(DomainError):
        compare(classical_scenario(BASE), classical_scenario(MarketParams(120, 2, 30)))
    with pytest.raises(DomainError):
        compare(classical_scenario(BASE), classical_scenario(BASE, CsConvention.STANDARD))


@pytest.mark.parametrize("make", [
    lambda: classical_scenario(BASE),
    lambda: entangled_scenario(BASE, default_entangled_state()),
    lambda: grover_joint_scenario(BASE, GRID4, 2, "symmetric", 7),
    lambda: durr_hoyer_best_response_scenario(BASE, GRID4, 20, 1),
])
def test_result_dict_round_trip(make):
    res = make()
    assert ScenarioResult.from_dict(res.to_dict()) == res
