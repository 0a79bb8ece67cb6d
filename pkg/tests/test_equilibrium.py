import json
from importlib import resources

import numpy as np
import pytest

import junglesim as js
from junglesim.equilibrium import AI_ID, FREE_POOL_ID
from junglesim.scenario_io import scenario_from_json


def golden(name):
    with resources.files("junglesim.golden").joinpath(name).open("r") as fh:
        return scenario_from_json(json.load(fh))


def three_humans(caps=(2.0, 0.5, 1.5), endowments=(1.0, 1.0, 1.0), ai=None, pool=0.0):
    agents = tuple(
        js.AgentSpec(i, s, e, js.capped_linear(cap))
        for i, (s, e, cap) in enumerate(zip((0.2, 0.5, 0.8), endowments, caps))
    )
    return js.Scenario(agents=agents, ai=ai, free_pool=pool)


def test_worked_example_strongest_takes_from_weakest():
    res = js.solve_jungle_equilibrium(three_humans())
    h = res.allocation.holdings
    assert h[0] == pytest.approx(0.5)
    assert h[1] == pytest.approx(1.0)
    assert h[2] == pytest.approx(1.5)
    assert res.certified
    # exactly one seizure: half of the weakest agent's holding
    assert len(res.allocation.appropriations) == 1
    t = res.allocation.appropriations[0]
    assert (t.taker, t.victim) == (2, 0)
    assert t.amount == pytest.approx(0.5)
    assert t.fraction == pytest.approx(0.5)


def test_strictly_increasing_ai_takes_everything():
    scenario = golden("prop1_strong_ai.json")
    res = js.solve_jungle_equilibrium(scenario)
    assert res.allocation.holdings[AI_ID] == pytest.approx(3.0)
    assert all(
        res.allocation.holdings[a.id] == pytest.approx(0.0)
        for a in scenario.agents
    )


def test_satiated_ai_leaves_a_human_sub_equilibrium():
    res = js.solve_jungle_equilibrium(golden("ai_capped_sub_equilibrium.json"))
    h = res.allocation.holdings
    assert h[AI_ID] == pytest.approx(1.0)
    assert (h[0], h[1], h[2]) == (pytest.approx(0.0), pytest.approx(0.5), pytest.approx(1.5))
    assert res.certified


def test_transfer_fractions_lie_in_unit_interval():
    res = js.solve_jungle_equilibrium(golden("prop1_strong_ai.json"))
    for t in res.allocation.appropriations:
        assert 0.0 < t.fraction <= 1.0
        assert t.amount > 0.0


def test_deviation_found_at_endowments():
    scenario = three_humans()
    alloc = js.Allocation(
        holdings={0: 1.0, 1: 1.0, 2: 1.0, FREE_POOL_ID: 0.0}, appropriations=[]
    )
    assert js.find_profitable_deviation(scenario, alloc) == (2, 0)


def test_no_deviation_when_all_satiated():
    scenario = three_humans(caps=(0.5, 0.5, 0.5))
    alloc = js.Allocation(
        holdings={0: 1.0, 1: 1.0, 2: 1.0, FREE_POOL_ID: 0.0}, appropriations=[]
    )
    assert js.find_profitable_deviation(scenario, alloc) is None


def test_solver_output_is_always_deviation_free():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 13))
        strengths = np.sort(rng.uniform(0.0, 1.0, size=n))
        while len(set(strengths)) < n:
            strengths = np.sort(rng.uniform(0.0, 1.0, size=n))
        agents = tuple(
            js.AgentSpec(i, float(strengths[i]), float(rng.uniform(0, 2)),
                         js.capped_linear(float(rng.uniform(0.1, 3.0))))
            for i in range(n)
        )
        ai = None
        if rng.random() < 0.5:
            ai = js.AISpec(utility=js.linear(1.0), strength=float(rng.uniform(1.01, 2.0)))
        scenario = js.Scenario(agents=agents, ai=ai, free_pool=float(rng.uniform(0, 1)))
        res = js.solve_jungle_equilibrium(scenario)
        assert js.find_profitable_deviation(scenario, res.allocation) is None
        assert res.certified


def test_feasibility_totals_match_stock():
    rng = np.random.default_rng(11)
    for _ in range(30):
        scenario = js.Scenario(
            endowment=js.linear(float(rng.uniform(0, 2)), float(rng.uniform(0, 1))),
            human_utility=js.capped_linear(float(rng.uniform(0.05, 0.5))),
            ai=js.AISpec(utility=js.log(1.0), strength=1.5),
            free_pool=float(rng.uniform(0, 2)),
            grid_n=int(rng.integers(2, 60)),
            tolerances=js.Tolerances(dy=0.5),
        )
        res = js.solve_jungle_equilibrium(scenario)
        x_total = scenario.total_resources()
        assert res.allocation.total() == pytest.approx(x_total, rel=1e-9)


def test_relabeling_ids_preserves_holdings_by_strength():
    base = three_humans()
    relabeled = js.Scenario(agents=tuple(
        js.AgentSpec(id=a.id + 40, strength=a.strength, endowment=a.endowment,
                     utility=a.utility)
        for a in base.agents
    ))
    r1 = js.solve_jungle_equilibrium(base)
    r2 = js.solve_jungle_equilibrium(relabeled)
    by_strength_1 = {a.strength: r1.allocation.holdings[a.id] for a in base.agents}
    by_strength_2 = {a.strength: r2.allocation.holdings[a.id] for a in relabeled.agents}
    assert by_strength_1 == by_strength_2


def test_strength_tie_with_ai_is_rejected():
    scenario = three_humans(ai=js.AISpec(utility=js.linear(1.0), strength=0.5))
    with pytest.raises(js.ScenarioError, match="tie"):
        js.solve_jungle_equilibrium(scenario)


def test_fresh_ai_claims_only_the_free_pool():
    # a strength-0 AI outranks nobody but the unheld pool is fair game
    scenario = three_humans(
        caps=(0.5, 0.5, 0.5),
        ai=js.AISpec(utility=js.linear(1.0), strength=0.0),
        pool=2.0,
    )
    res = js.solve_jungle_equilibrium(scenario)
    h = res.allocation.holdings
    assert h[AI_ID] == pytest.approx(2.0)  # humans were already satiated
    assert h[0] == h[1] == h[2] == pytest.approx(1.0)
    assert res.certified


def test_prop1_premise_failures():
    weak = three_humans(ai=js.AISpec(utility=js.linear(1.0), strength=0.55))
    report = js.check_prop1(weak)
    assert not report.premises_hold

    # marginal appetite dies before the full stock: premise (ii) fails
    sated = three_humans(ai=js.AISpec(utility=js.capped_linear(1.5), strength=2.0))
    report = js.check_prop1(sated)
    assert not report.premises_hold

    strong = golden("prop1_strong_ai.json")
    report = js.check_prop1(strong)
    assert report.premises_hold and report.conclusion_holds


def test_generated_grid_equilibrium_totals():
    scenario = golden("uniform_quadcost.json")
    res = js.solve_jungle_equilibrium(scenario)
    assert res.allocation.total() == pytest.approx(10.0, rel=1e-9)
    assert res.allocation.holdings[AI_ID] == pytest.approx(10.0, rel=1e-9)
    assert res.iterations == scenario.grid_n + 1
