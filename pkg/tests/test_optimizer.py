#!/usr/bin/python
# Copyright (C) 2026 The DecoyForge Authors
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston, MA 02110-1301 USA


import dataclasses
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decoyforge.model import Alteration, CostModel, InfeasibleScenario, alteration_cost
from decoyforge.optimizer import (
    BruteForceTooLarge,
    Limits,
    Relaxation,
    SearchNode,
    _finish,
    branch_and_bound,
    brute_force,
    budget_sweep,
    relaxation_bound,
)
from decoyforge.verifier import verify

from .conftest import (
    GRID5_FOUR_CHANGES,
    GRID5_HAZARD,
    GRID5_O1_NORTH,
    GRID5_THREE_CHANGES,
    GRID5_TWO_CHANGES,
)
from .strategies import scenarios


def test_toy(toy):
    result = branch_and_bound(toy)
    assert result.best_alteration.to_literal() == "o3->o1"
    assert result.best_value == pytest.approx(0.5)
    assert result.best_cost == 1
    assert result.status == "optimal"
    assert result.budget == 1
    assert result.bound_at_root >= result.best_value


def test_zero_budget_keeps_identity(grid5):
    result = branch_and_bound(grid5)
    assert result.best_alteration.is_identity()
    assert result.best_value == pytest.approx(GRID5_HAZARD, abs=1e-6)
    assert result.best_cost == 0


def test_knapsack(knapsack):
    result = branch_and_bound(knapsack.scenario)
    assert result.best_alteration.changes() == {
        "o1": "oclub", "o2": "oclub", "o4": "oclub"}
    assert result.best_value == pytest.approx(0.25, abs=1e-12)
    assert result.best_cost == 7
    assert brute_force(knapsack.scenario).best_alteration == result.best_alteration


def test_unreachable_decoy(toy):
    transition = dict(toy.pomdp.transition)
    transition[("s3", "a")] = {"s2": 1.0}
    scenario = dataclasses.replace(
        toy, pomdp=dataclasses.replace(toy.pomdp, transition=transition))
    result = branch_and_bound(scenario)
    assert result.best_value == 0
    assert result.best_alteration.is_identity()
    assert result.bound_at_root == 0


def test_grid_budget_one(grid5):
    result = branch_and_bound(grid5.with_budget(1))
    assert result.best_value == pytest.approx(GRID5_O1_NORTH, abs=1e-6)
    assert result.best_value == pytest.approx(0.720, abs=0.005)
    # o2, o3 and o5 all turn the controller north at equal cost; the
    # smallest id wins the tie.
    assert result.best_alteration.to_literal() == "o1->o2"
    north = verify(grid5, Alteration.from_literal(grid5.observations, "o1->o3"))
    assert north.probability == pytest.approx(result.best_value, abs=1e-12)


def test_grid_budget_two(grid5):
    result = branch_and_bound(grid5.with_budget(2))
    assert result.best_value >= GRID5_TWO_CHANGES - 1e-9
    assert result.best_value == pytest.approx(0.861, abs=0.005)
    assert result.best_cost <= 2


def test_grid_sweep(grid5):
    results = budget_sweep(grid5, [0, 1, 2, 3, 4, 5])
    values = [r.best_value for r in results]
    assert values == sorted(values)
    assert [r.budget for r in results] == [0, 1, 2, 3, 4, 5]
    assert values[0] == pytest.approx(GRID5_HAZARD, abs=1e-6)
    assert values[1] == pytest.approx(GRID5_O1_NORTH, abs=1e-6)
    assert values[2] == pytest.approx(GRID5_TWO_CHANGES, abs=1e-6)
    assert values[3] == pytest.approx(0.862, abs=0.005)
    assert values[3] == pytest.approx(GRID5_THREE_CHANGES, abs=1e-6)
    assert values[4] == pytest.approx(0.864, abs=0.005)
    assert values[4] == pytest.approx(GRID5_FOUR_CHANGES, abs=1e-6)
    # A fifth change buys nothing more.
    assert values[5] == pytest.approx(values[4], abs=1e-9)
    assert all(r.best_cost <= r.budget for r in results)


def test_sweep_requires_ascending(toy):
    with pytest.raises(ValueError):
        budget_sweep(toy, [2, 1])
    with pytest.raises(ValueError):
        budget_sweep(toy, [1], method="milp")


def test_sweep_brute(toy):
    results = budget_sweep(toy, [0, 1, 2], method="brute")
    assert [r.best_value for r in results] == pytest.approx([0, 0.5, 0.5])


def test_deterministic(knapsack):
    first = branch_and_bound(knapsack.scenario)
    second = branch_and_bound(knapsack.scenario)
    assert first.nodes_explored == second.nodes_explored
    assert first.best_alteration == second.best_alteration


def test_node_limit(knapsack):
    result = branch_and_bound(knapsack.scenario, Limits(max_nodes=1))
    assert result.status == "incumbent"
    assert result.best_value <= 0.25 + 1e-12


def test_warm_start(toy):
    alt = Alteration.from_literal(toy.observations, "o3->o1")
    result = branch_and_bound(toy, incumbent=alt)
    assert result.best_alteration == alt


def test_brute_force_guard(toy):
    with pytest.raises(BruteForceTooLarge) as e:
        brute_force(toy, limit=1)
    assert e.value.estimate == 3
    assert e.value.limit == 1


def test_forbidden_initial_identity(toy):
    cost = {k: v for k, v in toy.cost_model.cost.items() if k != ("o0", "o0")}
    scenario = dataclasses.replace(toy, cost_model=CostModel(cost=cost, budget=1))
    with pytest.raises(InfeasibleScenario):
        branch_and_bound(scenario)
    with pytest.raises(InfeasibleScenario):
        brute_force(scenario)


def test_bound_fully_decided(toy):
    node = SearchNode.from_decided(toy, {"o1": "o1", "o2": "o2", "o3": "o1"})
    bound = relaxation_bound(toy, node)
    value = verify(toy, Alteration.from_literal(toy.observations, "o3->o1")).probability
    assert value <= bound <= value + 1e-12
    assert node.bound == bound


def test_bound_at_root_dominates(toy):
    scenario = toy.with_budget(5)
    relaxation = Relaxation(scenario)
    bound = relaxation_bound(scenario, SearchNode(decided={}), relaxation)
    for image in ("o1", "o2", "o3"):
        alt = Alteration.from_changes(scenario.observations, {"o3": image})
        assert verify(scenario, alt).probability <= bound + 1e-12


def test_bound_infeasible_node(toy):
    node = SearchNode.from_decided(toy, {"o3": "o2"})
    assert node.committed_cost == 2
    assert relaxation_bound(toy, node) == 0.0


def test_bound_hopeless_prefix(toy):
    node = SearchNode.from_decided(toy, {"o3": "o3"})
    assert relaxation_bound(toy, node) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=50, derandomize=True, deadline=None)
@given(scenarios())
def test_matches_brute_force(scenario):
    exhaustive = brute_force(scenario)
    searched = branch_and_bound(scenario)
    assert searched.best_value == pytest.approx(exhaustive.best_value, abs=1e-9)
    assert searched.best_cost <= scenario.budget
    assert searched.status == "optimal"


def test_time_limit(grid5):
    result = branch_and_bound(grid5.with_budget(3), Limits(max_seconds=1e-9))
    assert result.status == "incumbent"
    assert result.best_value >= GRID5_HAZARD - 1e-6
    assert result.best_value <= GRID5_THREE_CHANGES + 1e-6
    assert result.best_cost <= 3


def test_sweep_brute_force_limit(toy):
    with pytest.raises(BruteForceTooLarge) as e:
        budget_sweep(toy, [0, 1], method="brute", brute_force_limit=2)
    assert e.value.limit == 2


def test_finish_rejects_over_budget(toy):
    images = toy.indexed.alteration_indices(
        Alteration.from_literal(toy.observations, "o3->o2"))
    with pytest.raises(InfeasibleScenario) as e:
        _finish(toy, images, 0.0, "optimal", 0, 1.0, 0.0)
    assert e.value.code == "over-budget"


def _completions(scenario, decided):
    """Every alteration extending decided that keeps the initial observation."""
    o0 = scenario.pomdp.obs_of[scenario.pomdp.initial_state]
    open_obs = [o for o in scenario.observations if o not in decided and o != o0]
    options = [
        [o2 for o2 in scenario.observations if scenario.cost_model.permitted(o, o2)]
        for o in open_obs
    ]
    for images in itertools.product(*options):
        mapping = dict(decided, **dict(zip(open_obs, images)))
        mapping[o0] = o0
        yield Alteration(mapping)


@settings(max_examples=60, derandomize=True, deadline=None)
@given(st.data())
def test_bound_admissible_below_root(data):
    scenario = data.draw(scenarios(max_states=5, max_nodes=2, max_observations=4))
    o0 = scenario.pomdp.obs_of[scenario.pomdp.initial_state]
    decided = {}
    for o in scenario.observations:
        if o == o0 or not data.draw(st.booleans()):
            continue
        decided[o] = data.draw(st.sampled_from([
            o2 for o2 in scenario.observations
            if scenario.cost_model.permitted(o, o2)]))
    node = SearchNode.from_decided(scenario, decided)
    bound = relaxation_bound(scenario, node)
    best = 0.0
    for alt in _completions(scenario, decided):
        cost = alteration_cost(scenario.cost_model, alt)
        if cost is not None and cost <= scenario.budget:
            best = max(best, verify(scenario, alt).probability)
    assert bound >= best - 1e-9
