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


from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decoyforge.generators import GridSpec, gen_grid, gen_knapsack, reference_grid_spec
from decoyforge.model import Alteration, CostModel, Fsc, Pomdp, Scenario
from decoyforge.verifier import (
    NonConvergence,
    backward_reachable,
    build_choice_matrix,
    build_product,
    exact_reach_probability,
    path_probability,
    reach_probability,
    simulate,
    verify,
)

from .conftest import (
    GRID5_GOAL,
    GRID5_HAZARD,
    GRID5_O1_NORTH,
    GRID5_TWO_CHANGES,
    KNAPSACK_EXAMPLE,
)
from .strategies import scenarios_with_alteration


def _single_state(decoy=()):
    return Scenario(
        pomdp=Pomdp(
            states=("s",), actions=("a",), transition={("s", "a"): {"s": 1.0}},
            initial_state="s", observations=("o",), obs_of={"s": "o"}),
        fsc=Fsc(nodes=("n",), initial_node="n", action_of={("n", "o"): "a"},
                next_node={("n", "o"): "n"}),
        cost_model=CostModel(cost={("o", "o"): 0}, budget=0),
        decoy=decoy,
    )


def test_product_sizes(grid5, knapsack):
    assert build_product(grid5, grid5.identity()).size == 75
    alt = Alteration.from_literal(knapsack.scenario.observations, "o1->oclub")
    assert build_product(knapsack.scenario, alt).size == 27


def test_single_state_self_loop():
    chain = build_product(_single_state(), Alteration({"o": "o"}))
    assert chain.size == 1
    assert chain.transition.toarray().tolist() == [[1.0]]
    assert reach_probability(chain).value == 0.0


def test_start_in_decoy():
    scenario = _single_state(decoy=("s",))
    assert verify(scenario, scenario.identity()).probability == 1.0
    assert simulate(scenario, scenario.identity(), episodes=10).estimate == 1.0


def test_product_rows_stochastic(grid5):
    chain = build_product(grid5, Alteration.from_literal(grid5.observations, "o1->o3"))
    np.testing.assert_allclose(
        np.asarray(chain.transition.sum(axis=1)).ravel(), 1.0)
    assert chain.pair(chain.q0) == ("x0y0", "n0")
    assert chain.index("x0y0", "n0") == chain.q0


def test_grid_baseline(grid5):
    hazard = verify(grid5, grid5.identity())
    assert hazard.probability == pytest.approx(GRID5_HAZARD, abs=1e-6)
    assert hazard.cost == 0
    assert hazard.within_budget
    assert hazard.method == "direct"
    goal = verify(grid5.with_decoy(["x4y4"]), grid5.identity())
    assert goal.probability == pytest.approx(GRID5_GOAL, abs=1e-6)
    assert hazard.probability + goal.probability == pytest.approx(1.0, abs=1e-6)


def test_grid_alterations(grid5):
    north = verify(grid5, Alteration.from_literal(grid5.observations, "o1->o3"))
    assert north.probability == pytest.approx(GRID5_O1_NORTH, abs=1e-6)
    assert north.probability == pytest.approx(0.720, abs=0.005)
    assert north.cost == 1
    assert not north.within_budget
    two = verify(grid5, Alteration.from_literal(grid5.observations, "o1->o5;o2->o0"))
    assert two.probability == pytest.approx(GRID5_TWO_CHANGES, abs=1e-6)


def test_iterative_matches_direct(grid5):
    chain = build_product(grid5, Alteration.from_literal(grid5.observations, "o1->o3"))
    direct = reach_probability(chain, method="direct")
    iterative = reach_probability(chain, method="iterative")
    assert iterative.method == "iterative"
    assert iterative.iterations > 0
    assert iterative.residual <= 1e-12
    np.testing.assert_allclose(iterative.z, direct.z, atol=1e-10)


def test_size_selects_method(grid5):
    result = verify(grid5, grid5.identity(), direct_max_states=10)
    assert result.method == "iterative"
    assert result.probability == pytest.approx(GRID5_HAZARD, abs=1e-6)


def test_non_convergence(grid5):
    chain = build_product(grid5, grid5.identity())
    with pytest.raises(NonConvergence) as e:
        reach_probability(chain, method="iterative", max_iter=1)
    assert e.value.iterations == 1
    assert e.value.residual > 1e-12


def test_unknown_method(grid5):
    with pytest.raises(ValueError):
        reach_probability(build_product(grid5, grid5.identity()), method="magic")


def test_knapsack_value(knapsack):
    alt = Alteration.from_changes(
        knapsack.scenario.observations, {"o1": "oclub", "o2": "oclub", "o4": "oclub"})
    result = verify(knapsack.scenario, alt)
    assert result.probability == pytest.approx(0.25, abs=1e-12)
    assert result.cost == 7
    assert result.within_budget


def test_forbidden_pair(knapsack):
    alt = Alteration.from_changes(knapsack.scenario.observations, {"oclub": "o0"})
    result = verify(knapsack.scenario, alt)
    assert result.cost is None
    assert not result.within_budget


def test_exact_knapsack():
    generated = gen_knapsack(KNAPSACK_EXAMPLE, exact=True)
    alt = Alteration.from_changes(
        generated.scenario.observations, {"o1": "oclub", "o2": "oclub", "o4": "oclub"})
    assert exact_reach_probability(generated.scenario, alt) == Fraction(1, 4)
    assert exact_reach_probability(
        generated.scenario, generated.scenario.identity()) == 0


def test_four_step_path():
    grid = gen_grid(GridSpec(), exact=True)
    alt = Alteration.from_literal(grid.observations, "o1->o3")
    path = ["x0y0", "x1y0", "x2y0", "x2y1", "x2y2"]
    assert path_probability(grid, alt, path) == Fraction(4096, 10000)
    assert path_probability(grid, alt, ["x1y0"]) == 0


def test_simulation_agrees(grid5):
    for alt in (grid5.identity(), Alteration.from_literal(grid5.observations, "o1->o3")):
        exact = verify(grid5, alt).probability
        sim = simulate(grid5, alt, episodes=100_000, horizon=400, seed=1)
        assert sim.episodes == 100_000
        assert sim.horizon == 400
        assert abs(sim.estimate - exact) <= 3 * sim.half_width_95


def test_simulation_reproducible(grid5):
    alt = Alteration.from_literal(grid5.observations, "o1->o3")
    first = simulate(grid5, alt, episodes=1, seed=7)
    assert first.estimate in (0.0, 1.0)
    assert simulate(grid5, alt, episodes=1, seed=7) == first


def test_simulation_thread_independent(grid5):
    alt = Alteration.from_literal(grid5.observations, "o1->o3")
    one = simulate(grid5, alt, episodes=25_000, seed=3, threads=1)
    four = simulate(grid5, alt, episodes=25_000, seed=3, threads=4)
    assert one == four


def test_simulation_arguments(grid5):
    with pytest.raises(ValueError):
        simulate(grid5, grid5.identity(), episodes=0)
    with pytest.raises(ValueError):
        simulate(grid5, grid5.identity(), horizon=0)


def test_choice_matrix(toy):
    choice = build_choice_matrix(toy)
    assert choice.size == 4
    assert choice.matrix.shape == (16, 4)
    # s3 receiving o1 moves with action a.
    row = choice.matrix[3 * 4 + 1].toarray().ravel()
    assert row.tolist() == [0.0, 0.5, 0.5, 0.0]
    everything = choice.union_graph(toy.indexed.permitted)
    assert everything[3].nnz == 2
    nothing = choice.union_graph(np.zeros((4, 4), dtype=bool))
    assert nothing.nnz == 0


@pytest.mark.parametrize("n", [5, 9, 15])
def test_construction_work_bound(n):
    scenario = gen_grid(reference_grid_spec(n))
    ix = scenario.indexed
    chain = build_product(scenario, scenario.identity())
    pairs = ix.num_states * ix.num_nodes
    assert chain.work == pairs + chain.transition.nnz
    assert chain.work <= (
        pairs * len(ix.actions) * ix.num_observations + pairs * pairs)


@settings(max_examples=50, derandomize=True, deadline=None)
@given(st.data())
def test_alteration_locality(data):
    scenario, alt = data.draw(scenarios_with_alteration())
    chain = build_product(scenario, alt)
    start = np.zeros(chain.size, dtype=bool)
    start[chain.q0] = True
    seen = backward_reachable(chain.transition.T.tocsr(), start)
    emitted = {scenario.pomdp.obs_of[chain.pair(q)[0]] for q in np.flatnonzero(seen)}
    mapping = dict(alt.mapping)
    for o in scenario.observations:
        if o not in emitted:
            mapping[o] = data.draw(st.sampled_from([
                o2 for o2 in scenario.observations
                if scenario.cost_model.permitted(o, o2)]))
    assert verify(scenario, Alteration(mapping)).probability == pytest.approx(
        verify(scenario, alt).probability, abs=1e-12)
