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

import pytest

from decoyforge.generators import GridSpec, KnapsackInstance, gen_grid, gen_knapsack
from decoyforge.model import CostModel, Fsc, Pomdp, Scenario
from decoyforge.scenario import parse_scenario

# s0 always moves on to s3. Seen as itself, s3 sends the robot to the safe
# sink s2; received as o1 it gambles on the decoy s1.
TOY_DOCUMENT = """\
states: "s0"
states: "s1"
states: "s2"
states: "s3"
actions: "a"
actions: "b"
observations: "o0"
observations: "o1"
observations: "o2"
observations: "o3"
initial_state: "s0"
obs_of { key: "s0" value: "o0" }
obs_of { key: "s1" value: "o1" }
obs_of { key: "s2" value: "o2" }
obs_of { key: "s3" value: "o3" }
transitions { state: "s0" action: "a" successors { state: "s3" prob: 1 } }
transitions { state: "s0" action: "b" successors { state: "s3" prob: 1 } }
transitions {
  state: "s3" action: "a"
  successors { state: "s1" prob: 0.5 }
  successors { state: "s2" prob: 0.5 }
}
transitions { state: "s3" action: "b" successors { state: "s2" prob: 1 } }
transitions { state: "s1" action: "a" successors { state: "s1" prob: 1 } }
transitions { state: "s1" action: "b" successors { state: "s1" prob: 1 } }
transitions { state: "s2" action: "a" successors { state: "s2" prob: 1 } }
transitions { state: "s2" action: "b" successors { state: "s2" prob: 1 } }
fsc {
  nodes: "n0"
  initial_node: "n0"
  rules { node: "n0" observation: "o0" action: "a" next_node: "n0" }
  rules { node: "n0" observation: "o1" action: "a" next_node: "n0" }
  rules { node: "n0" observation: "o2" action: "a" next_node: "n0" }
  rules { node: "n0" observation: "o3" action: "b" next_node: "n0" }
}
costs { from: "o3" to: "o1" cost: 1 }
costs { from: "o3" to: "o2" cost: 2 }
budget: 1
decoy: "s1"
"""

GRID5_HAZARD = 0.084957
GRID5_GOAL = 0.915043
GRID5_O1_NORTH = 0.719924
GRID5_TWO_CHANGES = 0.860130
GRID5_THREE_CHANGES = 0.862442
GRID5_FOUR_CHANGES = 0.863622

KNAPSACK_EXAMPLE = KnapsackInstance(
    weights=[1, 2, 3, 4, 5], values=[20, 30, 40, 50, 60], capacity=7, threshold=100)


@pytest.fixture(scope="session")
def grid5():
    return gen_grid(GridSpec())


@pytest.fixture(scope="session")
def knapsack():
    return gen_knapsack(KNAPSACK_EXAMPLE)


@pytest.fixture()
def toy():
    return parse_scenario(TOY_DOCUMENT)


def cycle_scenario() -> Scenario:
    """s1 gambles on the decoy; received as o2 it loops on itself forever.

    Altering o1 to o2 therefore drops the reach probability from 0.5 to 0.
    """
    observe = {("n0", "o0"): "a", ("n0", "o1"): "b", ("n0", "o2"): "a"}
    return Scenario(
        pomdp=Pomdp(
            states=("s0", "s1", "d", "t"),
            actions=("a", "b"),
            transition={
                ("s0", "a"): {"s1": 1.0},
                ("s0", "b"): {"s1": 1.0},
                ("s1", "a"): {"s1": 1.0},
                ("s1", "b"): {"d": 0.5, "t": 0.5},
                ("d", "a"): {"d": 1.0},
                ("d", "b"): {"d": 1.0},
                ("t", "a"): {"t": 1.0},
                ("t", "b"): {"t": 1.0},
            },
            initial_state="s0",
            observations=("o0", "o1", "o2"),
            obs_of={"s0": "o0", "s1": "o1", "d": "o2", "t": "o2"},
        ),
        fsc=Fsc(nodes=("n0",), initial_node="n0", action_of=observe,
                next_node={k: "n0" for k in observe}),
        cost_model=CostModel(
            cost={("o0", "o0"): 0, ("o1", "o1"): 0, ("o2", "o2"): 0,
                  ("o1", "o2"): 1},
            budget=1),
        decoy=("d",),
    )
