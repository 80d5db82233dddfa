#!/usr/bin/python3
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

"""Reading and writing scenario documents.

A scenario document is a ``decoyforge.Scenario`` message in protobuf text
format::

    states: "s0"
    states: "s1"
    actions: "a"
    observations: "o0"
    initial_state: "s0"
    obs_of { key: "s0" value: "o0" }
    transitions { state: "s0" action: "a" successors { state: "s1" prob: 1 } }
    fsc {
      nodes: "n0"
      initial_node: "n0"
      rules { node: "n0" observation: "o0" action: "a" next_node: "n0" }
    }
    costs { from: "o0" to: "o1" cost: 1 }
    budget: 1
    decoy: "s1"

Identity cost pairs that are not listed default to 0; list one with
``forbidden: true`` to forbid it.
"""

__all__ = [
    "ScenarioParseError",
    "parse_scenario",
    "serialize_scenario",
    "load_scenario",
    "scenario_to_message",
    "scenario_from_message",
]

import logging
from typing import Optional

from google.protobuf import text_format  # type: ignore

from . import scenario_pb2
from .model import (
    CostModel,
    Fsc,
    Number,
    Pomdp,
    Scenario,
    ScenarioResolutionError,
    iter_unresolved,
)


class ScenarioParseError(Exception):
    """A scenario document could not be parsed."""

    def __init__(self, field: Optional[str], message: str,
                 line: Optional[int] = None) -> None:
        self.field = field
        self.message = message
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        ret = self.message
        if self.field:
            ret = f"{self.field}: {ret}"
        if self.line is not None:
            ret = f"line {self.line}: {ret}"
        return ret


def _unique(values, field: str) -> list[str]:
    seen = set()
    for v in values:
        if v in seen:
            raise ScenarioParseError(field, f"duplicate id {v!r}")
        seen.add(v)
    return list(values)


def scenario_from_message(msg) -> Scenario:
    for name in ("initial_state", "fsc", "budget"):
        if not msg.HasField(name):
            raise ScenarioParseError(name, "required field missing")
    if not msg.fsc.HasField("initial_node"):
        raise ScenarioParseError("fsc.initial_node", "required field missing")

    states = _unique(msg.states, "states")
    actions = _unique(msg.actions, "actions")
    observations = _unique(msg.observations, "observations")
    nodes = _unique(msg.fsc.nodes, "fsc.nodes")

    transition: dict[tuple[str, str], dict[str, Number]] = {}
    for t in msg.transitions:
        key = (t.state, t.action)
        if key in transition:
            raise ScenarioParseError(
                "transitions", "duplicate transition for (%s, %s)" % key)
        row: dict[str, Number] = {}
        for succ in t.successors:
            if succ.state in row:
                raise ScenarioParseError(
                    "transitions",
                    "duplicate successor %s for (%s, %s)" % ((succ.state,) + key))
            row[succ.state] = succ.prob
        transition[key] = row

    action_of: dict[tuple[str, str], str] = {}
    next_node: dict[tuple[str, str], str] = {}
    for rule in msg.fsc.rules:
        key = (rule.node, rule.observation)
        if key in action_of:
            raise ScenarioParseError("fsc.rules", "duplicate rule for (%s, %s)" % key)
        action_of[key] = rule.action
        next_node[key] = rule.next_node

    cost: dict[tuple[str, str], Number] = {}
    forbidden: set[tuple[str, str]] = set()
    for c in msg.costs:
        key = (getattr(c, "from"), c.to)
        if key in cost or key in forbidden:
            raise ScenarioParseError("costs", "duplicate cost for (%s, %s)" % key)
        if c.forbidden:
            forbidden.add(key)
        else:
            cost[key] = c.cost
    for o in observations:
        if (o, o) not in forbidden:
            cost.setdefault((o, o), 0.0)

    scenario = Scenario(
        pomdp=Pomdp(
            states=tuple(states),
            actions=tuple(actions),
            transition=transition,
            initial_state=msg.initial_state,
            observations=tuple(observations),
            obs_of=dict(msg.obs_of),
        ),
        fsc=Fsc(
            nodes=tuple(nodes),
            initial_node=msg.fsc.initial_node,
            action_of=action_of,
            next_node=next_node,
        ),
        cost_model=CostModel(cost=cost, budget=msg.budget),
        decoy=tuple(_unique(msg.decoy, "decoy")),
    )
    for kind, name, context in iter_unresolved(scenario):
        raise ScenarioResolutionError(kind, name, context)
    return scenario


def parse_scenario(text) -> Scenario:
    """Parse a scenario document.

    Raises:
      ScenarioParseError: the document is malformed or misses a field
      ScenarioResolutionError: the document references an undeclared id
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        msg = text_format.Parse(text, scenario_pb2.Scenario())
    except text_format.ParseError as e:
        raise ScenarioParseError(None, str(e), line=e.GetLine()) from e
    return scenario_from_message(msg)


def load_scenario(path: str) -> Scenario:
    logging.debug("Reading scenario from %s", path)
    with open(path) as f:
        return parse_scenario(f.read())


def scenario_to_message(scenario: Scenario):
    pomdp = scenario.pomdp
    fsc = scenario.fsc
    msg = scenario_pb2.Scenario()
    msg.states.extend(pomdp.states)
    msg.actions.extend(pomdp.actions)
    msg.observations.extend(pomdp.observations)
    msg.initial_state = pomdp.initial_state
    for s, o in pomdp.obs_of.items():
        msg.obs_of[s] = o
    for (s, a), row in pomdp.transition.items():
        t = msg.transitions.add(state=s, action=a)
        for s2 in sorted(row):
            t.successors.add(state=s2, prob=float(row[s2]))
    msg.fsc.nodes.extend(fsc.nodes)
    msg.fsc.initial_node = fsc.initial_node
    for (n, o), a in fsc.action_of.items():
        msg.fsc.rules.add(
            node=n, observation=o, action=a, next_node=fsc.next_node.get((n, o), ""))
    for (o, o2), c in scenario.cost_model.cost.items():
        entry = msg.costs.add(to=o2, cost=float(c))
        setattr(entry, "from", o)
    for o in pomdp.observations:
        if (o, o) not in scenario.cost_model.cost:
            entry = msg.costs.add(to=o, forbidden=True)
            setattr(entry, "from", o)
    msg.budget = float(scenario.cost_model.budget)
    msg.decoy.extend(scenario.decoy)
    return msg


def serialize_scenario(scenario: Scenario, header: Optional[list[str]] = None) -> str:
    """Render scenario as a document; header lines become leading comments."""
    ret = "".join("# %s\n" % line for line in (header or []))
    return ret + text_format.MessageToString(scenario_to_message(scenario))
