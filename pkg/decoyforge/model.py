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

"""Domain types: POMDPs, finite-state controllers, cost models and alterations.

Ids are strings at the boundary. Every ordered id set is kept sorted, and
:class:`IndexedScenario` maps ids to dense integer indices in that order for
the numerical code.
"""

__all__ = [
    "Pomdp",
    "Fsc",
    "CostModel",
    "Alteration",
    "Scenario",
    "IndexedScenario",
    "Violation",
    "ValidationReport",
    "ScenarioResolutionError",
    "InfeasibleScenario",
    "validate_scenario",
    "check_references",
    "iter_unresolved",
    "alteration_cost",
    "ensure_initial_identity",
]

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Optional, Union

import numpy as np
from scipy.sparse import csr_matrix

Number = Union[float, int, Fraction]

ROW_SUM_TOLERANCE = 1e-9


class ScenarioResolutionError(Exception):
    """A scenario references an id that is not declared."""

    def __init__(self, kind: str, name: str, context: str) -> None:
        self.kind = kind
        self.name = name
        self.context = context
        super().__init__(f"unknown {kind} {name!r} in {context}")


class InfeasibleScenario(Exception):
    """The optimization problem has no feasible alteration."""

    def __init__(self, code: str, description: str) -> None:
        self.code = code
        self.description = description
        super().__init__(description)


def _sorted_ids(ids: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(ids))


@dataclass(frozen=True)
class Pomdp:
    states: tuple[str, ...]
    actions: tuple[str, ...]
    transition: Mapping[tuple[str, str], Mapping[str, Number]]
    initial_state: str
    observations: tuple[str, ...]
    obs_of: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "states", _sorted_ids(self.states))
        object.__setattr__(self, "actions", _sorted_ids(self.actions))
        object.__setattr__(self, "observations", _sorted_ids(self.observations))
        object.__setattr__(
            self,
            "transition",
            {key: dict(row) for key, row in sorted(self.transition.items())},
        )
        object.__setattr__(self, "obs_of", dict(sorted(self.obs_of.items())))

    def successors(self, state: str, action: str) -> Mapping[str, Number]:
        return self.transition.get((state, action), {})

    def support(self, state: str) -> set[str]:
        """States reachable in one step from state under any action."""
        ret: set[str] = set()
        for action in self.actions:
            ret.update(s for s, p in self.successors(state, action).items() if p > 0)
        return ret


@dataclass(frozen=True)
class Fsc:
    nodes: tuple[str, ...]
    initial_node: str
    action_of: Mapping[tuple[str, str], str]
    next_node: Mapping[tuple[str, str], str]

    def __post_init__(self):
        object.__setattr__(self, "nodes", _sorted_ids(self.nodes))
        object.__setattr__(self, "action_of", dict(sorted(self.action_of.items())))
        object.__setattr__(self, "next_node", dict(sorted(self.next_node.items())))


@dataclass(frozen=True)
class CostModel:
    """Alteration costs; a pair without an entry is forbidden."""

    cost: Mapping[tuple[str, str], Number]
    budget: Number

    def __post_init__(self):
        object.__setattr__(self, "cost", dict(sorted(self.cost.items())))

    @classmethod
    def unit(cls, observations: Iterable[str], budget: Number,
             frozen: Iterable[str] = ()) -> "CostModel":
        """Identity free, every other pair costs 1.

        Observations in frozen may not be altered at all.
        """
        observations = list(observations)
        frozen = set(frozen)
        cost: dict[tuple[str, str], Number] = {}
        for o in observations:
            for o2 in observations:
                if o == o2:
                    cost[(o, o2)] = 0.0
                elif o not in frozen:
                    cost[(o, o2)] = 1.0
        return cls(cost=cost, budget=budget)

    def permitted(self, o: str, o2: str) -> bool:
        return (o, o2) in self.cost


@dataclass(frozen=True)
class Alteration:
    """A total map from emitted observations to the observations received."""

    mapping: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(sorted(self.mapping.items())))

    def __getitem__(self, o: str) -> str:
        return self.mapping[o]

    @classmethod
    def identity(cls, observations: Iterable[str]) -> "Alteration":
        return cls({o: o for o in observations})

    @classmethod
    def from_changes(
        cls, observations: Iterable[str], changes: Mapping[str, str]
    ) -> "Alteration":
        mapping = {o: o for o in observations}
        for o, o2 in changes.items():
            for name in (o, o2):
                if name not in mapping:
                    raise ScenarioResolutionError("observation", name, "alteration")
            mapping[o] = o2
        return cls(mapping)

    @classmethod
    def from_literal(cls, observations: Iterable[str], text: str) -> "Alteration":
        """Parse ``o1->o3;o2->o0``; observations not named map to themselves."""
        changes: dict[str, str] = {}
        for pair in text.split(";"):
            pair = pair.strip()
            if not pair:
                continue
            try:
                o, o2 = (part.strip() for part in pair.split("->"))
            except ValueError as e:
                raise ValueError(f"invalid alteration pair {pair!r}") from e
            if o in changes:
                raise ValueError(f"observation {o!r} altered twice")
            changes[o] = o2
        return cls.from_changes(observations, changes)

    def to_literal(self) -> str:
        return ";".join(f"{o}->{o2}" for o, o2 in self.mapping.items() if o != o2)

    def changes(self) -> dict[str, str]:
        return {o: o2 for o, o2 in self.mapping.items() if o != o2}

    def is_identity(self) -> bool:
        return not self.changes()

    def __str__(self) -> str:
        return self.to_literal() or "identity"


@dataclass(frozen=True)
class Scenario:
    pomdp: Pomdp
    fsc: Fsc
    cost_model: CostModel
    decoy: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "decoy", _sorted_ids(set(self.decoy)))

    @property
    def observations(self) -> tuple[str, ...]:
        return self.pomdp.observations

    @property
    def budget(self) -> Number:
        return self.cost_model.budget

    def with_budget(self, budget: Number) -> "Scenario":
        return replace(self, cost_model=replace(self.cost_model, budget=budget))

    def with_decoy(self, decoy: Iterable[str]) -> "Scenario":
        return replace(self, decoy=tuple(decoy))

    def identity(self) -> Alteration:
        return Alteration.identity(self.observations)

    @cached_property
    def indexed(self) -> "IndexedScenario":
        return IndexedScenario.from_scenario(self)


@dataclass(frozen=True, eq=False)
class IndexedScenario:
    """Dense integer view of a scenario.

    ``kernel`` has one row per (state, action) pair, at ``s * |A| + a``.
    ``cost`` holds 0 for forbidden pairs, so always read it together with
    ``permitted``.
    """

    states: tuple[str, ...]
    actions: tuple[str, ...]
    observations: tuple[str, ...]
    nodes: tuple[str, ...]
    obs_of: np.ndarray
    kernel: csr_matrix
    gamma: np.ndarray
    delta: np.ndarray
    permitted: np.ndarray
    cost: np.ndarray
    decoy: np.ndarray
    initial_state: int
    initial_node: int
    budget: float
    state_index: dict[str, int] = field(repr=False)
    obs_index: dict[str, int] = field(repr=False)

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_observations(self) -> int:
        return len(self.observations)

    @property
    def initial_observation(self) -> int:
        return int(self.obs_of[self.initial_state])

    def alteration_indices(self, alt: Alteration) -> np.ndarray:
        ret = np.empty(len(self.observations), dtype=np.int64)
        for i, o in enumerate(self.observations):
            try:
                ret[i] = self.obs_index[alt.mapping[o]]
            except KeyError as e:
                raise ScenarioResolutionError(
                    "observation", e.args[0], "alteration") from e
        return ret

    def alteration_from_indices(self, images) -> Alteration:
        return Alteration(
            {o: self.observations[int(i)] for o, i in zip(self.observations, images)}
        )

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "IndexedScenario":
        pomdp = scenario.pomdp
        fsc = scenario.fsc
        state_index = {s: i for i, s in enumerate(pomdp.states)}
        action_index = {a: i for i, a in enumerate(pomdp.actions)}
        obs_index = {o: i for i, o in enumerate(pomdp.observations)}
        node_index = {n: i for i, n in enumerate(fsc.nodes)}

        def lookup(index, kind, name, context):
            try:
                return index[name]
            except KeyError as e:
                raise ScenarioResolutionError(kind, name, context) from e

        num_actions = len(pomdp.actions)
        rows, cols, data = [], [], []
        for (s, a), successors in pomdp.transition.items():
            row = (
                lookup(state_index, "state", s, "transitions") * num_actions
                + lookup(action_index, "action", a, "transitions")
            )
            for s2, p in successors.items():
                if p > 0:
                    rows.append(row)
                    cols.append(lookup(state_index, "state", s2, "transitions"))
                    data.append(float(p))
        kernel = csr_matrix(
            (data, (rows, cols)),
            shape=(len(pomdp.states) * num_actions, len(pomdp.states)),
        )
        kernel.sum_duplicates()
        kernel.sort_indices()

        obs_of = np.array(
            [lookup(obs_index, "observation", pomdp.obs_of[s], "obs_of")
             if s in pomdp.obs_of else -1 for s in pomdp.states],
            dtype=np.int64,
        )
        gamma = np.full((len(fsc.nodes), len(pomdp.observations)), -1, dtype=np.int64)
        delta = np.full_like(gamma, -1)
        for (n, o), a in fsc.action_of.items():
            gamma[lookup(node_index, "node", n, "fsc"),
                  lookup(obs_index, "observation", o, "fsc")] = lookup(
                action_index, "action", a, "fsc")
        for (n, o), n2 in fsc.next_node.items():
            delta[lookup(node_index, "node", n, "fsc"),
                  lookup(obs_index, "observation", o, "fsc")] = lookup(
                node_index, "node", n2, "fsc")

        num_obs = len(pomdp.observations)
        permitted = np.zeros((num_obs, num_obs), dtype=bool)
        cost = np.zeros((num_obs, num_obs), dtype=float)
        for (o, o2), c in scenario.cost_model.cost.items():
            i = lookup(obs_index, "observation", o, "costs")
            j = lookup(obs_index, "observation", o2, "costs")
            permitted[i, j] = True
            cost[i, j] = float(c)

        decoy = np.zeros(len(pomdp.states), dtype=bool)
        for s in scenario.decoy:
            decoy[lookup(state_index, "state", s, "decoy")] = True

        return cls(
            states=pomdp.states,
            actions=pomdp.actions,
            observations=pomdp.observations,
            nodes=fsc.nodes,
            obs_of=obs_of,
            kernel=kernel,
            gamma=gamma,
            delta=delta,
            permitted=permitted,
            cost=cost,
            decoy=decoy,
            initial_state=lookup(state_index, "state", pomdp.initial_state,
                                 "initial_state"),
            initial_node=lookup(node_index, "node", fsc.initial_node, "initial_node"),
            budget=float(scenario.cost_model.budget),
            state_index=state_index,
            obs_index=obs_index,
        )


@dataclass(frozen=True)
class Violation:
    entity: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.entity}: {self.message} [{self.rule}]"


ValidationReport = list[Violation]


def iter_unresolved(scenario: Scenario) -> Iterator[tuple[str, str, str]]:
    """Yield (kind, name, context) for every id referenced but not declared."""
    pomdp = scenario.pomdp
    fsc = scenario.fsc
    declared = {
        "state": set(pomdp.states),
        "action": set(pomdp.actions),
        "observation": set(pomdp.observations),
        "node": set(fsc.nodes),
    }
    refs: list[tuple[str, str, str]] = [
        ("state", pomdp.initial_state, "initial_state"),
        ("node", fsc.initial_node, "fsc.initial_node"),
    ]
    for s, o in pomdp.obs_of.items():
        refs.extend([("state", s, f"obs_of[{s}]"), ("observation", o, f"obs_of[{s}]")])
    for (s, a), successors in pomdp.transition.items():
        context = f"transition({s},{a})"
        refs.extend([("state", s, context), ("action", a, context)])
        refs.extend(("state", s2, context) for s2 in successors)
    for (n, o), a in fsc.action_of.items():
        context = f"fsc({n},{o})"
        refs.extend([("node", n, context), ("observation", o, context),
                     ("action", a, context)])
    for (n, o), n2 in fsc.next_node.items():
        context = f"fsc({n},{o})"
        refs.extend([("node", n, context), ("observation", o, context),
                     ("node", n2, context)])
    for o, o2 in scenario.cost_model.cost:
        context = f"cost({o},{o2})"
        refs.extend([("observation", o, context), ("observation", o2, context)])
    refs.extend(("state", s, "decoy") for s in scenario.decoy)
    for kind, name, context in refs:
        if name not in declared[kind]:
            yield kind, name, context


def check_references(scenario: Scenario) -> ValidationReport:
    return [
        Violation(context, f"unknown-{kind}", f"unknown {kind} {name!r}")
        for kind, name, context in iter_unresolved(scenario)
    ]


def validate_scenario(scenario: Scenario) -> ValidationReport:
    """Check every structural invariant; an empty report means valid."""
    report = check_references(scenario)
    pomdp = scenario.pomdp
    fsc = scenario.fsc

    for s in pomdp.states:
        if s not in pomdp.obs_of:
            report.append(Violation(f"obs_of[{s}]", "obs-total",
                                    "O not total: state has no observation"))
        for a in pomdp.actions:
            if (s, a) not in pomdp.transition:
                report.append(Violation(f"transition({s},{a})", "row-missing",
                                        "no successor distribution"))
    for (s, a), successors in pomdp.transition.items():
        entity = f"transition({s},{a})"
        for s2, p in successors.items():
            if not 0 <= p <= 1:
                report.append(Violation(entity, "prob-range",
                                        f"probability {p} of {s2} outside [0,1]"))
        total = sum(successors.values())
        if abs(total - 1) > ROW_SUM_TOLERANCE:
            report.append(Violation(entity, "row-sum", f"row sum ≠ 1 ({total})"))

    for n in fsc.nodes:
        for o in pomdp.observations:
            if (n, o) not in fsc.action_of:
                report.append(Violation(f"fsc({n},{o})", "gamma-total",
                                        "γ not total"))
            if (n, o) not in fsc.next_node:
                report.append(Violation(f"fsc({n},{o})", "delta-total",
                                        "δ not total"))

    cost = scenario.cost_model.cost
    for o in pomdp.observations:
        c = cost.get((o, o))
        if c is None:
            report.append(Violation(f"cost({o},{o})", "identity-cost",
                                    "identity alteration is forbidden"))
        elif c != 0:
            report.append(Violation(f"cost({o},{o})", "identity-cost",
                                    f"identity alteration costs {c}"))
    for (o, o2), c in cost.items():
        if c < 0:
            report.append(Violation(f"cost({o},{o2})", "negative-cost",
                                    f"negative cost {c}"))
    if scenario.cost_model.budget < 0:
        report.append(Violation("budget", "negative-budget",
                                f"negative budget {scenario.cost_model.budget}"))
    if not scenario.decoy:
        report.append(Violation("decoy", "decoy-empty", "decoy set is empty"))
    for v in report:
        logging.debug("Validation: %s", v)
    return report


def alteration_cost(cost_model: CostModel, alt: Alteration) -> Optional[Number]:
    """Total cost of alt, or None if it uses a forbidden pair."""
    total: Number = 0
    for o, o2 in alt.mapping.items():
        c = cost_model.cost.get((o, o2))
        if c is None:
            return None
        total += c
    return total


def ensure_initial_identity(scenario: Scenario) -> None:
    """Raise InfeasibleScenario unless the initial observation may stay itself.

    Optimizers keep the observation of the initial state unaltered, so the
    problem is infeasible when that identity pair is forbidden.
    """
    o = scenario.pomdp.obs_of.get(scenario.pomdp.initial_state)
    if o is None or not scenario.cost_model.permitted(o, o):
        raise InfeasibleScenario(
            "initial-observation-forbidden",
            f"initial observation {o!r} cannot be kept unaltered: "
            "its identity alteration is forbidden",
        )
    if scenario.cost_model.cost[(o, o)] > scenario.cost_model.budget:
        raise InfeasibleScenario(
            "initial-observation-over-budget",
            f"keeping initial observation {o!r} exceeds the budget",
        )
