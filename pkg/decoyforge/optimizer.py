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

"""Exact search for the best alteration within a budget.

Alterations are ordered by their key: observation by observation in sorted
order, the identity image ranks first and the others follow by id. Among
alterations whose values are within ``TIE`` of each other the one with the
smallest key wins, so the identity alteration is preferred whenever nothing
does better. The observation of the initial state is never altered.
"""

__all__ = [
    "OptResult",
    "SearchNode",
    "Limits",
    "BruteForceTooLarge",
    "Relaxation",
    "brute_force",
    "branch_and_bound",
    "relaxation_bound",
    "budget_sweep",
]

import logging
import math
import time
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np
from aiohttp_openmetrics import Counter

from .model import (
    Alteration,
    InfeasibleScenario,
    Number,
    Scenario,
    alteration_cost,
    ensure_initial_identity,
)
from .verifier import (
    backward_reachable,
    build_choice_matrix,
    build_product,
    reach_probability,
    verify,
)

search_node_count = Counter("decoyforge_search_nodes", "Number of search nodes explored")

TIE = 1e-12
COST_EPSILON = 1e-9
BOUND_TOLERANCE = 1e-9
BOUND_MAX_SWEEPS = 100_000
BOUND_ROUNDING = 1e-12
BRUTE_FORCE_LIMIT = 8**8


class BruteForceTooLarge(Exception):
    """Exhaustive enumeration was refused."""

    def __init__(self, estimate: int, limit: int) -> None:
        self.estimate = estimate
        self.limit = limit
        super().__init__(
            f"brute force would enumerate {estimate} alterations "
            f"(limit {limit})")


@dataclass(frozen=True)
class Limits:
    """Search limits; 0 means unlimited."""

    max_nodes: int = 0
    max_seconds: float = 0


@dataclass(frozen=True)
class OptResult:
    best_alteration: Alteration
    best_value: float
    best_cost: Number
    status: str
    nodes_explored: int
    bound_at_root: float
    budget: Number = 0
    seconds: float = 0.0


@dataclass
class SearchNode:
    """A partial alteration; undecided observations are absent from decided."""

    decided: Mapping[str, str]
    committed_cost: Number = 0
    bound: Optional[float] = None

    @classmethod
    def from_decided(cls, scenario: Scenario, decided: Mapping[str, str]) -> "SearchNode":
        cost: Number = 0
        for o, o2 in decided.items():
            c = scenario.cost_model.cost.get((o, o2))
            cost += math.inf if c is None else c
        return cls(decided=dict(decided), committed_cost=cost)


class Relaxation:
    """Upper bounds from the MDP where each pair picks its own image.

    Undecided observations may be received as any affordable image, chosen
    independently at every (state, node) pair. Maximal reachability of that
    MDP bounds every consistent completion from above.
    """

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self.ix = ix = scenario.indexed
        self.choice = build_choice_matrix(scenario)
        num_obs = ix.num_observations
        self.initial_observation = ix.initial_observation
        masked = np.where(ix.permitted, ix.cost, np.inf)
        self.min_cost = masked.min(axis=1)
        if not np.isfinite(self.min_cost).all():
            o = ix.observations[int(np.flatnonzero(~np.isfinite(self.min_cost))[0])]
            raise InfeasibleScenario(
                "no-permitted-image", f"observation {o!r} has no permitted image")
        self.min_cost[self.initial_observation] = ix.cost[
            self.initial_observation, self.initial_observation]
        self.emitted = np.zeros(num_obs, dtype=bool)
        self.emitted[ix.obs_of] = True
        # Sorted image ids with the identity moved to the front.
        self.rank = np.empty((num_obs, num_obs), dtype=np.int64)
        for o in range(num_obs):
            self.rank[o] = [0 if o2 == o else 1 + o2 for o2 in range(num_obs)]

    def allowed(self, images: np.ndarray, committed: float) -> Optional[np.ndarray]:
        """allowed[emitted, received] for a partial assignment, or None."""
        ix = self.ix
        allowed = ix.permitted.copy()
        o0 = self.initial_observation
        if images[o0] not in (-1, o0):
            return None
        undecided = images < 0
        undecided[o0] = False
        decided = np.flatnonzero(images >= 0)
        allowed[decided] = False
        allowed[decided, images[decided]] = ix.permitted[decided, images[decided]]
        if not allowed[decided, images[decided]].all():
            return None
        allowed[o0] = False
        allowed[o0, o0] = ix.permitted[o0, o0]
        slack = (ix.budget - committed - float(self.min_cost[undecided].sum())
                 - (0 if images[o0] == o0 else self.min_cost[o0]))
        if slack < -COST_EPSILON:
            return None
        extra = ix.cost - self.min_cost[:, None]
        allowed[undecided] &= extra[undecided] <= slack + COST_EPSILON
        return allowed

    def bound(self, allowed: np.ndarray) -> float:
        choice = self.choice
        live = backward_reachable(choice.union_graph(allowed), choice.goal)
        if not live[choice.q0]:
            return 0.0
        if choice.goal[choice.q0]:
            return 1.0
        row_allowed = allowed[choice.source]
        z = live.astype(float)
        for _ in range(BOUND_MAX_SWEEPS):
            values = (choice.matrix @ z).reshape(row_allowed.shape)
            values[~row_allowed] = -np.inf
            new = values.max(axis=1)
            new[choice.goal] = 1.0
            new[~live] = 0.0
            delta = float(np.max(np.abs(new - z)))
            z = new
            if delta <= BOUND_TOLERANCE:
                break
        # Iterates start above the fixed point and stay there.
        return min(1.0, float(z[choice.q0]) + BOUND_ROUNDING)

    def key(self, images: np.ndarray) -> tuple[int, ...]:
        """Alteration key with undecided observations taken as the identity."""
        return tuple(
            0 if img < 0 else int(self.rank[o, img]) for o, img in enumerate(images))

    def evaluate(self, images: np.ndarray) -> float:
        alt = self.ix.alteration_from_indices(images)
        return reach_probability(build_product(self.scenario, alt)).value

    def fill_unobserved(self, images: np.ndarray) -> float:
        """Fix observations no state emits to their cheapest, lowest-ranked image."""
        cost = 0.0
        ix = self.ix
        for o in np.flatnonzero(~self.emitted):
            if images[o] >= 0 or o == self.initial_observation:
                continue
            options = [o2 for o2 in range(ix.num_observations) if ix.permitted[o, o2]]
            images[o] = min(options, key=lambda o2: (ix.cost[o, o2], self.rank[o, o2]))
            cost += ix.cost[o, images[o]]
        return cost


def _better(value: float, key, best_value: float, best_key) -> bool:
    if value > best_value + TIE:
        return True
    return abs(value - best_value) <= TIE and key < best_key


def _finish(scenario: Scenario, images: np.ndarray, value: float, status: str,
            nodes: int, root_bound: float, started: float) -> OptResult:
    alt = scenario.indexed.alteration_from_indices(images)
    check = verify(scenario, alt)
    if abs(check.probability - value) > 1e-9:
        logging.warning(
            "Re-verified value %.12f differs from search value %.12f",
            check.probability, value)
    cost = alteration_cost(scenario.cost_model, alt)
    if cost is None or cost > scenario.budget + COST_EPSILON:
        raise InfeasibleScenario(
            "over-budget",
            f"alteration {alt} costs {cost}, over budget {scenario.budget}")
    return OptResult(
        best_alteration=alt,
        best_value=check.probability,
        best_cost=cost,
        status=status,
        nodes_explored=nodes,
        bound_at_root=root_bound,
        budget=scenario.budget,
        seconds=time.monotonic() - started,
    )


def relaxation_bound(scenario: Scenario, node: SearchNode,
                     relaxation: Optional[Relaxation] = None) -> float:
    """Upper bound on the value of every completion of node.

    Infeasible nodes, whose committed cost plus the cheapest completion
    exceeds the budget, get bound 0. A node that decides every emitted
    observation gets its exact value.
    """
    if relaxation is None:
        relaxation = Relaxation(scenario)
    ix = relaxation.ix
    images = np.full(ix.num_observations, -1, dtype=np.int64)
    for o, o2 in node.decided.items():
        images[ix.obs_index[o]] = ix.obs_index[o2]
    allowed = None
    if math.isfinite(node.committed_cost):
        allowed = relaxation.allowed(images, float(node.committed_cost))
    if allowed is None:
        logging.debug("Node %r is infeasible", dict(node.decided))
        node.bound = 0.0
        return 0.0
    o0 = relaxation.initial_observation
    open_emitted = relaxation.emitted & (images < 0)
    open_emitted[o0] = False
    if not open_emitted.any():
        complete = images.copy()
        complete[o0] = o0
        relaxation.fill_unobserved(complete)
        node.bound = min(1.0, relaxation.evaluate(complete) + BOUND_ROUNDING)
    else:
        node.bound = relaxation.bound(allowed)
    return node.bound


def _impact_order(relaxation: Relaxation) -> list[int]:
    ix = relaxation.ix
    support = np.diff(ix.kernel.indptr).reshape(ix.num_states, len(ix.actions)).sum(axis=1)
    impact = np.zeros(ix.num_observations, dtype=np.int64)
    np.add.at(impact, ix.obs_of, support * ix.num_nodes)
    candidates = [
        o for o in range(ix.num_observations)
        if relaxation.emitted[o] and o != relaxation.initial_observation
    ]
    return sorted(candidates, key=lambda o: (-impact[o], ix.observations[o]))


def _candidate_images(relaxation: Relaxation, o: int) -> list[int]:
    """Permitted images of o in rank order, without dominated ones.

    An image is dominated when an image that drives the controller the same
    way is no more expensive and ranks lower.
    """
    ix = relaxation.ix
    images = sorted(
        (o2 for o2 in range(ix.num_observations) if ix.permitted[o, o2]),
        key=lambda o2: relaxation.rank[o, o2])
    ret: list[int] = []
    for o2 in images:
        dominated = any(
            ix.cost[o, kept] <= ix.cost[o, o2]
            and (ix.gamma[:, kept] == ix.gamma[:, o2]).all()
            and (ix.delta[:, kept] == ix.delta[:, o2]).all()
            for kept in ret)
        if not dominated:
            ret.append(o2)
    return ret


@dataclass
class _Search:
    relaxation: Relaxation
    order: list[int]
    candidates: dict[int, list[int]]
    limits: Limits
    started: float
    best_images: np.ndarray
    best_value: float
    best_key: tuple[int, ...]
    nodes: int = 0
    limited: bool = False
    root_bound: float = 1.0

    def out_of_budget(self) -> bool:
        if self.limits.max_nodes and self.nodes >= self.limits.max_nodes:
            return True
        if self.limits.max_seconds and (
                time.monotonic() - self.started >= self.limits.max_seconds):
            return True
        return False

    def offer(self, images: np.ndarray, value: float) -> None:
        key = self.relaxation.key(images)
        if _better(value, key, self.best_value, self.best_key):
            logging.debug("New incumbent %.6f: %s", value,
                          self.relaxation.ix.alteration_from_indices(images))
            self.best_images = images.copy()
            self.best_value = value
            self.best_key = key

    def run(self, images: np.ndarray, depth: int, committed: float) -> None:
        if self.limited or self.out_of_budget():
            self.limited = True
            return
        self.nodes += 1
        search_node_count.inc()
        relaxation = self.relaxation
        if depth == len(self.order):
            self.offer(images, relaxation.evaluate(images))
            return
        allowed = relaxation.allowed(images, committed)
        if allowed is None:
            return
        bound = relaxation.bound(allowed)
        if depth == 0:
            self.root_bound = bound
        if bound <= self.best_value + TIE and (
                bound < self.best_value - TIE
                or relaxation.key(images) >= self.best_key):
            return
        o = self.order[depth]
        rest = float(sum(relaxation.min_cost[p] for p in self.order[depth + 1:]))
        for o2 in self.candidates[o]:
            c = float(relaxation.ix.cost[o, o2])
            if committed + c + rest > relaxation.ix.budget + COST_EPSILON:
                continue
            images[o] = o2
            self.run(images, depth + 1, committed + c)
            images[o] = -1
            if self.limited:
                return


def _start(scenario: Scenario) -> tuple[Relaxation, np.ndarray, float]:
    ensure_initial_identity(scenario)
    relaxation = Relaxation(scenario)
    ix = relaxation.ix
    images = np.full(ix.num_observations, -1, dtype=np.int64)
    o0 = relaxation.initial_observation
    images[o0] = o0
    committed = float(ix.cost[o0, o0]) + relaxation.fill_unobserved(images)
    if committed > ix.budget + COST_EPSILON:
        raise InfeasibleScenario(
            "over-budget", "observations no state emits cannot be kept within budget")
    return relaxation, images, committed


def branch_and_bound(
    scenario: Scenario,
    limits: Optional[Limits] = None,
    incumbent: Optional[Alteration] = None,
) -> OptResult:
    """Depth-first branch-and-bound over observation images.

    Args:
      limits: node and time limits; hitting one yields status "incumbent"
      incumbent: feasible alteration to start from besides the cheapest one
    """
    started = time.monotonic()
    limits = limits or Limits()
    relaxation, images, committed = _start(scenario)
    ix = relaxation.ix
    order = _impact_order(relaxation)
    logging.debug("Branching order: %s", [ix.observations[o] for o in order])

    # Cheapest completion, the identity whenever it is free.
    cheapest = images.copy()
    for o in order:
        cheapest[o] = min(_candidate_images(relaxation, o),
                          key=lambda o2, o=o: (ix.cost[o, o2], relaxation.rank[o, o2]))
    cheapest_cost = committed + float(sum(ix.cost[o, cheapest[o]] for o in order))
    if cheapest_cost > ix.budget + COST_EPSILON:
        raise InfeasibleScenario("over-budget", "no alteration fits the budget")
    search = _Search(
        relaxation=relaxation,
        order=order,
        candidates={o: _candidate_images(relaxation, o) for o in order},
        limits=limits,
        started=started,
        best_images=cheapest,
        best_value=relaxation.evaluate(cheapest),
        best_key=relaxation.key(cheapest),
    )
    if incumbent is not None:
        warm = ix.alteration_indices(incumbent)
        cost = alteration_cost(scenario.cost_model, incumbent)
        if (cost is not None and cost <= scenario.budget + COST_EPSILON
                and warm[relaxation.initial_observation] == relaxation.initial_observation):
            search.offer(warm, relaxation.evaluate(warm))
    search.run(images, 0, committed)
    status = "incumbent" if search.limited else "optimal"
    logging.info(
        "Branch and bound at budget %s: %.6f after %d nodes (%s)",
        scenario.budget, search.best_value, search.nodes, status)
    return _finish(scenario, search.best_images, search.best_value, status,
                   search.nodes, search.root_bound, started)


def brute_force(scenario: Scenario, limit: int = BRUTE_FORCE_LIMIT) -> OptResult:
    """Evaluate every affordable alteration.

    Raises:
      BruteForceTooLarge: more than limit candidate alterations
    """
    started = time.monotonic()
    ensure_initial_identity(scenario)
    relaxation = Relaxation(scenario)
    ix = relaxation.ix
    o0 = relaxation.initial_observation
    choices = []
    for o in range(ix.num_observations):
        options = [o2 for o2 in range(ix.num_observations) if ix.permitted[o, o2]]
        choices.append([o0] if o == o0 else sorted(
            options, key=lambda o2, o=o: relaxation.rank[o, o2]))
    estimate = math.prod(len(c) for c in choices)
    if estimate > limit:
        raise BruteForceTooLarge(estimate, limit)
    rest = np.concatenate(
        [np.cumsum([min(ix.cost[o, o2] for o2 in c) for c in choices][::-1])[::-1],
         [0.0]])

    best: dict = {"images": None, "value": -1.0, "key": None}
    count = 0
    images = np.full(ix.num_observations, -1, dtype=np.int64)

    def enumerate_from(o: int, committed: float) -> None:
        nonlocal count
        if o == ix.num_observations:
            count += 1
            value = relaxation.evaluate(images)
            key = relaxation.key(images)
            if best["images"] is None or _better(value, key, best["value"], best["key"]):
                best.update(images=images.copy(), value=value, key=key)
            return
        for o2 in choices[o]:
            c = committed + ix.cost[o, o2]
            if c + rest[o + 1] > ix.budget + COST_EPSILON:
                continue
            images[o] = o2
            enumerate_from(o + 1, c)
        images[o] = -1

    enumerate_from(0, 0.0)
    if best["images"] is None:
        raise InfeasibleScenario("over-budget", "no alteration fits the budget")
    root = relaxation.allowed(np.where(np.arange(ix.num_observations) == o0, o0, -1), 0.0)
    root_bound = relaxation.bound(root) if root is not None else 0.0
    logging.info("Brute force evaluated %d alterations", count)
    return _finish(scenario, best["images"], best["value"], "optimal", count,
                   root_bound, started)


def budget_sweep(
    scenario: Scenario,
    budgets: Sequence[Number],
    limits: Optional[Limits] = None,
    method: str = "bb",
    brute_force_limit: int = BRUTE_FORCE_LIMIT,
) -> list[OptResult]:
    """Optimize for each budget in ascending order.

    Each branch-and-bound run starts from the previous budget's optimum,
    which stays feasible, so values never decrease. brute_force_limit caps
    every brute-force run.
    """
    if list(budgets) != sorted(budgets):
        raise ValueError("budgets must be sorted ascending")
    results: list[OptResult] = []
    for budget in budgets:
        sc = scenario.with_budget(budget)
        if method == "brute":
            result = brute_force(sc, brute_force_limit)
        elif method == "bb":
            result = branch_and_bound(
                sc, limits,
                incumbent=results[-1].best_alteration if results else None)
        else:
            raise ValueError(f"unknown method {method!r}")
        results.append(result)
    return results
