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

"""Decoy reachability for a fixed alteration.

Fixing an alteration turns the POMDP and its controller into a Markov chain
over (state, node) pairs, with product state ``q = s * |N| + n``. The
probability of ever entering a decoy pair is the solution of a linear
system once the pairs that cannot reach the decoy are pinned to zero.
"""

__all__ = [
    "NonConvergence",
    "ProductChain",
    "ReachSolution",
    "VerifyResult",
    "SimulationResult",
    "ChoiceMatrix",
    "build_product",
    "backward_reachable",
    "reach_probability",
    "verify",
    "simulate",
    "build_choice_matrix",
    "exact_reach_probability",
    "path_probability",
]

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from aiohttp_openmetrics import Counter
from scipy.sparse import csr_matrix, eye, tril, triu
from scipy.sparse.linalg import spsolve, spsolve_triangular

from .model import Alteration, IndexedScenario, Number, Scenario, alteration_cost

product_build_count = Counter(
    "decoyforge_product_builds", "Number of product chains built")
reach_solve_count = Counter(
    "decoyforge_reach_solves", "Number of reachability solves", ["method"])

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 1_000_000
DIRECT_MAX_STATES = 20_000
SIMULATION_CHUNK = 10_000


class NonConvergence(Exception):
    """Iterative reachability solve did not reach the tolerance."""

    def __init__(self, residual: float, iterations: int) -> None:
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(residual {residual:.3g})")


@dataclass(frozen=True, eq=False)
class ProductChain:
    """Markov chain over (state, node) pairs under a fixed alteration.

    Attributes:
      transition: |Q| x |Q| matrix
      goal: pairs whose state is a decoy
      work: pairs visited plus kernel entries copied during construction
    """

    states: tuple[str, ...]
    nodes: tuple[str, ...]
    transition: csr_matrix
    goal: np.ndarray
    q0: int
    work: int

    @property
    def size(self) -> int:
        return self.transition.shape[0]

    def pair(self, q: int) -> tuple[str, str]:
        s, n = divmod(q, len(self.nodes))
        return (self.states[s], self.nodes[n])

    def index(self, state: str, node: str) -> int:
        return self.states.index(state) * len(self.nodes) + self.nodes.index(node)


@dataclass(frozen=True, eq=False)
class ReachSolution:
    z: np.ndarray
    value: float
    residual: float
    method: str
    iterations: int


@dataclass(frozen=True)
class VerifyResult:
    probability: float
    cost: Optional[Number]
    within_budget: bool
    residual: float
    method: str


@dataclass(frozen=True)
class SimulationResult:
    estimate: float
    half_width_95: float
    episodes: int
    horizon: int


def _product_indices(ix: IndexedScenario):
    num_nodes = ix.num_nodes
    s_idx = np.repeat(np.arange(ix.num_states), num_nodes)
    n_idx = np.tile(np.arange(num_nodes), ix.num_states)
    return s_idx, n_idx


def _successor_matrix(ix: IndexedScenario, s_idx, n_idx, received) -> csr_matrix:
    """Rows of the product for pairs (s_idx, n_idx) receiving observations."""
    actions = ix.gamma[n_idx, received]
    next_nodes = ix.delta[n_idx, received]
    # Pairs without a controller rule have no successors.
    defined = (actions >= 0) & (next_nodes >= 0)
    rows = ix.kernel[s_idx * len(ix.actions) + np.where(defined, actions, 0)]
    counts = np.diff(rows.indptr)
    cols = rows.indices * ix.num_nodes + np.repeat(np.maximum(next_nodes, 0), counts)
    ret = csr_matrix(
        (rows.data * np.repeat(defined, counts), cols, rows.indptr),
        shape=(len(s_idx), ix.num_states * ix.num_nodes),
    )
    ret.eliminate_zeros()
    return ret


def build_product(scenario: Scenario, alt: Alteration) -> ProductChain:
    ix = scenario.indexed
    images = ix.alteration_indices(alt)
    s_idx, n_idx = _product_indices(ix)
    transition = _successor_matrix(ix, s_idx, n_idx, images[ix.obs_of[s_idx]])
    product_build_count.inc()
    logging.debug(
        "Built product with %d states and %d transitions for %s",
        transition.shape[0], transition.nnz, alt)
    return ProductChain(
        states=ix.states,
        nodes=ix.nodes,
        transition=transition,
        goal=ix.decoy[s_idx],
        q0=ix.initial_state * ix.num_nodes + ix.initial_node,
        work=len(s_idx) + transition.nnz,
    )


def backward_reachable(adjacency: csr_matrix, targets: np.ndarray) -> np.ndarray:
    """Mask of vertices with a path of any length into targets."""
    pattern = csr_matrix(
        (np.ones(adjacency.nnz), adjacency.indices, adjacency.indptr),
        shape=adjacency.shape,
    )
    reached = targets.copy()
    frontier = targets.astype(float)
    while True:
        new = ((pattern @ frontier) > 0) & ~reached
        if not new.any():
            return reached
        reached |= new
        frontier = new.astype(float)


def _bellman_residual(t_uu, b, z_u) -> float:
    if z_u.size == 0:
        return 0.0
    return float(np.max(np.abs(t_uu @ z_u + b - z_u)))


def _gauss_seidel(t_uu, b, z_u, tol, max_iter):
    lower = (eye(t_uu.shape[0], format="csr") - tril(t_uu, k=0)).tocsr()
    upper = triu(t_uu, k=1).tocsr()
    residual = _bellman_residual(t_uu, b, z_u)
    iterations = 0
    while residual > tol:
        if iterations >= max_iter:
            raise NonConvergence(residual, iterations)
        z_u = spsolve_triangular(lower, upper @ z_u + b, lower=True)
        iterations += 1
        residual = _bellman_residual(t_uu, b, z_u)
    return z_u, residual, iterations


def reach_probability(
    chain: ProductChain,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITERATIONS,
    method: Optional[str] = None,
    direct_max_states: int = DIRECT_MAX_STATES,
) -> ReachSolution:
    """Probability of eventually entering a goal pair, from every pair.

    Args:
      method: "direct", "iterative" or None to pick by chain size

    Raises:
      NonConvergence: the iterative solve ran out of iterations
    """
    if method is None:
        method = "direct" if chain.size <= direct_max_states else "iterative"
    elif method not in ("direct", "iterative"):
        raise ValueError(f"unknown method {method!r}")
    goal = chain.goal
    unknown = backward_reachable(chain.transition, goal) & ~goal
    t_u = chain.transition[unknown]
    t_uu = t_u[:, unknown]
    b = np.asarray(t_u[:, goal].sum(axis=1)).ravel()
    iterations = 0
    if not unknown.any():
        z_u = np.zeros(0)
    elif method == "direct":
        a = (eye(t_uu.shape[0], format="csc") - t_uu.tocsc()).tocsc()
        z_u = np.atleast_1d(spsolve(a, b))
    else:
        z_u = np.zeros(t_uu.shape[0])
    residual = _bellman_residual(t_uu, b, z_u)
    if residual > tol:
        if method == "direct":
            logging.warning(
                "Direct solve left residual %.3g; refining iteratively", residual)
        z_u, residual, iterations = _gauss_seidel(t_uu, b, z_u, tol, max_iter)
    reach_solve_count.labels(method=method).inc()
    z = np.zeros(chain.size)
    z[goal] = 1.0
    z[unknown] = np.clip(z_u, 0.0, 1.0)
    return ReachSolution(
        z=z, value=float(z[chain.q0]), residual=residual, method=method,
        iterations=iterations)


def verify(scenario: Scenario, alt: Alteration, **kwargs) -> VerifyResult:
    solution = reach_probability(build_product(scenario, alt), **kwargs)
    cost = alteration_cost(scenario.cost_model, alt)
    return VerifyResult(
        probability=solution.value,
        cost=cost,
        within_budget=cost is not None and cost <= scenario.budget,
        residual=solution.residual,
        method=solution.method,
    )


def _sampling_keys(transition: csr_matrix) -> np.ndarray:
    """Per-entry key row + cumulative probability within the row."""
    counts = np.diff(transition.indptr)
    rows = np.repeat(np.arange(transition.shape[0]), counts)
    cumulative = np.cumsum(transition.data)
    before = np.concatenate(([0.0], cumulative))[transition.indptr[:-1]]
    totals = np.asarray(transition.sum(axis=1)).ravel()
    within = (cumulative - np.repeat(before, counts)) / np.repeat(
        np.where(totals > 0, totals, 1.0), counts)
    return rows + within


def _simulate_chunk(transition, keys, live, goal, q0, episodes, horizon, seed_seq):
    rng = np.random.default_rng(seed_seq)
    if goal[q0]:
        return episodes
    if not live[q0]:
        return 0
    q = np.full(episodes, q0, dtype=np.int64)
    hits = 0
    indptr = transition.indptr
    for _ in range(horizon):
        u = rng.random(q.size)
        pos = np.searchsorted(keys, q + u, side="right")
        pos = np.clip(pos, indptr[q], indptr[q + 1] - 1)
        q = transition.indices[pos]
        entered = goal[q]
        hits += int(entered.sum())
        q = q[~entered & live[q]]
        if q.size == 0:
            break
    return hits


def simulate(
    scenario: Scenario,
    alt: Alteration,
    episodes: int = 100_000,
    horizon: Optional[int] = None,
    seed: int = 0,
    threads: int = 1,
) -> SimulationResult:
    """Monte Carlo estimate of the decoy reach probability.

    Episodes are split into fixed-size chunks, each with its own child of
    the seed sequence, so the estimate does not depend on the thread count.
    """
    if episodes < 1:
        raise ValueError("episodes must be at least 1")
    chain = build_product(scenario, alt)
    if horizon is None:
        horizon = 100 * chain.size
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    # Pairs that can no longer reach the decoy end their episode as a miss.
    live = backward_reachable(chain.transition, chain.goal)
    live &= np.diff(chain.transition.indptr) > 0
    keys = _sampling_keys(chain.transition)
    num_chunks = -(-episodes // SIMULATION_CHUNK)
    sizes = [SIMULATION_CHUNK] * (num_chunks - 1)
    sizes.append(episodes - SIMULATION_CHUNK * (num_chunks - 1))
    seeds = np.random.SeedSequence(seed).spawn(num_chunks)

    def run(i):
        return _simulate_chunk(
            chain.transition, keys, live, chain.goal, chain.q0, sizes[i],
            horizon, seeds[i])

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        hits = sum(executor.map(run, range(num_chunks)))
    estimate = hits / episodes
    half_width = 1.96 * float(np.sqrt(estimate * (1 - estimate) / episodes))
    logging.debug("Simulated %d episodes: %d hits", episodes, hits)
    return SimulationResult(
        estimate=estimate, half_width_95=half_width, episodes=episodes,
        horizon=horizon)


@dataclass(frozen=True, eq=False)
class ChoiceMatrix:
    """Product rows for every received observation.

    Row ``q * |Ω| + o`` of ``matrix`` is the successor distribution of pair q
    when its state's observation is received as o. ``source`` maps each pair
    to the observation its state emits.
    """

    matrix: csr_matrix
    source: np.ndarray
    goal: np.ndarray
    q0: int
    num_observations: int

    @property
    def size(self) -> int:
        return self.source.size

    def union_graph(self, allowed: np.ndarray) -> csr_matrix:
        """Adjacency of the pairs under any choice in allowed[emitted, received]."""
        row_allowed = allowed[self.source].ravel()
        selector = csr_matrix(
            (row_allowed.astype(float),
             np.arange(row_allowed.size),
             np.arange(0, row_allowed.size + 1, self.num_observations)),
            shape=(self.size, row_allowed.size),
        )
        selector.eliminate_zeros()
        return (selector @ self.matrix).tocsr()


def build_choice_matrix(scenario: Scenario) -> ChoiceMatrix:
    ix = scenario.indexed
    num_obs = ix.num_observations
    s_idx, n_idx = _product_indices(ix)
    s_rep = np.repeat(s_idx, num_obs)
    n_rep = np.repeat(n_idx, num_obs)
    received = np.tile(np.arange(num_obs), s_idx.size)
    return ChoiceMatrix(
        matrix=_successor_matrix(ix, s_rep, n_rep, received),
        source=ix.obs_of[s_idx],
        goal=ix.decoy[s_idx],
        q0=ix.initial_state * ix.num_nodes + ix.initial_node,
        num_observations=num_obs,
    )


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over the rationals."""
    n = len(b)
    rows = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return [row[n] for row in rows]


def exact_reach_probability(scenario: Scenario, alt: Alteration) -> Fraction:
    """Reach probability in rational arithmetic.

    Float probabilities are taken at their exact binary value, so this is
    only exact for scenarios built with rational probabilities.
    """
    chain = build_product(scenario, alt)
    if chain.goal[chain.q0]:
        return Fraction(1)
    unknown = backward_reachable(chain.transition, chain.goal) & ~chain.goal
    if not unknown[chain.q0]:
        return Fraction(0)
    pomdp = scenario.pomdp
    fsc = scenario.fsc
    num_nodes = len(fsc.nodes)
    state_index = {s: i for i, s in enumerate(pomdp.states)}
    node_index = {n: i for i, n in enumerate(fsc.nodes)}
    order = [int(q) for q in np.flatnonzero(unknown)]
    position = {q: i for i, q in enumerate(order)}
    a = [[Fraction(int(i == j)) for j in range(len(order))] for i in range(len(order))]
    b = [Fraction(0)] * len(order)
    for i, q in enumerate(order):
        s, n = chain.pair(q)
        o = alt[pomdp.obs_of[s]]
        action = fsc.action_of[(n, o)]
        n2 = node_index[fsc.next_node[(n, o)]]
        for s2, p in pomdp.successors(s, action).items():
            if p <= 0:
                continue
            q2 = state_index[s2] * num_nodes + n2
            if chain.goal[q2]:
                b[i] += Fraction(p)
            elif q2 in position:
                a[i][position[q2]] -= Fraction(p)
    z = _solve_exact(a, b)
    return z[position[chain.q0]]


def path_probability(
    scenario: Scenario, alt: Alteration, path: Sequence[str]
) -> Number:
    """Probability that the first len(path) - 1 steps follow path exactly."""
    pomdp = scenario.pomdp
    fsc = scenario.fsc
    node = fsc.initial_node
    if not path or path[0] != pomdp.initial_state:
        return 0
    ret: Number = 1
    for s, s2 in zip(path, path[1:]):
        o = alt[pomdp.obs_of[s]]
        ret = ret * pomdp.successors(s, fsc.action_of[(node, o)]).get(s2, 0)
        node = fsc.next_node[(node, o)]
    return ret
