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

"""Mixed-integer model of the best-alteration problem.

The model works over triples (s, n, o): the POMDP is in state s, the
controller in node n and the controller receives observation o. Binary
x_{o,o'} selects the alteration, z_{s,n,o} is the reach probability of a
triple, and l_{s,o,s',n',o'} stands for the product x_{O(s),o} z_{s',n',o'},
tied to it by McCormick inequalities.

Bellman rows alone do not fix z on a closed cycle of non-decoy triples:
any value up to 1 satisfies them there. A reachability certificate, on by
default, closes that gap. Continuous flow f runs along transitions between
triples whose received observation is the chosen image, every non-decoy
triple must emit at least z_{s,n,o} more flow than it receives, and only
decoy triples absorb it. Flow cannot leave a closed set of triples without
a path to a decoy, so z is 0 there and the model is exact for binary x.

Without the certificate the model overestimates whenever the alteration
closes such a cycle. Triples that cannot reach a decoy under any
alteration are still pinned to zero by default, which removes the common
instance (absorbing non-decoy states).
"""

__all__ = [
    "ExtendedProduct",
    "MilpModel",
    "MilpStats",
    "MilpSolution",
    "ExternalSolverError",
    "SolutionParseError",
    "build_extended_product",
    "build_milp",
    "count_stats",
    "expected_stats",
    "export_lp",
    "write_lp",
    "sanitize",
    "desanitize",
    "split_name",
    "fix_and_solve",
    "check_solution",
    "solve_milp",
    "read_solution",
    "decode_alteration",
    "run_external_solver",
]

import asyncio
import logging
import os
import shlex
import tempfile
from collections import defaultdict
from collections.abc import Iterator
from contextlib import suppress
from dataclasses import dataclass, field
from typing import Optional, TextIO

import numpy as np
from aiohttp_openmetrics import Counter
from scipy.sparse import csr_matrix, eye
from scipy.sparse.linalg import spsolve

from . import splitout_env
from .model import Alteration, Scenario, ensure_initial_identity
from .verifier import ChoiceMatrix, backward_reachable, build_choice_matrix, verify

milp_build_count = Counter("decoyforge_milp_builds", "Number of MILP models built")

SEPARATOR = "__"
TERMS_PER_LINE = 8


class ExternalSolverError(Exception):
    """An external MILP solver failed."""

    def __init__(self, command: str, reason: str) -> None:
        self.command = command
        self.reason = reason
        super().__init__(f"{command}: {reason}")


class SolutionParseError(Exception):
    """A solver solution could not be interpreted."""


def sanitize(name: str) -> str:
    """Map an id to [A-Za-z0-9_] so that it never contains the separator.

    Letters and digits are kept. Any other character, "_" included, becomes
    "_" plus two hex digits, or "_u" plus six for code points above 0xff.
    """
    ret = []
    for c in name:
        if c.isascii() and c.isalnum():
            ret.append(c)
        elif ord(c) < 0x100:
            ret.append("_%02x" % ord(c))
        else:
            ret.append("_u%06x" % ord(c))
    return "".join(ret)


def desanitize(name: str) -> str:
    ret = []
    i = 0
    while i < len(name):
        if name[i] != "_":
            ret.append(name[i])
            i += 1
        elif name[i + 1:i + 2] == "u":
            ret.append(chr(int(name[i + 2:i + 8], 16)))
            i += 8
        else:
            ret.append(chr(int(name[i + 1:i + 3], 16)))
            i += 3
    return "".join(ret)


def split_name(name: str) -> tuple[str, ...]:
    """Split a variable or row name into its kind and the original ids."""
    # Escapes end in a hex digit, so "__" never occurs inside an id and a
    # left-to-right split recovers "a", "_5fb" from "a___5fb".
    kind, *parts = name.split(SEPARATOR)
    return (kind, *(desanitize(p) for p in parts))


def _name(kind: str, *ids: str) -> str:
    return SEPARATOR.join((kind,) + tuple(sanitize(i) for i in ids))


@dataclass(frozen=True, eq=False)
class ExtendedProduct:
    """Transitions between triples.

    The probability of moving from (s, n, o) to (s', n', o') is
    P(s, γ(n, o), s') when n' = δ(n, o) and 0 otherwise, for every o'. Row
    ``(s * |N| + n) * |Ω| + o`` of ``choice.matrix`` holds it over the
    successor pairs (s', n'); the received observation o' is left open.
    """

    choice: ChoiceMatrix
    num_states: int
    num_nodes: int
    num_observations: int
    reachable_pairs: Optional[np.ndarray] = None

    @property
    def triples(self) -> Iterator[tuple[int, int, int]]:
        for s in range(self.num_states):
            for n in range(self.num_nodes):
                if self.reachable_pairs is not None and not self.reachable_pairs[
                        s * self.num_nodes + n]:
                    continue
                for o in range(self.num_observations):
                    yield (s, n, o)

    @property
    def num_triples(self) -> int:
        pairs = self.num_states * self.num_nodes
        if self.reachable_pairs is not None:
            pairs = int(self.reachable_pairs.sum())
        return pairs * self.num_observations

    def successors(self, s: int, n: int, o: int) -> list[tuple[int, int, float]]:
        """(s', n', probability) for every positive transition of (s, n, o)."""
        row = (s * self.num_nodes + n) * self.num_observations + o
        m = self.choice.matrix
        ret = []
        for k in range(m.indptr[row], m.indptr[row + 1]):
            s2, n2 = divmod(int(m.indices[k]), self.num_nodes)
            ret.append((s2, n2, float(m.data[k])))
        return ret


def _initial_allowed(scenario: Scenario) -> np.ndarray:
    ix = scenario.indexed
    allowed = ix.permitted.copy()
    o0 = ix.initial_observation
    allowed[o0] = False
    allowed[o0, o0] = ix.permitted[o0, o0]
    return allowed


def build_extended_product(scenario: Scenario, prune_unreachable: bool = False
                           ) -> ExtendedProduct:
    ix = scenario.indexed
    choice = build_choice_matrix(scenario)
    reachable = None
    if prune_unreachable:
        adjacency = choice.union_graph(_initial_allowed(scenario))
        start = np.zeros(choice.size, dtype=bool)
        start[choice.q0] = True
        reachable = backward_reachable(adjacency.T.tocsr(), start)
    return ExtendedProduct(
        choice=choice,
        num_states=ix.num_states,
        num_nodes=ix.num_nodes,
        num_observations=ix.num_observations,
        reachable_pairs=reachable,
    )


@dataclass(frozen=True)
class MilpStats:
    num_vars: int
    num_constraints: int


@dataclass(eq=False)
class MilpModel:
    """A MILP in row form, with enough structure kept to decode solutions.

    Rows are stored compressed: the coefficients of row i are
    ``row_vals[row_start[i]:row_start[i + 1]]`` on variables ``row_cols``.
    """

    scenario: Scenario
    extended: ExtendedProduct
    var_names: list[str] = field(default_factory=list)
    var_kinds: list[str] = field(default_factory=list)
    var_lb: list[float] = field(default_factory=list)
    var_ub: list[float] = field(default_factory=list)
    row_names: list[str] = field(default_factory=list)
    row_kinds: list[str] = field(default_factory=list)
    row_senses: list[str] = field(default_factory=list)
    row_rhs: list[float] = field(default_factory=list)
    row_start: list[int] = field(default_factory=lambda: [0])
    row_cols: list[int] = field(default_factory=list)
    row_vals: list[float] = field(default_factory=list)
    objective: int = -1
    x_vars: dict[tuple[int, int], int] = field(default_factory=dict)
    z_vars: Optional[np.ndarray] = None
    l_factors: dict[int, tuple[int, int]] = field(default_factory=dict)

    def add_var(self, name: str, kind: str, lb: float = 0.0, ub: float = 1.0) -> int:
        self.var_names.append(name)
        self.var_kinds.append(kind)
        self.var_lb.append(lb)
        self.var_ub.append(ub)
        return len(self.var_names) - 1

    def add_row(self, name: str, kind: str, terms: list[tuple[int, float]],
                sense: str, rhs: float) -> None:
        self.row_names.append(name)
        self.row_kinds.append(kind)
        self.row_senses.append(sense)
        self.row_rhs.append(rhs)
        for var, coef in terms:
            self.row_cols.append(var)
            self.row_vals.append(coef)
        self.row_start.append(len(self.row_cols))

    def row(self, i: int) -> list[tuple[int, float]]:
        lo, hi = self.row_start[i], self.row_start[i + 1]
        return list(zip(self.row_cols[lo:hi], self.row_vals[lo:hi]))

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    @property
    def num_rows(self) -> int:
        return len(self.row_names)

    def matrix(self) -> csr_matrix:
        return csr_matrix(
            (self.row_vals, self.row_cols, self.row_start),
            shape=(self.num_rows, self.num_vars))


def _live_triples(scenario: Scenario, extended: ExtendedProduct) -> np.ndarray:
    """Mask over choice rows of triples that reach a decoy under some alteration."""
    ix = scenario.indexed
    choice = extended.choice
    live_pairs = backward_reachable(choice.union_graph(ix.permitted), choice.goal)
    row_permitted = ix.permitted[choice.source].ravel()
    goal_rows = np.repeat(choice.goal, ix.num_observations)
    onward = (choice.matrix @ live_pairs.astype(float)) > 0
    return row_permitted & (goal_rows | onward)


def build_milp(
    scenario: Scenario,
    *,
    sparse: bool = True,
    prune_unreachable: bool = False,
    pin_unreachable: bool = True,
    certify_reachability: bool = True,
) -> MilpModel:
    """Build the MILP for scenario.

    Args:
      sparse: only create l variables for one-step successors s' of s
      prune_unreachable: drop triples whose (state, node) pair cannot be
        reached from the initial pair under any alteration
      pin_unreachable: bound z to 0 on triples that cannot reach a decoy
      certify_reachability: add flow variables and rows that force z to 0
        on triples with no path to a decoy under the chosen alteration

    Raises:
      InfeasibleScenario: the initial observation cannot stay unaltered
    """
    ensure_initial_identity(scenario)
    ix = scenario.indexed
    extended = build_extended_product(scenario, prune_unreachable)
    num_states, num_nodes, num_obs = ix.num_states, ix.num_nodes, ix.num_observations
    states, nodes, observations = ix.states, ix.nodes, ix.observations
    model = MilpModel(scenario=scenario, extended=extended)
    reachable = extended.reachable_pairs
    live = _live_triples(scenario, extended) if pin_unreachable else None

    for o in range(num_obs):
        for o2 in range(num_obs):
            if ix.permitted[o, o2]:
                model.x_vars[(o, o2)] = model.add_var(
                    _name("x", observations[o], observations[o2]), "x")

    z_vars = np.full((num_states, num_nodes, num_obs), -1, dtype=np.int64)
    for s, n, o in extended.triples:
        row = (s * num_nodes + n) * num_obs + o
        ub = 0.0 if live is not None and not live[row] else 1.0
        z_vars[s, n, o] = model.add_var(
            _name("z", states[s], nodes[n], observations[o]), "z", 0.0, ub)
    model.z_vars = z_vars
    o0 = ix.initial_observation
    model.objective = int(z_vars[ix.initial_state, ix.initial_node, o0])

    support = []
    for s in range(num_states):
        if sparse:
            rows = ix.kernel[s * len(ix.actions):(s + 1) * len(ix.actions)]
            support.append(sorted(set(rows.indices.tolist())))
        else:
            support.append(list(range(num_states)))

    l_vars: dict[tuple[int, int, int, int, int], int] = {}
    for s in range(num_states):
        if ix.decoy[s]:
            continue
        if reachable is not None and not reachable[
                s * num_nodes:(s + 1) * num_nodes].any():
            continue
        so = ix.obs_of[s]
        for o in range(num_obs):
            x = model.x_vars.get((so, o))
            if x is None:
                continue
            for s2 in support[s]:
                for n2 in range(num_nodes):
                    for o2 in range(num_obs):
                        z2 = z_vars[s2, n2, o2]
                        if z2 < 0:
                            continue
                        var = model.add_var(
                            _name("l", states[s], observations[o], states[s2],
                                  nodes[n2], observations[o2]), "l")
                        l_vars[(s, o, s2, n2, o2)] = var
                        model.l_factors[var] = (x, int(z2))

    budget_terms = [
        (var, float(ix.cost[o, o2]))
        for (o, o2), var in model.x_vars.items() if ix.cost[o, o2] > 0
    ]
    if budget_terms:
        model.add_row("budget", "budget", budget_terms, "<=", ix.budget)
    model.add_row("init_fix", "init", [(model.x_vars[(o0, o0)], 1.0)], "=", 1.0)
    for o in range(num_obs):
        model.add_row(
            _name("total", observations[o]), "total",
            [(model.x_vars[(o, o2)], 1.0) for o2 in range(num_obs)
             if (o, o2) in model.x_vars],
            "=", 1.0)

    for s, n, o in extended.triples:
        z = int(z_vars[s, n, o])
        x = model.x_vars.get((ix.obs_of[s], o))
        ids = (states[s], nodes[n], observations[o])
        if ix.decoy[s]:
            terms = [(z, 1.0)] if x is None else [(z, 1.0), (x, -1.0)]
            model.add_row(_name("decoy", *ids), "decoy", terms, "=", 0.0)
            continue
        terms = [(z, 1.0)]
        if x is not None:
            for s2, n2, p in extended.successors(s, n, o):
                for o2 in range(num_obs):
                    var = l_vars.get((s, o, s2, n2, o2))
                    if var is not None:
                        terms.append((var, -p))
        model.add_row(_name("bell", *ids), "bell", terms, "=", 0.0)

    for var, (x, z2) in model.l_factors.items():
        suffix = model.var_names[var][len("l" + SEPARATOR):]
        model.add_row("mc1" + SEPARATOR + suffix, "mc1", [(var, 1.0), (z2, -1.0)],
                      "<=", 0.0)
        model.add_row("mc2" + SEPARATOR + suffix, "mc2", [(var, 1.0), (x, -1.0)],
                      "<=", 0.0)
        model.add_row("mc3" + SEPARATOR + suffix, "mc3",
                      [(var, 1.0), (z2, -1.0), (x, -1.0)], ">=", -1.0)

    if certify_reachability:
        _add_reach_certificate(model, z_vars)

    milp_build_count.inc()
    logging.info(
        "Built MILP with %d variables (%d binary, %d linearization) and %d rows",
        model.num_vars, len(model.x_vars), len(model.l_factors), model.num_rows)
    return model


def _add_reach_certificate(model: MilpModel, z_vars: np.ndarray) -> None:
    """Add flow variables f and the reach, fout and fin rows.

    An edge (s, n, o) -> (s', n', o') gets a flow variable when the first
    triple is a non-decoy with an x variable, (s', n') is a successor of it
    and x_{O(s'),o'} exists. Flow out of a triple and into a decoy triple
    is capped by K x, where K is the number of flow sources.
    """
    ix = model.scenario.indexed
    extended = model.extended
    states, nodes, observations = ix.states, ix.nodes, ix.observations

    def gate(s: int, o: int) -> Optional[int]:
        return model.x_vars.get((ix.obs_of[s], o))

    sources = [
        (s, n, o) for s, n, o in extended.triples
        if not ix.decoy[s] and gate(s, o) is not None
    ]
    capacity = float(max(len(sources), 1))
    outflow: dict[tuple[int, int, int], list[int]] = defaultdict(list)
    inflow: dict[tuple[int, int, int], list[int]] = defaultdict(list)
    for s, n, o in sources:
        for s2, n2, p in extended.successors(s, n, o):
            if p <= 0:
                continue
            for o2 in range(ix.num_observations):
                if (s2, n2, o2) == (s, n, o):
                    continue
                if z_vars[s2, n2, o2] < 0 or gate(s2, o2) is None:
                    continue
                var = model.add_var(
                    _name("f", states[s], nodes[n], observations[o],
                          states[s2], nodes[n2], observations[o2]),
                    "f", 0.0, capacity)
                outflow[(s, n, o)].append(var)
                inflow[(s2, n2, o2)].append(var)

    for s, n, o in extended.triples:
        x = gate(s, o)
        if x is None:
            continue
        t = (s, n, o)
        ids = (states[s], nodes[n], observations[o])
        if ix.decoy[s]:
            model.add_row(
                _name("fin", *ids), "fin",
                [(f, 1.0) for f in inflow[t]] + [(x, -capacity)], "<=", 0.0)
            continue
        model.add_row(
            _name("reach", *ids), "reach",
            [(int(z_vars[s, n, o]), 1.0)]
            + [(f, -1.0) for f in outflow[t]] + [(f, 1.0) for f in inflow[t]],
            "<=", 0.0)
        model.add_row(
            _name("fout", *ids), "fout",
            [(f, 1.0) for f in outflow[t]] + [(x, -capacity)], "<=", 0.0)


def count_stats(model: MilpModel) -> MilpStats:
    return MilpStats(num_vars=model.num_vars, num_constraints=model.num_rows)


def _certificate_stats(scenario: Scenario) -> tuple[int, int]:
    """Flow variables and certificate rows of an unpruned model."""
    ix = scenario.indexed
    choice = build_choice_matrix(scenario)
    num_obs = ix.num_observations
    num_rows = choice.size * num_obs
    row_gated = ix.permitted[choice.source].ravel()
    goal_rows = np.repeat(choice.goal, num_obs)
    images_per_pair = ix.permitted[choice.source].sum(axis=1)
    pattern = (choice.matrix > 0).astype(np.int64)
    edges = pattern @ images_per_pair
    self_loops = np.asarray(
        pattern[np.arange(num_rows), np.arange(num_rows) // num_obs]).ravel()
    sources = row_gated & ~goal_rows
    num_f = int((edges - self_loops)[sources].sum())
    return num_f, 2 * int(sources.sum()) + int((row_gated & goal_rows).sum())


def expected_stats(scenario: Scenario, sparse: bool = True,
                   certify_reachability: bool = True) -> MilpStats:
    """Closed-form size of an unpruned model."""
    ix = scenario.indexed
    num_states, num_nodes, num_obs = ix.num_states, ix.num_nodes, ix.num_observations
    num_x = int(ix.permitted.sum())
    num_decoy = int(ix.decoy.sum())
    num_l = 0
    for s in np.flatnonzero(~ix.decoy):
        if sparse:
            rows = ix.kernel[s * len(ix.actions):(s + 1) * len(ix.actions)]
            succ = len(set(rows.indices.tolist()))
        else:
            succ = num_states
        num_l += int(ix.permitted[ix.obs_of[s]].sum()) * succ * num_nodes * num_obs
    has_budget = bool((ix.cost[ix.permitted] > 0).any())
    rows = (int(has_budget) + 1 + num_obs + num_decoy * num_nodes * num_obs
            + (num_states - num_decoy) * num_nodes * num_obs + 3 * num_l)
    num_f = 0
    if certify_reachability:
        num_f, certificate_rows = _certificate_stats(scenario)
        rows += certificate_rows
    return MilpStats(
        num_vars=num_x + num_states * num_nodes * num_obs + num_l + num_f,
        num_constraints=rows)


def _number(v: float) -> str:
    return f"{v:.17g}"


def _write_terms(f: TextIO, terms: list[tuple[int, float]], names: list[str]) -> None:
    if not terms:
        # An observation without any permitted image still gets its row.
        f.write(" 0 %s" % names[0])
        return
    for i, (var, coef) in enumerate(terms):
        if i and i % TERMS_PER_LINE == 0:
            f.write("\n   ")
        sign = "-" if coef < 0 else "+"
        if i == 0 and sign == "+":
            f.write(" %s %s" % (_number(abs(coef)), names[var]))
        else:
            f.write(" %s %s %s" % (sign, _number(abs(coef)), names[var]))


def write_lp(model: MilpModel, f: TextIO) -> None:
    """Write model in CPLEX LP format."""
    stats = count_stats(model)
    names = model.var_names
    f.write("\\ decoyforge MILP model\n")
    f.write("\\ Variables: %d, Constraints: %d\n" % (
        stats.num_vars, stats.num_constraints))
    f.write("Maximize\n obj: %s\n" % names[model.objective])
    f.write("Subject To\n")
    for i, name in enumerate(model.row_names):
        f.write(" %s:" % name)
        _write_terms(f, model.row(i), names)
        f.write(" %s %s\n" % (model.row_senses[i], _number(model.row_rhs[i])))
    f.write("Bounds\n")
    for var, kind in enumerate(model.var_kinds):
        if kind == "x":
            continue
        lb, ub = model.var_lb[var], model.var_ub[var]
        if lb == ub:
            f.write(" %s = %s\n" % (names[var], _number(lb)))
        else:
            f.write(" %s <= %s <= %s\n" % (_number(lb), names[var], _number(ub)))
    f.write("Binary\n")
    for var, kind in enumerate(model.var_kinds):
        if kind == "x":
            f.write(" %s\n" % names[var])
    f.write("End\n")


def export_lp(model: MilpModel, path: str) -> None:
    """Write model to path in CPLEX LP format.

    Raises:
      OSError: the file could not be written; the message names path
    """
    try:
        with open(path, "w", encoding="ascii", newline="\n") as f:
            write_lp(model, f)
    except OSError as e:
        raise OSError(e.errno, f"cannot write LP file {path}: {e.strerror}") from e


def _substituted_system(model: MilpModel, images: np.ndarray):
    """Decoy and Bellman rows with x fixed and each l replaced by x * z."""
    x_value = np.zeros(model.num_vars)
    for (o, o2), var in model.x_vars.items():
        x_value[var] = float(images[o] == o2)
    z_ids = [v for v, kind in enumerate(model.var_kinds) if kind == "z"]
    position = {v: i for i, v in enumerate(z_ids)}
    rows, cols, vals = [], [], []
    rhs = np.zeros(len(z_ids))
    defined = np.zeros(len(z_ids), dtype=bool)
    for i, kind in enumerate(model.row_kinds):
        if kind not in ("decoy", "bell"):
            continue
        terms = model.row(i)
        z = position[terms[0][0]]
        defined[z] = True
        for var, coef in terms[1:]:
            kind2 = model.var_kinds[var]
            if kind2 == "x":
                rhs[z] -= coef * x_value[var]
            else:
                x, z2 = model.l_factors[var]
                if x_value[x]:
                    rows.append(z)
                    cols.append(position[z2])
                    vals.append(-coef)
    coupling = csr_matrix((vals, (rows, cols)), shape=(len(z_ids), len(z_ids)))
    return z_ids, coupling, rhs, defined


def fix_and_solve(model: MilpModel, alt: Alteration) -> float:
    """Objective of the model with x fixed to encode alt.

    Substituting l = x z turns the decoy and Bellman rows into a linear
    system in z. Triples that cannot reach a row with positive right-hand
    side are set to 0 before solving.
    """
    ix = model.scenario.indexed
    images = ix.alteration_indices(alt)
    z_ids, coupling, rhs, defined = _substituted_system(model, images)
    sources = rhs > 0
    live = backward_reachable(coupling, sources) & defined
    for i, v in enumerate(z_ids):
        if model.var_ub[v] == 0:
            live[i] = False
    z = np.zeros(len(z_ids))
    if live.any():
        a = (eye(int(live.sum()), format="csc")
             - coupling[live][:, live].tocsc()).tocsc()
        z[live] = np.atleast_1d(spsolve(a, rhs[live]))
    return float(z[z_ids.index(model.objective)])


def check_solution(model: MilpModel, values: np.ndarray) -> dict[str, float]:
    """Largest violations of a solution.

    Returns:
      "rows": of any model row; "mccormick": of l = x z; "gating": of
      z_{s,n,o} <= x_{O(s),o} for non-decoy triples
    """
    values = np.asarray(values, dtype=float)
    activity = model.matrix() @ values
    rhs = np.asarray(model.row_rhs)
    senses = np.asarray(model.row_senses)
    row_violation = np.where(
        senses == "<=", activity - rhs,
        np.where(senses == ">=", rhs - activity, np.abs(activity - rhs)))
    mccormick = max(
        (abs(values[v] - values[x] * values[z]) for v, (x, z) in model.l_factors.items()),
        default=0.0)
    ix = model.scenario.indexed
    gating = 0.0
    for s, n, o in model.extended.triples:
        if ix.decoy[s]:
            continue
        z = values[model.z_vars[s, n, o]]
        x = model.x_vars.get((ix.obs_of[s], o))
        gating = max(gating, z - (values[x] if x is not None else 0.0))
    return {
        "rows": float(max(row_violation.max(initial=0.0), 0.0)),
        "mccormick": float(mccormick),
        "gating": float(max(gating, 0.0)),
    }


@dataclass(frozen=True)
class MilpSolution:
    alteration: Alteration
    objective: float
    verified_value: float
    values: Optional[np.ndarray] = None


def decode_alteration(model: MilpModel, values) -> Alteration:
    """Read the alteration off x values, by index array or by name mapping."""
    ix = model.scenario.indexed
    if isinstance(values, dict):
        value_of = lambda var: float(values.get(model.var_names[var], 0.0))  # noqa: E731
    else:
        value_of = lambda var: float(values[var])  # noqa: E731
    images: dict[int, int] = {}
    for (o, o2), var in model.x_vars.items():
        if value_of(var) > 0.5:
            if o in images:
                raise SolutionParseError(
                    f"observation {ix.observations[o]!r} has several images")
            images[o] = o2
    missing = [ix.observations[o] for o in range(ix.num_observations) if o not in images]
    if missing:
        raise SolutionParseError(f"no image for observations {missing}")
    return ix.alteration_from_indices([images[o] for o in range(ix.num_observations)])


def solve_milp(model: MilpModel, time_limit: Optional[float] = None) -> MilpSolution:
    """Solve model with the HiGHS backend bundled with scipy.

    Only practical for small instances.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp

    c = np.zeros(model.num_vars)
    c[model.objective] = -1.0
    rhs = np.asarray(model.row_rhs, dtype=float)
    senses = np.asarray(model.row_senses)
    lower = np.where(senses == "<=", -np.inf, rhs)
    upper = np.where(senses == ">=", np.inf, rhs)
    integrality = np.array([kind == "x" for kind in model.var_kinds], dtype=int)
    options = {"time_limit": time_limit} if time_limit else {}
    result = milp(
        c,
        constraints=LinearConstraint(model.matrix(), lower, upper),
        integrality=integrality,
        bounds=Bounds(np.asarray(model.var_lb), np.asarray(model.var_ub)),
        options=options,
    )
    if result.x is None:
        raise SolutionParseError(f"MILP solve failed: {result.message}")
    alt = decode_alteration(model, result.x)
    verified = verify(model.scenario, alt).probability
    logging.info("MILP objective %.9f, verified %.9f", -result.fun, verified)
    return MilpSolution(alteration=alt, objective=float(-result.fun),
                        verified_value=verified, values=result.x)


CBC_FAILED_STATUSES = ("Infeasible", "Integer infeasible", "Unbounded")


def read_solution(f: TextIO) -> dict[str, float]:
    """Parse a solver solution file into variable values.

    Plain "name value" lines are read, as are CBC rows of the form
    "index name value reduced-cost", optionally marked with a leading "**".
    Any other line is ignored.

    Raises:
      SolutionParseError: a CBC status line reports no solution
    """
    ret = {}
    for line in f:
        if " - objective value " in line:
            status = line.split(" - ", 1)[0].strip()
            if status.startswith(CBC_FAILED_STATUSES):
                raise SolutionParseError(f"solver reported {status!r}")
            continue
        parts = line.split()
        if parts[:1] == ["**"]:
            parts = parts[1:]
        if len(parts) == 4 and parts[0].isdigit():
            parts = parts[1:3]
        if len(parts) != 2:
            continue
        try:
            ret[parts[0]] = float(parts[1])
        except ValueError:
            continue
    return ret


def _solver_args(command: str, lp_path: str, solution_path: str):
    env, command = splitout_env(command)
    if "{lp}" not in command:
        command += " {lp}"
    if "{solution}" not in command:
        command += " {solution}"
    args = [
        arg.replace("{lp}", lp_path).replace("{solution}", solution_path)
        for arg in shlex.split(command)
    ]
    return env, args


async def run_external_solver(
    model: MilpModel, command: str, *, timeout: Optional[float] = None
) -> MilpSolution:
    """Export model, run command on it and decode the solution it writes.

    command may contain "{lp}" and "{solution}" placeholders; missing ones
    are appended in that order. Leading NAME=value words set environment
    variables for the solver.
    """
    with tempfile.TemporaryDirectory() as td:
        lp_path = os.path.join(td, "model.lp")
        solution_path = os.path.join(td, "model.sol")
        export_lp(model, lp_path)
        env, args = _solver_args(command, lp_path, solution_path)
        logging.debug("running %r", args)
        try:
            p = await asyncio.create_subprocess_exec(
                *args,
                stdin=asyncio.subprocess.DEVNULL,
                stdout=asyncio.subprocess.PIPE,
                stderr=asyncio.subprocess.PIPE,
                env=dict(os.environ, **env),
            )
        except OSError as e:
            raise ExternalSolverError(command, str(e)) from e
        communicate = p.communicate()
        if timeout is not None:
            communicate = asyncio.wait_for(communicate, timeout)
        try:
            stdout, stderr = await communicate
        except asyncio.TimeoutError as e:
            with suppress(ProcessLookupError):
                p.kill()
            await p.wait()
            raise ExternalSolverError(command, "timed out") from e
        if p.returncode != 0:
            raise ExternalSolverError(
                command, "exited with %d: %s" % (
                    p.returncode, stderr.decode(errors="replace").strip()))
        try:
            with open(solution_path) as f:
                values = read_solution(f)
        except FileNotFoundError as e:
            raise ExternalSolverError(command, "no solution file written") from e
    alt = decode_alteration(model, values)
    objective = values.get(model.var_names[model.objective])
    verified = verify(model.scenario, alt).probability
    return MilpSolution(
        alteration=alt,
        objective=verified if objective is None else objective,
        verified_value=verified,
    )
