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

"""Scenario generators: a sensor grid world and the knapsack reduction."""

__all__ = [
    "GeneratorError",
    "Sensor",
    "GridSpec",
    "KnapsackInstance",
    "KnapsackScenario",
    "reference_grid_spec",
    "grid_state_id",
    "gen_grid",
    "gen_knapsack",
    "knapsack_best_value",
    "knapsack_decision",
]

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .model import CostModel, Fsc, Number, Pomdp, Scenario

Cell = tuple[int, int]

BLANK = "b"
MOVES = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}
ORTHOGONAL = {"N": ("E", "W"), "S": ("E", "W"), "E": ("N", "S"), "W": ("N", "S")}


class GeneratorError(ValueError):
    """Generator parameters are inconsistent."""


def _rational(x: Union[int, float, Fraction, str]) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class Sensor:
    id: str
    cells: tuple[Cell, ...]


# Sensor layout of the 5x5 reference world; (x, y) with x pointing east.
REFERENCE_SENSORS = (
    Sensor("o0", ((0, 0),)),
    Sensor("o1", ((2, 0), (2, 1))),
    Sensor("o2", ((0, 2), (1, 2))),
    Sensor("o3", ((4, 0), (4, 1))),
    Sensor("o4", ((0, 4), (1, 4))),
    Sensor("o5", ((4, 3),)),
    Sensor("o6", ((3, 4),)),
)
REFERENCE_NORTH_SENSORS = ("o2", "o3", "o5")


@dataclass(frozen=True)
class GridSpec:
    """An n x n grid world watched by range sensors.

    Cells covered by no sensor emit the blank observation. When sensors
    overlap, the first one listed wins. The controller heads north after a
    sensor in north_sensors and east after any other sensor; the blank
    observation repeats the direction of the last sensor seen.
    """

    n: int = 5
    sensors: tuple[Sensor, ...] = REFERENCE_SENSORS
    north_sensors: tuple[str, ...] = REFERENCE_NORTH_SENSORS
    start: Cell = (0, 0)
    goal: Cell = (4, 4)
    hazard: Cell = (2, 2)
    p_intended: Number = Fraction(4, 5)
    blank_obs_alterable: bool = True
    budget: Number = 0

    def __post_init__(self):
        if self.n < 1:
            raise GeneratorError(f"grid size must be positive, got {self.n}")
        cells = [self.start, self.goal, self.hazard]
        for sensor in self.sensors:
            cells.extend(sensor.cells)
        for cell in cells:
            if not all(0 <= c < self.n for c in cell):
                raise GeneratorError(f"cell {cell} outside the {self.n}x{self.n} grid")
        if self.start == self.hazard:
            raise GeneratorError("start cell is the hazard")
        if self.start == self.goal:
            raise GeneratorError("start cell is the goal")
        if self.goal == self.hazard:
            raise GeneratorError("goal and hazard share a cell")
        if not 0 <= self.p_intended <= 1:
            raise GeneratorError(f"p_intended {self.p_intended} outside [0,1]")
        ids = [s.id for s in self.sensors]
        if len(set(ids)) != len(ids) or BLANK in ids:
            raise GeneratorError("sensor ids must be unique and differ from 'b'")
        unknown = set(self.north_sensors) - set(ids)
        if unknown:
            raise GeneratorError(f"unknown north sensors {sorted(unknown)}")


def reference_grid_spec(n: int = 5, **kwargs) -> GridSpec:
    """The reference layout, scaled to an n x n grid.

    Each sensor's first cell is scaled proportionally and its other cells
    keep their offsets, so sensor counts and ranges stay unchanged.
    """
    if n < 5:
        raise GeneratorError("the reference layout needs n >= 5")

    def scale(c: int) -> int:
        return round(c * (n - 1) / 4)

    sensors = []
    for sensor in REFERENCE_SENSORS:
        ax, ay = sensor.cells[0]
        bx, by = scale(ax), scale(ay)
        sensors.append(Sensor(sensor.id, tuple(
            (min(n - 1, bx + x - ax), min(n - 1, by + y - ay))
            for x, y in sensor.cells)))
    kwargs.setdefault("hazard", (scale(2), scale(2)))
    kwargs.setdefault("goal", (n - 1, n - 1))
    return GridSpec(n=n, sensors=tuple(sensors), **kwargs)


def grid_state_id(spec: GridSpec, cell: Cell) -> str:
    width = len(str(spec.n - 1))
    return "x%0*dy%0*d" % (width, cell[0], width, cell[1])


def _grid_row(spec: GridSpec, cell: Cell, action: str, p: Fraction) -> dict[Cell, Fraction]:
    def move(direction):
        dx, dy = MOVES[direction]
        x, y = cell[0] + dx, cell[1] + dy
        if 0 <= x < spec.n and 0 <= y < spec.n:
            return (x, y)
        return None

    row: dict[Cell, Fraction] = {}

    def add(target, mass):
        if mass:
            row[target] = row.get(target, Fraction(0)) + mass

    add(move(action) or cell, p)
    slips = [t for t in (move(d) for d in ORTHOGONAL[action]) if t is not None]
    if not slips:
        add(cell, 1 - p)
    for target in slips:
        add(target, (1 - p) / len(slips))
    return row


def gen_grid(spec: GridSpec, exact: bool = False) -> Scenario:
    """Build the grid scenario; decoy is the hazard cell.

    With exact, probabilities stay Fractions.
    """
    p = _rational(spec.p_intended)
    convert = (lambda x: x) if exact else float
    cells = [(x, y) for x in range(spec.n) for y in range(spec.n)]
    state_id = {cell: grid_state_id(spec, cell) for cell in cells}
    sensor_of: dict[Cell, str] = {}
    for sensor in spec.sensors:
        for cell in sensor.cells:
            sensor_of.setdefault(cell, sensor.id)

    transition: dict[tuple[str, str], dict[str, Number]] = {}
    for cell in cells:
        for action in MOVES:
            if cell in (spec.goal, spec.hazard):
                row = {cell: Fraction(1)}
            else:
                row = _grid_row(spec, cell, action, p)
            transition[(state_id[cell], action)] = {
                state_id[t]: convert(m) for t, m in row.items()}

    observations = [s.id for s in spec.sensors] + [BLANK]
    nodes = ("n0", "n1", "n2")
    action_of: dict[tuple[str, str], str] = {}
    next_node: dict[tuple[str, str], str] = {}
    for node in nodes:
        for o in observations:
            if o == BLANK:
                north = node == "n2"
            else:
                north = o in spec.north_sensors
            action_of[(node, o)] = "N" if north else "E"
            next_node[(node, o)] = "n2" if north else "n1"

    logging.debug("Generated %dx%d grid with %d sensors", spec.n, spec.n,
                  len(spec.sensors))
    return Scenario(
        pomdp=Pomdp(
            states=tuple(state_id.values()),
            actions=tuple(MOVES),
            transition=transition,
            initial_state=state_id[spec.start],
            observations=tuple(observations),
            obs_of={state_id[c]: sensor_of.get(c, BLANK) for c in cells},
        ),
        fsc=Fsc(nodes=nodes, initial_node="n0", action_of=action_of,
                next_node=next_node),
        cost_model=CostModel.unit(
            observations, spec.budget,
            frozen=() if spec.blank_obs_alterable else (BLANK,)),
        decoy=(state_id[spec.hazard],),
    )


@dataclass(frozen=True)
class KnapsackInstance:
    weights: Sequence[Number]
    values: Sequence[Number]
    capacity: Number
    threshold: Number

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "values", tuple(self.values))
        if not self.weights or len(self.weights) != len(self.values):
            raise GeneratorError("weights and values must be nonempty and equally long")
        if any(w <= 0 for w in self.weights) or any(v <= 0 for v in self.values):
            raise GeneratorError("weights and values must be positive")
        if self.capacity < 0 or self.threshold < 0:
            raise GeneratorError("capacity and threshold must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class KnapsackScenario:
    scenario: Scenario
    threshold_r: Number
    item_observations: tuple[str, ...] = field(default=())


def gen_knapsack(inst: KnapsackInstance, exact: bool = False) -> KnapsackScenario:
    """Build the POMDP whose best deception value encodes the knapsack optimum.

    Altering item observation o<i> to oclub costs w_i and adds
    v_i / (2 * sum(v)) to the decoy reach probability.
    """
    convert = (lambda x: x) if exact else float
    items = range(1, inst.n + 1)
    values = [_rational(v) for v in inst.values]
    total = sum(values)
    states = ["s0"] + [f"s{i}" for i in items] + ["sclub", "stop", "sbot"]
    observations = ["o0"] + [f"o{i}" for i in items] + ["oclub", "otop", "obot"]

    transition: dict[tuple[str, str], dict[str, Number]] = {}
    branch = {f"s{i}": values[i - 1] / (2 * total) for i in items}
    branch["sclub"] = Fraction(1, 2)
    transition[("s0", "a")] = {s: convert(p) for s, p in branch.items()}
    transition[("s0", "b")] = {"s0": convert(Fraction(1))}
    for i in items:
        transition[(f"s{i}", "a")] = {"stop": convert(Fraction(1))}
        transition[(f"s{i}", "b")] = {"sbot": convert(Fraction(1))}
    transition[("sclub", "a")] = {"sbot": convert(Fraction(1))}
    transition[("sclub", "b")] = {"stop": convert(Fraction(1))}
    for s in ("stop", "sbot"):
        for a in ("a", "b"):
            transition[(s, a)] = {s: convert(Fraction(1))}

    nodes = ("n0", "n1", "n2")
    action_of: dict[tuple[str, str], str] = {}
    next_node: dict[tuple[str, str], str] = {}
    for node in nodes:
        for o in observations:
            item = o[1:].isdigit() and o != "o0"
            if (node, o) == ("n0", "o0") or (node == "n1" and item):
                action_of[(node, o)] = "a"
            else:
                action_of[(node, o)] = "b"
            next_node[(node, o)] = "n1" if (node, o) == ("n0", "o0") else "n2"

    cost: dict[tuple[str, str], Number] = {(o, o): 0.0 for o in observations}
    for i in items:
        cost[(f"o{i}", "oclub")] = float(inst.weights[i - 1])

    scenario = Scenario(
        pomdp=Pomdp(
            states=tuple(states),
            actions=("a", "b"),
            transition=transition,
            initial_state="s0",
            observations=tuple(observations),
            obs_of={s: "o" + s[1:] for s in states},
        ),
        fsc=Fsc(nodes=nodes, initial_node="n0", action_of=action_of,
                next_node=next_node),
        cost_model=CostModel(cost=cost, budget=inst.capacity),
        decoy=("sbot",),
    )
    threshold = _rational(inst.threshold) / (2 * total)
    return KnapsackScenario(
        scenario=scenario,
        threshold_r=convert(threshold),
        item_observations=tuple(f"o{i}" for i in items),
    )


def knapsack_best_value(
    weights: Sequence[int], values: Sequence[Number], capacity: Number
) -> tuple[Number, tuple[int, ...]]:
    """Best total value within capacity and the 0-based items achieving it.

    Weights must be integers.
    """
    if any(int(w) != w for w in weights):
        raise GeneratorError("dynamic programming needs integer weights")
    cap = int(capacity) if capacity >= 0 else -1
    if cap < 0:
        return 0, ()
    best: list[Number] = [0] * (cap + 1)
    keep = [[False] * (cap + 1) for _ in weights]
    for i, (w, v) in enumerate(zip(weights, values)):
        w = int(w)
        for c in range(cap, w - 1, -1):
            if best[c - w] + v > best[c]:
                best[c] = best[c - w] + v
                keep[i][c] = True
    chosen = []
    c = cap
    for i in range(len(weights) - 1, -1, -1):
        if keep[i][c]:
            chosen.append(i)
            c -= int(weights[i])
    return best[cap], tuple(sorted(chosen))


def knapsack_decision(inst: KnapsackInstance) -> bool:
    """Is there an item subset within capacity worth at least the threshold?"""
    value, _ = knapsack_best_value(inst.weights, inst.values, inst.capacity)
    return value >= inst.threshold
