"""Credal networks: Bayesian networks whose CPT entries are intervals.

Every CPT row carries one free parameter.  The row's ``free_state`` takes a
probability ``t`` from the row interval and the other states share ``1 - t``
in fixed proportions (``rest``).  For a binary node this is the usual
TRUE-probability interval with FALSE as its complement; for multi-state
nodes it keeps every row normalised at every corner.

Queries are answered by instantiating point networks at interval corners.
A posterior is a ratio of functions that are linear in each single
parameter, hence monotone in it, so the extremes over the box of parameters
are attained at corners and full corner enumeration gives exact bounds.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .bayes import BINARY, BayesNet, BnNode, Cpt, infer_marginal
from .errors import ParameterLimitError, UnknownEntryError, ValidationError
from .prob import ProbInterval

__all__ = [
    "Corner",
    "IntervalRow",
    "CredalNode",
    "CredalNet",
    "StateBounds",
    "ScenarioBounds",
    "instantiate_corner",
    "instantiate_point",
    "uniform_corner",
    "two_corner_bounds",
    "corner_enumeration_bounds",
]


class Corner(str, enum.Enum):
    LOWER = "Lower"
    UPPER = "Upper"

    @classmethod
    def _missing_(cls, value):
        raise ValidationError(f"unknown corner {value!r}")


@dataclass(frozen=True)
class IntervalRow:
    free_state: int
    interval: ProbInterval
    rest: tuple = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "interval", ProbInterval.coerce(self.interval))
        rest = tuple(float(v) for v in self.rest)
        if any(not 0.0 <= v <= 1.0 for v in rest):
            raise ValidationError(f"rest proportions outside [0, 1]: {rest!r}")
        if abs(math.fsum(rest) - 1.0) > 1e-9:
            raise ValidationError(f"rest proportions sum to {math.fsum(rest)!r}, not 1")
        object.__setattr__(self, "rest", rest)

    def distribution(self, t: float, n_states: int) -> tuple:
        others = iter(self.rest)
        return tuple(t if i == self.free_state else (1.0 - t) * next(others) for i in range(n_states))

    @classmethod
    def from_point(cls, row: Sequence[float], free_state: int = 0) -> "IntervalRow":
        row = [float(v) for v in row]
        t = row[free_state]
        others = [v for i, v in enumerate(row) if i != free_state]
        mass = math.fsum(others)
        rest = tuple(v / mass for v in others) if mass > 0 else tuple([1.0 / len(others)] * len(others))
        return cls(free_state, ProbInterval.point(t), rest)


@dataclass(frozen=True)
class CredalNode:
    id: str
    parents: tuple
    rows: tuple
    states: tuple = BINARY

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("node id must be a nonempty string")
        states = tuple(self.states)
        rows = tuple(self.rows)
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "rows", rows)
        for i, row in enumerate(rows):
            if not isinstance(row, IntervalRow):
                raise ValidationError(f"node {self.id!r} row {i} is not an IntervalRow")
            if not 0 <= row.free_state < len(states):
                raise ValidationError(f"node {self.id!r} row {i}: free state out of range")
            if len(row.rest) != len(states) - 1:
                raise ValidationError(
                    f"node {self.id!r} row {i}: {len(row.rest)} rest proportions for {len(states)} states"
                )

    @classmethod
    def binary(cls, id: str, parents: Sequence[str], true_intervals: Sequence) -> "CredalNode":
        """Binary node from one TRUE-probability interval per parent combination."""
        rows = tuple(IntervalRow(0, ProbInterval.coerce(iv)) for iv in true_intervals)
        return cls(id, tuple(parents), rows)

    @classmethod
    def from_point(cls, node: BnNode) -> "CredalNode":
        return cls(node.id, node.parents, tuple(IntervalRow.from_point(r) for r in node.cpt.rows), node.states)

    def parameter_id(self, row: int) -> str:
        return f"{self.id}[{row}]"


class CredalNet:
    """Validated DAG of :class:`CredalNode`.

    Free parameters are the rows whose interval is not degenerate; they are
    identified as ``"<node>[<row>]"``.
    """

    def __init__(self, nodes: Sequence[CredalNode]):
        self.nodes: tuple = tuple(nodes)
        self._by_id = {}
        for n in self.nodes:
            if not isinstance(n, CredalNode):
                raise ValidationError(f"not a CredalNode: {n!r}")
            self._by_id[n.id] = n
        # Structural checks (ids, parents, row counts, acyclicity) reuse BayesNet.
        self._lower = _point_net(self, lambda node, i, row: row.interval.lower)
        self.order = self._lower.order

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        return isinstance(other, CredalNet) and self.nodes == other.nodes

    def __repr__(self):
        return f"CredalNet({len(self.nodes)} nodes, {len(self.free_parameters())} free parameters)"

    def node(self, node_id: str) -> CredalNode:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownEntryError(f"unknown node {node_id!r}") from None

    def free_parameters(self) -> list[str]:
        return [
            n.parameter_id(i)
            for n in self.nodes
            for i, row in enumerate(n.rows)
            if not row.interval.is_point
        ]

    def intervals(self) -> dict[str, ProbInterval]:
        return {n.parameter_id(i): row.interval for n in self.nodes for i, row in enumerate(n.rows)}

    @classmethod
    def from_bayes(cls, net: BayesNet) -> "CredalNet":
        return cls([CredalNode.from_point(n) for n in net.nodes])


def _point_net(net: CredalNet, pick) -> BayesNet:
    nodes = []
    for n in net.nodes:
        rows = tuple(row.distribution(pick(n, i, row), len(n.states)) for i, row in enumerate(n.rows))
        nodes.append(BnNode(n.id, n.parents, Cpt(rows), n.states))
    return BayesNet(nodes)


def uniform_corner(net: CredalNet, corner: Corner) -> dict[str, Corner]:
    return {pid: Corner(corner) for pid in net.free_parameters()}


def instantiate_corner(net: CredalNet, selection: Mapping[str, Corner]) -> BayesNet:
    """Point network with every free parameter at its selected endpoint."""
    free = net.free_parameters()
    missing = [p for p in free if p not in selection]
    if missing:
        shown = ", ".join(missing[:5]) + (" ..." if len(missing) > 5 else "")
        raise ValidationError(f"corner selection misses {len(missing)} parameters: {shown}")
    unknown = sorted(set(selection) - set(free))
    if unknown:
        raise UnknownEntryError(f"selection names unknown or fixed parameters: {', '.join(unknown)}")

    def pick(node, i, row):
        iv = row.interval
        if iv.is_point:
            return iv.lower
        return iv.upper if Corner(selection[node.parameter_id(i)]) is Corner.UPPER else iv.lower

    return _point_net(net, pick)


def instantiate_point(net: CredalNet, values: Mapping[str, float]) -> BayesNet:
    """Point network with free parameters set to given values inside their intervals."""

    def pick(node, i, row):
        iv = row.interval
        pid = node.parameter_id(i)
        if iv.is_point:
            return iv.lower
        if pid not in values:
            raise ValidationError(f"no value for free parameter {pid}")
        v = float(values[pid])
        if not iv.contains(v):
            raise ValidationError(f"value {v!r} for {pid} lies outside {iv}")
        return v

    return _point_net(net, pick)


@dataclass(frozen=True)
class StateBounds:
    best: float
    worst: float
    selection_best: Mapping
    selection_worst: Mapping

    @property
    def lower(self) -> float:
        return min(self.best, self.worst)

    @property
    def upper(self) -> float:
        return max(self.best, self.worst)

    @property
    def inverted(self) -> bool:
        """True when the best-scenario value exceeds the worst-scenario value."""
        return self.best > self.worst


@dataclass(frozen=True)
class ScenarioBounds:
    target: str
    method: str
    states: dict
    corners_evaluated: int = 2

    def __getitem__(self, state: str) -> StateBounds:
        return self.states[state]

    def inversions(self) -> list[str]:
        return [s for s, b in self.states.items() if b.inverted]


def two_corner_bounds(
    net: CredalNet, target: str, evidence: Optional[Mapping[str, str]] = None
) -> ScenarioBounds:
    """Best scenario = every parameter at its lower limit; worst = every upper limit.

    The two values are reported as computed; a state whose best value
    exceeds its worst value is reported as inverted, not reordered.
    """
    net.node(target)
    lo_sel = uniform_corner(net, Corner.LOWER)
    hi_sel = uniform_corner(net, Corner.UPPER)
    best = infer_marginal(instantiate_corner(net, lo_sel), target, evidence)
    worst = infer_marginal(instantiate_corner(net, hi_sel), target, evidence)
    states = {s: StateBounds(best[s], worst[s], lo_sel, hi_sel) for s in best}
    return ScenarioBounds(target, "two-corner", states, 2)


def corner_enumeration_bounds(
    net: CredalNet,
    target: str,
    evidence: Optional[Mapping[str, str]] = None,
    max_parameters: int = 20,
) -> ScenarioBounds:
    """Exact per-state minimum (``best``) and maximum (``worst``) over all 2^k corners."""
    net.node(target)
    free = net.free_parameters()
    if len(free) > max_parameters:
        raise ParameterLimitError(len(free), max_parameters)
    lo: dict = {}
    hi: dict = {}
    count = 0
    for combo in itertools.product((Corner.LOWER, Corner.UPPER), repeat=len(free)):
        sel = dict(zip(free, combo))
        dist = infer_marginal(instantiate_corner(net, sel), target, evidence)
        count += 1
        for s, p in dist.items():
            if s not in lo or p < lo[s][0]:
                lo[s] = (p, sel)
            if s not in hi or p > hi[s][0]:
                hi[s] = (p, sel)
    states = {s: StateBounds(lo[s][0], hi[s][0], lo[s][1], hi[s][1]) for s in lo}
    return ScenarioBounds(target, "enumerate", states, count)
