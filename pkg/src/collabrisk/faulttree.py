"""Coherent fault trees: AND/OR gates over independent basic events."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .errors import EvaluationError, ValidationError
from .prob import FailureRecord, ProbInterval

__all__ = [
    "BasicEvent",
    "Gate",
    "GateKind",
    "EvaluationMode",
    "MonteCarloEstimate",
    "basic_events",
    "evaluate",
    "evaluate_bounds",
    "minimal_cut_sets",
    "cut_set_probability",
    "monte_carlo_top_event",
]


class GateKind(str, enum.Enum):
    AND = "AND"
    OR = "OR"

    @classmethod
    def _missing_(cls, value):
        raise ValidationError(f"unknown gate kind {value!r}")


class EvaluationMode(str, enum.Enum):
    EXACT = "exact"
    RARE_EVENT = "rare-event"

    @classmethod
    def _missing_(cls, value):
        raise ValidationError(f"unknown evaluation mode {value!r}")


@dataclass(frozen=True)
class BasicEvent:
    id: str
    record: FailureRecord

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("basic event id must be nonempty")

    @classmethod
    def with_probability(cls, id: str, p, description: str = "", source: str = "user"):
        return cls(id, FailureRecord(id, description, probability=ProbInterval.coerce(p), source=source))

    def interval(self) -> ProbInterval:
        iv = self.record.resolved_interval()
        if iv is None:
            raise EvaluationError(
                f"basic event {self.id!r} has a failure rate but no mission time"
            )
        return iv

    def point_probability(self) -> float:
        iv = self.interval()
        if not iv.is_point:
            raise EvaluationError(
                f"basic event {self.id!r} has interval probability {iv}; "
                "evaluate it per corner with evaluate_bounds"
            )
        return iv.lower


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    children: tuple
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        children = tuple(self.children)
        if not children:
            raise ValidationError(f"gate {self.id or self.kind.value} has no children")
        for c in children:
            if not isinstance(c, (Gate, BasicEvent)):
                raise ValidationError(f"gate child is not a fault tree node: {c!r}")
        object.__setattr__(self, "children", children)


Node = Union[Gate, BasicEvent]


def basic_events(tree: Node) -> list[BasicEvent]:
    """Distinct basic events in first-appearance (depth-first) order."""
    seen: dict[str, BasicEvent] = {}
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, BasicEvent):
            prev = seen.get(node.id)
            if prev is not None and prev != node:
                raise ValidationError(f"basic event id {node.id!r} used with different data")
            seen.setdefault(node.id, node)
        else:
            stack.extend(reversed(node.children))
    return list(seen.values())


def _evaluate(node: Node, mode: EvaluationMode, probs: dict[str, float]) -> float:
    if isinstance(node, BasicEvent):
        return probs[node.id]
    values = [_evaluate(c, mode, probs) for c in node.children]
    if node.kind is GateKind.AND:
        return math.prod(values)
    if mode is EvaluationMode.EXACT:
        if any(v == 1.0 for v in values):
            return 1.0
        # 1 - prod(1 - p) without cancellation for tiny p
        return -math.expm1(math.fsum(math.log1p(-v) for v in values))
    total = math.fsum(values)
    if total > 1.0:
        warnings.warn(
            f"rare-event sum {total:.4g} at gate {node.id or 'OR'} capped at 1",
            RuntimeWarning,
            stacklevel=3,
        )
        return 1.0
    return total


def _repeated_ids(tree: Node) -> list[str]:
    counts: dict[str, int] = {}
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, BasicEvent):
            counts[node.id] = counts.get(node.id, 0) + 1
        else:
            stack.extend(node.children)
    return sorted(k for k, v in counts.items() if v > 1)


def _exact(tree: Node, probs: dict[str, float]) -> float:
    # Gate-by-gate evaluation is exact only when subtrees share no events;
    # condition on every repeated event to restore independence.
    repeated = _repeated_ids(tree)
    if len(repeated) > 20:
        raise EvaluationError(f"{len(repeated)} repeated basic events; too many to condition on")
    if not repeated:
        return _evaluate(tree, EvaluationMode.EXACT, probs)
    total = 0.0
    for mask in range(1 << len(repeated)):
        fixed = dict(probs)
        weight = 1.0
        for i, eid in enumerate(repeated):
            on = bool(mask >> i & 1)
            fixed[eid] = 1.0 if on else 0.0
            weight *= probs[eid] if on else 1.0 - probs[eid]
        if weight:
            total += weight * _evaluate(tree, EvaluationMode.EXACT, fixed)
    return total


def _top(tree: Node, mode: EvaluationMode, probs: dict[str, float]) -> float:
    if mode is EvaluationMode.EXACT:
        return _exact(tree, probs)
    return _evaluate(tree, mode, probs)


def evaluate(tree: Node, mode: Union[EvaluationMode, str] = EvaluationMode.EXACT) -> float:
    """Top-event probability assuming independent basic events.

    Exact mode combines OR inputs as ``1 - prod(1 - p)`` and handles basic
    events shared between branches.  Rare-event mode replaces every OR by
    the sum of its inputs (capped at 1), the usual hand approximation.
    """
    mode = EvaluationMode(mode)
    probs = {e.id: e.point_probability() for e in basic_events(tree)}
    return _top(tree, mode, probs)


def evaluate_bounds(tree: Node, mode: Union[EvaluationMode, str] = EvaluationMode.EXACT) -> ProbInterval:
    """Top-event bounds when basic events carry intervals.

    Coherent trees are monotone in every event probability, so the bounds
    are attained at the all-lower and all-upper corners.
    """
    mode = EvaluationMode(mode)
    events = basic_events(tree)
    lo = _top(tree, mode, {e.id: e.interval().lower for e in events})
    hi = _top(tree, mode, {e.id: e.interval().upper for e in events})
    return ProbInterval(lo, max(lo, hi))


def _minimize(sets: Iterable[frozenset]) -> set[frozenset]:
    ordered = sorted(set(sets), key=len)
    kept: list[frozenset] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return set(kept)


def _cut_sets(node: Node) -> set[frozenset]:
    if isinstance(node, BasicEvent):
        return {frozenset([node.id])}
    child_sets = [_cut_sets(c) for c in node.children]
    if node.kind is GateKind.OR:
        return _minimize(s for cs in child_sets for s in cs)
    acc = {frozenset()}
    for cs in child_sets:
        acc = _minimize(a | b for a in acc for b in cs)
    return acc


def minimal_cut_sets(tree: Node) -> set[frozenset]:
    """Minimal sets of basic-event ids whose joint occurrence fails the top."""
    return _cut_sets(tree)


def cut_set_probability(tree: Node, cut_sets: Optional[set] = None) -> float:
    """Exact top-event probability from minimal cut sets by inclusion-exclusion.

    Exponential in the number of cut sets; intended for small trees and for
    trees where a basic event appears under several gates.
    """
    cut_sets = list(cut_sets if cut_sets is not None else minimal_cut_sets(tree))
    probs = {e.id: e.point_probability() for e in basic_events(tree)}
    if len(cut_sets) > 20:
        raise EvaluationError(f"{len(cut_sets)} cut sets is too many for inclusion-exclusion")
    total = 0.0
    for mask in range(1, 1 << len(cut_sets)):
        union: frozenset = frozenset()
        bits = 0
        for i, cs in enumerate(cut_sets):
            if mask >> i & 1:
                union |= cs
                bits += 1
        term = math.prod(probs[e] for e in union)
        total += term if bits % 2 else -term
    return total


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    samples: int
    hits: int


def _sample_node(node: Node, draws: dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(node, BasicEvent):
        return draws[node.id]
    values = [_sample_node(c, draws) for c in node.children]
    if node.kind is GateKind.AND:
        return np.logical_and.reduce(values)
    return np.logical_or.reduce(values)


def monte_carlo_top_event(tree: Node, samples: int, seed: int, chunk: int = 1_000_000) -> MonteCarloEstimate:
    """Estimate the top-event probability by direct Boolean simulation.

    The result is a pure function of ``(seed, samples, chunk)``: each chunk
    draws from its own child stream of the seed sequence, so chunks could
    be evaluated in any order.
    """
    if isinstance(samples, bool) or not isinstance(samples, (int, np.integer)) or samples <= 0:
        raise ValidationError(f"samples must be a positive integer, got {samples!r}")
    events = basic_events(tree)
    probs = np.array([e.point_probability() for e in events])
    n_chunks = -(-samples // chunk)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    hits = 0
    remaining = samples
    for ss in streams:
        n = min(chunk, remaining)
        remaining -= n
        rng = np.random.default_rng(ss)
        u = rng.random((len(events), n))
        draws = {e.id: u[i] < probs[i] for i, e in enumerate(events)}
        hits += int(np.count_nonzero(_sample_node(tree, draws)))
    p = hits / samples
    stderr = math.sqrt(p * (1.0 - p) / samples)
    return MonteCarloEstimate(p, stderr, samples, hits)
