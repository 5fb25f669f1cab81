"""Discrete Bayesian networks with exact inference by variable elimination.

CPT rows are listed first-parent-major: with parents ``(A, B)`` whose states
are ``(TRUE, FALSE)``, the rows are ``(A=T,B=T), (A=T,B=F), (A=F,B=T),
(A=F,B=F)``.  Each row is a distribution over the node's own states in
declaration order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import (
    InconsistentEvidenceError,
    InsufficientSamplesError,
    UnknownEntryError,
    ValidationError,
)

__all__ = [
    "TRUE",
    "FALSE",
    "BINARY",
    "ROW_SUM_TOL",
    "Cpt",
    "BnNode",
    "BayesNet",
    "Factor",
    "MonteCarloDistribution",
    "joint_probability",
    "infer_marginal",
    "min_degree_order",
    "monte_carlo_estimate",
    "paper_cpt_rule",
    "noisy_or_cpt",
    "deterministic_cpt",
]

TRUE = "TRUE"
FALSE = "FALSE"
BINARY = (TRUE, FALSE)
ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table.

    ``extrapolated`` marks tables produced by a generating rule outside the
    range where that rule is backed by published data.
    """

    rows: tuple
    extrapolated: bool = False
    note: str = ""

    def __post_init__(self):
        try:
            rows = tuple(tuple(float(v) for v in row) for row in self.rows)
        except (TypeError, ValueError):
            raise ValidationError("CPT rows must be sequences of numbers") from None
        object.__setattr__(self, "rows", rows)

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float)


@dataclass(frozen=True)
class BnNode:
    id: str
    parents: tuple = ()
    cpt: Cpt = None
    states: tuple = BINARY

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("node id must be a nonempty string")
        states = tuple(self.states)
        parents = tuple(self.parents)
        if len(states) < 2 or len(set(states)) != len(states):
            raise ValidationError(f"node {self.id!r}: needs >= 2 distinct states")
        if len(set(parents)) != len(parents):
            raise ValidationError(f"node {self.id!r}: duplicate parents")
        if self.id in parents:
            raise ValidationError(f"node {self.id!r} lists itself as a parent")
        cpt = self.cpt if isinstance(self.cpt, Cpt) else Cpt(self.cpt)
        for i, row in enumerate(cpt.rows):
            if len(row) != len(states):
                raise ValidationError(
                    f"node {self.id!r} row {i}: {len(row)} entries for {len(states)} states"
                )
            for v in row:
                if not 0.0 <= v <= 1.0:
                    raise ValidationError(f"node {self.id!r} row {i}: entry {v!r} outside [0, 1]")
            s = math.fsum(row)
            if abs(s - 1.0) > ROW_SUM_TOL:
                raise ValidationError(f"node {self.id!r} row {i}: entries sum to {s!r}, not 1")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "cpt", cpt)

    def state_index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise UnknownEntryError(f"node {self.id!r} has no state {state!r}") from None


class BayesNet:
    """A validated DAG of :class:`BnNode`.

    Construction checks that parents resolve, the graph is acyclic and each
    CPT has one row per parent-state combination.
    """

    def __init__(self, nodes: Sequence[BnNode]):
        self.nodes: tuple = tuple(nodes)
        self._by_id: dict[str, BnNode] = {}
        for n in self.nodes:
            if not isinstance(n, BnNode):
                raise ValidationError(f"not a BnNode: {n!r}")
            if n.id in self._by_id:
                raise ValidationError(f"duplicate node id {n.id!r}")
            self._by_id[n.id] = n
        for n in self.nodes:
            for p in n.parents:
                if p not in self._by_id:
                    raise ValidationError(f"node {n.id!r}: unknown parent {p!r}")
            expected = math.prod(len(self._by_id[p].states) for p in n.parents)
            if len(n.cpt.rows) != expected:
                raise ValidationError(
                    f"node {n.id!r}: CPT has {len(n.cpt.rows)} rows, expected {expected}"
                )
        self.order: tuple = tuple(_topological_order(self.nodes))

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, node_id):
        return node_id in self._by_id

    def __eq__(self, other):
        return isinstance(other, BayesNet) and self.nodes == other.nodes

    def __repr__(self):
        return f"BayesNet({len(self.nodes)} nodes)"

    def node(self, node_id: str) -> BnNode:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownEntryError(f"unknown node {node_id!r}") from None

    def children(self, node_id: str) -> list[str]:
        return [n.id for n in self.nodes if node_id in n.parents]

    def ancestors(self, ids) -> set[str]:
        out: set[str] = set()
        stack = list(ids)
        while stack:
            nid = stack.pop()
            if nid in out:
                continue
            out.add(nid)
            stack.extend(self.node(nid).parents)
        return out

    def factor(self, node_id: str) -> "Factor":
        n = self.node(node_id)
        cards = tuple(len(self._by_id[p].states) for p in n.parents) + (len(n.states),)
        return Factor(n.parents + (n.id,), n.cpt.as_array().reshape(cards))


def _topological_order(nodes) -> list[str]:
    parents = {n.id: set(n.parents) for n in nodes}
    order: list[str] = []
    ready = [n.id for n in nodes if not parents[n.id]]
    children: dict[str, list[str]] = {n.id: [] for n in nodes}
    for n in nodes:
        for p in n.parents:
            children[p].append(n.id)
    remaining = {k: len(v) for k, v in parents.items()}
    while ready:
        nid = ready.pop(0)
        order.append(nid)
        for c in children[nid]:
            remaining[c] -= 1
            if remaining[c] == 0:
                ready.append(c)
    if len(order) != len(nodes):
        cyclic = sorted(k for k, v in remaining.items() if v > 0)
        raise ValidationError(f"network has a directed cycle through {', '.join(cyclic)}")
    return order


@dataclass(frozen=True)
class Factor:
    vars: tuple
    values: np.ndarray

    def reduce(self, var: str, index: int) -> "Factor":
        if var not in self.vars:
            return self
        axis = self.vars.index(var)
        return Factor(self.vars[:axis] + self.vars[axis + 1:], np.take(self.values, index, axis=axis))

    def sum_out(self, var: str) -> "Factor":
        axis = self.vars.index(var)
        return Factor(self.vars[:axis] + self.vars[axis + 1:], self.values.sum(axis=axis))

    def aligned(self, order: tuple) -> np.ndarray:
        """Values transposed and reshaped to broadcast over ``order``."""
        perm = [self.vars.index(v) for v in order if v in self.vars]
        arr = np.transpose(self.values, perm)
        shape = [arr.shape[perm.index(self.vars.index(v))] if v in self.vars else 1 for v in order]
        return arr.reshape(shape)


def _multiply(factors: Sequence[Factor]) -> Factor:
    order: list[str] = []
    for f in factors:
        for v in f.vars:
            if v not in order:
                order.append(v)
    order_t = tuple(order)
    out = np.ones(())
    for f in factors:
        out = out * f.aligned(order_t)
    return Factor(order_t, out)


def _check_evidence(net: BayesNet, evidence: Optional[Mapping[str, str]]) -> dict[str, int]:
    idx = {}
    for nid, state in (evidence or {}).items():
        idx[nid] = net.node(nid).state_index(state)
    return idx


def joint_probability(net: BayesNet, assignment: Mapping[str, str]) -> float:
    """Probability of a full assignment: the product of the matching CPT entries."""
    missing = [n.id for n in net.nodes if n.id not in assignment]
    if missing:
        raise ValidationError(f"assignment is missing nodes: {', '.join(missing)}")
    idx = _check_evidence(net, assignment)
    p = 1.0
    for n in net.nodes:
        row = 0
        for par in n.parents:
            row = row * len(net.node(par).states) + idx[par]
        p *= n.cpt.rows[row][idx[n.id]]
    return p


def min_degree_order(factors: Sequence[Factor], hidden: Sequence[str]) -> list[str]:
    """Greedy elimination order: repeatedly drop the variable with fewest neighbours.

    Ties break on the variable name so the order is deterministic.
    """
    adj: dict[str, set] = {}
    for f in factors:
        for v in f.vars:
            adj.setdefault(v, set()).update(u for u in f.vars if u != v)
    for v in hidden:
        adj.setdefault(v, set())
    order = []
    remaining = set(hidden)
    while remaining:
        v = min(remaining, key=lambda x: (len(adj[x]), x))
        order.append(v)
        remaining.discard(v)
        nbrs = adj.pop(v)
        for a in nbrs:
            adj[a].discard(v)
            adj[a].update(nbrs - {a})
    return order


def infer_marginal(
    net: BayesNet,
    target: str,
    evidence: Optional[Mapping[str, str]] = None,
    elimination_order: Optional[Sequence[str]] = None,
) -> dict[str, float]:
    """Exact posterior distribution of ``target`` given ``evidence``.

    Nodes that are not ancestors of the target or the evidence are pruned
    first; the remaining hidden nodes are eliminated in min-degree order
    unless ``elimination_order`` is given.
    """
    tnode = net.node(target)
    ev = _check_evidence(net, evidence)
    if target in ev:
        raise ValidationError(f"target {target!r} is also in the evidence")
    relevant = net.ancestors([target, *ev])
    factors = []
    for nid in net.order:
        if nid not in relevant:
            continue
        f = net.factor(nid)
        for var, i in ev.items():
            f = f.reduce(var, i)
        factors.append(f)
    hidden = [nid for nid in net.order if nid in relevant and nid != target and nid not in ev]
    if elimination_order is None:
        order = min_degree_order(factors, hidden)
    else:
        order = [v for v in elimination_order if v in hidden]
        if sorted(order) != sorted(hidden):
            missing = sorted(set(hidden) - set(order))
            raise ValidationError(f"elimination order misses {', '.join(missing)}")
    for var in order:
        touching = [f for f in factors if var in f.vars]
        factors = [f for f in factors if var not in f.vars]
        factors.append(_multiply(touching).sum_out(var))
    result = _multiply(factors)
    values = result.aligned((target,)).reshape(-1)
    total = float(values.sum())
    if not total > 0.0:
        raise InconsistentEvidenceError(
            "evidence has zero probability: " + ", ".join(f"{k}={v}" for k, v in (evidence or {}).items())
        )
    return {s: float(v / total) for s, v in zip(tnode.states, values)}


@dataclass(frozen=True)
class MonteCarloDistribution:
    probabilities: dict
    stderr: dict
    accepted: int
    samples: int


def monte_carlo_estimate(
    net: BayesNet,
    target: str,
    evidence: Optional[Mapping[str, str]] = None,
    samples: int = 100_000,
    seed: int = 0,
    chunk: int = 250_000,
) -> MonteCarloDistribution:
    """Forward (ancestral) sampling with rejection of evidence-inconsistent draws.

    Deterministic for fixed ``seed``, ``samples`` and ``chunk``.
    """
    if isinstance(samples, bool) or not isinstance(samples, (int, np.integer)) or samples <= 0:
        raise ValidationError(f"samples must be a positive integer, got {samples!r}")
    tnode = net.node(target)
    ev = _check_evidence(net, evidence)
    needed = net.ancestors([target, *ev])
    order = [nid for nid in net.order if nid in needed]
    tables = {}
    for nid in order:
        cum = np.cumsum(net.node(nid).cpt.as_array(), axis=1)
        tables[nid] = cum
    counts = np.zeros(len(tnode.states), dtype=np.int64)
    accepted = 0
    remaining = samples
    for ss in np.random.SeedSequence(seed).spawn(-(-samples // chunk)):
        n = min(chunk, remaining)
        remaining -= n
        rng = np.random.default_rng(ss)
        u = rng.random((len(order), n))
        draws: dict[str, np.ndarray] = {}
        for k, nid in enumerate(order):
            node = net.node(nid)
            row = np.zeros(n, dtype=np.int64)
            for par in node.parents:
                row = row * len(net.node(par).states) + draws[par]
            cum = tables[nid][row]
            state = np.count_nonzero(cum <= u[k][:, None], axis=1)
            draws[nid] = np.minimum(state, len(node.states) - 1)
        keep = np.ones(n, dtype=bool)
        for var, i in ev.items():
            keep &= draws[var] == i
        accepted += int(np.count_nonzero(keep))
        counts += np.bincount(draws[target][keep], minlength=len(tnode.states))
    if accepted == 0:
        raise InsufficientSamplesError(f"all {samples} samples were rejected by the evidence")
    probs = counts / accepted
    err = np.sqrt(probs * (1 - probs) / accepted)
    return MonteCarloDistribution(
        {s: float(p) for s, p in zip(tnode.states, probs)},
        {s: float(e) for s, e in zip(tnode.states, err)},
        accepted,
        samples,
    )


def paper_cpt_rule(parent_heps: Sequence[float]) -> Cpt:
    """Binary child CPT from per-parent error probabilities.

    Rows (first-parent-major, TRUE before FALSE):

    * all parents TRUE  -> child TRUE with probability 1
    * all parents FALSE -> 0
    * exactly one TRUE  -> that parent's error probability
    * otherwise         -> noisy-OR over the TRUE parents, ``1 - prod(1 - p)``

    With a single parent the all-TRUE rule gives way to the exactly-one
    rule.  Only the two-parent table is backed by published data, so other
    arities are flagged as extrapolated.

    >>> paper_cpt_rule([0.021, 0.1]).rows
    ((1.0, 0.0), (0.021, 0.979), (0.1, 0.9), (0.0, 1.0))
    """
    heps = [float(p) for p in parent_heps]
    if not heps:
        raise ValidationError("paper_cpt_rule needs at least one parent")
    for p in heps:
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"parent error probability {p!r} outside [0, 1]")
    n = len(heps)
    rows = []
    for combo in itertools.product((True, False), repeat=n):
        active = [p for p, on in zip(heps, combo) if on]
        if len(active) == 1:
            t = active[0]
        elif len(active) == n:
            t = 1.0
        elif not active:
            t = 0.0
        else:
            t = 1.0 - math.prod(1.0 - p for p in active)
        rows.append((t, 1.0 - t))
    note = "" if n == 2 else f"arity-{n} rows extrapolated beyond the published 2-parent table"
    return Cpt(tuple(rows), extrapolated=n != 2, note=note)


def noisy_or_cpt(link_probs: Sequence[float], leak: float = 0.0) -> Cpt:
    """Standard noisy-OR: ``P(TRUE | active) = 1 - (1-leak) prod_active (1 - p)``."""
    rows = []
    for combo in itertools.product((True, False), repeat=len(link_probs)):
        q = (1.0 - leak) * math.prod(1.0 - p for p, on in zip(link_probs, combo) if on)
        rows.append((1.0 - q, q))
    return Cpt(tuple(rows))


def deterministic_cpt(parent_cards: Sequence[int], states: Sequence[str], fn) -> Cpt:
    """CPT putting all mass on ``fn(parent_state_indices)`` for every row."""
    rows = []
    for combo in itertools.product(*(range(c) for c in parent_cards)):
        k = fn(combo)
        rows.append(tuple(1.0 if i == k else 0.0 for i in range(len(states))))
    return Cpt(tuple(rows))
