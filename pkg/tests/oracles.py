"""Independent reference computations used by the tests.

Nothing here goes through the library's inference or evaluation code:
networks are enumerated over the full joint and fault trees over the full
truth table, straight from the raw CPT rows and event probabilities.
"""

from __future__ import annotations

import itertools
import math
import random

from collabrisk.bayes import BayesNet, BnNode, Cpt
from collabrisk.credal import CredalNet, CredalNode, IntervalRow
from collabrisk.faulttree import BasicEvent, Gate


def row_index(node, assignment, nets_nodes):
    idx = 0
    for p in node.parents:
        par = nets_nodes[p]
        idx = idx * len(par.states) + par.states.index(assignment[p])
    return idx


def enumerate_marginal(net: BayesNet, target: str, evidence=None) -> dict:
    """P(target | evidence) by summing the full joint distribution."""
    evidence = evidence or {}
    nodes = {n.id: n for n in net.nodes}
    ids = [n.id for n in net.nodes]
    acc = {s: 0.0 for s in nodes[target].states}
    for combo in itertools.product(*(nodes[i].states for i in ids)):
        a = dict(zip(ids, combo))
        if any(a[k] != v for k, v in evidence.items()):
            continue
        p = 1.0
        for i in ids:
            n = nodes[i]
            p *= n.cpt.rows[row_index(n, a, nodes)][n.states.index(a[i])]
            if p == 0.0:
                break
        acc[a[target]] += p
    total = math.fsum(acc.values())
    return {s: v / total for s, v in acc.items()}


def random_cpt_row(rng: random.Random, k: int) -> tuple:
    if rng.random() < 0.1:
        row = [0.0] * k
        row[rng.randrange(k)] = 1.0
        return tuple(row)
    w = [rng.random() + 1e-3 for _ in range(k)]
    s = sum(w)
    row = [x / s for x in w[:-1]]
    return tuple(row + [1.0 - math.fsum(row)])


def random_bayes_net(rng: random.Random, n_nodes: int, max_parents: int = 3, n_states=(2,)) -> BayesNet:
    """Random DAG over nodes in a fixed random topological order."""
    names = [f"X{i}" for i in range(n_nodes)]
    rng.shuffle(names)
    nodes = []
    cards = {}
    for i, name in enumerate(names):
        k = rng.choice(n_states)
        cards[name] = k
        parents = rng.sample(names[:i], min(i, rng.randint(0, max_parents)))
        n_rows = math.prod(cards[p] for p in parents)
        states = ("TRUE", "FALSE") if k == 2 else tuple(f"s{j}" for j in range(k))
        rows = tuple(random_cpt_row(rng, k) for _ in range(n_rows))
        nodes.append(BnNode(name, tuple(parents), Cpt(rows), states))
    rng.shuffle(nodes)
    return BayesNet(nodes)


def random_credal_net(rng: random.Random, n_params: int) -> CredalNet:
    """Random binary credal net with exactly ``n_params`` non-degenerate rows."""
    while True:
        n_nodes = rng.randint(2, 4)
        nodes = []
        rows_total = []
        for i in range(n_nodes):
            parents = rng.sample([f"N{j}" for j in range(i)], min(i, rng.randint(0, 2)))
            rows_total.append((f"N{i}", tuple(parents), 2 ** len(parents)))
        slots = [(name, r) for name, _, n in rows_total for r in range(n)]
        if len(slots) < n_params:
            continue
        free = set(rng.sample(slots, n_params))
        for name, parents, n in rows_total:
            rows = []
            for r in range(n):
                a = rng.random()
                if (name, r) in free:
                    b = rng.random()
                    while b == a:
                        b = rng.random()
                    rows.append(IntervalRow(0, (min(a, b), max(a, b))))
                else:
                    rows.append(IntervalRow(0, (a, a)))
            nodes.append(CredalNode(name, parents, tuple(rows)))
        return CredalNet(nodes)


def tree_events(tree) -> dict:
    out = {}

    def walk(n):
        if isinstance(n, BasicEvent):
            out[n.id] = n.point_probability()
        else:
            for c in n.children:
                walk(c)

    walk(tree)
    return out


def occurs(tree, state: dict) -> bool:
    if isinstance(tree, BasicEvent):
        return state[tree.id]
    vals = [occurs(c, state) for c in tree.children]
    return all(vals) if tree.kind.value == "AND" else any(vals)


def truth_table_probability(tree) -> float:
    probs = tree_events(tree)
    ids = sorted(probs)
    total = 0.0
    for bits in itertools.product((True, False), repeat=len(ids)):
        state = dict(zip(ids, bits))
        if occurs(tree, state):
            total += math.prod(probs[i] if b else 1.0 - probs[i] for i, b in zip(ids, bits))
    return total


def truth_table_cut_sets(tree) -> set:
    """Minimal sets of occurring events that trigger the top event."""
    ids = sorted(tree_events(tree))
    triggering = []
    for bits in itertools.product((False, True), repeat=len(ids)):
        s = frozenset(i for i, b in zip(ids, bits) if b)
        if occurs(tree, {i: i in s for i in ids}):
            triggering.append(s)
    return {s for s in triggering if not any(t < s for t in triggering)}


def random_tree(rng: random.Random, n_events: int, repeat: bool = False):
    """Random coherent fault tree over ``n_events`` basic events."""
    events = [BasicEvent.with_probability(f"e{i}", rng.choice([0.0, 1.0, rng.random(), rng.random() * 1e-3]))
              for i in range(n_events)]
    pool = list(events)
    if repeat:
        pool += rng.sample(events, max(1, n_events // 3))
    rng.shuffle(pool)
    k = 0
    while len(pool) > 1:
        take = min(len(pool), rng.randint(2, 3))
        children, pool = pool[:take], pool[take:]
        pool.append(Gate(rng.choice(["AND", "OR"]), tuple(children), f"g{k}"))
        k += 1
        rng.shuffle(pool)
    return pool[0]
