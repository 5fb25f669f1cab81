"""The nine acceptance criteria, each at its stated tolerance.

Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line (visible in
``pytest -v`` output) before asserting.
"""

import itertools
import math
import random
import subprocess
import sys
import time
import warnings

import pytest

from collabrisk.bayes import BayesNet, BnNode, Cpt, infer_marginal, paper_cpt_rule
from collabrisk.collab import build_collaboration_model, case_study_fault_tree
from collabrisk.credal import (
    Corner,
    corner_enumeration_bounds,
    instantiate_corner,
    instantiate_point,
    two_corner_bounds,
)
from collabrisk.errors import ParseError
from collabrisk.faulttree import evaluate, monte_carlo_top_event
from collabrisk.lopa import LopaScenario, ProtectionLayer, IplKind, consequence_ladder
from collabrisk.model_io import parse_model, serialize_model
from corpus import random_document
from oracles import enumerate_marginal, random_bayes_net, random_credal_net


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def test_1_lopa_exactness(report):
    layers = [ProtectionLayer(f"L{i}", IplKind.CUSTOM, p) for i, p in enumerate([1e-2, 1e-1, 1e-2, 1e-2])]
    lad = consequence_ladder(LopaScenario(1.0, layers))
    acc = lad.accident.lower
    total = math.fsum(v.lower for _, v in lad.items())
    ok = abs(acc - 1.00e-07) <= 1e-18 and abs(total - 1.0) <= 1e-12
    report(1, ok, f"accident={acc!r} (|err| {abs(acc - 1e-7):.1e} <= 1e-18), ladder sum error {abs(total - 1):.1e} <= 1e-12")


def test_2_fta_reproduction(report):
    t0 = time.perf_counter()
    tree = case_study_fault_tree()
    rare = evaluate(tree, "rare-event")
    exact = evaluate(tree, "exact")
    # hand calculation: per-branch 1 - prod(1 - p), then the AND product
    hand = (1 - (1 - 1.25e-2) * (1 - 9.05e-4) * (1 - 1.97e-6)) * (1 - (1 - 4.83e-2) * (1 - 1.25e-2) * (1 - 7.98e-6))
    mc = monte_carlo_top_event(tree, 10_000_000, seed=2024)
    z = abs(mc.estimate - exact) / mc.stderr
    elapsed = time.perf_counter() - t0
    ok = (
        abs(rare / 8.15e-4 - 1) <= 5e-3
        and abs(exact / hand - 1) <= 5e-3
        and abs(exact / 8.06e-4 - 1) <= 5e-3
        and z <= 3
        and elapsed < 10
    )
    report(2, ok, f"rare-event {rare:.4E}, exact {exact:.4E} (hand {hand:.4E}), MC 1e7 {mc.estimate:.4E} at {z:.2f} SE, {elapsed:.1f}s")


def test_3_inference_soundness(report):
    t0 = time.perf_counter()
    rng = random.Random(20240603)
    worst = 0.0
    n_nets = 0
    while n_nets < 200:
        net = random_bayes_net(rng, rng.randint(1, 10), max_parents=3)
        target = rng.choice(net.order)
        others = [i for i in net.order if i != target]
        ev = {i: rng.choice(("TRUE", "FALSE")) for i in rng.sample(others, rng.randint(0, min(3, len(others))))}
        try:
            oracle = enumerate_marginal(net, target, ev)
        except ZeroDivisionError:
            continue
        got = infer_marginal(net, target, ev)
        worst = max(worst, max(abs(got[s] - oracle[s]) for s in oracle))
        n_nets += 1
    elapsed = time.perf_counter() - t0
    report(3, worst <= 1e-12 and elapsed < 60, f"{n_nets} random networks, max |error| {worst:.1e} <= 1e-12, {elapsed:.1f}s")


def test_4_table_rule_fidelity(report):
    rows = paper_cpt_rule([0.021, 0.1]).rows
    published = ((1.00, 0.00), (2.10e-02, 9.79e-01), (1.00e-01, 9.00e-01), (0.00, 1.00))
    report(4, rows == published, f"rows {rows}")


def test_5_two_node_marginal(report):
    net = BayesNet([
        BnNode("Noise", (), Cpt(((0.021, 0.979),))),
        BnNode("Heat", (), Cpt(((0.1, 0.9),))),
        BnNode("Child", ("Noise", "Heat"), paper_cpt_rule([0.021, 0.1])),
    ])
    p = infer_marginal(net, "Child")["TRUE"]
    hand = 0.021 * 0.1 * 1.0 + 0.021 * 0.9 * 0.021 + 0.979 * 0.1 * 0.1 + 0.979 * 0.9 * 0.0
    ok = abs(p - hand) <= 1e-9 and abs(p - 1.2287e-2) <= 1e-6
    report(5, ok, f"P(Child=TRUE)={p:.7E}, four-term enumeration {hand:.7E}")


def test_6_credal_containment(report):
    rng = random.Random(6)
    points = violations = nets = 0
    while points < 1000:
        net = random_credal_net(rng, rng.randint(3, 6))
        target = rng.choice(net.order)
        full = corner_enumeration_bounds(net, target)
        free = net.free_parameters()
        corner_values = {s: [] for s in full.states}
        for combo in itertools.product(Corner, repeat=len(free)):
            for s, p in infer_marginal(instantiate_corner(net, dict(zip(free, combo))), target).items():
                corner_values[s].append(p)
        two = two_corner_bounds(net, target)
        for s, b in two.states.items():
            if not (b.best in corner_values[s] and b.worst in corner_values[s]):
                violations += 1
        ivs = net.intervals()
        for _ in range(50):
            pt = {p: rng.uniform(ivs[p].lower, ivs[p].upper) for p in free}
            for s, p in infer_marginal(instantiate_point(net, pt), target).items():
                if not full[s].best - 1e-12 <= p <= full[s].worst + 1e-12:
                    violations += 1
            points += 1
        nets += 1
    report(6, violations == 0, f"{points} interior points on {nets} networks, {violations} violations; two-corner values found among enumerated corners")


def test_7_collaboration_bracketing(report):
    b = two_corner_bounds(build_collaboration_model(), "Consequence")
    lo, hi = b["accident"].best, b["accident"].worst
    unsafe = ("near_miss", "mishap", "incident", "accident")
    largest = [max(unsafe, key=lambda s: getattr(b[s], side)) for side in ("best", "worst")]
    ok = lo < hi and 1e-6 <= lo <= 1e-3 and 1e-6 <= hi <= 1e-3 and largest == ["near_miss", "near_miss"]
    report(7, ok, f"accident all-Lower {lo:.3E} < all-Upper {hi:.3E}, both in [1e-6, 1e-3]; largest unsafe state {largest}")


def test_8_robustness(report):
    t0 = time.perf_counter()
    rng = random.Random(8)
    seeds_docs = [serialize_model(random_document(random.Random(i))).encode() for i in range(200)]
    alphabet = b'{}[],:".-+eE0123456789 \n\tabcdefnrstuTRUEFALSE\\\xff\xc3'
    crashes = diagnostics = accepted = 0
    n = 100_000
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i in range(n):
            kind = i % 4
            if kind == 0:
                data = bytes(rng.getrandbits(8) for _ in range(rng.randint(0, 64)))
            elif kind == 1:
                data = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 64)))
            else:
                buf = bytearray(rng.choice(seeds_docs))
                for _ in range(rng.randint(1, 4)):
                    j = rng.randrange(len(buf))
                    r = rng.random()
                    if r < 0.4:
                        buf[j] = rng.choice(alphabet)
                    elif r < 0.7:
                        del buf[j : j + rng.randint(1, 8)]
                    else:
                        buf[j:j] = bytes(rng.choice(alphabet) for _ in range(rng.randint(1, 4)))
                data = bytes(buf)
            try:
                parse_model(data, strict=bool(i & 4))
                accepted += 1
            except ParseError as e:
                if e.position:
                    diagnostics += 1
                else:
                    crashes += 1
            except Exception:
                crashes += 1
    mismatches = 0
    for i in range(500):
        doc = random_document(random.Random(10_000 + i))
        text = serialize_model(doc)
        back = parse_model(text, strict=True)
        mismatches += back != doc or serialize_model(back) != text
    elapsed = time.perf_counter() - t0
    report(8, crashes == 0 and mismatches == 0,
           f"{n} fuzzed inputs: {diagnostics} positioned diagnostics, {accepted} accepted, {crashes} crashes; "
           f"500-document round-trip corpus, {mismatches} mismatches; {elapsed:.1f}s")


def test_9_determinism(report, tmp_path):
    commands = [
        ["fta", "--model", "case_separator_fta", "--samples", "1000000", "--seed", "42", "--out", "{d}/fta.csv"],
        ["bn-infer", "--model", "collab_default_credal", "--target", "Consequence",
         "--evidence", "BPCSFailure=TRUE", "--samples", "200000", "--seed", "42", "--out", "{d}/bn.svg"],
        ["bounds", "--model", "collab_default_credal", "--target", "Consequence", "--out", "{d}/t10.csv"],
        ["report", "--model", "collab_default_credal", "--out", "{d}/report"],
    ]
    runs = []
    for tag in ("a", "b"):
        d = tmp_path / tag
        d.mkdir()
        outputs = []
        for cmd in commands:
            argv = [a.format(d=d) for a in cmd]
            proc = subprocess.run([sys.executable, "-m", "collabrisk.cli", *argv], capture_output=True)
            outputs.append((proc.returncode, proc.stdout.replace(str(d).encode(), b"D"), proc.stderr))
        files = {str(p.relative_to(d)): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}
        runs.append((outputs, files))
    same = runs[0] == runs[1]
    codes = [o[0] for o in runs[0][0]]
    report(9, same and codes == [0] * len(commands),
           f"{len(commands)} commands, {len(runs[0][1])} output files, exit codes {codes}, byte-identical: {same}")
