"""Command-line front end.

Human-readable tables go to stdout; machine output is written only with
``--out``.  Exit status: 0 success, 1 model/validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bayes import BayesNet, infer_marginal, monte_carlo_estimate
from .collab import COLLABORATION_LEVELS, ai_failure_defaults, default_topology, idheas_pif_catalog
from .credal import (
    Corner,
    CredalNet,
    corner_enumeration_bounds,
    instantiate_corner,
    two_corner_bounds,
    uniform_corner,
)
from .errors import ParameterLimitError, RiskModelError
from .faulttree import EvaluationMode, evaluate, minimal_cut_sets, monte_carlo_top_event
from .fixtures import FIXTURE_NAMES, fixture_text
from .lopa import IplKind, LADDER_STATES, consequence_frequency, consequence_ladder, first_success_ladder, typical_pfd
from .model_io import (
    FORMAT_VERSION,
    Catalogs,
    ModelDocument,
    QueryResult,
    ResultDocument,
    ResultRow,
    export_results,
    format_number,
    input_digest,
    parse_model,
    serialize_model,
    serialize_results,
)
from .prob import FrequencyPerYear


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.3E}"


def _load(args) -> tuple[ModelDocument, str]:
    if not args.model:
        raise UsageError("--model is required")
    path = Path(args.model)
    if path.is_file():
        text = path.read_bytes()
    else:
        stem = path.name[:-5] if path.name.endswith(".json") else path.name
        if stem not in FIXTURE_NAMES:
            raise UsageError(f"model file not found: {args.model}")
        text = fixture_text(stem).encode("utf-8")
    doc = parse_model(text, strict=args.strict)
    return doc, input_digest(doc)


def _parse_evidence(items: Optional[Sequence[str]]) -> dict:
    ev = {}
    for item in items or ():
        node, sep, state = item.partition("=")
        if not sep or not node or not state:
            raise UsageError(f"evidence must look like NODE=STATE, got {item!r}")
        ev[node] = state
    return ev


def _write_out(args, results: ResultDocument, out) -> None:
    if not args.out:
        return
    fmt = args.format or ("svg" if str(args.out).endswith(".svg") else "csv")
    Path(args.out).write_text(export_results(results, fmt, log_scale=args.log_scale), encoding="utf-8", newline="")
    print(f"wrote {args.out}", file=out)


def _require(doc: ModelDocument, section: str):
    value = getattr(doc, section)
    if value is None:
        raise RiskModelError(f"model has no {section} section")
    return value


# -- subcommands --------------------------------------------------------------


def _lopa_results(doc: ModelDocument, out) -> list[QueryResult]:
    scenario = _require(doc, "lopa")
    print(f"LOPA scenario: {scenario.name}", file=out)
    ie = scenario.initiating_event
    unit = "per year" if isinstance(ie, FrequencyPerYear) else "per demand"
    print(f"  initiating event: [{_fmt(ie.lower)}, {_fmt(ie.upper)}] {unit}", file=out)
    print(f"  {'#':>2}  {'layer':<28} {'kind':<28} {'PFD lower':>10} {'PFD upper':>10}", file=out)
    for i, layer in enumerate(scenario.layers, start=1):
        print(
            f"  {i:>2}  {layer.name:<28} {layer.kind.value:<28} {_fmt(layer.pfd.lower):>10} {_fmt(layer.pfd.upper):>10}",
            file=out,
        )
    cf = consequence_frequency(scenario)
    print(f"  consequence ({unit}): [{_fmt(cf.lower)}, {_fmt(cf.upper)}]", file=out)
    results = [QueryResult("consequence", "lopa", (ResultRow("consequence", cf.lower, cf.upper),))]
    if scenario.per_demand:
        if len(scenario.layers) == 4:
            masses = consequence_ladder(scenario).items()
            method = "lopa-ladder"
        else:
            vals = first_success_ladder(scenario)
            names = [f"stopped_by_{i + 1}" for i in range(len(scenario.layers))] + ["all_failed"]
            masses = list(zip(names, vals))
            method = "lopa-first-success"
        print("  consequence ladder:", file=out)
        print(f"    {'state':<14} {'lower':>10} {'upper':>10}", file=out)
        for s, v in masses:
            print(f"    {s:<14} {_fmt(v.lower):>10} {_fmt(v.upper):>10}", file=out)
        results.append(QueryResult("ladder", method, tuple(ResultRow(s, v.lower, v.upper) for s, v in masses)))
    return results


def cmd_lopa(args, out) -> int:
    doc, digest = _load(args)
    results = _lopa_results(doc, out)
    _write_out(args, ResultDocument(tuple(results), digest), out)
    return 0


def _fta_results(doc: ModelDocument, mode: EvaluationMode, out, samples=None, seed=0) -> list[QueryResult]:
    tree = _require(doc, "fault_tree")
    top = evaluate(tree, mode)
    print(f"Fault tree: {getattr(tree, 'id', '') or 'top event'}", file=out)
    print(f"  top event probability ({mode.value}): {_fmt(top)}", file=out)
    cuts = sorted(sorted(c) for c in minimal_cut_sets(tree))
    print(f"  minimal cut sets ({len(cuts)}):", file=out)
    for c in cuts:
        print("    {" + ", ".join(c) + "}", file=out)
    rows = [ResultRow("top", top, top)]
    notes: tuple = ()
    if samples:
        mc = monte_carlo_top_event(tree, samples, seed)
        print(
            f"  Monte Carlo ({samples} samples, seed {seed}): {_fmt(mc.estimate)} +/- {_fmt(mc.stderr)}",
            file=out,
        )
        rows.append(ResultRow("monte_carlo", mc.estimate - mc.stderr, mc.estimate + mc.stderr))
        notes = (f"monte carlo estimate {format_number(mc.estimate)}, stderr {format_number(mc.stderr)}",)
    return [QueryResult("top_event", f"fta-{mode.value}", tuple(rows), notes=notes)]


def cmd_fta(args, out) -> int:
    doc, digest = _load(args)
    results = _fta_results(doc, EvaluationMode(args.mode), out, args.samples, args.seed)
    _write_out(args, ResultDocument(tuple(results), digest), out)
    return 0


def _target(net, requested: Optional[str]) -> str:
    if requested:
        return requested
    return net.order[-1]


def cmd_bn_infer(args, out) -> int:
    doc, digest = _load(args)
    net = _require(doc, "network")
    if isinstance(net, CredalNet):
        net = instantiate_corner(net, uniform_corner(net, Corner(args.corner)))
        label = f"credal network at the all-{args.corner} corner"
    else:
        label = "point network"
    target = _target(net, args.target)
    ev = _parse_evidence(args.evidence)
    dist = infer_marginal(net, target, ev)
    given = (" | " + ", ".join(f"{k}={v}" for k, v in ev.items())) if ev else ""
    print(f"P({target}{given}) on {label}:", file=out)
    print(f"  {'state':<14} {'exact':>10}", file=out)
    for s, p in dist.items():
        print(f"  {s:<14} {_fmt(p):>10}", file=out)
    results = [QueryResult(target, "variable-elimination", tuple(ResultRow(s, p, p) for s, p in dist.items()))]
    if args.samples:
        mc = monte_carlo_estimate(net, target, ev, args.samples, args.seed)
        print(f"  Monte Carlo ({args.samples} samples, seed {args.seed}, {mc.accepted} accepted):", file=out)
        for s in dist:
            print(f"  {s:<14} {_fmt(mc.probabilities[s]):>10} +/- {_fmt(mc.stderr[s])}", file=out)
        results.append(QueryResult(
            target, "monte-carlo",
            tuple(ResultRow(s, mc.probabilities[s] - mc.stderr[s], mc.probabilities[s] + mc.stderr[s]) for s in dist),
        ))
    _write_out(args, ResultDocument(tuple(results), digest), out)
    return 0


def _bounds_results(net, target, ev, method, max_params, out) -> tuple[list[QueryResult], object]:
    if isinstance(net, BayesNet):
        net = CredalNet.from_bayes(net)
    free = net.free_parameters()
    if method == "two-corner":
        b = two_corner_bounds(net, target, ev)
        head = ("best (all lower)", "worst (all upper)")
    else:
        b = corner_enumeration_bounds(net, target, ev, max_params)
        head = ("minimum", "maximum")
    print(f"Bounds on P({target}) by {method} ({len(free)} free parameters, {b.corners_evaluated} corners):", file=out)
    print(f"  {'state':<14} {head[0]:>18} {head[1]:>18}", file=out)
    for s, sb in b.states.items():
        flag = "  inverted" if method == "two-corner" and sb.inverted else ""
        print(f"  {s:<14} {_fmt(sb.best):>18} {_fmt(sb.worst):>18}{flag}", file=out)
    notes = []
    if method == "two-corner":
        if len(free) <= max_params:
            full = corner_enumeration_bounds(net, target, ev, max_params)
            off = [
                s for s, sb in b.states.items()
                if full[s].lower < sb.lower - 1e-15 or full[s].upper > sb.upper + 1e-15
            ]
            if off:
                msg = f"caveat: full corner enumeration is wider than the two-corner bounds for {', '.join(off)}"
                print(msg, file=out)
                notes.append(msg)
        else:
            msg = (
                f"note: two-corner bounds assume monotonicity; full enumeration of {len(free)} "
                f"parameters exceeds --max-params {max_params} and was skipped"
            )
            print(msg, file=out)
            notes.append(msg)
        if b.inversions():
            notes.append("inverted (best > worst): " + ", ".join(b.inversions()))
    rows = tuple(ResultRow(s, sb.best, sb.worst) for s, sb in b.states.items())
    sels = {}
    for s, sb in b.states.items():
        if method == "enumerate":
            sels[f"{s}:best"] = {k: v.value for k, v in sb.selection_best.items()}
            sels[f"{s}:worst"] = {k: v.value for k, v in sb.selection_worst.items()}
    if method == "two-corner":
        sels = {"best": {"all": Corner.LOWER.value}, "worst": {"all": Corner.UPPER.value}}
    return [QueryResult(target, method, rows, sels, tuple(notes))], b


def cmd_bounds(args, out) -> int:
    doc, digest = _load(args)
    net = _require(doc, "network")
    target = _target(net, args.target)
    results, _ = _bounds_results(net, target, _parse_evidence(args.evidence), args.method, args.max_params, out)
    _write_out(args, ResultDocument(tuple(results), digest), out)
    return 0


def cmd_catalog(args, out) -> int:
    print("Typical PFDs of IPLs:", file=out)
    for kind in IplKind:
        if kind is IplKind.CUSTOM:
            continue
        print(f"  {kind.value:<28} {_fmt(typical_pfd(kind))}", file=out)
    print("AI failure probabilities:", file=out)
    for r in ai_failure_defaults():
        print(f"  {r.failure_type:<36} {r.group:<12} {_fmt(r.hep.lower)} {_fmt(r.hep.upper)}", file=out)
    print("IDHEAS PIFs (HEP interval where available):", file=out)
    for p in idheas_pif_catalog():
        hep = f"{_fmt(p.hep.lower)} {_fmt(p.hep.upper)}" if p.hep else "-"
        print(f"  {p.context:<26} {p.name:<72} {hep}", file=out)
    print("Collaboration levels:", file=out)
    for level, (name, stage) in COLLABORATION_LEVELS.items():
        print(f"  level {level}: {name} ({stage})", file=out)
    if args.out:
        doc = ModelDocument(
            name="catalogs",
            catalogs=Catalogs(tuple(ai_failure_defaults()), tuple(idheas_pif_catalog()), default_topology()),
        )
        Path(args.out).write_text(serialize_model(doc), encoding="utf-8")
        print(f"wrote {args.out}", file=out)
    return 0


def cmd_report(args, out) -> int:
    from .plotting import accident_comparison, figure_to_bytes, grouped_bars, unsafe_comparison

    doc, digest = _load(args)
    outdir = Path(args.out or "report")
    outdir.mkdir(parents=True, exist_ok=True)
    results: list[QueryResult] = []
    written = []
    accident: dict = {}
    if doc.lopa is not None:
        lopa = _lopa_results(doc, out)
        results += lopa
        ladder = lopa[-1]
        if ladder.method == "lopa-ladder":
            accident["LOPA"] = ladder.rows[-1].upper
        fig = grouped_bars(
            [r.state for r in ladder.rows], [r.lower for r in ladder.rows], [r.upper for r in ladder.rows],
            title="LOPA consequence ladder", log_scale=True, series=("lower", "upper"),
        )
        written.append(("lopa_ladder.svg", figure_to_bytes(fig)))
    if doc.fault_tree is not None:
        fta = _fta_results(doc, EvaluationMode(args.mode), out)
        results += fta
        accident[f"Fault tree ({args.mode})"] = fta[0].rows[0].upper
    if doc.network is not None:
        net = doc.network
        target = _target(net, args.target)
        bres, b = _bounds_results(net, target, _parse_evidence(args.evidence), args.method, args.max_params, out)
        results += bres
        if set(LADDER_STATES) <= set(b.states):
            written.append(("unsafe_comparison.svg", figure_to_bytes(unsafe_comparison(b))))
            accident["BN best"] = b["accident"].best
            accident["BN worst"] = b["accident"].worst
    if accident:
        written.append(("accident_comparison.svg", figure_to_bytes(accident_comparison(accident))))
    rdoc = ResultDocument(tuple(results), digest)
    written.append(("results.csv", export_results(rdoc, "csv").encode("utf-8")))
    written.append(("results.json", serialize_results(rdoc).encode("utf-8")))
    written.append(("results.svg", export_results(rdoc, "svg", log_scale=True).encode("utf-8")))
    for name, data in written:
        (outdir / name).write_bytes(data)
        print(f"wrote {outdir / name}", file=out)
    return 0


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="collabrisk", description=__doc__.splitlines()[0])
    p.add_argument(
        "--version", action="version",
        version=f"collabrisk {__version__} (model format {FORMAT_VERSION})",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, model=True):
        if model:
            sp.add_argument("--model", help="model document (a path, or the name of a bundled fixture)")
        sp.add_argument("--out", help="write machine-readable output here")
        sp.add_argument("--format", choices=("csv", "svg"), help="format for --out (default from extension)")
        sp.add_argument("--log-scale", action="store_true", help="log-scale bars in SVG output")
        sp.add_argument("--strict", action="store_true", help="reject unknown fields in the model")

    def network_flags(sp):
        sp.add_argument("--target", help="query node (default: last node in topological order)")
        sp.add_argument("--evidence", action="append", metavar="NODE=STATE", help="observed state (repeatable)")

    def mc_flags(sp):
        sp.add_argument("--samples", type=int, help="Monte Carlo samples (enables the sampling oracle)")
        sp.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")

    sp = sub.add_parser("lopa", help="consequence frequency and ladder of a LOPA scenario")
    common(sp)
    sp.set_defaults(func=cmd_lopa)

    sp = sub.add_parser("fta", help="evaluate a fault tree")
    common(sp)
    sp.add_argument("--mode", choices=("exact", "rare-event"), default="exact")
    mc_flags(sp)
    sp.set_defaults(func=cmd_fta)

    sp = sub.add_parser("bn-infer", help="exact marginal of a network node")
    common(sp)
    network_flags(sp)
    mc_flags(sp)
    sp.add_argument("--corner", choices=("Lower", "Upper"), default="Lower", help="corner for credal networks")
    sp.set_defaults(func=cmd_bn_infer)

    sp = sub.add_parser("bounds", help="best/worst bounds on a credal network marginal")
    common(sp)
    network_flags(sp)
    sp.add_argument("--method", choices=("two-corner", "enumerate"), default="two-corner")
    sp.add_argument("--max-params", type=int, default=20)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("catalog", help="print the shipped data catalogs")
    common(sp, model=False)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("report", help="run every applicable analysis and write tables and figures")
    common(sp)
    network_flags(sp)
    sp.add_argument("--mode", choices=("exact", "rare-event"), default="rare-event")
    sp.add_argument("--method", choices=("two-corner", "enumerate"), default="two-corner")
    sp.add_argument("--max-params", type=int, default=20)
    sp.set_defaults(func=cmd_report)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            status = args.func(args, out)
        except UsageError as e:
            print(f"collabrisk: usage error: {e}", file=err)
            status = 2
        except ParameterLimitError as e:
            print(f"collabrisk: error: {e}; raise --max-params or use --method two-corner", file=err)
            status = 1
        except RiskModelError as e:
            print(f"collabrisk: error: {e}", file=err)
            status = 1
        except OSError as e:
            print(f"collabrisk: error: {e}", file=err)
            status = 1
    for w in caught:
        print(f"collabrisk: warning: {w.message}", file=err)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
