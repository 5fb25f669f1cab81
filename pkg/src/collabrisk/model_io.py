"""Model and result documents: parsing, canonical serialization, export.

Models are UTF-8 JSON documents with ``"format_version": 1`` and any of the
sections ``lopa``, ``fault_tree``, ``network`` and ``catalogs``.  The
canonical form sorts keys, indents by two spaces and writes every float in
scientific notation (``1.25E-02``) using the shortest digit string that
round-trips, so ``parse_model(serialize_model(doc)) == doc`` holds exactly.

Diagnostics carry a position: ``line L, column C`` for syntax errors and a
JSON path (``$.network.nodes[2].cpt[1]``) for semantic ones.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from decimal import Decimal
from numbers import Real
from typing import Any, Optional, Union

from . import __version__
from .bayes import BayesNet, BnNode, Cpt
from .collab import AI_GROUPS, PIF_CONTEXTS, AiFailureRecord, PifRecord, TopologyOptions
from .credal import CredalNet, CredalNode, IntervalRow
from .errors import ParseError, RiskModelError, ValidationError
from .faulttree import BasicEvent, Gate, GateKind
from .lopa import IplKind, LopaScenario, ProtectionLayer
from .prob import FailureRecord, FrequencyPerYear, ProbInterval

__all__ = [
    "FORMAT_VERSION",
    "Catalogs",
    "ModelDocument",
    "ResultRow",
    "QueryResult",
    "ResultDocument",
    "format_number",
    "canonical_json",
    "parse_model",
    "serialize_model",
    "input_digest",
    "serialize_results",
    "parse_results",
    "export_results",
    "CSV_HEADER",
]

FORMAT_VERSION = 1
CSV_HEADER = ("query", "state", "lower", "upper", "method")


@dataclass(frozen=True)
class Catalogs:
    ai_failures: tuple = ()
    pifs: tuple = ()
    topology: Optional[TopologyOptions] = None


@dataclass
class ModelDocument:
    format_version: int = FORMAT_VERSION
    name: str = ""
    lopa: Optional[LopaScenario] = None
    fault_tree: Optional[Union[Gate, BasicEvent]] = None
    network: Optional[Union[BayesNet, CredalNet]] = None
    catalogs: Optional[Catalogs] = None
    warnings: list = field(default_factory=list, compare=False)

    def sections(self) -> list[str]:
        return [s for s in ("lopa", "fault_tree", "network", "catalogs") if getattr(self, s) is not None]


# -- canonical text -----------------------------------------------------------


def format_number(x: float) -> str:
    """Shortest round-trip decimal in ``d.ddE±XX`` form (at least 3 digits)."""
    if isinstance(x, bool) or not isinstance(x, Real):
        raise TypeError(f"not a number: {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x!r} cannot be serialized")
    if x == 0.0:
        return "-0.00E+00" if math.copysign(1.0, x) < 0 else "0.00E+00"
    sign, digits, exp = Decimal(repr(x)).normalize().as_tuple()
    sci_exp = len(digits) - 1 + exp
    body = "".join(map(str, digits)).ljust(3, "0")
    return f"{'-' if sign else ''}{body[0]}.{body[1:]}E{sci_exp:+03d}"


def _emit(value: Any, indent: int, out: list) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        items = sorted(value.items())
        for i, (k, v) in enumerate(items):
            out.append(f"{pad}  {json.dumps(k, ensure_ascii=False)}: ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(value, (list, tuple)):
        if not value:
            out.append("[]")
            return
        if all(isinstance(v, (int, float, str, bool)) or v is None for v in value):
            out.append("[" + ", ".join(_scalar(v) for v in value) + "]")
            return
        out.append("[\n")
        for i, v in enumerate(value):
            out.append(pad + "  ")
            _emit(v, indent + 1, out)
            out.append(",\n" if i < len(value) - 1 else "\n")
        out.append(pad + "]")
    else:
        out.append(_scalar(value))


def _scalar(v: Any) -> str:
    if v is None or isinstance(v, (bool, str)):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, int):
        return str(v)
    return format_number(v)


def canonical_json(data: Any) -> str:
    out: list = []
    _emit(data, 0, out)
    return "".join(out) + "\n"


# -- to plain data ------------------------------------------------------------


def _iv(iv: ProbInterval) -> dict:
    return {"lower": iv.lower, "upper": iv.upper}


def _ft_to_data(node) -> dict:
    if isinstance(node, BasicEvent):
        r = node.record
        d: dict = {"event": node.id, "source": r.source}
        if r.component_id != node.id:
            d["component_id"] = r.component_id
        if r.description:
            d["description"] = r.description
        if r.probability is not None:
            d["probability"] = _iv(r.probability)
        if r.rate_per_hour is not None:
            d["rate_per_hour"] = float(r.rate_per_hour)
        if r.mission_time_hours is not None:
            d["mission_time_hours"] = float(r.mission_time_hours)
        return d
    d = {"gate": node.kind.value, "children": [_ft_to_data(c) for c in node.children]}
    if node.id:
        d["id"] = node.id
    return d


def _lopa_to_data(s: LopaScenario) -> dict:
    ie = s.initiating_event
    kind = "per_year" if isinstance(ie, FrequencyPerYear) else "per_demand"
    layers = []
    for layer in s.layers:
        d = {"name": layer.name, "kind": layer.kind.value, "pfd": _iv(layer.pfd)}
        if layer.label:
            d["label"] = layer.label
        layers.append(d)
    return {
        "name": s.name,
        "initiating_event": {"unit": kind, "lower": ie.lower, "upper": ie.upper},
        "layers": layers,
    }


def _network_to_data(net) -> dict:
    nodes = []
    if isinstance(net, CredalNet):
        for n in net.nodes:
            rows = [
                {"free_state": n.states[r.free_state], **_iv(r.interval), "rest": list(r.rest)}
                for r in n.rows
            ]
            nodes.append({"id": n.id, "states": list(n.states), "parents": list(n.parents), "rows": rows})
        return {"kind": "credal", "nodes": nodes}
    for n in net.nodes:
        d = {"id": n.id, "states": list(n.states), "parents": list(n.parents), "cpt": [list(r) for r in n.cpt.rows]}
        if n.cpt.extrapolated:
            d["extrapolated"] = True
        if n.cpt.note:
            d["note"] = n.cpt.note
        nodes.append(d)
    return {"kind": "point", "nodes": nodes}


def _catalogs_to_data(c: Catalogs) -> dict:
    d: dict = {
        "ai_failures": [
            {"failure_type": r.failure_type, "group": r.group, "node_id": r.node_id, **_iv(r.hep)}
            for r in c.ai_failures
        ],
        "pifs": [],
    }
    for p in c.pifs:
        e = {"context": p.context, "name": p.name, "node_id": p.node_id, "short_name": p.short_name}
        if p.hep is not None:
            e["hep"] = _iv(p.hep)
        d["pifs"].append(e)
    if c.topology is not None:
        d["topology"] = c.topology.to_dict()
    return d


def model_to_data(doc: ModelDocument) -> dict:
    data: dict = {"format_version": doc.format_version}
    if doc.name:
        data["name"] = doc.name
    if doc.lopa is not None:
        data["lopa"] = _lopa_to_data(doc.lopa)
    if doc.fault_tree is not None:
        data["fault_tree"] = _ft_to_data(doc.fault_tree)
    if doc.network is not None:
        data["network"] = _network_to_data(doc.network)
    if doc.catalogs is not None:
        data["catalogs"] = _catalogs_to_data(doc.catalogs)
    return data


def serialize_model(doc: ModelDocument) -> str:
    """Canonical text; equal documents always give identical bytes."""
    if not doc.sections():
        raise ValidationError("document has no sections")
    return canonical_json(model_to_data(doc))


def input_digest(doc: ModelDocument) -> str:
    return "sha256:" + hashlib.sha256(serialize_model(doc).encode("utf-8")).hexdigest()


# -- parsing ------------------------------------------------------------------


class _Reader:
    def __init__(self, strict: bool):
        self.strict = strict
        self.warnings: list[str] = []

    def obj(self, v, path: str, required=(), optional=()) -> dict:
        if not isinstance(v, dict):
            raise ParseError(f"expected an object, got {_kind(v)}", path)
        for k in required:
            if k not in v:
                raise ParseError(f"missing required field {k!r}", path)
        extra = sorted(set(v) - set(required) - set(optional))
        if extra:
            msg = f"unknown field(s) {', '.join(map(repr, extra))}"
            if self.strict:
                raise ParseError(msg, path)
            self.warnings.append(f"{path}: {msg}")
            warnings.warn(f"{path}: {msg}", stacklevel=4)
        return v

    def mapping(self, v, path: str) -> dict:
        if not isinstance(v, dict):
            raise ParseError(f"expected an object, got {_kind(v)}", path)
        return v

    def lst(self, v, path: str, nonempty: bool = False) -> list:
        if not isinstance(v, list):
            raise ParseError(f"expected an array, got {_kind(v)}", path)
        if nonempty and not v:
            raise ParseError("array must not be empty", path)
        return v

    def text(self, v, path: str, nonempty: bool = True) -> str:
        if not isinstance(v, str):
            raise ParseError(f"expected a string, got {_kind(v)}", path)
        if nonempty and not v:
            raise ParseError("string must not be empty", path)
        return v

    def num(self, v, path: str) -> float:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"expected a number, got {_kind(v)}", path)
        try:
            f = float(v)
        except OverflowError:
            raise ParseError("number out of range", path) from None
        if not math.isfinite(f):
            raise ParseError("number must be finite", path)
        return f

    def prob(self, v, path: str) -> float:
        f = self.num(v, path)
        if not 0.0 <= f <= 1.0:
            raise ParseError(f"probability {f!r} outside [0, 1]", path)
        return f

    def interval(self, v, path: str) -> ProbInterval:
        o = self.obj(v, path, ("lower", "upper"))
        lo = self.prob(o["lower"], path + ".lower")
        hi = self.prob(o["upper"], path + ".upper")
        if lo > hi:
            raise ParseError(f"inverted interval: lower {lo!r} > upper {hi!r}", path)
        return ProbInterval(lo, hi)


def _kind(v) -> str:
    return {dict: "object", list: "array", str: "string", bool: "boolean", type(None): "null"}.get(
        type(v), "number" if isinstance(v, (int, float)) else type(v).__name__
    )


def _parse_lopa(r: _Reader, v, path: str) -> LopaScenario:
    o = r.obj(v, path, ("initiating_event", "layers"), ("name",))
    name = r.text(o.get("name", "scenario"), path + ".name")
    iep = path + ".initiating_event"
    ie = r.obj(o["initiating_event"], iep, ("unit", "lower", "upper"))
    unit = r.text(ie["unit"], iep + ".unit")
    if unit == "per_demand":
        initiating = r.interval({"lower": ie["lower"], "upper": ie["upper"]}, iep)
    elif unit == "per_year":
        lo, hi = r.num(ie["lower"], iep + ".lower"), r.num(ie["upper"], iep + ".upper")
        if lo < 0 or lo > hi:
            raise ParseError("frequency bounds must satisfy 0 <= lower <= upper", iep)
        initiating = FrequencyPerYear(lo, hi)
    else:
        raise ParseError(f"unit must be 'per_demand' or 'per_year', got {unit!r}", iep + ".unit")
    layers = []
    for i, lv in enumerate(r.lst(o["layers"], path + ".layers")):
        lp = f"{path}.layers[{i}]"
        lo_ = r.obj(lv, lp, ("name", "kind", "pfd"), ("label",))
        kind = r.text(lo_["kind"], lp + ".kind")
        if kind not in {k.value for k in IplKind}:
            raise ParseError(f"unknown IPL kind {kind!r}", lp + ".kind")
        layers.append(
            ProtectionLayer(
                r.text(lo_["name"], lp + ".name"),
                IplKind(kind),
                r.interval(lo_["pfd"], lp + ".pfd"),
                r.text(lo_.get("label", ""), lp + ".label", nonempty=False),
            )
        )
    return LopaScenario(initiating, tuple(layers), name)


def _parse_ft(r: _Reader, v, path: str):
    if isinstance(v, dict) and "gate" in v:
        o = r.obj(v, path, ("gate", "children"), ("id",))
        kind = r.text(o["gate"], path + ".gate")
        if kind not in ("AND", "OR"):
            raise ParseError(f"gate must be 'AND' or 'OR', got {kind!r}", path + ".gate")
        kids = r.lst(o["children"], path + ".children", nonempty=True)
        children = tuple(_parse_ft(r, c, f"{path}.children[{i}]") for i, c in enumerate(kids))
        return Gate(GateKind(kind), children, r.text(o.get("id", ""), path + ".id", nonempty=False))
    o = r.obj(
        v, path, ("event",),
        ("component_id", "description", "probability", "rate_per_hour", "mission_time_hours", "source"),
    )
    eid = r.text(o["event"], path + ".event")
    prob = r.interval(o["probability"], path + ".probability") if "probability" in o else None
    rate = r.num(o["rate_per_hour"], path + ".rate_per_hour") if "rate_per_hour" in o else None
    mt = r.num(o["mission_time_hours"], path + ".mission_time_hours") if "mission_time_hours" in o else None
    if rate is not None and rate < 0:
        raise ParseError("failure rate must be >= 0", path + ".rate_per_hour")
    if mt is not None and mt <= 0:
        raise ParseError("mission time must be > 0", path + ".mission_time_hours")
    if prob is None and rate is None:
        raise ParseError(f"basic event {eid!r} needs a probability or a failure rate", path)
    rec = FailureRecord(
        r.text(o.get("component_id", eid), path + ".component_id"),
        r.text(o.get("description", ""), path + ".description", nonempty=False),
        rate, mt, prob,
        r.text(o.get("source", "user"), path + ".source", nonempty=False),
    )
    return BasicEvent(eid, rec)


def _parse_network(r: _Reader, v, path: str):
    o = r.obj(v, path, ("kind", "nodes"))
    kind = r.text(o["kind"], path + ".kind")
    if kind not in ("point", "credal"):
        raise ParseError(f"network kind must be 'point' or 'credal', got {kind!r}", path + ".kind")
    nodes = []
    seen: set = set()
    for i, nv in enumerate(r.lst(o["nodes"], path + ".nodes", nonempty=True)):
        np_ = f"{path}.nodes[{i}]"
        if kind == "point":
            no = r.obj(nv, np_, ("id", "states", "parents", "cpt"), ("extrapolated", "note"))
        else:
            no = r.obj(nv, np_, ("id", "states", "parents", "rows"))
        nid = r.text(no["id"], np_ + ".id")
        if nid in seen:
            raise ParseError(f"duplicate node id {nid!r}", np_ + ".id")
        seen.add(nid)
        states = tuple(r.text(s, f"{np_}.states[{j}]") for j, s in enumerate(r.lst(no["states"], np_ + ".states")))
        parents = tuple(r.text(p, f"{np_}.parents[{j}]") for j, p in enumerate(r.lst(no["parents"], np_ + ".parents")))
        if len(states) < 2 or len(set(states)) != len(states):
            raise ParseError(f"node {nid!r} needs at least two distinct states", np_ + ".states")
        if kind == "point":
            rows = []
            for j, row in enumerate(r.lst(no["cpt"], np_ + ".cpt")):
                rp = f"{np_}.cpt[{j}]"
                vals = [r.prob(x, f"{rp}[{k}]") for k, x in enumerate(r.lst(row, rp))]
                if len(vals) != len(states):
                    raise ParseError(f"node {nid!r} row {j}: {len(vals)} entries for {len(states)} states", rp)
                total = math.fsum(vals)
                if abs(total - 1.0) > 1e-9:
                    raise ParseError(f"node {nid!r} row {j}: entries sum to {total!r}, not 1", rp)
                rows.append(tuple(vals))
            extrap = no.get("extrapolated", False)
            if not isinstance(extrap, bool):
                raise ParseError("extrapolated must be a boolean", np_ + ".extrapolated")
            note = r.text(no.get("note", ""), np_ + ".note", nonempty=False)
            try:
                nodes.append(BnNode(nid, parents, Cpt(tuple(rows), extrap, note), states))
            except ValidationError as e:
                raise ParseError(str(e), np_) from None
        else:
            rows = []
            for j, row in enumerate(r.lst(no["rows"], np_ + ".rows")):
                rp = f"{np_}.rows[{j}]"
                ro = r.obj(row, rp, ("free_state", "lower", "upper", "rest"))
                fs = r.text(ro["free_state"], rp + ".free_state")
                if fs not in states:
                    raise ParseError(f"node {nid!r} has no state {fs!r}", rp + ".free_state")
                iv = r.interval({"lower": ro["lower"], "upper": ro["upper"]}, rp)
                rest = [r.prob(x, f"{rp}.rest[{k}]") for k, x in enumerate(r.lst(ro["rest"], rp + ".rest"))]
                if len(rest) != len(states) - 1:
                    raise ParseError(f"node {nid!r} row {j}: rest needs {len(states) - 1} entries", rp + ".rest")
                if abs(math.fsum(rest) - 1.0) > 1e-9:
                    raise ParseError(f"node {nid!r} row {j}: rest proportions do not sum to 1", rp + ".rest")
                rows.append(IntervalRow(states.index(fs), iv, tuple(rest)))
            nodes.append(CredalNode(nid, parents, tuple(rows), states))
    try:
        return BayesNet(nodes) if kind == "point" else CredalNet(nodes)
    except ValidationError as e:
        raise ParseError(str(e), path + ".nodes") from None


def _parse_topology(r: _Reader, v, path: str) -> TopologyOptions:
    o = r.obj(v, path, (), ("groups", "layers", "consequence_order", "consequence_id", "cpt_overrides", "description"))
    for section in ("groups", "layers"):
        sec = r.mapping(o.get(section, {}), f"{path}.{section}")
        for nid, entry in sec.items():
            sp = f"{path}.{section}.{nid}"
            so = r.obj(entry, sp, ("parents",), ("rule", "links"))
            for j, p in enumerate(r.lst(so["parents"], sp + ".parents", nonempty=True)):
                r.text(p, f"{sp}.parents[{j}]")
            rule = r.text(so.get("rule", "hep-rule"), sp + ".rule")
            if rule not in ("hep-rule", "or", "noisy-or"):
                raise ParseError(f"unknown CPT rule {rule!r}", sp + ".rule")
            for j, x in enumerate(r.lst(so.get("links", []), sp + ".links")):
                r.prob(x, f"{sp}.links[{j}]")
    order = r.lst(o.get("consequence_order", []), path + ".consequence_order")
    for j, x in enumerate(order):
        r.text(x, f"{path}.consequence_order[{j}]")
    r.text(o.get("consequence_id", "Consequence"), path + ".consequence_id")
    ov = r.mapping(o.get("cpt_overrides", {}), path + ".cpt_overrides")
    for nid, rows in ov.items():
        for j, row in enumerate(r.lst(rows, f"{path}.cpt_overrides.{nid}")):
            rp = f"{path}.cpt_overrides.{nid}[{j}]"
            pair = r.lst(row, rp)
            if len(pair) != 2:
                raise ParseError("override rows are [lower, upper] pairs", rp)
            r.interval({"lower": pair[0], "upper": pair[1]}, rp)
    data = {k: o[k] for k in o if k != "description"}
    return TopologyOptions.from_dict(data)


def _parse_catalogs(r: _Reader, v, path: str) -> Catalogs:
    o = r.obj(v, path, (), ("ai_failures", "pifs", "topology"))
    ai = []
    for i, av in enumerate(r.lst(o.get("ai_failures", []), path + ".ai_failures")):
        ap = f"{path}.ai_failures[{i}]"
        ao = r.obj(av, ap, ("failure_type", "group", "lower", "upper"), ("node_id",))
        group = r.text(ao["group"], ap + ".group")
        if group not in AI_GROUPS:
            raise ParseError(f"unknown AI failure group {group!r}", ap + ".group")
        ai.append(AiFailureRecord(
            r.text(ao["failure_type"], ap + ".failure_type"), group,
            r.interval({"lower": ao["lower"], "upper": ao["upper"]}, ap),
            r.text(ao.get("node_id", ""), ap + ".node_id", nonempty=False),
        ))
    pifs = []
    for i, pv in enumerate(r.lst(o.get("pifs", []), path + ".pifs")):
        pp = f"{path}.pifs[{i}]"
        po = r.obj(pv, pp, ("context", "name"), ("node_id", "short_name", "hep"))
        ctx = r.text(po["context"], pp + ".context")
        if ctx not in PIF_CONTEXTS:
            raise ParseError(f"unknown PIF context {ctx!r}", pp + ".context")
        pifs.append(PifRecord(
            ctx, r.text(po["name"], pp + ".name"),
            r.text(po.get("node_id", ""), pp + ".node_id", nonempty=False),
            r.text(po.get("short_name", ""), pp + ".short_name", nonempty=False),
            r.interval(po["hep"], pp + ".hep") if "hep" in po else None,
        ))
    topo = _parse_topology(r, o["topology"], path + ".topology") if "topology" in o else None
    return Catalogs(tuple(ai), tuple(pifs), topo)


def _reject_constant(name):
    raise ValueError(f"non-finite constant {name} is not allowed")


def _load_json(text: Union[str, bytes], empty_message: str = "document is empty"):
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"document is not valid UTF-8 ({e.reason})", f"byte {e.start}") from None
    if text.startswith("\ufeff"):
        text = text[1:]
    if not text.strip():
        raise ParseError(empty_message, "line 1, column 1")
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"line {e.lineno}, column {e.colno}") from None
    except RecursionError:
        raise ParseError("document is nested too deeply", "line 1, column 1") from None
    except ValueError as e:  # non-finite constants, oversized integers
        raise ParseError(str(e), "line 1, column 1") from None


def parse_model(text: Union[str, bytes], strict: bool = False) -> ModelDocument:
    """Parse and validate a model document.

    Raises :class:`ParseError` for every malformed input; never anything else.
    """
    data = _load_json(text, "no sections: the document is empty")
    r = _Reader(strict)
    try:
        o = r.obj(data, "$", ("format_version",), ("name", "lopa", "fault_tree", "network", "catalogs"))
        fv = o["format_version"]
        if isinstance(fv, bool) or not isinstance(fv, int):
            raise ParseError("format_version must be an integer", "$.format_version")
        if fv != FORMAT_VERSION:
            raise ParseError(f"unsupported format_version {fv} (expected {FORMAT_VERSION})", "$.format_version")
        doc = ModelDocument(fv, r.text(o.get("name", ""), "$.name", nonempty=False))
        parsers = {"lopa": _parse_lopa, "fault_tree": _parse_ft, "network": _parse_network, "catalogs": _parse_catalogs}
        for section, fn in parsers.items():
            if section in o:
                try:
                    setattr(doc, section, fn(r, o[section], "$." + section))
                except ParseError:
                    raise
                except (RiskModelError, TypeError, ValueError, KeyError) as e:
                    raise ParseError(str(e), "$." + section) from None
        if not doc.sections():
            raise ParseError("no sections: expected at least one of lopa, fault_tree, network, catalogs", "$")
    except RecursionError:
        raise ParseError("document is nested too deeply", "$") from None
    doc.warnings = r.warnings
    return doc


# -- results ------------------------------------------------------------------


@dataclass(frozen=True)
class ResultRow:
    state: str
    lower: float
    upper: float


@dataclass(frozen=True)
class QueryResult:
    query: str
    method: str
    rows: tuple
    selections: dict = field(default_factory=dict)
    notes: tuple = ()


@dataclass(frozen=True)
class ResultDocument:
    results: tuple
    input_digest: str = ""
    tool_version: str = __version__
    format_version: int = FORMAT_VERSION


def _results_to_data(doc: ResultDocument) -> dict:
    return {
        "format_version": doc.format_version,
        "tool_version": doc.tool_version,
        "input_digest": doc.input_digest,
        "results": [
            {
                "query": q.query,
                "method": q.method,
                "rows": [{"state": row.state, "lower": row.lower, "upper": row.upper} for row in q.rows],
                "selections": {k: dict(v) for k, v in q.selections.items()},
                "notes": list(q.notes),
            }
            for q in doc.results
        ],
    }


def serialize_results(doc: ResultDocument) -> str:
    return canonical_json(_results_to_data(doc))


def parse_results(text: Union[str, bytes]) -> ResultDocument:
    data = _load_json(text)
    r = _Reader(strict=True)
    o = r.obj(data, "$", ("format_version", "tool_version", "input_digest", "results"))
    results = []
    for i, qv in enumerate(r.lst(o["results"], "$.results")):
        qp = f"$.results[{i}]"
        qo = r.obj(qv, qp, ("query", "method", "rows", "selections", "notes"))
        rows = []
        for j, rv in enumerate(r.lst(qo["rows"], qp + ".rows")):
            ro = r.obj(rv, f"{qp}.rows[{j}]", ("state", "lower", "upper"))
            rows.append(ResultRow(ro["state"], r.num(ro["lower"], qp), r.num(ro["upper"], qp)))
        sels = r.mapping(qo["selections"], qp + ".selections")
        results.append(QueryResult(qo["query"], qo["method"], tuple(rows), dict(sels), tuple(qo["notes"])))
    return ResultDocument(tuple(results), o["input_digest"], o["tool_version"], o["format_version"])


def export_results(results: ResultDocument, format: str = "csv", log_scale: bool = False) -> str:
    """Render results as RFC 4180 CSV or as a static SVG bar chart."""
    if not results.results or not any(q.rows for q in results.results):
        raise ValidationError("no results to export")
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(CSV_HEADER)
        for q in results.results:
            for row in q.rows:
                w.writerow([q.query, row.state, format_number(row.lower), format_number(row.upper), q.method])
        return buf.getvalue()
    if format == "svg":
        from .plotting import results_bar_svg

        return results_bar_svg(results, log_scale=log_scale)
    raise ValidationError(f"unknown export format {format!r}")
