"""Reference data and the reference human/AI collaboration model.

Ships the IPL, IDHEAS PIF, AI-failure and HEP catalogs, builds the credal
network of the collaboration (cause leaves -> group nodes -> four layer
failure nodes -> five-state consequence) and the separator fault tree.

The arc set is read from ``collab_topology.json`` so a plant can be
re-wired without touching code; the shipped file is one documented default.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Optional, Sequence

from .bayes import BINARY, paper_cpt_rule
from .credal import CredalNet, CredalNode, IntervalRow, two_corner_bounds
from .errors import UnknownEntryError, ValidationError
from .faulttree import BasicEvent, Gate, GateKind
from .lopa import LADDER_STATES
from .prob import FailureRecord, ProbInterval

__all__ = [
    "PIF_CONTEXTS",
    "AI_GROUPS",
    "PifRecord",
    "AiFailureRecord",
    "TopologyOptions",
    "COLLABORATION_LEVELS",
    "CASE_STUDY_COMPONENTS",
    "idheas_pif_catalog",
    "hep_defaults",
    "ai_failure_defaults",
    "default_topology",
    "build_collaboration_model",
    "case_study_fault_tree",
    "CONSEQUENCE_STATES",
]

PIF_CONTEXTS = ("Environment and situation", "System", "Personnel", "Task")
AI_GROUPS = ("Sensor", "Actuator", "Systematic", "LogicSolver")
CONSEQUENCE_STATES = LADDER_STATES

# Descriptive only; no computation depends on the collaboration level.
COLLABORATION_LEVELS = {
    3: ("Mutual collaboration", "Intelligence stage"),
    2: ("Responsive collaboration", "Digitization stage"),
    1: ("Assisted cooperation", "Automation stage"),
    0: ("Manual control", "-"),
}


@dataclass(frozen=True)
class PifRecord:
    context: str
    name: str
    node_id: str = ""
    short_name: str = ""
    hep: Optional[ProbInterval] = None

    def __post_init__(self):
        if self.context not in PIF_CONTEXTS:
            raise ValidationError(f"PIF {self.name!r}: unknown context {self.context!r}")
        if self.hep is not None:
            object.__setattr__(self, "hep", ProbInterval.coerce(self.hep))


@dataclass(frozen=True)
class AiFailureRecord:
    failure_type: str
    group: str
    hep: ProbInterval
    node_id: str = ""

    def __post_init__(self):
        if self.group not in AI_GROUPS:
            raise ValidationError(f"AI failure {self.failure_type!r}: unknown group {self.group!r}")
        object.__setattr__(self, "hep", ProbInterval.coerce(self.hep))


# (context, IDHEAS name, node id, short label, LPL, UPL); None bounds mark
# catalog-only PIFs that carry no HEP data.
_PIF_TABLE = [
    ("Environment and situation", "Workplace Location Accessibility and Habitability", "WorkplaceAccessibility", "", None, None),
    ("Environment and situation", "Workplace Visibility", "WorkplaceVisibility", "", None, None),
    ("Environment and situation", "Noise in Workplace and Communication Pathways", "Noise", "Noise", 2.10e-02, 2.80e-02),
    ("Environment and situation", "Cold/Heat/Humidity", "Heat", "Heat", 1.00e-01, 2.00e-01),
    ("Environment and situation", "Resistance to Physical Movement", "PhysicalMovement", "", None, None),
    ("System", "System and Instrumentation and Control (I&C) Transparency to Personnel", "SystemTransparency", "System Transparency", 3.00e-02, 1.50e-01),
    ("System", "Human-System Interface (HSI)", "HumanSystemInterface", "Human-System Interface", 4.00e-03, 1.40e-02),
    ("System", "Equipment and Tools", "EquipmentTools", "Equipment and Tools", 5.20e-02, 7.20e-02),
    ("Personnel", "Staffing", "Staffing", "Staffing", 4.80e-02, 9.80e-02),
    ("Personnel", "Procedures, Guidelines, and Instructions", "Procedures", "Procedures", 3.30e-02, 6.90e-02),
    ("Personnel", "Training", "Training", "Training", 3.60e-02, 4.50e-02),
    ("Personnel", "Team and Organization Factors", "TeamOrganization", "Team and Organization", 1.00e-01, 1.60e-01),
    ("Personnel", "Work Processes", "WorkProcesses", "Work Processes", 7.00e-02, 1.10e-01),
    ("Task", "Information Availability and Reliability", "InformationAvailability", "Information Availability", 3.00e-02, 2.80e-01),
    ("Task", "Scenario Familiarity", "ScenarioFamiliarity", "Scenario Familiarity", 1.40e-02, 1.70e-01),
    ("Task", "Multi-Tasking, Interruptions, and Distractions", "MultiTasking", "", None, None),
    ("Task", "Task Complexity", "TaskComplexity", "Task Complexity", 2.10e-03, 1.56e-02),
    ("Task", "Mental Fatigue", "MentalFatigue", "Mental Fatigue", 2.00e-01, 3.00e-01),
    ("Task", "Time Pressure and Stress", "TimePressureStress", "Time Pressure and Stress", 5.62e-02, 3.50e-01),
    ("Task", "Physical Demands", "PhysicalDemands", "", None, None),
]

_AI_TABLE = [
    ("Sensor failure", "Sensor", "Sensor", 1.05e-01, 2.15e-01),
    ("Actuator", "Actuator", "Actuator", 1.05e-01, 2.15e-01),
    ("System integration failure", "Systematic", "SystemIntegration", 1.00e-02, 2.00e-02),
    ("Network communication failure", "Systematic", "NetworkCommunication", 2.69e-02, 5.63e-02),
    ("Power supply failure", "Systematic", "PowerSupply", 7.54e-02, 7.54e-02),
    ("I/O connection failure", "Systematic", "IOConnection", 2.69e-02, 5.63e-02),
    ("Model uncertainty", "LogicSolver", "ModelUncertainty", 2.69e-02, 5.63e-02),
    ("Control logic unit (CLU) failure", "LogicSolver", "ControlLogicUnit", 4.73e-02, 4.73e-02),
    ("Storage insufficient", "LogicSolver", "StorageInsufficient", 2.69e-02, 5.63e-02),
    ("Random disturbance beyond control", "LogicSolver", "RandomDisturbance", 3.40e-06, 3.40e-06),
]

# Separator case components: (id, description, rate per 1e6 h, one-year probability).
CASE_STUDY_COMPONENTS = [
    ("PT-100", "Pressure transmitter", 500, 1.25e-02),
    ("PIC-100", "Pressure controller", 800, 9.05e-04),
    ("PV-100", "Pressure control valve", 1500, 1.97e-06),
    ("PZA&PZB", "Pressure switches (combined)", 346, 4.83e-02),
    ("Logic solver", "ESD logic solver", 500, 1.25e-02),
    ("SDV-100", "Shutdown valve", 1340, 7.98e-06),
]


def idheas_pif_catalog() -> list[PifRecord]:
    """All 20 IDHEAS-Data PIFs under their 4 contexts; 15 carry HEP intervals."""
    return [
        PifRecord(ctx, name, nid, short or name, None if lo is None else ProbInterval(lo, hi))
        for ctx, name, nid, short, lo, hi in _PIF_TABLE
    ]


def hep_defaults() -> list[PifRecord]:
    """The 15 PIFs that carry human error probability intervals."""
    return [r for r in idheas_pif_catalog() if r.hep is not None]


def ai_failure_defaults() -> list[AiFailureRecord]:
    """The 10 AI failure types with their probability intervals."""
    return [AiFailureRecord(ft, g, ProbInterval(lo, hi), nid) for ft, g, nid, lo, hi in _AI_TABLE]


def find_pif(records: Sequence[PifRecord], key: str) -> PifRecord:
    for r in records:
        if key in (r.name, r.short_name, r.node_id):
            return r
    raise UnknownEntryError(f"no PIF named {key!r}")


def find_ai_failure(records: Sequence[AiFailureRecord], key: str) -> AiFailureRecord:
    for r in records:
        if key in (r.failure_type, r.node_id):
            return r
    raise UnknownEntryError(f"no AI failure type named {key!r}")


@dataclass(frozen=True)
class TopologyOptions:
    """Wiring of the collaboration network.

    ``groups`` and ``layers`` map a node id to ``{"rule": ..., "parents": [...]}``
    where rule is ``"hep-rule"`` (:func:`paper_cpt_rule`), ``"or"`` (logical OR)
    or ``"noisy-or"`` (with ``"links"`` giving one probability per parent).
    ``consequence_order`` lists the four layer nodes in demand order.
    ``cpt_overrides`` replaces generated rows: node id -> list of
    ``[lower, upper]`` TRUE intervals.
    """

    groups: Mapping = field(default_factory=dict)
    layers: Mapping = field(default_factory=dict)
    consequence_order: tuple = ()
    consequence_id: str = "Consequence"
    cpt_overrides: Mapping = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping) -> "TopologyOptions":
        known = {"groups", "layers", "consequence_order", "consequence_id", "cpt_overrides", "description"}
        extra = set(data) - known
        if extra:
            raise ValidationError(f"unknown topology fields: {', '.join(sorted(extra))}")
        return cls(
            groups=copy.deepcopy(dict(data.get("groups", {}))),
            layers=copy.deepcopy(dict(data.get("layers", {}))),
            consequence_order=tuple(data.get("consequence_order", ())),
            consequence_id=data.get("consequence_id", "Consequence"),
            cpt_overrides=copy.deepcopy(dict(data.get("cpt_overrides", {}))),
        )

    def to_dict(self) -> dict:
        return {
            "groups": copy.deepcopy(dict(self.groups)),
            "layers": copy.deepcopy(dict(self.layers)),
            "consequence_order": list(self.consequence_order),
            "consequence_id": self.consequence_id,
            "cpt_overrides": copy.deepcopy(dict(self.cpt_overrides)),
        }


def default_topology() -> TopologyOptions:
    text = resources.files("collabrisk").joinpath("collab_topology.json").read_text(encoding="utf-8")
    return TopologyOptions.from_dict(json.loads(text))


def _rule_rows(rule: str, entry: Mapping, parent_ivs: Sequence[ProbInterval], node_id: str):
    n = len(parent_ivs)
    if rule == "hep-rule":
        lo = paper_cpt_rule([iv.lower for iv in parent_ivs]).rows
        hi = paper_cpt_rule([iv.upper for iv in parent_ivs]).rows
        return [ProbInterval(a[0], b[0]) for a, b in zip(lo, hi)]
    if rule in ("or", "noisy-or"):
        links = entry.get("links", [1.0] * n) if rule == "noisy-or" else [1.0] * n
        if len(links) != n:
            raise ValidationError(f"node {node_id!r}: {len(links)} links for {n} parents")
        rows = []
        for mask in range(1 << n):
            # first-parent-major with TRUE first: bit set means FALSE
            q = 1.0
            for i, link in enumerate(links):
                if not mask >> (n - 1 - i) & 1:
                    q *= 1.0 - link
            rows.append(ProbInterval.point(1.0 - q))
        return rows
    raise ValidationError(f"node {node_id!r}: unknown CPT rule {rule!r}")


def _consequence_node(cid: str, order: Sequence[str]) -> CredalNode:
    # Parent state index 0 is TRUE (= layer failed).  The consequence is the
    # first layer that works; all four failing is an accident.
    rows = []
    k = len(order)
    for mask in range(1 << k):
        failed = [not (mask >> (k - 1 - i) & 1) for i in range(k)]
        outcome = next((i for i, f in enumerate(failed) if not f), k)
        dist = [1.0 if j == outcome else 0.0 for j in range(len(CONSEQUENCE_STATES))]
        rows.append(IntervalRow.from_point(dist, free_state=outcome))
    return CredalNode(cid, tuple(order), tuple(rows), CONSEQUENCE_STATES)


def build_collaboration_model(
    ai: Optional[Sequence[AiFailureRecord]] = None,
    pifs: Optional[Sequence[PifRecord]] = None,
    options: Optional[TopologyOptions] = None,
) -> CredalNet:
    """Credal network of the human/AI collaboration.

    Leaves are the AI failure types and the PIFs with HEP data.  Group and
    layer node CPTs are generated from their parents' intervals by the rule
    named in the topology; for a non-leaf parent the interval used is that
    parent's TRUE marginal at the all-lower and all-upper corners.
    """
    ai = list(ai_failure_defaults() if ai is None else ai)
    pifs = [p for p in (hep_defaults() if pifs is None else pifs) if p.hep is not None]
    options = default_topology() if options is None else options

    leaves: dict[str, ProbInterval] = {}
    for r in ai:
        leaves[r.node_id or r.failure_type] = r.hep
    for p in pifs:
        leaves[p.node_id or p.name] = p.hep

    wiring = list(options.groups.items()) + list(options.layers.items())
    referenced = {par for _, entry in wiring for par in entry.get("parents", [])}
    defined = set(leaves) | {nid for nid, _ in wiring}
    absent = sorted(referenced - defined)
    if absent:
        raise ValidationError(f"topology references absent records: {', '.join(absent)}")
    if len(options.consequence_order) != 4:
        raise ValidationError("consequence_order must name exactly 4 layer nodes")
    missing_layers = [n for n in options.consequence_order if n not in options.layers]
    if missing_layers:
        raise ValidationError(f"consequence order names undefined layers: {', '.join(missing_layers)}")

    nodes = [CredalNode.binary(nid, (), [iv]) for nid, iv in leaves.items()]
    known: dict[str, ProbInterval] = dict(leaves)
    pending = dict(wiring)
    while pending:
        progressed = False
        for nid, entry in list(pending.items()):
            parents = list(entry.get("parents", []))
            if not parents:
                raise ValidationError(f"node {nid!r} has no parents")
            if not all(p in known for p in parents):
                continue
            if nid in options.cpt_overrides:
                rows = [ProbInterval.coerce(v) for v in options.cpt_overrides[nid]]
            else:
                rows = _rule_rows(entry.get("rule", "hep-rule"), entry, [known[p] for p in parents], nid)
            nodes.append(CredalNode.binary(nid, parents, rows))
            net = CredalNet(nodes)
            b = two_corner_bounds(net, nid)[BINARY[0]]
            known[nid] = ProbInterval(b.lower, b.upper)
            del pending[nid]
            progressed = True
        if not progressed:
            raise ValidationError(f"topology has a cycle among {', '.join(sorted(pending))}")

    nodes.append(_consequence_node(options.consequence_id, options.consequence_order))
    return CredalNet(nodes)


def case_study_fault_tree() -> Gate:
    """Separator overpressure tree: BPCS branch AND ESD branch, each an OR gate."""
    ev = {}
    for cid, desc, rate, p in CASE_STUDY_COMPONENTS:
        rec = FailureRecord(
            cid, desc, rate_per_hour=rate / 1e6, mission_time_hours=8760.0,
            probability=ProbInterval.point(p), source="separator case component data",
        )
        ev[cid] = BasicEvent(cid, rec)
    bpcs = Gate(GateKind.OR, (ev["PT-100"], ev["PIC-100"], ev["PV-100"]), "BPCS failure")
    esd = Gate(GateKind.OR, (ev["PZA&PZB"], ev["Logic solver"], ev["SDV-100"]), "ESD failure")
    return Gate(GateKind.AND, (bpcs, esd), "Separator overpressure")
