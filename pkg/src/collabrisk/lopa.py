"""Layer of protection analysis.

A demand (the initiating event) passes through an ordered chain of
independent protection layers (IPLs).  The consequence probability is the
initiating value times the product of the layer PFDs.  For the four-layer
human/AI chain (BPCS, operator response to alarm, SIS, manual shutdown) the
demand is further split by the first layer that succeeds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import UnknownEntryError, ValidationError
from .prob import FrequencyPerYear, ProbInterval, interval_complement, interval_product

__all__ = [
    "IplKind",
    "ProtectionLayer",
    "LopaScenario",
    "ConsequenceLadder",
    "LADDER_STATES",
    "typical_pfd",
    "consequence_frequency",
    "accident_probability",
    "consequence_ladder",
    "first_success_ladder",
    "case_study_layers",
]

LADDER_STATES = ("safe", "near_miss", "mishap", "incident", "accident")


class IplKind(str, enum.Enum):
    CONTROL_LOOP = "ControlLoop"
    OPERATOR_RESPONSE_TO_ALARM = "OperatorResponseToAlarm"
    TRAINED_HUMAN_ACTION_NO_STRESS = "TrainedHumanActionNoStress"
    SIS = "SIS"
    MANUAL_SHUTDOWN = "ManualShutdown"
    CUSTOM = "Custom"

    @classmethod
    def _missing_(cls, value):
        raise ValidationError(f"unknown IPL kind {value!r}")


# Table of typical PFDs.  SIS and manual shutdown are the values assumed for
# the separator case study (SIS like a control loop, manual shutdown as a
# trained action without stress).
_TYPICAL_PFD = {
    IplKind.CONTROL_LOOP: 1.00e-02,
    IplKind.TRAINED_HUMAN_ACTION_NO_STRESS: 1.00e-02,
    IplKind.OPERATOR_RESPONSE_TO_ALARM: 1.00e-01,
    IplKind.SIS: 1.00e-02,
    IplKind.MANUAL_SHUTDOWN: 1.00e-02,
}


def typical_pfd(kind: Union[IplKind, str]) -> float:
    """Catalogued PFD for an IPL kind; custom kinds have no default."""
    try:
        kind = IplKind(kind)
    except ValueError:
        raise UnknownEntryError(f"unknown IPL kind {kind!r}") from None
    if kind not in _TYPICAL_PFD:
        raise UnknownEntryError(f"no catalogued PFD for IPL kind {kind.value!r}")
    return _TYPICAL_PFD[kind]


@dataclass(frozen=True)
class ProtectionLayer:
    name: str
    kind: IplKind = IplKind.CUSTOM
    pfd: Optional[ProbInterval] = None
    label: str = ""  # free text for custom kinds

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValidationError("protection layer name must be nonempty")
        kind = IplKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.pfd is None:
            object.__setattr__(self, "pfd", ProbInterval.point(typical_pfd(kind)))
        else:
            object.__setattr__(self, "pfd", ProbInterval.coerce(self.pfd))


@dataclass(frozen=True)
class LopaScenario:
    """An initiating event followed by ordered protection layers.

    ``initiating_event`` is either a per-demand probability (a
    :class:`ProbInterval` or float) or a :class:`FrequencyPerYear`.
    """

    initiating_event: Union[ProbInterval, FrequencyPerYear]
    layers: tuple = field(default_factory=tuple)
    name: str = "scenario"

    def __post_init__(self):
        ie = self.initiating_event
        if not isinstance(ie, FrequencyPerYear):
            ie = ProbInterval.coerce(ie)
        object.__setattr__(self, "initiating_event", ie)
        layers = tuple(self.layers)
        for layer in layers:
            if not isinstance(layer, ProtectionLayer):
                raise ValidationError(f"not a ProtectionLayer: {layer!r}")
        object.__setattr__(self, "layers", layers)

    @property
    def per_demand(self) -> bool:
        return isinstance(self.initiating_event, ProbInterval)


@dataclass(frozen=True)
class ConsequenceLadder:
    safe: ProbInterval
    near_miss: ProbInterval
    mishap: ProbInterval
    incident: ProbInterval
    accident: ProbInterval

    def items(self):
        return [(s, getattr(self, s)) for s in LADDER_STATES]

    def total(self) -> ProbInterval:
        """Summed bounds; for point inputs this equals the demand probability."""
        return ProbInterval(
            min(1.0, sum(v.lower for _, v in self.items())),
            min(1.0, sum(v.upper for _, v in self.items())),
        )


def _pfd_product(layers: Sequence[ProtectionLayer]) -> ProbInterval:
    acc = ProbInterval.point(1.0)
    for layer in layers:
        acc = interval_product(acc, layer.pfd)
    return acc


def consequence_frequency(scenario: LopaScenario):
    """Initiating value times the product of all layer PFDs.

    Returns a :class:`FrequencyPerYear` for frequency inputs and a
    :class:`ProbInterval` for per-demand inputs.
    """
    product = _pfd_product(scenario.layers)
    ie = scenario.initiating_event
    if isinstance(ie, FrequencyPerYear):
        return ie.scaled(product)
    return interval_product(ie, product)


def accident_probability(layers: Sequence[ProtectionLayer]) -> ProbInterval:
    """Probability that every layer fails on a certain demand."""
    layers = list(layers)
    if not layers:
        raise ValidationError("accident probability needs at least one layer")
    return _pfd_product(layers)


def first_success_ladder(scenario: LopaScenario) -> list[ProbInterval]:
    """Split the demand by the first layer that succeeds.

    Entry ``k`` (for ``k < n``) is the probability that layers ``1..k`` fail
    and layer ``k+1`` works; the last entry is the all-fail probability.
    This generalises the four-layer ladder to any number of layers.
    """
    if not scenario.per_demand:
        raise ValidationError("a consequence ladder needs a per-demand initiating probability")
    reached = scenario.initiating_event
    masses = []
    for layer in scenario.layers:
        masses.append(interval_product(reached, interval_complement(layer.pfd)))
        reached = interval_product(reached, layer.pfd)
    masses.append(reached)
    return masses


def consequence_ladder(scenario: LopaScenario) -> ConsequenceLadder:
    """Safe / near miss / mishap / incident / accident split of a demand.

    The scenario must have exactly four layers, in the order BPCS, operator
    response to alarm, SIS, manual shutdown.
    """
    if len(scenario.layers) != 4:
        raise ValidationError(
            f"consequence ladder needs exactly 4 layers, got {len(scenario.layers)}"
        )
    return ConsequenceLadder(*first_success_ladder(scenario))


def case_study_layers() -> list[ProtectionLayer]:
    """The four IPLs of the separator case with their typical PFDs."""
    return [
        ProtectionLayer("BPCS", IplKind.CONTROL_LOOP),
        ProtectionLayer("Operator intervention", IplKind.OPERATOR_RESPONSE_TO_ALARM),
        ProtectionLayer("SIS", IplKind.SIS),
        ProtectionLayer("Manual shutdown", IplKind.MANUAL_SHUTDOWN),
    ]
