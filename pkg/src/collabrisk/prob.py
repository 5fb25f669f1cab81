"""Probability values, probability intervals and component failure records.

Probabilities are plain Python floats validated on entry; intervals are
immutable :class:`ProbInterval` instances.  Nothing is ever clamped: an
out-of-range value or an inverted interval raises :class:`ValidationError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real
from typing import Optional

from .errors import ValidationError

__all__ = [
    "ProbInterval",
    "FrequencyPerYear",
    "FailureRecord",
    "check_probability",
    "interval_product",
    "interval_complement",
    "rate_to_probability",
]


def check_probability(value, what: str = "probability") -> float:
    """Return ``value`` as a float, raising if it is not in [0, 1]."""
    if isinstance(value, bool) or not isinstance(value, Real):
        raise ValidationError(f"{what} must be a real number, got {value!r}")
    value = float(value)
    if not 0.0 <= value <= 1.0:  # also rejects NaN
        raise ValidationError(f"{what} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class ProbInterval:
    """Closed probability interval ``[lower, upper]``.

    ``lower`` is the lower probability limit (LPL) and ``upper`` the upper
    probability limit (UPL).  Degenerate intervals are allowed.
    """

    lower: float
    upper: float

    def __post_init__(self):
        lo = check_probability(self.lower, "interval lower bound")
        hi = check_probability(self.upper, "interval upper bound")
        if lo > hi:
            raise ValidationError(f"inverted interval: lower {lo!r} > upper {hi!r}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def point(cls, p: float) -> "ProbInterval":
        return cls(p, p)

    @classmethod
    def coerce(cls, value) -> "ProbInterval":
        """Accept a ProbInterval, a scalar, or a ``(lower, upper)`` pair."""
        if isinstance(value, ProbInterval):
            return value
        if isinstance(value, (tuple, list)):
            if len(value) != 2:
                raise ValidationError(f"interval needs two bounds, got {value!r}")
            return cls(value[0], value[1])
        return cls.point(value)

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, p: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= p <= self.upper + tol

    def __iter__(self):
        yield self.lower
        yield self.upper

    def __mul__(self, other):
        if isinstance(other, ProbInterval):
            return interval_product(self, other)
        return NotImplemented

    def __str__(self):
        return f"[{self.lower:.2E}, {self.upper:.2E}]"


def interval_product(a: ProbInterval, b: ProbInterval) -> ProbInterval:
    """Product of two independent probabilities known only up to intervals."""
    return ProbInterval(a.lower * b.lower, a.upper * b.upper)


def interval_complement(a: ProbInterval) -> ProbInterval:
    """Interval for ``1 - p`` when ``p`` lies in ``a``."""
    return ProbInterval(1.0 - a.upper, 1.0 - a.lower)


def rate_to_probability(rate_per_hour: float, mission_time_hours: float) -> float:
    """Failure probability of an exponential lifetime over a mission time.

    Computed as ``1 - exp(-rate * time)`` via ``expm1`` so that rare-event
    values keep full precision.
    """
    if isinstance(rate_per_hour, bool) or not rate_per_hour >= 0 or math.isinf(rate_per_hour):
        raise ValidationError(f"failure rate must be finite and >= 0, got {rate_per_hour!r}")
    if not mission_time_hours > 0 or math.isinf(mission_time_hours):
        raise ValidationError(f"mission time must be finite and > 0, got {mission_time_hours!r}")
    return -math.expm1(-rate_per_hour * mission_time_hours)


@dataclass(frozen=True)
class FrequencyPerYear:
    """Event frequency in events per year, possibly as a range.

    Unlike a probability this may exceed 1.
    """

    lower: float
    upper: Optional[float] = None

    def __post_init__(self):
        upper = self.lower if self.upper is None else self.upper
        for name, v in (("lower", self.lower), ("upper", upper)):
            if isinstance(v, bool) or not isinstance(v, Real) or not (0 <= v < math.inf):
                raise ValidationError(f"frequency {name} must be finite and >= 0, got {v!r}")
        if self.lower > upper:
            raise ValidationError(f"inverted frequency range: {self.lower!r} > {upper!r}")
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(upper))

    @property
    def value(self) -> float:
        if self.lower != self.upper:
            raise ValidationError("frequency is a range; use lower/upper")
        return self.lower

    def scaled(self, factor: ProbInterval) -> "FrequencyPerYear":
        return FrequencyPerYear(self.lower * factor.lower, self.upper * factor.upper)


@dataclass(frozen=True)
class FailureRecord:
    """Reliability data for one component.

    Either ``probability`` or the pair ``rate_per_hour`` + ``mission_time_hours``
    must be given.  When both are present the explicit probability wins.
    """

    component_id: str
    description: str = ""
    rate_per_hour: Optional[float] = None
    mission_time_hours: Optional[float] = None
    probability: Optional[ProbInterval] = None
    source: str = "user"

    def __post_init__(self):
        if not isinstance(self.component_id, str) or not self.component_id:
            raise ValidationError("component_id must be a nonempty string")
        if self.probability is not None:
            object.__setattr__(self, "probability", ProbInterval.coerce(self.probability))
        if self.rate_per_hour is not None and (
            isinstance(self.rate_per_hour, bool)
            or not isinstance(self.rate_per_hour, Real)
            or not 0 <= self.rate_per_hour < math.inf
        ):
            raise ValidationError(f"{self.component_id}: rate must be finite and >= 0")
        if self.mission_time_hours is not None and (
            isinstance(self.mission_time_hours, bool)
            or not isinstance(self.mission_time_hours, Real)
            or not 0 < self.mission_time_hours < math.inf
        ):
            raise ValidationError(f"{self.component_id}: mission time must be finite and > 0")
        if self.probability is None and self.rate_per_hour is None:
            raise ValidationError(
                f"{self.component_id}: needs a probability or a failure rate"
            )

    @property
    def resolvable(self) -> bool:
        return self.probability is not None or (
            self.rate_per_hour is not None and self.mission_time_hours is not None
        )

    def resolved_interval(self) -> Optional[ProbInterval]:
        """The probability interval, derived from the rate when needed."""
        if self.probability is not None:
            return self.probability
        if self.rate_per_hour is not None and self.mission_time_hours is not None:
            return ProbInterval.point(
                rate_to_probability(self.rate_per_hour, self.mission_time_hours)
            )
        return None
