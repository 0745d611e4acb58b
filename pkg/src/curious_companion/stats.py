"""Summary-statistics comparison of two independent survey groups.

Works from published summaries (n, mean, spread) rather than raw scores,
so studies can be checked as reported.  The spread of a group may be given
either as a standard deviation or as a variance; the two interpretations
give different t values, which is exactly why the field is explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "SpreadKind",
    "SurveySample",
    "WelchResult",
    "improvement_pct",
    "welch_t",
]


class SpreadKind(str, Enum):
    SD = "sd"
    VARIANCE = "variance"


@dataclass(frozen=True)
class SurveySample:
    """One group's summary: size, mean score, and spread."""

    n: int
    mean: float
    spread: float
    spread_kind: SpreadKind = SpreadKind.SD

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"group size must be >= 2, got {self.n}")
        if not math.isfinite(self.mean):
            raise ValueError(f"group mean must be finite, got {self.mean}")
        if not (self.spread > 0 and math.isfinite(self.spread)):
            raise ValueError(f"group spread must be positive, got {self.spread}")
        object.__setattr__(self, "spread_kind", SpreadKind(self.spread_kind))

    @property
    def variance(self) -> float:
        if self.spread_kind is SpreadKind.SD:
            return self.spread * self.spread
        return self.spread


@dataclass(frozen=True)
class WelchResult:
    t: float
    significant: bool
    critical_band: tuple[float, float]


def welch_t(
    a: SurveySample,
    b: SurveySample,
    critical_band: tuple[float, float] = (-1.997, 1.997),
) -> WelchResult:
    """Unequal-variance t statistic for mean(b) - mean(a).

    Positive t means group b scored higher.  The result is significant when
    t falls outside the supplied critical band (band endpoints themselves
    count as inside).
    """
    lo, hi = critical_band
    if not lo < hi:
        raise ValueError(f"critical band must satisfy lo < hi, got {critical_band}")
    se = math.sqrt(a.variance / a.n + b.variance / b.n)
    t = (b.mean - a.mean) / se
    return WelchResult(t=t, significant=not lo <= t <= hi, critical_band=(lo, hi))


def improvement_pct(baseline: float, treatment: float) -> float:
    """Relative change of treatment over baseline, in percent."""
    if baseline == 0:
        raise ValueError("baseline mean must be nonzero")
    return (treatment - baseline) / baseline * 100.0
