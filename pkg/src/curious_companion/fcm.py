"""Fuzzy cognitive maps: validation, reduction, fuzzification, and comparison.

An FCM is a set of named concepts plus a signed weight matrix W where
w_ij in [-1, +1] gives the strength of the causal influence of concept i
on concept j.  The companion keeps one map per learner and one expert map
per subject; diffing the two (after fuzzifying the weight magnitudes into
low/medium/high classes) yields the concepts and causal links that will
look new or surprising to that learner.

All operations here are pure functions over immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Concept",
    "Fcm",
    "FuzzifiedMatrix",
    "FuzzyLabel",
    "MembershipResult",
    "SurprisePair",
    "Violation",
    "ValidationReport",
    "compare_fuzzified",
    "concept_partition",
    "fuzzify_matrix",
    "fuzzify_weight",
    "membership",
    "reduce_matrix",
    "validate_fcm",
]

# Two label evaluations closer than this are treated as an exact tie and
# resolved toward the lower magnitude class.
_TIE_EPS = 1e-9


class FuzzyLabel(IntEnum):
    """Signed fuzzy class of one causal weight.

    The integer encoding carries the sign (negative codes for negative
    weights) and the magnitude class (|code|: 1=low, 2=medium, 3=high),
    so numpy matrices of labels compare elementwise with plain ``!=``.
    """

    ZERO = 0
    POS_LOW = 1
    POS_MED = 2
    POS_HIGH = 3
    NEG_LOW = -1
    NEG_MED = -2
    NEG_HIGH = -3

    @property
    def symbol(self) -> str:
        if self is FuzzyLabel.ZERO:
            return "0"
        sign = "+" if self > 0 else "-"
        return sign + "LMH"[abs(int(self)) - 1]

    @classmethod
    def from_symbol(cls, s: str) -> "FuzzyLabel":
        if s == "0":
            return cls.ZERO
        if len(s) == 2 and s[0] in "+-" and s[1] in "LMH":
            mag = "LMH".index(s[1]) + 1
            return cls(mag if s[0] == "+" else -mag)
        raise ValueError(f"not a fuzzy label symbol: {s!r}")

    def __str__(self) -> str:
        return self.symbol


@dataclass(frozen=True)
class Concept:
    """One node of an FCM: a 1-based id plus a short symbolic name."""

    id: int
    name: str


class MembershipResult(tuple):
    """Evaluations (beta, theta, gamma) of the low/medium/high sets at one x."""

    __slots__ = ()

    def __new__(cls, beta: float, theta: float, gamma: float):
        return super().__new__(cls, (beta, theta, gamma))

    @property
    def beta(self) -> float:
        return self[0]

    @property
    def theta(self) -> float:
        return self[1]

    @property
    def gamma(self) -> float:
        return self[2]


@dataclass(frozen=True)
class SurprisePair:
    """Ordered concept pair (i, j) whose causal label differs between maps."""

    i: int
    j: int

    def as_tuple(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [v.message for v in self.violations]


class Fcm:
    """Concepts plus an NxN signed weight matrix.

    Construction never rejects bad data; use :func:`validate_fcm` to get a
    report of invariant violations.  Instances are treated as immutable:
    the weight matrix is copied in and exposed read-only.
    """

    __slots__ = ("concepts", "weights", "_index")

    def __init__(self, concepts: Sequence[Concept], weights) -> None:
        self.concepts: tuple[Concept, ...] = tuple(concepts)
        w = np.array(weights, dtype=float)
        if w.size == 0:
            w = w.reshape(0, 0)
        w.setflags(write=False)
        self.weights: np.ndarray = w
        self._index = {c.id: k for k, c in enumerate(self.concepts)}

    @property
    def size(self) -> int:
        return len(self.concepts)

    def concept_ids(self) -> frozenset[int]:
        return frozenset(c.id for c in self.concepts)

    def names(self) -> dict[str, int]:
        """Map of concept name -> concept id."""
        return {c.name: c.id for c in self.concepts}

    def concept(self, concept_id: int) -> Concept:
        return self.concepts[self._index[concept_id]]

    def has_concept(self, concept_id: int) -> bool:
        return concept_id in self._index

    def weight(self, i: int, j: int) -> float:
        """Weight of the edge from concept id i to concept id j."""
        return float(self.weights[self._index[i], self._index[j]])

    def with_weight(self, i: int, j: int, w: float) -> "Fcm":
        m = np.array(self.weights)
        m[self._index[i], self._index[j]] = w
        return Fcm(self.concepts, m)

    def with_concept(self, concept: Concept) -> "Fcm":
        n = self.size
        m = np.zeros((n + 1, n + 1))
        m[:n, :n] = self.weights
        return Fcm(self.concepts + (concept,), m)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Fcm)
            and self.concepts == other.concepts
            and self.weights.shape == other.weights.shape
            and bool(np.array_equal(self.weights, other.weights))
        )

    def __repr__(self) -> str:
        return f"Fcm({self.size} concepts)"


@dataclass(frozen=True)
class FuzzifiedMatrix:
    """NxN matrix of signed fuzzy labels, stored as an int8 code matrix."""

    codes: np.ndarray = field(repr=False)

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int8)
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)

    @property
    def size(self) -> int:
        return self.codes.shape[0]

    def label(self, row: int, col: int) -> FuzzyLabel:
        """Label at 0-based matrix position (row, col)."""
        return FuzzyLabel(int(self.codes[row, col]))

    def symbols(self) -> list[list[str]]:
        return [[FuzzyLabel(int(v)).symbol for v in row] for row in self.codes]

    def __eq__(self, other) -> bool:
        return isinstance(other, FuzzifiedMatrix) and bool(
            np.array_equal(self.codes, other.codes)
        )


def validate_fcm(fcm: Fcm) -> ValidationReport:
    """Check every Fcm invariant; violations come back as data, not errors."""
    out: list[Violation] = []
    n = len(fcm.concepts)

    seen_ids: set[int] = set()
    seen_names: set[str] = set()
    for c in fcm.concepts:
        if c.id < 1:
            out.append(Violation("bad_id", f"concept id {c.id} is not >= 1"))
        if c.id in seen_ids:
            out.append(Violation("duplicate_id", f"duplicate concept id {c.id}"))
        seen_ids.add(c.id)
        if not c.name:
            out.append(Violation("empty_name", f"concept {c.id} has an empty name"))
        if c.name in seen_names:
            out.append(Violation("duplicate_name", f"duplicate concept name {c.name!r}"))
        seen_names.add(c.name)

    if fcm.weights.ndim != 2 or fcm.weights.shape != (n, n):
        out.append(
            Violation(
                "dimension_mismatch",
                f"weight matrix is {fcm.weights.shape}, expected ({n}, {n})",
            )
        )
        return ValidationReport(tuple(out))

    for i in range(n):
        for j in range(n):
            w = fcm.weights[i, j]
            ci, cj = fcm.concepts[i].id, fcm.concepts[j].id
            if not np.isfinite(w) or abs(w) > 1:
                out.append(
                    Violation(
                        "weight_out_of_range",
                        f"weight [{ci},{cj}] = {w} is outside [-1, 1]",
                    )
                )
            if i == j and w != 0:
                out.append(
                    Violation("nonzero_diagonal", f"nonzero diagonal at concept {ci}")
                )
    return ValidationReport(tuple(out))


def concept_partition(learner: Fcm, companion: Fcm) -> tuple[frozenset[int], frozenset[int]]:
    """Split the companion's concepts into known (C_I) and new (C_new) ids.

    Concept identity across the two maps is by name; both returned id sets
    are in the companion's id space.  Concepts only the learner has are
    ignored.
    """
    learner_names = {c.name for c in learner.concepts}
    known = frozenset(c.id for c in companion.concepts if c.name in learner_names)
    new = frozenset(c.id for c in companion.concepts if c.name not in learner_names)
    return known, new


def reduce_matrix(companion: Fcm, c_new: Iterable[int]) -> Fcm:
    """Drop the rows/columns of the concepts in ``c_new`` from the companion map.

    Surviving concepts keep their relative order and original ids.  Raises
    ``KeyError`` if ``c_new`` names a concept the companion does not have.
    """
    drop = set(c_new)
    unknown = drop - set(c.id for c in companion.concepts)
    if unknown:
        raise KeyError(f"cannot remove unknown concept ids: {sorted(unknown)}")
    keep = [k for k, c in enumerate(companion.concepts) if c.id not in drop]
    survivors = [companion.concepts[k] for k in keep]
    reduced = companion.weights[np.ix_(keep, keep)] if keep else np.zeros((0, 0))
    return Fcm(survivors, reduced)


def membership(x: float) -> MembershipResult:
    """Evaluate the low/medium/high set memberships at a magnitude x in [0, 1].

    Piecewise linear with overlaps on [0.3, 0.4) and [0.6, 0.7); the low
    set covers the whole of [0, 0.3).  Values are clamped to [0, 1] to
    absorb float noise at the breakpoints.
    """
    if not (0 <= x <= 1):
        raise ValueError(f"membership input {x} outside [0, 1]")
    beta = theta = gamma = 0.0
    if x < 0.3:
        beta = 1.0
    elif x < 0.4:
        beta = 4 - 10 * x
        theta = 10 * x - 3
    elif x < 0.6:
        theta = 1.0
    elif x < 0.7:
        theta = 7 - 10 * x
        gamma = 10 * x - 6
    else:
        gamma = 1.0
    clamp = lambda v: min(1.0, max(0.0, v))
    return MembershipResult(clamp(beta), clamp(theta), clamp(gamma))


def fuzzify_weight(w: float) -> FuzzyLabel:
    """Map one signed weight to its fuzzy label.

    Zero stays a distinct ZERO label.  Otherwise the label is the argmax of
    the three memberships at |w|, ties broken toward the lower magnitude
    class, with the sign of w carried onto the result.
    """
    if abs(w) > 1:
        raise ValueError(f"weight {w} outside [-1, 1]")
    if w == 0:
        return FuzzyLabel.ZERO
    grades = membership(abs(w))
    best = max(grades)
    magnitude = next(k + 1 for k, g in enumerate(grades) if best - g <= _TIE_EPS)
    return FuzzyLabel(magnitude if w > 0 else -magnitude)


def fuzzify_matrix(weights) -> FuzzifiedMatrix:
    """Elementwise :func:`fuzzify_weight` over a weight matrix (or Fcm)."""
    if isinstance(weights, Fcm):
        weights = weights.weights
    w = np.asarray(weights, dtype=float)
    codes = np.zeros(w.shape, dtype=np.int8)
    for i in range(w.shape[0]):
        for j in range(w.shape[1]):
            codes[i, j] = int(fuzzify_weight(float(w[i, j])))
    return FuzzifiedMatrix(codes)


def compare_fuzzified(
    learner_f: FuzzifiedMatrix,
    companion_f: FuzzifiedMatrix,
    concept_ids: Sequence[int] | None = None,
) -> frozenset[SurprisePair]:
    """Positions where the two label matrices disagree, as surprise pairs.

    Any difference counts: magnitude class, sign, or zero vs non-zero.
    Matrix positions are translated to concept ids through ``concept_ids``
    (defaults to 1-based positions).
    """
    if learner_f.codes.shape != companion_f.codes.shape:
        raise ValueError(
            f"matrix dimensions differ: {learner_f.codes.shape} vs {companion_f.codes.shape}"
        )
    n = learner_f.size
    ids = list(concept_ids) if concept_ids is not None else list(range(1, n + 1))
    rows, cols = np.nonzero(learner_f.codes != companion_f.codes)
    return frozenset(SurprisePair(ids[r], ids[c]) for r, c in zip(rows, cols))
