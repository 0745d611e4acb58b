"""JSON document formats for maps, worlds, policies, and survey samples.

Documents are plain JSON objects.  Loaders validate on the way in and
raise :class:`DocumentError` with a human-readable message (and, for maps,
the underlying invariant violations); dumpers emit documents that reload
to an equal value.  A :class:`DataStore` resolves named documents from an
optional directory first and the package's bundled data second.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .fcm import Concept, Fcm, Violation, validate_fcm
from .policy import (
    DEFAULT_FALLBACK_T0_MS,
    DEFAULT_N,
    DEFAULT_STRATEGY_TABLE,
    Complexity,
    CuriosityProfile,
    Medium,
    Persuasion,
    PolicyConfig,
    PropensityClass,
    StimulationStrategy,
)
from .world import Bounds, LearningActivity, Position, WorldMap

__all__ = [
    "DataStore",
    "DocumentError",
    "fcm_from_doc",
    "fcm_to_doc",
    "policy_from_doc",
    "policy_to_doc",
    "position_from_doc",
    "position_to_doc",
    "profile_from_doc",
    "world_from_doc",
    "world_to_doc",
]


class DocumentError(ValueError):
    """A document that does not parse into a valid value."""

    def __init__(self, message: str, violations: list[Violation] | None = None):
        super().__init__(message)
        self.violations = list(violations or [])


def _require(doc: Any, key: str, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"{where} document is missing {key!r}")
    return doc[key]


# ----------------------------------------------------------------------
# positions

def position_from_doc(doc: Any) -> Position:
    try:
        return Position(float(doc["x"]), float(doc["y"]), float(doc.get("z", 0.0)))
    except (TypeError, KeyError, ValueError) as exc:
        raise DocumentError(f"bad position document: {doc!r}") from exc


def position_to_doc(p: Position) -> dict:
    return {"x": p.x, "y": p.y, "z": p.z}


# ----------------------------------------------------------------------
# fuzzy cognitive maps

def fcm_from_doc(doc: Any) -> Fcm:
    """Parse {"concepts": [{"id", "name"}], "edges": [{"from", "to", "w"}]}.

    Unlisted edges are zero.  The parsed map must satisfy every Fcm
    invariant or the whole document is rejected.
    """
    concept_docs = _require(doc, "concepts", "fcm")
    try:
        concepts = tuple(Concept(int(c["id"]), str(c["name"])) for c in concept_docs)
    except (TypeError, KeyError, ValueError) as exc:
        raise DocumentError("fcm concepts must be objects with id and name") from exc
    index = {c.id: k for k, c in enumerate(concepts)}
    n = len(concepts)
    weights = np.zeros((n, n))
    seen: set[tuple[int, int]] = set()
    for e in doc.get("edges", ()):
        try:
            i, j, w = int(e["from"]), int(e["to"]), float(e["w"])
        except (TypeError, KeyError, ValueError) as exc:
            raise DocumentError(f"bad fcm edge document: {e!r}") from exc
        if i not in index or j not in index:
            raise DocumentError(f"fcm edge [{i},{j}] names an unknown concept")
        if (i, j) in seen:
            raise DocumentError(f"fcm edge [{i},{j}] listed twice")
        seen.add((i, j))
        weights[index[i], index[j]] = w
    fcm = Fcm(concepts, weights)
    report = validate_fcm(fcm)
    if not report.ok:
        raise DocumentError(
            "invalid fcm document: " + "; ".join(report.messages()),
            report.violations,
        )
    return fcm


def fcm_to_doc(fcm: Fcm) -> dict:
    edges = []
    for i, ci in enumerate(fcm.concepts):
        for j, cj in enumerate(fcm.concepts):
            w = float(fcm.weights[i, j])
            if w != 0.0:
                edges.append({"from": ci.id, "to": cj.id, "w": w})
    return {
        "concepts": [{"id": c.id, "name": c.name} for c in fcm.concepts],
        "edges": edges,
    }


# ----------------------------------------------------------------------
# worlds

def world_from_doc(doc: Any, resolve: Callable[[str], Any] | None = None) -> WorldMap:
    """Parse a world document.

    ``companion_fcm`` may be an inline fcm document or a string naming
    another document, resolved through ``resolve``.
    """
    fcm_field = _require(doc, "companion_fcm", "world")
    if isinstance(fcm_field, str):
        if resolve is None:
            raise DocumentError(
                f"world references {fcm_field!r} but no resolver was given"
            )
        companion = fcm_from_doc(resolve(fcm_field))
    else:
        companion = fcm_from_doc(fcm_field)

    bounds_doc = _require(doc, "bounds", "world")
    bounds = Bounds(
        position_from_doc(_require(bounds_doc, "min", "world bounds")),
        position_from_doc(_require(bounds_doc, "max", "world bounds")),
    )
    activities = []
    for a in _require(doc, "activities", "world"):
        try:
            activities.append(
                LearningActivity(
                    id=str(a["id"]),
                    name=str(a["name"]),
                    objectives=str(a.get("objectives", "")),
                    background=str(a.get("background", "")),
                    concepts=frozenset(int(c) for c in a["concepts"]),
                    position=position_from_doc(a["position"]),
                    interaction_radius=float(a["interaction_radius"]),
                )
            )
        except (TypeError, KeyError, ValueError) as exc:
            raise DocumentError(f"bad activity document: {a!r}") from exc
    world = WorldMap(
        id=str(_require(doc, "id", "world")),
        name=str(_require(doc, "name", "world")),
        bounds=bounds,
        spawn=position_from_doc(_require(doc, "spawn", "world")),
        activities=tuple(activities),
        vicinity_radius=float(doc.get("vicinity_radius", 10.0)),
        companion_fcm=companion,
    )
    problems = world.validate()
    if problems:
        raise DocumentError("invalid world document: " + "; ".join(problems))
    return world


def world_to_doc(world: WorldMap) -> dict:
    """Dump a world with the companion map inlined."""
    return {
        "id": world.id,
        "name": world.name,
        "bounds": {
            "min": position_to_doc(world.bounds.min_corner),
            "max": position_to_doc(world.bounds.max_corner),
        },
        "spawn": position_to_doc(world.spawn),
        "vicinity_radius": world.vicinity_radius,
        "companion_fcm": fcm_to_doc(world.companion_fcm),
        "activities": [
            {
                "id": a.id,
                "name": a.name,
                "objectives": a.objectives,
                "background": a.background,
                "concepts": sorted(a.concepts),
                "position": position_to_doc(a.position),
                "interaction_radius": a.interaction_radius,
            }
            for a in world.activities
        ],
    }


# ----------------------------------------------------------------------
# curiosity profiles and policy configuration

def profile_from_doc(doc: Any) -> CuriosityProfile:
    responses = _require(doc, "responses", "profile")
    try:
        return CuriosityProfile(int(r) for r in responses)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad curiosity profile: {exc}") from exc


def policy_from_doc(doc: Any) -> PolicyConfig:
    """Parse policy knobs; every field is optional and defaulted."""
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise DocumentError("policy document must be an object")
    table = dict(DEFAULT_STRATEGY_TABLE)
    for key, sdoc in (doc.get("strategies") or {}).items():
        try:
            klass = PropensityClass(key)
            base = table[klass]
            table[klass] = StimulationStrategy(
                complexity=Complexity(sdoc.get("complexity", base.complexity.value)),
                medium=Medium(sdoc.get("medium", base.medium.value)),
                persuasion=Persuasion(sdoc.get("persuasion", base.persuasion.value)),
                elaboration=str(sdoc.get("elaboration", base.elaboration)),
            )
        except (TypeError, AttributeError, ValueError) as exc:
            raise DocumentError(f"bad strategy entry {key!r}: {exc}") from exc
    try:
        cfg = PolicyConfig(
            n=int(doc.get("n", DEFAULT_N)),
            fallback_t0_ms=int(doc.get("fallback_t0_ms", DEFAULT_FALLBACK_T0_MS)),
            vicinity_radius=float(doc.get("vicinity_radius", 10.0)),
            moving_away_samples=int(doc.get("moving_away_samples", 3)),
            low_below=float(doc.get("low_below", 3.0)),
            high_at_or_above=float(doc.get("high_at_or_above", 5.0)),
            strategy_table=tuple(table.items()),
        )
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad policy document: {exc}") from exc
    if cfg.n < 1:
        raise DocumentError(f"policy n must be >= 1, got {cfg.n}")
    if cfg.fallback_t0_ms <= 0:
        raise DocumentError("policy fallback_t0_ms must be positive")
    if cfg.vicinity_radius <= 0:
        raise DocumentError("policy vicinity_radius must be positive")
    if cfg.moving_away_samples < 2:
        raise DocumentError("policy moving_away_samples must be >= 2")
    if not cfg.low_below < cfg.high_at_or_above:
        raise DocumentError("policy thresholds must satisfy low_below < high_at_or_above")
    return cfg


def policy_to_doc(cfg: PolicyConfig) -> dict:
    return {
        "n": cfg.n,
        "fallback_t0_ms": cfg.fallback_t0_ms,
        "vicinity_radius": cfg.vicinity_radius,
        "moving_away_samples": cfg.moving_away_samples,
        "low_below": cfg.low_below,
        "high_at_or_above": cfg.high_at_or_above,
        "strategies": {
            klass.value: {
                "complexity": ss.complexity.value,
                "medium": ss.medium.value,
                "persuasion": ss.persuasion.value,
                "elaboration": ss.elaboration,
            }
            for klass, ss in cfg.strategy_table
        },
    }


# ----------------------------------------------------------------------
# data store

class DataStore:
    """Named JSON documents, from a directory with bundled-data fallback.

    Names are forward-slash relative paths such as ``fcms/alpha.json``.
    A directory passed in wins over the package's bundled copies, which
    lets tests and deployments override any fixture file by file.
    """

    def __init__(self, root: Path | str | None = None, bundled: bool = True):
        self.root = Path(root) if root is not None else None
        self.bundled = bundled

    def read_json(self, rel: str) -> Any:
        parts = [p for p in rel.split("/") if p]
        if any(p in ("..", "") for p in parts):
            raise DocumentError(f"bad document name: {rel!r}")
        if self.root is not None:
            path = self.root.joinpath(*parts)
            if path.is_file():
                try:
                    return json.loads(path.read_text())
                except json.JSONDecodeError as exc:
                    raise DocumentError(f"{rel}: not valid JSON: {exc}") from exc
        if self.bundled:
            node = resources.files("curious_companion") / "data"
            for p in parts:
                node = node / p
            if node.is_file():
                try:
                    return json.loads(node.read_text())
                except json.JSONDecodeError as exc:
                    raise DocumentError(f"{rel}: not valid JSON: {exc}") from exc
        raise DocumentError(f"no such data document: {rel}")

    def fcm(self, ref: str) -> Fcm:
        return fcm_from_doc(self.read_json(ref))

    def world(self, world_id: str) -> WorldMap:
        doc = self.read_json(f"worlds/{world_id}.json")
        return world_from_doc(doc, self.read_json)

    def world_ids(self) -> list[str]:
        """Ids of every world document visible to this store."""
        ids: set[str] = set()
        if self.root is not None and (self.root / "worlds").is_dir():
            ids.update(p.stem for p in (self.root / "worlds").glob("*.json"))
        if self.bundled:
            node = resources.files("curious_companion") / "data" / "worlds"
            if node.is_dir():
                ids.update(
                    f.name[: -len(".json")]
                    for f in node.iterdir()
                    if f.name.endswith(".json")
                )
        return sorted(ids)
