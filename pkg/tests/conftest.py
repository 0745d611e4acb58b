"""Shared fixtures: the canonical transport-in-plants maps, built in code.

Building the maps here, independently of the bundled JSON documents, means
the tests cross-check the two encodings against each other.
"""

from __future__ import annotations

import numpy as np
import pytest

from curious_companion import Concept, Fcm
from curious_companion.documents import DataStore


def build_fcm(n: int, names: list[str], edges: dict[tuple[int, int], float]) -> Fcm:
    concepts = tuple(Concept(i + 1, names[i]) for i in range(n))
    w = np.zeros((n, n))
    for (i, j), value in edges.items():
        w[i - 1, j - 1] = value
    return Fcm(concepts, w)


CONCEPT_NAMES = [
    "rainfall",
    "fertiliser",
    "evaporation",
    "salt concentration",
    "diffusion",
    "root water stress",
    "osmosis",
    "water uptake",
    "transpiration",
]

LEARNER_EDGES = {
    (1, 4): -0.8,
    (2, 4): 0.4,
    (3, 4): 0.3,
    (4, 5): 1.0,
    (4, 6): 1.0 / 3.0,
    (4, 7): 1.0,
    (6, 8): -0.2,
}

EXPERT_EDGES = {
    (1, 4): -1.0,
    (2, 4): 0.5,
    (3, 4): 0.8,
    (3, 9): 0.5,
    (4, 5): 0.8,
    (4, 6): 0.5,
    (4, 7): -0.6,
    (6, 8): -0.1,
    (8, 6): -1.0,
    (9, 8): 1.0,
}


@pytest.fixture
def learner_fcm() -> Fcm:
    return build_fcm(8, CONCEPT_NAMES[:8], LEARNER_EDGES)


@pytest.fixture
def expert_fcm() -> Fcm:
    return build_fcm(9, CONCEPT_NAMES, EXPERT_EDGES)


@pytest.fixture
def store() -> DataStore:
    return DataStore()


@pytest.fixture
def world(store):
    return store.world("plant-root")
