"""Shared fixtures: the two golden counterexample graphs and random tiny
instances for the verification batteries."""

from __future__ import annotations

import numpy as np
import pytest

from actmax import build_graph
from actmax.graph import SocialGraph


def chain_graph(model="ic", p=1.0, a=1.0) -> SocialGraph:
    return build_graph(3, [(0, 1, p, a), (1, 2, p, a)], model)


def counterexample_submodular(model="ic") -> SocialGraph:
    """4 nodes; edges (v1,v2) and (v4,v3) deterministic, (v2,v3) blocked.

    Seeding v1 alone yields benefit 1; adding it after v4 yields 3 by the
    combination effect on the blocked middle edge, breaking diminishing
    returns (gain 1 at bottom vs 2 higher up).
    """
    return build_graph(
        4, [(0, 1, 1.0, 1.0), (1, 2, 0.0, 1.0), (3, 2, 1.0, 1.0)], model
    )


def counterexample_supermodular(model="ic") -> SocialGraph:
    """4 nodes; edges (v2,v1), (v2,v3), (v3,v4), all deterministic.

    Seeding v2 at the bottom gains 3, but after v3 is seeded the same
    increment gains only 2, breaking increasing returns as well.
    """
    return build_graph(
        4, [(1, 0, 1.0, 1.0), (1, 2, 1.0, 1.0), (2, 3, 1.0, 1.0)], model
    )


def random_tiny_graph(
    rng: np.random.Generator,
    model: str,
    n_lo: int = 3,
    n_hi: int = 6,
    m_lo: int = 3,
    m_hi: int = 8,
    strength_lo: float = 0.5,
    strength_hi: float = 2.0,
) -> SocialGraph:
    """Random directed graph within the oracle guard, valid for the model."""
    n = int(rng.integers(n_lo, n_hi + 1))
    m_target = int(rng.integers(m_lo, m_hi + 1))
    pairs: set[tuple[int, int]] = set()
    for _ in range(200):
        u, v = rng.integers(0, n, 2)
        if u != v:
            pairs.add((int(u), int(v)))
        if len(pairs) >= m_target:
            break
    indeg: dict[int, int] = {}
    for _, v in pairs:
        indeg[v] = indeg.get(v, 0) + 1
    rows = []
    for u, v in sorted(pairs):
        if model == "lt":
            p = float(rng.uniform(0.2, 1.0)) / indeg[v]
        else:
            p = float(rng.uniform(0.1, 1.0))
        rows.append((u, v, p, float(rng.uniform(strength_lo, strength_hi))))
    return build_graph(n, rows, model)


def random_steps(rng: np.random.Generator, d: int, budget: int, cap: int) -> list[int]:
    """Random feasible step vector: coordinates within cap, total within budget."""
    steps = [0] * d
    remaining = budget
    for i in rng.permutation(d):
        if remaining <= 0:
            break
        add = int(rng.integers(0, min(cap, remaining) + 1))
        steps[i] = add
        remaining -= add
    return steps


@pytest.fixture
def thm_sub_graph():
    return counterexample_submodular()


@pytest.fixture
def thm_super_graph():
    return counterexample_supermodular()
