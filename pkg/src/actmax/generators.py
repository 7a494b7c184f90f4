"""Seeded synthetic graph generators for experiments.

Three small families at roughly the scales used for the comparison
runs: a random DAG, a preferential-attachment digraph, and a
two-community graph with dense blocks and sparse cross links.
Diffusion parameters follow the weighted-cascade convention
(1/indegree of the target); strengths default to 1 and can be
randomized per edge.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .graph import Model, SocialGraph, build_graph


def _finish(
    n: int,
    pairs: set[tuple[int, int]],
    model: Model,
    rng_: np.random.Generator,
    strength_low: float,
    strength_high: float,
) -> SocialGraph:
    edges = sorted(pairs)
    indeg = np.zeros(n, dtype=np.int64)
    for _, v in edges:
        indeg[v] += 1
    rows = []
    for u, v in edges:
        if strength_high > strength_low:
            a = float(rng_.uniform(strength_low, strength_high))
        else:
            a = float(strength_low)
        rows.append((u, v, 1.0 / indeg[v], a))
    return build_graph(n, rows, model)


def random_dag(
    n: int,
    avg_degree: float,
    model: Model = "ic",
    seed: int = 0,
    strength_low: float = 1.0,
    strength_high: float = 1.0,
) -> SocialGraph:
    """Random DAG: edges only from lower to higher node ids."""
    rng_ = np.random.default_rng(seed)
    target_m = int(round(n * avg_degree))
    pairs: set[tuple[int, int]] = set()
    attempts = 0
    while len(pairs) < target_m and attempts < 50 * target_m:
        attempts += 1
        u = int(rng_.integers(0, n - 1))
        v = int(rng_.integers(u + 1, n))
        pairs.add((u, v))
    return _finish(n, pairs, model, rng_, strength_low, strength_high)


def preferential_attachment(
    n: int,
    out_per_node: int = 3,
    model: Model = "ic",
    seed: int = 0,
    strength_low: float = 1.0,
    strength_high: float = 1.0,
) -> SocialGraph:
    """Each arriving node links to `out_per_node` earlier nodes chosen
    proportionally to (1 + current in-degree)."""
    rng_ = np.random.default_rng(seed)
    pairs: set[tuple[int, int]] = set()
    weight = np.ones(n, dtype=np.float64)
    for u in range(1, n):
        k = min(out_per_node, u)
        w = weight[:u] / weight[:u].sum()
        targets = rng_.choice(u, size=k, replace=False, p=w)
        for v in targets:
            pairs.add((u, int(v)))
            weight[int(v)] += 1.0
    return _finish(n, pairs, model, rng_, strength_low, strength_high)


def two_community(
    n: int,
    avg_degree: float = 3.0,
    cross_fraction: float = 0.05,
    model: Model = "ic",
    seed: int = 0,
    strength_low: float = 1.0,
    strength_high: float = 1.0,
) -> SocialGraph:
    """Two equal blocks with dense internal links and sparse cross links."""
    rng_ = np.random.default_rng(seed)
    half = n // 2
    target_m = int(round(n * avg_degree))
    cross = int(round(target_m * cross_fraction))
    inside = target_m - cross
    pairs: set[tuple[int, int]] = set()
    attempts = 0
    while len(pairs) < inside and attempts < 50 * target_m:
        attempts += 1
        block = int(rng_.integers(0, 2))
        lo = 0 if block == 0 else half
        hi = half if block == 0 else n
        u = int(rng_.integers(lo, hi))
        v = int(rng_.integers(lo, hi))
        if u != v:
            pairs.add((u, v))
    attempts = 0
    want = inside + cross
    while len(pairs) < want and attempts < 50 * target_m:
        attempts += 1
        u = int(rng_.integers(0, half))
        v = int(rng_.integers(half, n))
        if rng_.random() < 0.5:
            u, v = v, u
        pairs.add((u, v))
    return _finish(n, pairs, model, rng_, strength_low, strength_high)


GENERATORS = {
    "dag": random_dag,
    "pa": preferential_attachment,
    "two-community": two_community,
}


def generate(
    kind: str,
    n: int,
    model: Model = "ic",
    seed: int = 0,
    avg_degree: Optional[float] = None,
    strength_low: float = 1.0,
    strength_high: float = 1.0,
) -> SocialGraph:
    if kind == "dag":
        return random_dag(n, avg_degree or 2.5, model, seed, strength_low, strength_high)
    if kind == "pa":
        return preferential_attachment(n, int(avg_degree or 3), model, seed, strength_low, strength_high)
    if kind == "two-community":
        return two_community(n, avg_degree or 3.0, 0.05, model, seed, strength_low, strength_high)
    raise ValueError(f"unknown generator kind {kind!r}; expected one of {sorted(GENERATORS)}")
