"""Live-edge realizations, forward diffusion, and Monte Carlo benefit estimation.

The explicit APIs here (sample_realization / forward_diffuse /
activity_benefit) materialize one realization at a time and exist for
inspection and verification.  Monte Carlo estimation runs through the
lazy numba kernel, which flips the same hash-keyed coins without
materializing realizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Set

import numpy as np

from . import _kernels, rng
from .graph import GraphValidationError, SocialGraph, build_graph
from .strategy import StrategyFunction, StrategyVector


@dataclass(frozen=True)
class Realization:
    """One sampled live-edge subgraph, stored as per-node live out-edge lists."""

    live_out: tuple[tuple[int, ...], ...]
    rng_seed: int
    stream_index: int

    def live_edge_count(self) -> int:
        return sum(len(t) for t in self.live_out)

    def is_live(self, u: int, v: int) -> bool:
        return v in self.live_out[u]


def sample_realization(g: SocialGraph, seed: int, index: int = 0) -> Realization:
    """Sample one realization; replaying the same (seed, index) reproduces it.

    Under IC each edge is live independently with its activation
    probability.  Under LT each node keeps at most one live in-edge,
    edge (u, v) with probability b_uv and none with the leftover mass.
    """
    skey = rng.stream_key(seed, rng.DOMAIN_REALIZATION, index)
    live: list[list[int]] = [[] for _ in range(g.n)]
    if g.model == "ic":
        for e in range(g.m):
            if rng.edge_coin(skey, e) < g.edge_param[e]:
                live[int(g.edge_src[e])].append(int(g.edge_dst[e]))
    else:
        for v in range(g.n):
            r = rng.node_coin(skey, v)
            acc = 0.0
            for eid in g.in_edge_ids(v):
                acc += float(g.edge_param[eid])
                if r < acc:
                    live[int(g.edge_src[eid])].append(v)
                    break
    return Realization(
        live_out=tuple(tuple(t) for t in live), rng_seed=seed, stream_index=index
    )


def forward_diffuse(r: Realization, seeds: Iterable[int]) -> Set[int]:
    """Nodes reachable from the seed set through live edges (BFS)."""
    active = set(int(s) for s in seeds)
    frontier = list(active)
    while frontier:
        w = frontier.pop()
        for v in r.live_out[w]:
            if v not in active:
                active.add(v)
                frontier.append(v)
    return active


def activity_benefit(g: SocialGraph, active: Iterable[int]) -> float:
    """Summed strength of edges whose both endpoints are active."""
    act = set(int(a) for a in active)
    total = 0.0
    for e in range(g.m):
        if int(g.edge_src[e]) in act and int(g.edge_dst[e]) in act:
            total += float(g.edge_strength[e])
    return total


@dataclass(frozen=True)
class ConstructedGraph:
    """The base graph with a virtual seeding layer attached.

    For every node u there is a virtual node u~ (id n + u in the
    explicit view) and a virtual edge (u~, u) with activation
    probability ``seed_probs[u]`` and activity strength 0.  Diffusing
    from all virtual nodes reproduces the strategy benefit of the base
    graph exactly, provided virtual edges fire independently of the
    base realization (which is how every consumer here treats them).
    """

    base: SocialGraph
    seed_probs: np.ndarray

    @property
    def total_nodes(self) -> int:
        return 2 * self.base.n

    def virtual_id(self, u: int) -> int:
        return self.base.n + u

    def virtual_seed_edges(self) -> list[tuple[int, int, float, float]]:
        return [
            (self.virtual_id(u), u, float(self.seed_probs[u]), 0.0)
            for u in range(self.base.n)
        ]

    def explicit_graph(self) -> SocialGraph:
        """Materialize the 2n-node graph.  IC only: under LT the virtual
        edge would join the node's exclusive in-edge choice and change
        the diffusion law (and can push in-weight sums past 1)."""
        if self.base.model != "ic":
            raise GraphValidationError(
                "explicit constructed graph is only well-defined under the ic model; "
                "under lt the virtual layer must stay an independent seeding stage"
            )
        edges = [
            (int(self.base.edge_src[e]), int(self.base.edge_dst[e]),
             float(self.base.edge_param[e]), float(self.base.edge_strength[e]))
            for e in range(self.base.m)
        ]
        edges.extend(self.virtual_seed_edges())
        return build_graph(self.total_nodes, edges, "ic")


def build_constructed_graph(
    g: SocialGraph, x: StrategyVector, h: StrategyFunction
) -> ConstructedGraph:
    """Attach the virtual seeding layer for strategy x."""
    probs = h.values(x)
    if probs.shape[0] != g.n:
        raise GraphValidationError("strategy function node count does not match graph")
    return ConstructedGraph(base=g, seed_probs=np.asarray(probs, dtype=np.float64))


def simulate_benefit(
    g: SocialGraph,
    h: StrategyFunction,
    x: StrategyVector,
    runs: int,
    seed: int,
    domain: int = rng.DOMAIN_SCORE,
) -> tuple[float, float]:
    """Monte Carlo estimate of the expected benefit of strategy x.

    Each run seeds every node independently with probability h_u(x)
    (the virtual layer of the constructed graph), diffuses, and scores
    the benefit over base edges.  Returns (mean, standard error); runs
    with a fixed seed share coins across strategies, so comparisons
    between candidates are common-random-number coupled.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    probs = np.asarray(h.values(x), dtype=np.float64)
    vals = simulate_seeded(g, probs, runs, seed, domain)
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(runs)) if runs > 1 else 0.0
    return mean, stderr


def simulate_seeded(
    g: SocialGraph,
    seed_probs: np.ndarray,
    runs: int,
    seed: int,
    domain: int = rng.DOMAIN_SCORE,
    first_index: int = 0,
) -> np.ndarray:
    """Per-run benefits of diffusions seeded node-wise with `seed_probs`."""
    return _kernels.simulate_chunk(
        g.n,
        g.out_indptr,
        g.out_edges,
        g.edge_dst,
        g.edge_param,
        g.edge_strength,
        g.in_indptr,
        g.in_edges,
        g.model == "lt",
        np.asarray(seed_probs, dtype=np.float64),
        rng.as_u64(seed),
        rng.as_u64(domain),
        first_index,
        runs,
    )


def required_simulations(
    gamma: float, delta: float, alpha_sum: float, beta_sum: float
) -> int:
    """Hoeffding bound on the simulation count for a relative-error estimate.

    `alpha_sum` is the total activity strength (the range of one run);
    `beta_sum` is the strategy-dependent lower bound on the expected
    benefit, sum over edges of h_u * h_v * A_uv.
    """
    if not (0.0 < gamma <= 1.0):
        raise ValueError("gamma must lie in (0, 1]")
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    if alpha_sum <= 0.0:
        raise ValueError("alpha_sum must be positive")
    if beta_sum <= 0.0:
        raise ValueError(
            "beta_sum is zero: the benefit lower bound is degenerate; "
            "fall back to a fixed simulation count"
        )
    return int(math.ceil(alpha_sum**2 * math.log(2.0 / delta) / (2.0 * gamma**2 * beta_sum**2)))


def strategy_beta_sum(g: SocialGraph, h: StrategyFunction, x: StrategyVector) -> float:
    """Sum over edges of h_src * h_dst * strength (the Hoeffding beta term)."""
    hv = h.values(x)
    return float(np.sum(hv[g.edge_src] * hv[g.edge_dst] * g.edge_strength))
