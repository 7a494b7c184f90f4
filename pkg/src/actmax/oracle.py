"""Brute-force ground truth on tiny instances.

Everything here enumerates the full realization space (2^m live-edge
subsets under IC, the product of per-node in-edge choices under LT), so
a guard refuses instances where that would blow up.  This module exists
to verify the samplers and optimizers, not to run experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Optional

import numpy as np

from . import _kernels
from .diffusion import ConstructedGraph
from .graph import SocialGraph
from .strategy import LatticeSpec, StrategyFunction, StrategyVector, from_steps

Objective = Literal["fc", "lower", "upper"]


class GuardExceededError(ValueError):
    """Instance too large for exhaustive enumeration."""


@dataclass(frozen=True)
class TinyInstanceGuard:
    max_edges: int = 12
    max_nodes: int = 10
    max_lattice_points: int = 10**6

    def check_graph(self, g: SocialGraph) -> None:
        if g.n > self.max_nodes:
            raise GuardExceededError(f"{g.n} nodes exceed guard of {self.max_nodes}")
        if g.m > self.max_edges:
            raise GuardExceededError(f"{g.m} edges exceed guard of {self.max_edges}")


DEFAULT_GUARD = TinyInstanceGuard()


def _node_weights(g: SocialGraph) -> np.ndarray:
    w = np.zeros(g.n, dtype=np.float64)
    np.add.at(w, g.edge_src, g.edge_strength / 2.0)
    np.add.at(w, g.edge_dst, g.edge_strength / 2.0)
    return w


def _seed_mask(seeds: Iterable[int], n: int) -> int:
    mask = 0
    for s in seeds:
        s = int(s)
        if not (0 <= s < n):
            raise ValueError(f"seed {s} out of range")
        mask |= 1 << s
    return mask


class ExactEvaluator:
    """Caches the 2^n benefit tables of one graph for repeated queries.

    ``fd_table[mask]`` is the expected benefit of the seed set encoded
    by ``mask``; lower/upper tables hold the single-seed-coverage lower
    bound and the half-strength node-weight upper bound.
    """

    def __init__(self, g: SocialGraph, guard: TinyInstanceGuard = DEFAULT_GUARD) -> None:
        guard.check_graph(g)
        self.g = g
        self.guard = guard
        w = _node_weights(g)
        if g.model == "ic":
            fd, fdl, fdu = _kernels.ic_tables(
                g.n, g.edge_src, g.edge_dst, g.edge_param, g.edge_strength, w
            )
        else:
            fd, fdl, fdu = _kernels.lt_tables(
                g.n, g.edge_src, g.edge_dst, g.edge_param, g.edge_strength, w,
                g.in_indptr, g.in_edges,
            )
        self.fd_table = fd
        self.fd_lower_table = fdl
        self.fd_upper_table = fdu
        self._bits = ((np.arange(1 << g.n)[:, None] >> np.arange(g.n)[None, :]) & 1).astype(bool)

    # --- seed-set functions ---------------------------------------------------

    def seed_benefit(self, seeds: Iterable[int]) -> float:
        return float(self.fd_table[_seed_mask(seeds, self.g.n)])

    def seed_benefit_lower(self, seeds: Iterable[int]) -> float:
        return float(self.fd_lower_table[_seed_mask(seeds, self.g.n)])

    def seed_benefit_upper(self, seeds: Iterable[int]) -> float:
        return float(self.fd_upper_table[_seed_mask(seeds, self.g.n)])

    # --- strategy functions ---------------------------------------------------

    def _mask_probs(self, h_values: np.ndarray) -> np.ndarray:
        factors = np.where(self._bits, h_values[None, :], 1.0 - h_values[None, :])
        return factors.prod(axis=1)

    def strategy_benefit(self, h: StrategyFunction, x: StrategyVector) -> float:
        return float(self._mask_probs(h.values(x)) @ self.fd_table)

    def strategy_benefit_lower(self, h: StrategyFunction, x: StrategyVector) -> float:
        return float(self._mask_probs(h.values(x)) @ self.fd_lower_table)

    def strategy_benefit_upper(self, h: StrategyFunction, x: StrategyVector) -> float:
        return float(self._mask_probs(h.values(x)) @ self.fd_upper_table)

    def strategy_value(self, h: StrategyFunction, x: StrategyVector, objective: Objective) -> float:
        if objective == "fc":
            return self.strategy_benefit(h, x)
        if objective == "lower":
            return self.strategy_benefit_lower(h, x)
        if objective == "upper":
            return self.strategy_benefit_upper(h, x)
        raise ValueError(f"unknown objective {objective!r}")

    def lattice_optimum(
        self, h: StrategyFunction, spec: LatticeSpec, objective: Objective = "fc"
    ) -> tuple[StrategyVector, float]:
        """Exhaustive argmax over the feasible lattice (first in lexicographic
        step order wins ties)."""
        best_steps: Optional[tuple[int, ...]] = None
        best_val = -math.inf
        count = 0
        cap = h.step_cap(spec.t)
        budget = spec.max_total_steps()
        per_coord = budget if cap is None else min(cap, budget)
        for steps in _enumerate_steps(spec.d, per_coord, budget):
            count += 1
            if count > self.guard.max_lattice_points:
                raise GuardExceededError(
                    f"feasible lattice exceeds guard of {self.guard.max_lattice_points} points"
                )
            x = from_steps(steps, spec)
            val = self.strategy_value(h, x, objective)
            if val > best_val:
                best_val = val
                best_steps = steps
        assert best_steps is not None
        return from_steps(best_steps, spec), float(best_val)


def _enumerate_steps(d: int, per_coord: int, budget: int):
    """All step vectors with coordinates in 0..per_coord summing to <= budget."""
    if d == 0:
        yield ()
        return
    for head in range(min(per_coord, budget) + 1):
        for tail in _enumerate_steps(d - 1, per_coord, budget - head):
            yield (head,) + tail


# --- module-level convenience wrappers -----------------------------------------


def seed_benefit(g: SocialGraph, seeds: Iterable[int], guard: TinyInstanceGuard = DEFAULT_GUARD) -> float:
    return ExactEvaluator(g, guard).seed_benefit(seeds)


def seed_benefit_lower(g: SocialGraph, seeds: Iterable[int], guard: TinyInstanceGuard = DEFAULT_GUARD) -> float:
    return ExactEvaluator(g, guard).seed_benefit_lower(seeds)


def seed_benefit_upper(g: SocialGraph, seeds: Iterable[int], guard: TinyInstanceGuard = DEFAULT_GUARD) -> float:
    return ExactEvaluator(g, guard).seed_benefit_upper(seeds)


def strategy_benefit(
    g: SocialGraph, h: StrategyFunction, x: StrategyVector, guard: TinyInstanceGuard = DEFAULT_GUARD
) -> float:
    return ExactEvaluator(g, guard).strategy_benefit(h, x)


def strategy_benefit_lower(
    g: SocialGraph, h: StrategyFunction, x: StrategyVector, guard: TinyInstanceGuard = DEFAULT_GUARD
) -> float:
    return ExactEvaluator(g, guard).strategy_benefit_lower(h, x)


def strategy_benefit_upper(
    g: SocialGraph, h: StrategyFunction, x: StrategyVector, guard: TinyInstanceGuard = DEFAULT_GUARD
) -> float:
    return ExactEvaluator(g, guard).strategy_benefit_upper(h, x)


def lattice_optimum(
    g: SocialGraph,
    h: StrategyFunction,
    spec: LatticeSpec,
    objective: Objective = "fc",
    guard: TinyInstanceGuard = DEFAULT_GUARD,
) -> tuple[StrategyVector, float]:
    return ExactEvaluator(g, guard).lattice_optimum(h, spec, objective)


def constructed_seed_benefit(
    cg: ConstructedGraph, guard: TinyInstanceGuard = DEFAULT_GUARD
) -> float:
    """Exact benefit of diffusing from the virtual layer of a constructed graph.

    Enumerates virtual coin outcomes jointly with base realizations;
    virtual edges fire independently under both models.
    """
    g = cg.base
    guard.check_graph(g)
    return float(
        _kernels.constructed_value(
            g.n,
            g.edge_src,
            g.edge_dst,
            g.edge_param,
            g.edge_strength,
            g.in_indptr,
            g.in_edges,
            g.model == "lt",
            np.asarray(cg.seed_probs, dtype=np.float64),
        )
    )


def explicit_constructed_seed_benefit(
    cg: ConstructedGraph, guard: Optional[TinyInstanceGuard] = None
) -> float:
    """Benefit of the literal 2n-node constructed graph, seeded at the
    virtual layer, via plain realization enumeration (IC only)."""
    big = cg.explicit_graph()
    guard = guard or TinyInstanceGuard(
        max_edges=cg.base.m + cg.base.n, max_nodes=2 * cg.base.n
    )
    guard.check_graph(big)
    smask = _seed_mask(range(cg.base.n, 2 * cg.base.n), big.n)
    return float(
        _kernels.ic_seed_value(
            big.n, big.edge_src, big.edge_dst, big.edge_param, big.edge_strength, smask
        )
    )


