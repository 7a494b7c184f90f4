"""Lattice of marketing strategies and the node-activation functions h_u.

A strategy lives on the lattice {0, t, 2t, ...}^d under the budget
|x| <= k.  Coordinates are stored as integer step counts so budget
arithmetic is exact over arbitrarily many greedy increments.

Three activation kinds are supported:

* ``personalized``   -- d = n, h_u(x) = 2*x_u - x_u^2, coordinates capped
  at x_u <= 1 so h stays a probability.
* ``characteristic`` -- d = n, t = 1, h_u(x) = x_u in {0, 1}; strategies
  are indicator vectors of seed sets.
* ``independent``    -- each dimension j tries to activate node u with
  probability q_uj(x_j) = min(1, c*(1 - exp(-r*x_j))) independently, so
  h_u(x) = 1 - prod_j (1 - q_uj(x_j)).

All kinds are monotone with diminishing per-coordinate returns, which
the test suite checks by property testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import rng

STEP_TOL = 1e-9


class ConfigError(ValueError):
    """Inconsistent strategy-function configuration."""


class BudgetError(ValueError):
    """Increment would exceed the budget."""


@dataclass(frozen=True)
class LatticeSpec:
    """Dimension count d, granularity t, and budget k of the strategy lattice."""

    d: int
    t: float
    k: float

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ConfigError("dimension count must be nonnegative")
        if self.t <= 0:
            raise ConfigError("granularity t must be positive")
        if self.k < 0:
            raise ConfigError("budget k must be nonnegative")

    def max_total_steps(self) -> int:
        """Largest number of t-steps spendable without exceeding k."""
        return int(math.floor(self.k / self.t + STEP_TOL))


@dataclass(frozen=True)
class StrategyVector:
    """A lattice point; ``steps[i]`` counts t-increments on coordinate i."""

    steps: tuple[int, ...]
    spec: LatticeSpec

    def __post_init__(self) -> None:
        if len(self.steps) != self.spec.d:
            raise ConfigError(f"expected {self.spec.d} coordinates, got {len(self.steps)}")
        if any(s < 0 for s in self.steps):
            raise ConfigError("negative step count")
        if sum(self.steps) > self.spec.max_total_steps():
            raise BudgetError(
                f"total steps {sum(self.steps)} exceed budget {self.spec.k} at t={self.spec.t}"
            )

    @property
    def spent(self) -> float:
        return self.spec.t * sum(self.steps)

    def values(self) -> np.ndarray:
        return np.asarray(self.steps, dtype=np.float64) * self.spec.t

    def value(self, i: int) -> float:
        return self.steps[i] * self.spec.t


def zero_vector(spec: LatticeSpec) -> StrategyVector:
    return StrategyVector(steps=(0,) * spec.d, spec=spec)


def from_steps(steps: Sequence[int], spec: LatticeSpec) -> StrategyVector:
    return StrategyVector(steps=tuple(int(s) for s in steps), spec=spec)


def increment(x: StrategyVector, i: int) -> StrategyVector:
    """Return x + t*e_i; the original vector is unchanged."""
    if not (0 <= i < x.spec.d):
        raise ConfigError(f"dimension {i} out of range")
    if sum(x.steps) + 1 > x.spec.max_total_steps():
        raise BudgetError(f"increment on dimension {i} would exceed budget {x.spec.k}")
    steps = list(x.steps)
    steps[i] += 1
    return StrategyVector(steps=tuple(steps), spec=x.spec)


@dataclass(frozen=True)
class ActivationCurve:
    """One concave activation curve q(x) = min(1, scale*(1 - exp(-rate*x)))."""

    node: int
    dim: int
    scale: float
    rate: float

    def __call__(self, x: float) -> float:
        q = self.scale * (1.0 - math.exp(-self.rate * x))
        return min(1.0, max(0.0, q))


class StrategyFunction:
    """Maps strategy vectors to per-node seed probabilities h_u(x)."""

    def __init__(
        self,
        kind: str,
        n: int,
        d: int,
        curves: Optional[Sequence[ActivationCurve]] = None,
    ) -> None:
        if kind not in ("personalized", "characteristic", "independent"):
            raise ConfigError(f"unknown strategy-function kind {kind!r}")
        if kind in ("personalized", "characteristic") and d != n:
            raise ConfigError(f"{kind} activation requires d == n, got d={d}, n={n}")
        self.kind = kind
        self.n = n
        self.d = d
        self.curves: tuple[ActivationCurve, ...] = tuple(curves or ())
        self._by_dim: dict[int, list[ActivationCurve]] = {}
        self._by_node: dict[int, list[ActivationCurve]] = {}
        if kind == "independent":
            for c in self.curves:
                if not (0 <= c.node < n):
                    raise ConfigError(f"curve node {c.node} out of range")
                if not (0 <= c.dim < d):
                    raise ConfigError(f"curve dimension {c.dim} out of range")
                if c.scale < 0 or c.rate < 0:
                    raise ConfigError("curve scale and rate must be nonnegative")
                self._by_dim.setdefault(c.dim, []).append(c)
                self._by_node.setdefault(c.node, []).append(c)
        elif self.curves:
            raise ConfigError(f"{kind} activation takes no curves")

    # --- construction helpers -------------------------------------------------

    @classmethod
    def personalized(cls, n: int) -> "StrategyFunction":
        return cls("personalized", n=n, d=n)

    @classmethod
    def characteristic(cls, n: int) -> "StrategyFunction":
        return cls("characteristic", n=n, d=n)

    @classmethod
    def independent(
        cls, n: int, d: int, curves: Sequence[ActivationCurve]
    ) -> "StrategyFunction":
        return cls("independent", n=n, d=d, curves=curves)

    # --- evaluation -----------------------------------------------------------

    def _check(self, x: StrategyVector) -> None:
        if x.spec.d != self.d:
            raise ConfigError(f"strategy has d={x.spec.d}, function expects d={self.d}")
        cap = self.step_cap(x.spec.t)
        if cap is not None and any(s > cap for s in x.steps):
            raise ConfigError(
                f"coordinate exceeds per-coordinate cap of {cap} steps for kind {self.kind}"
            )

    def value(self, u: int, x: StrategyVector) -> float:
        """Seed probability of node u under strategy x."""
        self._check(x)
        if self.kind == "personalized":
            xu = x.value(u)
            return 2.0 * xu - xu * xu
        if self.kind == "characteristic":
            return 1.0 if x.steps[u] >= 1 else 0.0
        p_none = 1.0
        for c in self._by_node.get(u, ()):
            p_none *= 1.0 - c(x.value(c.dim))
        return 1.0 - p_none

    def values(self, x: StrategyVector) -> np.ndarray:
        """Vector of h_u(x) for all nodes."""
        self._check(x)
        if self.kind == "personalized":
            xv = x.values()
            return 2.0 * xv - xv * xv
        if self.kind == "characteristic":
            return (np.asarray(x.steps) >= 1).astype(np.float64)
        return np.array([self.value(u, x) for u in range(self.n)])

    def values_by_steps(self, steps: np.ndarray, t: float) -> np.ndarray:
        """Diagonal-kind fast path: h per node from its own step count."""
        if not self.one_node_per_dim:
            raise ConfigError("values_by_steps requires a one-node-per-dim kind")
        if self.kind == "characteristic":
            return (steps >= 1).astype(np.float64)
        xv = np.minimum(steps * t, 1.0)
        return 2.0 * xv - xv * xv

    @property
    def one_node_per_dim(self) -> bool:
        """True when dimension i affects node i and nothing else."""
        return self.kind in ("personalized", "characteristic")

    def affected_nodes(self, i: int) -> list[int]:
        """Nodes whose h value can change when coordinate i changes."""
        if self.one_node_per_dim:
            return [i]
        return sorted({c.node for c in self._by_dim.get(i, ())})

    def step_cap(self, t: float) -> Optional[int]:
        """Per-coordinate cap in steps, or None if only the budget binds."""
        if self.kind == "personalized":
            return int(math.floor(1.0 / t + STEP_TOL))
        if self.kind == "characteristic":
            if abs(t - 1.0) > STEP_TOL:
                raise ConfigError("characteristic activation requires granularity t = 1")
            return 1
        return None


def h_value(f: StrategyFunction, u: int, x: StrategyVector) -> float:
    """Functional alias for ``f.value(u, x)``."""
    return f.value(u, x)


def sample_seed_set(f: StrategyFunction, x: StrategyVector, seed: int) -> set[int]:
    """Draw one seed set; node u joins independently with probability h_u(x)."""
    return set(np.flatnonzero(sample_seed_matrix(f, x, seed, 1)[0]).tolist())


def sample_seed_matrix(
    f: StrategyFunction, x: StrategyVector, seed: int, count: int
) -> np.ndarray:
    """Draw ``count`` independent seed sets as a boolean (count, n) matrix.

    Draw i uses the node-seed coins of stream (seed, DOMAIN_SEEDSET, i),
    so results are reproducible and extendable: the first rows do not
    change when count grows.
    """
    from . import _kernels

    h = np.asarray(f.values(x), dtype=np.float64)
    return _kernels.seed_matrix(h, rng.as_u64(seed), rng.as_u64(rng.DOMAIN_SEEDSET), count).astype(bool)
