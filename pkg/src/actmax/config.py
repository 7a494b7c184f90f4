"""Run configuration: one declarative JSON file, overridable by CLI flags.

Schema (all keys optional unless noted):

    {
      "graph": "path/to/edges.txt",        # required
      "model": "ic" | "lt",                # default "ic"
      "default_strength": 1.0,
      "strategy": {
        "kind": "personalized" | "characteristic" | "independent",
        "dims": 3,                          # independent only
        "curves": [                         # independent only
          {"node": 0, "dim": 1, "scale": 0.8, "rate": 2.0}, ...
        ]
      },
      "k_sweep": [0.4, 1.2, 2.0],           # budgets, strategy units
      "t": 0.2,
      "epsilon": 0.1,
      "ell": 1.0,
      "mc_runs": 2000,
      "seed": 1,
      "algorithms": ["sandwich", "im", "maxdegree", "random"],
      "output_dir": "results",
      "format": "csv" | "json",
      "trace": false,
      "record_timings": false
    }

Timings are recorded as 0 unless `record_timings` is set, so repeated
runs with one seed emit byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .strategy import ActivationCurve, ConfigError, StrategyFunction

KNOWN_ALGORITHMS = ("sandwich", "im", "maxdegree", "random", "oracle")


@dataclass
class RunConfig:
    graph: str
    model: str = "ic"
    default_strength: float = 1.0
    strategy_kind: str = "personalized"
    strategy_dims: Optional[int] = None
    strategy_curves: list[dict[str, Any]] = field(default_factory=list)
    k_sweep: list[float] = field(default_factory=lambda: [1.0])
    t: float = 0.2
    epsilon: float = 0.1
    ell: float = 1.0
    mc_runs: int = 2000
    seed: int = 1
    algorithms: list[str] = field(default_factory=lambda: ["sandwich"])
    output_dir: str = "results"
    format: str = "csv"
    trace: bool = False
    record_timings: bool = False

    def validate(self) -> None:
        if self.model not in ("ic", "lt"):
            raise ConfigError(f"model must be 'ic' or 'lt', got {self.model!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.format!r}")
        if not self.k_sweep:
            raise ConfigError("k_sweep must contain at least one budget")
        if any(k < 0 for k in self.k_sweep):
            raise ConfigError("budgets must be nonnegative")
        if self.t <= 0:
            raise ConfigError("granularity t must be positive")
        if not (0 < self.epsilon < 1):
            raise ConfigError("epsilon must lie in (0, 1)")
        if self.ell <= 0:
            raise ConfigError("ell must be positive")
        if self.mc_runs < 1:
            raise ConfigError("mc_runs must be >= 1")
        for a in self.algorithms:
            if a not in KNOWN_ALGORITHMS:
                raise ConfigError(
                    f"unknown algorithm {a!r}; expected a subset of {KNOWN_ALGORITHMS}"
                )

    def strategy_function(self, n: int) -> StrategyFunction:
        if self.strategy_kind == "personalized":
            return StrategyFunction.personalized(n)
        if self.strategy_kind == "characteristic":
            return StrategyFunction.characteristic(n)
        if self.strategy_kind == "independent":
            if self.strategy_dims is None:
                raise ConfigError("independent strategy needs 'dims'")
            curves = [
                ActivationCurve(
                    node=int(c["node"]), dim=int(c["dim"]),
                    scale=float(c["scale"]), rate=float(c["rate"]),
                )
                for c in self.strategy_curves
            ]
            return StrategyFunction.independent(n, self.strategy_dims, curves)
        raise ConfigError(f"unknown strategy kind {self.strategy_kind!r}")


def load_config(path: str | Path) -> RunConfig:
    with Path(path).open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    return config_from_dict(data)


def config_from_dict(data: dict[str, Any]) -> RunConfig:
    if "graph" not in data:
        raise ConfigError("config must name a 'graph' file")
    strat = data.get("strategy", {}) or {}
    cfg = RunConfig(
        graph=str(data["graph"]),
        model=str(data.get("model", "ic")),
        default_strength=float(data.get("default_strength", 1.0)),
        strategy_kind=str(strat.get("kind", "personalized")),
        strategy_dims=strat.get("dims"),
        strategy_curves=list(strat.get("curves", [])),
        k_sweep=[float(k) for k in data.get("k_sweep", [1.0])],
        t=float(data.get("t", 0.2)),
        epsilon=float(data.get("epsilon", 0.1)),
        ell=float(data.get("ell", 1.0)),
        mc_runs=int(data.get("mc_runs", 2000)),
        seed=int(data.get("seed", 1)),
        algorithms=[str(a) for a in data.get("algorithms", ["sandwich"])],
        output_dir=str(data.get("output_dir", "results")),
        format=str(data.get("format", "csv")),
        trace=bool(data.get("trace", False)),
        record_timings=bool(data.get("record_timings", False)),
    )
    cfg.validate()
    return cfg
