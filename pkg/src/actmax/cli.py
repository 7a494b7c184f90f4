"""Experiment orchestration and the `actmax` command-line interface.

Subcommands: run (config-driven sweep), sandwich, baseline, estimate,
oracle, gen.  All outputs are deterministic functions of (config, seed);
wall times are recorded as 0 unless requested, so repeated runs emit
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import generators, oracle, optimizer
from .config import RunConfig, config_from_dict
from .diffusion import simulate_benefit
from .graph import SocialGraph, compute_aggregates, load_graph, write_graph
from .optimizer import GreedyTrace
from .strategy import LatticeSpec, StrategyVector, from_steps

CSV_COLUMNS = [
    "algorithm",
    "k",
    "fc_estimate",
    "fc_stderr",
    "lower_estimate",
    "upper_estimate",
    "wall_time_ms",
    "samples_used",
    "seed",
]


@dataclass
class ResultRow:
    algorithm: str
    k: float
    fc_estimate: float
    fc_stderr: float
    wall_time_ms: float
    samples_used: int
    seed: int
    lower_estimate: Optional[float] = None
    upper_estimate: Optional[float] = None

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def emit_results(rows: list[ResultRow], fmt: str, path: str | Path) -> None:
    """Write rows as CSV (stable column order, 6 significant digits) or JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                d = row.as_dict()
                writer.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
    elif fmt == "json":
        with path.open("w", encoding="utf-8") as fh:
            json.dump([r.as_dict() for r in rows], fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def load_rows_json(path: str | Path) -> list[ResultRow]:
    with Path(path).open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    return [ResultRow(**d) for d in data]


def _write_trace(trace: GreedyTrace, path: Path) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration", "dimension", "marginal_gain", "estimate"])
        for it, dim, gain, value in trace.rows:
            writer.writerow([it, dim, _fmt(gain), _fmt(value)])


def run_experiment(cfg: RunConfig, graph: Optional[SocialGraph] = None) -> list[ResultRow]:
    """Run every requested algorithm over the budget sweep.

    Each algorithm's strategy is scored by Monte Carlo with the shared
    run seed, so candidates see common random numbers.  Sandwich rows
    additionally carry lower/upper-bound estimates at the chosen
    strategy.
    """
    cfg.validate()
    g = graph if graph is not None else load_graph(cfg.graph, cfg.model, cfg.default_strength)
    agg = compute_aggregates(g)
    h = cfg.strategy_function(g.n)
    out_dir = Path(cfg.output_dir)
    rows: list[ResultRow] = []
    for k in cfg.k_sweep:
        spec = LatticeSpec(d=h.d, t=cfg.t, k=k)
        for algo in cfg.algorithms:
            t0 = time.perf_counter()
            lower = upper = None
            samples = 0
            if algo == "sandwich":
                traces: dict[str, GreedyTrace] = (
                    {name: GreedyTrace() for name in ("lower", "mid", "upper")}
                    if cfg.trace
                    else {}
                )
                res = optimizer.sandwich(
                    g, agg, h, spec, cfg.epsilon, cfg.ell, cfg.mc_runs, cfg.seed,
                    traces=traces or None,
                )
                est, err = res.sand_score
                lower = res.lower_estimate_at_sand
                upper = res.upper_estimate_at_sand
                samples = res.samples_used
                if cfg.trace:
                    out_dir.mkdir(parents=True, exist_ok=True)
                    for name, tr in traces.items():
                        _write_trace(tr, out_dir / f"trace_{name}_k{_fmt(k)}.csv")
            elif algo == "im":
                x, samples = optimizer.baseline_im(
                    g, agg, h, spec, cfg.epsilon, cfg.ell, cfg.seed
                )
                est, err = simulate_benefit(g, h, x, cfg.mc_runs, cfg.seed)
            elif algo == "maxdegree":
                x = optimizer.baseline_max_degree(g, h, spec)
                est, err = simulate_benefit(g, h, x, cfg.mc_runs, cfg.seed)
            elif algo == "random":
                x = optimizer.baseline_random(g, h, spec, cfg.seed)
                est, err = simulate_benefit(g, h, x, cfg.mc_runs, cfg.seed)
            elif algo == "oracle":
                _, est = oracle.lattice_optimum(g, h, spec, "fc")
                err = 0.0
            else:  # pragma: no cover - validate() rejects unknown names
                raise AssertionError(algo)
            elapsed_ms = (time.perf_counter() - t0) * 1000.0
            rows.append(
                ResultRow(
                    algorithm=algo,
                    k=k,
                    fc_estimate=est,
                    fc_stderr=err,
                    wall_time_ms=elapsed_ms if cfg.record_timings else 0.0,
                    samples_used=samples,
                    seed=cfg.seed,
                    lower_estimate=lower,
                    upper_estimate=upper,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="edge-list file")
    p.add_argument("--model", choices=["ic", "lt"], help="diffusion model")
    p.add_argument("--k", type=float, help="budget (strategy units)")
    p.add_argument("--t", type=float, help="lattice granularity")
    p.add_argument("--eps", type=float, help="accuracy epsilon")
    p.add_argument("--ell", type=float, help="confidence ell")
    p.add_argument("--mc-runs", type=int, help="Monte Carlo scoring runs")
    p.add_argument("--seed", type=int, help="run seed")
    p.add_argument("--out", help="output file")
    p.add_argument("--format", choices=["csv", "json"], help="output format")
    p.add_argument("--trace", action="store_true", help="write greedy trace CSVs")
    p.add_argument("--default-strength", type=float, help="strength for edges without one")
    p.add_argument("--strategy", choices=["personalized", "characteristic"],
                   help="strategy-function kind (independent needs a config file)")


def _cfg_from_args(args: argparse.Namespace, need_graph: bool = True) -> RunConfig:
    data: dict = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    if args.graph:
        data["graph"] = args.graph
    if need_graph and "graph" not in data:
        raise SystemExit("error: no graph given (use --graph or a config file)")
    data.setdefault("graph", "")
    if args.model:
        data["model"] = args.model
    if getattr(args, "k", None) is not None:
        data["k_sweep"] = [args.k]
    if args.t is not None:
        data["t"] = args.t
    if args.eps is not None:
        data["epsilon"] = args.eps
    if args.ell is not None:
        data["ell"] = args.ell
    if args.mc_runs is not None:
        data["mc_runs"] = args.mc_runs
    if args.seed is not None:
        data["seed"] = args.seed
    if args.format:
        data["format"] = args.format
    if args.trace:
        data["trace"] = True
    if args.default_strength is not None:
        data["default_strength"] = args.default_strength
    if args.strategy:
        data.setdefault("strategy", {})["kind"] = args.strategy
    if getattr(args, "algorithms", None):
        data["algorithms"] = args.algorithms.split(",")
    return config_from_dict(data)


def _parse_x(text: str, spec: LatticeSpec) -> StrategyVector:
    vals = [float(tok) for tok in text.split(",")]
    if len(vals) != spec.d:
        raise SystemExit(f"error: --x has {len(vals)} coordinates, expected {spec.d}")
    steps = []
    for v in vals:
        s = round(v / spec.t)
        if abs(s * spec.t - v) > 1e-9:
            raise SystemExit(f"error: coordinate {v} is not a multiple of t={spec.t}")
        steps.append(int(s))
    return from_steps(steps, spec)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="actmax",
        description="Activity-benefit maximization under lattice marketing strategies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="full experiment from a config file")
    p_run.add_argument("--config", help="JSON config file")
    p_run.add_argument("--algorithms", help="comma list: sandwich,im,maxdegree,random,oracle")
    _add_common(p_run)

    p_sand = sub.add_parser("sandwich", help="run the sandwich framework for one budget")
    p_sand.add_argument("--config", help="JSON config file")
    _add_common(p_sand)

    p_base = sub.add_parser("baseline", help="run one baseline for one budget")
    p_base.add_argument("--algo", required=True, choices=["im", "maxdegree", "random"])
    p_base.add_argument("--config", help="JSON config file")
    _add_common(p_base)

    p_est = sub.add_parser("estimate", help="Monte Carlo score of a given strategy vector")
    p_est.add_argument("--x", required=True, help="comma-separated coordinates (strategy units)")
    p_est.add_argument("--config", help="JSON config file")
    _add_common(p_est)

    p_or = sub.add_parser("oracle", help="exact values on tiny instances")
    p_or.add_argument("--config", help="JSON config file")
    p_or.add_argument("--seeds", help="comma-separated seed node ids (seed-set mode)")
    p_or.add_argument("--x", help="comma-separated strategy coordinates")
    p_or.add_argument("--lattice-opt", action="store_true", help="exhaustive lattice optimum")
    p_or.add_argument("--objective", choices=["fc", "lower", "upper"], default="fc")
    _add_common(p_or)

    p_gen = sub.add_parser("gen", help="generate a synthetic graph")
    p_gen.add_argument("--kind", required=True, choices=sorted(generators.GENERATORS))
    p_gen.add_argument("--nodes", type=int, required=True)
    p_gen.add_argument("--avg-degree", type=float, default=None)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--model", choices=["ic", "lt"], default="ic")
    p_gen.add_argument("--strength-low", type=float, default=1.0)
    p_gen.add_argument("--strength-high", type=float, default=1.0)
    p_gen.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "gen":
        g = generators.generate(
            args.kind, args.nodes, model=args.model, seed=args.seed,
            avg_degree=args.avg_degree,
            strength_low=args.strength_low, strength_high=args.strength_high,
        )
        write_graph(g, args.out)
        print(f"wrote {g.n} nodes, {g.m} edges to {args.out}")
        return 0

    cfg = _cfg_from_args(args)
    if args.command == "run":
        rows = run_experiment(cfg)
        out = args.out or str(Path(cfg.output_dir) / f"results.{cfg.format}")
        emit_results(rows, cfg.format, out)
        print(f"wrote {len(rows)} rows to {out}")
        return 0

    g = load_graph(cfg.graph, cfg.model, cfg.default_strength)
    h = cfg.strategy_function(g.n)
    spec = LatticeSpec(d=h.d, t=cfg.t, k=cfg.k_sweep[0])

    if args.command == "sandwich":
        cfg.algorithms = ["sandwich"]
        rows = run_experiment(cfg, graph=g)
        out = args.out or str(Path(cfg.output_dir) / f"sandwich.{cfg.format}")
        emit_results(rows, cfg.format, out)
        print(f"wrote {len(rows)} rows to {out}")
        return 0

    if args.command == "baseline":
        cfg.algorithms = [args.algo]
        rows = run_experiment(cfg, graph=g)
        out = args.out or str(Path(cfg.output_dir) / f"baseline_{args.algo}.{cfg.format}")
        emit_results(rows, cfg.format, out)
        print(f"wrote {len(rows)} rows to {out}")
        return 0

    if args.command == "estimate":
        x = _parse_x(args.x, spec)
        est, err = simulate_benefit(g, h, x, cfg.mc_runs, cfg.seed)
        print(f"estimate {est:.6g} stderr {err:.6g} (runs={cfg.mc_runs}, seed={cfg.seed})")
        return 0

    if args.command == "oracle":
        ev = oracle.ExactEvaluator(g)
        if args.seeds:
            seeds = [int(s) for s in args.seeds.split(",")]
            print(f"seed_benefit {ev.seed_benefit(seeds):.12g}")
            print(f"seed_benefit_lower {ev.seed_benefit_lower(seeds):.12g}")
            print(f"seed_benefit_upper {ev.seed_benefit_upper(seeds):.12g}")
        if args.x:
            x = _parse_x(args.x, spec)
            print(f"strategy_benefit {ev.strategy_benefit(h, x):.12g}")
            print(f"strategy_benefit_lower {ev.strategy_benefit_lower(h, x):.12g}")
            print(f"strategy_benefit_upper {ev.strategy_benefit_upper(h, x):.12g}")
        if args.lattice_opt:
            x_best, val = ev.lattice_optimum(h, spec, args.objective)
            coords = ",".join(_fmt(v) for v in x_best.values())
            print(f"lattice_optimum[{args.objective}] value {val:.12g} at x=({coords})")
        if not (args.seeds or args.x or args.lattice_opt):
            raise SystemExit("error: oracle needs --seeds, --x, or --lattice-opt")
        return 0

    raise AssertionError(args.command)


if __name__ == "__main__":
    raise SystemExit(main())
