#!/usr/bin/env python3
"""Benefit-versus-budget comparison of the sandwich framework against the
IM, MaxDegree, and Random baselines, under both diffusion models.

Produces one CSV per (graph, model) with a row per (algorithm, budget);
sandwich rows carry the estimated lower/upper bounds at the returned
strategy, which is what the bounds plots are drawn from.  Run
scripts/make_graphs.py first (or point --graphs at your own edge lists).
"""

import argparse
from pathlib import Path

from actmax.cli import emit_results, run_experiment
from actmax.config import config_from_dict
from actmax.graph import load_graph


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graphs", nargs="+", default=[
        "data/dag-0.4k.txt", "data/pa-1.0k.txt", "data/tc-5.2k.txt",
    ])
    ap.add_argument("--models", nargs="+", default=["ic", "lt"], choices=["ic", "lt"])
    ap.add_argument("--k-sweep", nargs="+", type=float,
                    default=[0.4, 0.8, 1.2, 1.6, 2.0])
    ap.add_argument("--t", type=float, default=0.2)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--eps-large", type=float, default=0.2,
                    help="accuracy for graphs above --large-threshold nodes")
    ap.add_argument("--large-threshold", type=int, default=2000)
    ap.add_argument("--ell", type=float, default=1.0)
    ap.add_argument("--mc-runs", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=17)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for graph in args.graphs:
        for model in args.models:
            g = load_graph(graph, model)
            eps = args.eps if g.n <= args.large_threshold else args.eps_large
            cfg = config_from_dict({
                "graph": graph,
                "model": model,
                "k_sweep": args.k_sweep,
                "t": args.t,
                "epsilon": eps,
                "ell": args.ell,
                "mc_runs": args.mc_runs,
                "seed": args.seed,
                "algorithms": ["sandwich", "im", "maxdegree", "random"],
                "output_dir": str(out_dir),
            })
            rows = run_experiment(cfg, graph=g)
            name = Path(graph).stem
            out = out_dir / f"compare_{name}_{model}.csv"
            emit_results(rows, "csv", out)
            print(f"wrote {out}")


if __name__ == "__main__":
    main()
