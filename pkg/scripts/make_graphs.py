#!/usr/bin/env python3
"""Generate the three synthetic benchmark graphs used by the comparison runs.

Scales mirror the usual small/medium/large setup: a 400-node random DAG
(~1k edges), a 1000-node preferential-attachment digraph (~3k edges),
and a 5200-node two-community graph (~14.5k edges).  Edge strengths are
drawn uniformly from [0.5, 1.5]; diffusion parameters follow the
weighted-cascade convention 1/indegree.
"""

import argparse
from pathlib import Path

from actmax import generators, write_graph

SPECS = [
    ("dag-0.4k.txt", "dag", 400, 2.5, 81),
    ("pa-1.0k.txt", "pa", 1000, 3.0, 82),
    ("tc-5.2k.txt", "two-community", 5200, 2.8, 83),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="data", help="directory for the edge lists")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for fname, kind, n, deg, seed in SPECS:
        g = generators.generate(
            kind, n, seed=seed, avg_degree=deg, strength_low=0.5, strength_high=1.5
        )
        path = out / fname
        write_graph(g, path)
        print(f"{path}: n={g.n} m={g.m}")


if __name__ == "__main__":
    main()
