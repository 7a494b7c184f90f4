"""Directed social graph with per-edge diffusion parameters and activity strengths.

Graphs are immutable after construction; all hot loops read the CSR
index arrays directly.  The edge-list file format is one edge per line,
``src dst [diffusion_param] [activity_strength]``, whitespace separated,
with ``#`` comment lines ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

Model = Literal["ic", "lt"]

WEIGHT_TOL = 1e-9


class GraphFormatError(ValueError):
    """Malformed edge-list input (carries the offending line number)."""


class GraphValidationError(ValueError):
    """Structurally valid input that violates a model invariant."""


class DegenerateGraphError(ValueError):
    """Graph on which the requested computation is vacuous (e.g. T = 0)."""


@dataclass(frozen=True)
class SocialGraph:
    """Directed graph G = (V, E) with diffusion parameter and activity strength per edge.

    Node ids are dense integers 0..n-1.  Under the independent-cascade
    model the parameter of edge (u, v) is its activation probability;
    under the linear-threshold model it is the edge weight, and the
    in-weights of every node must sum to at most 1.
    """

    n: int
    model: Model
    edge_src: np.ndarray
    edge_dst: np.ndarray
    edge_param: np.ndarray
    edge_strength: np.ndarray
    out_indptr: np.ndarray = field(repr=False)
    out_edges: np.ndarray = field(repr=False)  # edge ids grouped by source
    in_indptr: np.ndarray = field(repr=False)
    in_edges: np.ndarray = field(repr=False)  # edge ids grouped by target
    labels: Optional[tuple[str, ...]] = None

    @property
    def m(self) -> int:
        return int(self.edge_src.shape[0])

    def out_edge_ids(self, u: int) -> np.ndarray:
        return self.out_edges[self.out_indptr[u] : self.out_indptr[u + 1]]

    def in_edge_ids(self, v: int) -> np.ndarray:
        return self.in_edges[self.in_indptr[v] : self.in_indptr[v + 1]]

    def out_degree(self, u: int) -> int:
        return int(self.out_indptr[u + 1] - self.out_indptr[u])

    def in_degree(self, v: int) -> int:
        return int(self.in_indptr[v + 1] - self.in_indptr[v])


@dataclass(frozen=True)
class GraphAggregates:
    """Totals and sampling distributions derived from activity strengths.

    ``total_strength`` is T, the sum of all edge strengths.
    ``node_weight_total`` is W, the sum over nodes of half the strength
    incident to each node; W equals T exactly in exact arithmetic.
    """

    total_strength: float
    node_weight_total: float
    node_weights: np.ndarray
    edge_cdf: np.ndarray
    node_cdf: np.ndarray


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int, float, float]],
    model: Model,
    labels: Optional[Sequence[str]] = None,
) -> SocialGraph:
    """Assemble and validate a graph from (src, dst, param, strength) tuples."""
    if model not in ("ic", "lt"):
        raise GraphValidationError(f"unknown model {model!r}; expected 'ic' or 'lt'")
    rows = list(edges)
    m = len(rows)
    src = np.empty(m, dtype=np.int64)
    dst = np.empty(m, dtype=np.int64)
    param = np.empty(m, dtype=np.float64)
    strength = np.empty(m, dtype=np.float64)
    seen: set[tuple[int, int]] = set()
    for i, (u, v, p, a) in enumerate(rows):
        if not (0 <= u < n and 0 <= v < n):
            raise GraphValidationError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise GraphValidationError(f"self-loop at node {u} rejected")
        if (u, v) in seen:
            raise GraphValidationError(f"duplicate edge ({u},{v}) rejected")
        seen.add((u, v))
        if not (0.0 <= p <= 1.0 + WEIGHT_TOL):
            raise GraphValidationError(f"edge ({u},{v}) diffusion parameter {p} outside [0,1]")
        if a < 0.0:
            raise GraphValidationError(f"edge ({u},{v}) activity strength {a} negative")
        src[i], dst[i], param[i], strength[i] = u, v, min(p, 1.0), a

    out_indptr, out_edges = _csr(src, n)
    in_indptr, in_edges = _csr(dst, n)

    if model == "lt":
        for v in range(n):
            s = float(param[in_edges[in_indptr[v] : in_indptr[v + 1]]].sum())
            if s > 1.0 + WEIGHT_TOL:
                raise GraphValidationError(
                    f"node {v}: sum of incoming weights {s:.12g} exceeds 1 under lt model"
                )

    return SocialGraph(
        n=n,
        model=model,
        edge_src=src,
        edge_dst=dst,
        edge_param=param,
        edge_strength=strength,
        out_indptr=out_indptr,
        out_edges=out_edges,
        in_indptr=in_indptr,
        in_edges=in_edges,
        labels=tuple(labels) if labels is not None else None,
    )


def _csr(keys: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(keys, kind="stable").astype(np.int64)
    counts = np.bincount(keys, minlength=n) if keys.size else np.zeros(n, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, order


def load_graph(
    path: str | Path,
    model: Model,
    default_strength: float = 1.0,
    write_nodemap: bool = True,
) -> SocialGraph:
    """Load an edge-list file.

    Missing diffusion parameters are filled with 1/indegree(target) and
    missing strengths with ``default_strength``.  Integer labels forming
    a dense range 0..n-1 are used as node ids directly; any other label
    set is remapped in order of first appearance, and the mapping is
    written to ``<path>.nodemap`` (one ``label id`` pair per line).
    """
    path = Path(path)
    if default_strength < 0:
        raise GraphValidationError("default_strength must be nonnegative")
    raw: list[tuple[str, str, Optional[float], Optional[float], int]] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.strip()
            if not body or body.startswith("#"):
                continue
            parts = body.split()
            if len(parts) < 2 or len(parts) > 4:
                raise GraphFormatError(
                    f"{path}:{lineno}: expected 'src dst [param] [strength]', got {body!r}"
                )
            p = a = None
            try:
                if len(parts) >= 3:
                    p = float(parts[2])
                if len(parts) == 4:
                    a = float(parts[3])
            except ValueError as exc:
                raise GraphFormatError(f"{path}:{lineno}: bad numeric field: {exc}") from exc
            raw.append((parts[0], parts[1], p, a, lineno))

    id_of, labels = _resolve_labels([(r[0], r[1]) for r in raw])
    n = len(id_of)
    edges = []
    indeg = np.zeros(n, dtype=np.int64)
    for s, d, _, _, _ in raw:
        indeg[id_of[d]] += 1
    for s, d, p, a, _ in raw:
        u, v = id_of[s], id_of[d]
        if p is None:
            p = 1.0 / indeg[v]
        if a is None:
            a = default_strength
        edges.append((u, v, p, a))

    g = build_graph(n, edges, model, labels=labels)
    if labels is not None and write_nodemap:
        map_path = path.with_name(path.name + ".nodemap")
        with map_path.open("w", encoding="utf-8") as fh:
            for label, idx in id_of.items():
                fh.write(f"{label} {idx}\n")
    return g


def _resolve_labels(
    pairs: list[tuple[str, str]],
) -> tuple[dict[str, int], Optional[list[str]]]:
    tokens: list[str] = []
    seen: set[str] = set()
    for s, d in pairs:
        for tok in (s, d):
            if tok not in seen:
                seen.add(tok)
                tokens.append(tok)
    try:
        ints = [int(t) for t in tokens]
    except ValueError:
        ints = None
    if ints is not None and all(i >= 0 for i in ints):
        hi = max(ints, default=-1)
        if set(ints) == set(range(hi + 1)):
            return {t: int(t) for t in tokens}, None
    return {t: i for i, t in enumerate(tokens)}, tokens


def write_graph(g: SocialGraph, path: str | Path) -> None:
    """Write a graph back to edge-list format (original labels if remapped)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for e in range(g.m):
            u, v = int(g.edge_src[e]), int(g.edge_dst[e])
            su = g.labels[u] if g.labels is not None else str(u)
            sv = g.labels[v] if g.labels is not None else str(v)
            fh.write(f"{su} {sv} {float(g.edge_param[e])!r} {float(g.edge_strength[e])!r}\n")


def compute_aggregates(g: SocialGraph) -> GraphAggregates:
    """Compute T, W, node weights w(u), and the edge/node sampling CDFs.

    Raises DegenerateGraphError when no edge carries positive strength;
    every strategy has benefit zero on such a graph.
    """
    total = float(g.edge_strength.sum())
    if total <= 0.0:
        raise DegenerateGraphError("total activity strength is zero; benefit is identically 0")
    w = np.zeros(g.n, dtype=np.float64)
    np.add.at(w, g.edge_src, g.edge_strength / 2.0)
    np.add.at(w, g.edge_dst, g.edge_strength / 2.0)
    node_total = float(w.sum())
    if not math.isclose(node_total, total, rel_tol=1e-9, abs_tol=1e-9):
        raise AssertionError(
            f"node-weight total {node_total!r} disagrees with edge total {total!r}"
        )
    edge_cdf = np.cumsum(g.edge_strength) / total
    node_cdf = np.cumsum(w) / node_total
    edge_cdf[-1] = 1.0
    node_cdf[-1] = 1.0
    return GraphAggregates(
        total_strength=total,
        node_weight_total=node_total,
        node_weights=w,
        edge_cdf=edge_cdf,
        node_cdf=node_cdf,
    )
