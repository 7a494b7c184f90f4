"""Reverse-sampling collections and the three benefit estimators.

An edge-rooted sample draws an edge proportional to its strength,
realizes one live-edge subgraph, and keeps the reverse-reachable sets
of both endpoints partitioned into [N1 & N2 | N1 only | N2 only].
A node-rooted sample draws a node proportional to a node weight vector
(half incident strength by default) and keeps one reverse set.

Estimators over a collection M of size theta:

* benefit:        (scale/theta) * sum of  H(B) + (1-H(B)) * H(O1) * H(O2)
* lower bound:    (scale/theta) * sum of  H(B)
* upper bound:    (scale/theta) * sum of  H(nu)        (node-rooted)

where H(A) = 1 - prod_{s in A} (1 - h_s(x)) is the probability that the
strategy seeds at least one node of A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Optional

import numpy as np

from . import _kernels, rng
from .graph import GraphAggregates, SocialGraph
from .strategy import StrategyFunction, StrategyVector

CollectionKind = Literal["re", "rn"]
EstimatorKind = Literal["fc", "lower", "upper"]

DUMP_FORMAT_VERSION = 1


@dataclass(frozen=True)
class RESample:
    """One edge-rooted sample: reverse sets of the drawn edge's endpoints."""

    edge: tuple[int, int]
    n1: frozenset[int]
    n2: frozenset[int]

    @property
    def both(self) -> frozenset[int]:
        return self.n1 & self.n2

    @property
    def only1(self) -> frozenset[int]:
        return self.n1 - self.n2

    @property
    def only2(self) -> frozenset[int]:
        return self.n2 - self.n1


@dataclass(frozen=True)
class RNSample:
    """One node-rooted sample: the reverse-reachable set of the drawn node."""

    root: int
    nu: frozenset[int]


@dataclass
class SampleCollection:
    """A frozen bag of samples in flat CSR layout plus a node index.

    For edge-rooted collections sample i occupies nodes[indptr[i]:indptr[i+1]]
    with the intersection part ending at split1[i] and the N1-only part
    at split2[i].  For node-rooted collections the whole slice is the
    reverse set and split arrays are unused.
    """

    kind: CollectionKind
    scale: float
    n: int
    nodes: np.ndarray
    indptr: np.ndarray
    split1: Optional[np.ndarray]
    split2: Optional[np.ndarray]
    _index: Optional[tuple[np.ndarray, np.ndarray, np.ndarray]] = field(
        default=None, repr=False
    )

    def __len__(self) -> int:
        return int(self.indptr.shape[0] - 1)

    @property
    def size(self) -> int:
        return len(self)

    def sample_parts(self, i: int) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        lo, hi = int(self.indptr[i]), int(self.indptr[i + 1])
        if self.kind == "rn":
            return frozenset(self.nodes[lo:hi].tolist()), frozenset(), frozenset()
        s1, s2 = int(self.split1[i]), int(self.split2[i])
        return (
            frozenset(self.nodes[lo:s1].tolist()),
            frozenset(self.nodes[s1:s2].tolist()),
            frozenset(self.nodes[s2:hi].tolist()),
        )

    def node_index(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR over nodes: (indptr, sample ids, part codes), built lazily."""
        if self._index is None:
            total = self.nodes.shape[0]
            sizes = np.diff(self.indptr)
            sid = np.repeat(np.arange(len(self), dtype=np.int32), sizes)
            if self.kind == "re":
                pos = np.arange(total, dtype=np.int64)
                part = np.full(total, 2, dtype=np.int8)
                part[pos < self.split2[sid]] = 1
                part[pos < self.split1[sid]] = 0
            else:
                part = np.zeros(total, dtype=np.int8)
            order = np.argsort(self.nodes, kind="stable")
            counts = np.bincount(self.nodes, minlength=self.n)
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._index = (indptr, sid[order], part[order])
        return self._index

    def entries_of(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        indptr, sid, part = self.node_index()
        lo, hi = indptr[u], indptr[u + 1]
        return sid[lo:hi], part[lo:hi]


def _lt_mode(g: SocialGraph) -> bool:
    return g.model == "lt"


def build_re_collection(
    g: SocialGraph,
    agg: GraphAggregates,
    count: int,
    seed: int,
    domain: int = rng.DOMAIN_RE_FINAL,
    first_index: int = 0,
) -> SampleCollection:
    """Generate `count` edge-rooted samples (streams first_index..)."""
    parts = _generate_re(g, agg, count, seed, domain, first_index)
    return _assemble("re", agg.total_strength, g.n, [parts])


def build_rn_collection(
    g: SocialGraph,
    agg: GraphAggregates,
    count: int,
    seed: int,
    domain: int = rng.DOMAIN_RN_FINAL,
    first_index: int = 0,
    node_weights: Optional[np.ndarray] = None,
    scale: Optional[float] = None,
) -> SampleCollection:
    """Generate `count` node-rooted samples.

    With default weights the root distribution is w(u)/W (half incident
    strength); passing uniform weights instead yields plain influence
    spread sampling with scale n.
    """
    if node_weights is None:
        node_cdf = agg.node_cdf
        scale_val = agg.node_weight_total
    else:
        node_weights = np.asarray(node_weights, dtype=np.float64)
        total = float(node_weights.sum())
        if total <= 0:
            raise ValueError("node weights must have positive total")
        node_cdf = np.cumsum(node_weights) / total
        node_cdf[-1] = 1.0
        scale_val = total if scale is None else scale
    parts = _generate_rn(g, node_cdf, count, seed, domain, first_index)
    return _assemble("rn", scale_val, g.n, [parts])


def _generate_re(g, agg, count, seed, domain, first_index):
    chunks = []
    done = 0
    cap = max(4096, 8 * count)
    while done < count:
        res = _kernels.gen_re_chunk(
            g.n, agg.edge_cdf, g.edge_src, g.edge_dst, g.in_indptr, g.in_edges,
            g.edge_param, _lt_mode(g), rng.as_u64(seed), rng.as_u64(domain),
            first_index + done, count - done, cap,
        )
        nodes, indptr, split1, split2, _ru, _rv, made, used = res
        if made == 0:
            cap *= 4
            continue
        chunks.append(
            (
                nodes[:used].copy(),
                indptr[: made + 1].copy(),
                split1[:made].copy(),
                split2[:made].copy(),
            )
        )
        done += made
    return chunks


def _generate_rn(g, node_cdf, count, seed, domain, first_index):
    chunks = []
    done = 0
    cap = max(4096, 8 * count)
    while done < count:
        res = _kernels.gen_rn_chunk(
            g.n, node_cdf, g.edge_src, g.in_indptr, g.in_edges, g.edge_param,
            _lt_mode(g), rng.as_u64(seed), rng.as_u64(domain), first_index + done,
            count - done, cap,
        )
        nodes, indptr, _roots, made, used = res
        if made == 0:
            cap *= 4
            continue
        chunks.append((nodes[:used].copy(), indptr[: made + 1].copy(), None, None))
        done += made
    return chunks


def _assemble(kind, scale, n, chunk_groups) -> SampleCollection:
    flat = [c for group in chunk_groups for c in group]
    nodes = np.concatenate([c[0] for c in flat]) if flat else np.empty(0, dtype=np.int32)
    counts = [c[1].shape[0] - 1 for c in flat]
    total = sum(counts)
    indptr = np.zeros(total + 1, dtype=np.int64)
    split1 = np.zeros(total, dtype=np.int64) if kind == "re" else None
    split2 = np.zeros(total, dtype=np.int64) if kind == "re" else None
    at = 0
    offset = 0
    for c in flat:
        cnt = c[1].shape[0] - 1
        indptr[at + 1 : at + cnt + 1] = c[1][1:] + offset
        if kind == "re":
            split1[at : at + cnt] = c[2] + offset
            split2[at : at + cnt] = c[3] + offset
        offset += c[0].shape[0]
        at += cnt
    return SampleCollection(
        kind=kind, scale=float(scale), n=n,
        nodes=nodes, indptr=indptr, split1=split1, split2=split2,
    )


def extend_re_collection(
    base: Optional[SampleCollection],
    g: SocialGraph,
    agg: GraphAggregates,
    target: int,
    seed: int,
    domain: int,
) -> SampleCollection:
    """Grow an edge-rooted collection to `target` samples, reusing streams
    0..len(base)-1 so earlier samples are identical to regenerating."""
    have = 0 if base is None else len(base)
    if have >= target:
        return base
    chunks = _generate_re(g, agg, target - have, seed, domain, have)
    prior = []
    if base is not None and have > 0:
        prior = [(base.nodes, base.indptr, base.split1, base.split2)]
    return _assemble("re", agg.total_strength, g.n, [prior, chunks])


def extend_rn_collection(
    base: Optional[SampleCollection],
    g: SocialGraph,
    agg: GraphAggregates,
    target: int,
    seed: int,
    domain: int,
    node_weights: Optional[np.ndarray] = None,
    scale: Optional[float] = None,
) -> SampleCollection:
    have = 0 if base is None else len(base)
    if have >= target:
        return base
    if node_weights is None:
        node_cdf = agg.node_cdf
        scale_val = agg.node_weight_total
    else:
        node_weights = np.asarray(node_weights, dtype=np.float64)
        node_cdf = np.cumsum(node_weights) / node_weights.sum()
        node_cdf[-1] = 1.0
        scale_val = float(node_weights.sum()) if scale is None else scale
    chunks = _generate_rn(g, node_cdf, target - have, seed, domain, have)
    prior = []
    if base is not None and have > 0:
        prior = [(base.nodes, base.indptr, None, None)]
    return _assemble("rn", scale_val, g.n, [prior, chunks])


def draw_re_sample(g: SocialGraph, agg: GraphAggregates, seed: int, index: int = 0) -> RESample:
    """Draw a single edge-rooted sample (stream `index` of `seed`)."""
    cap = 4096
    while True:
        res = _kernels.gen_re_chunk(
            g.n, agg.edge_cdf, g.edge_src, g.edge_dst, g.in_indptr, g.in_edges,
            g.edge_param, _lt_mode(g), rng.as_u64(seed), rng.as_u64(rng.DOMAIN_RE_FINAL), index, 1, cap,
        )
        nodes, indptr, s1, s2, ru, rv, made, _used = res
        if made == 1:
            break
        cap *= 4
    both = frozenset(nodes[: s1[0]].tolist())
    o1 = frozenset(nodes[s1[0] : s2[0]].tolist())
    o2 = frozenset(nodes[s2[0] : indptr[1]].tolist())
    return RESample(edge=(int(ru[0]), int(rv[0])), n1=both | o1, n2=both | o2)


def draw_rn_sample(g: SocialGraph, agg: GraphAggregates, seed: int, index: int = 0) -> RNSample:
    """Draw a single node-rooted sample (stream `index` of `seed`)."""
    cap = 4096
    while True:
        res = _kernels.gen_rn_chunk(
            g.n, agg.node_cdf, g.edge_src, g.in_indptr, g.in_edges, g.edge_param,
            _lt_mode(g), rng.as_u64(seed), rng.as_u64(rng.DOMAIN_RN_FINAL), index, 1, cap,
        )
        nodes, indptr, roots, made, _used = res
        if made == 1:
            break
        cap *= 4
    return RNSample(root=int(roots[0]), nu=frozenset(nodes[: indptr[1]].tolist()))


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def _contributions(col: SampleCollection, h_values: np.ndarray, kind: EstimatorKind) -> np.ndarray:
    hv = np.asarray(h_values, dtype=np.float64)
    if col.kind == "rn":
        if kind != "upper":
            raise ValueError("node-rooted collections only carry the upper estimator")
        P = _kernels.rn_part_products(col.nodes, col.indptr, hv)
        return 1.0 - P
    if kind == "upper":
        raise ValueError("the upper estimator needs a node-rooted collection")
    B, O1, O2 = _kernels.re_part_products(col.nodes, col.indptr, col.split1, col.split2, hv)
    if kind == "lower":
        return 1.0 - B
    return (1.0 - B) + B * (1.0 - O1) * (1.0 - O2)


def estimator_samples(
    col: SampleCollection, x: StrategyVector, h: StrategyFunction, kind: EstimatorKind
) -> np.ndarray:
    """Per-sample estimate contributions, already multiplied by the scale."""
    return col.scale * _contributions(col, h.values(x), kind)


def _estimate(col, x, h, kind) -> float:
    if len(col) == 0:
        return 0.0
    return float(np.mean(estimator_samples(col, x, h, kind)))


def estimate_benefit(col: SampleCollection, x: StrategyVector, h: StrategyFunction) -> float:
    """Unbiased benefit estimate from an edge-rooted collection."""
    return _estimate(col, x, h, "fc")


def estimate_benefit_lower(col: SampleCollection, x: StrategyVector, h: StrategyFunction) -> float:
    """Unbiased estimate of the single-seed-coverage lower bound."""
    return _estimate(col, x, h, "lower")


def estimate_benefit_upper(col: SampleCollection, x: StrategyVector, h: StrategyFunction) -> float:
    """Unbiased estimate of the node-weight upper bound (node-rooted)."""
    return _estimate(col, x, h, "upper")


def estimate_by_kind(
    col: SampleCollection, x: StrategyVector, h: StrategyFunction, kind: EstimatorKind
) -> float:
    return _estimate(col, x, h, kind)


def marginal_gain(
    col: SampleCollection,
    x: StrategyVector,
    h: StrategyFunction,
    i: int,
    kind: EstimatorKind,
) -> float:
    """estimator(x + t e_i) - estimator(x), via the incremental cache."""
    obj = CollectionObjective(col, h, kind)
    obj.reset(x)
    return obj.gain(i)


class CollectionObjective:
    """Estimator over a fixed collection with O(affected) marginal gains.

    Keeps per-sample part products and, for every node, the accumulated
    coefficient that multiplies (h' - h)/(1 - h) in that node's gain.
    ``gains()`` is a vector over dimensions for one-node-per-dim
    strategy kinds; generic kinds fall back to per-dimension recompute
    over the touched samples.
    """

    def __init__(self, col: SampleCollection, h: StrategyFunction, kind: EstimatorKind) -> None:
        if kind == "upper" and col.kind != "rn":
            raise ValueError("upper estimator requires a node-rooted collection")
        if kind != "upper" and col.kind != "re":
            raise ValueError(f"{kind} estimator requires an edge-rooted collection")
        self.col = col
        self.h = h
        self.kind = kind
        self.coef = col.scale / max(1, len(col))
        self.x: Optional[StrategyVector] = None
        self.hv: Optional[np.ndarray] = None

    def reset(self, x: StrategyVector) -> None:
        self.x = x
        self.hv = np.asarray(self.h.values(x), dtype=np.float64)
        col = self.col
        if col.kind == "re":
            self.B, self.O1, self.O2 = _kernels.re_part_products(
                col.nodes, col.indptr, col.split1, col.split2, self.hv
            )
        else:
            self.P = _kernels.rn_part_products(col.nodes, col.indptr, self.hv)
        self._acc = self._full_acc()

    def _full_acc(self) -> np.ndarray:
        col = self.col
        if col.kind == "rn":
            return _kernels.rn_acc_init(col.nodes, col.indptr, self.P, col.n)
        return _kernels.re_acc_init(
            col.nodes, col.indptr, col.split1, col.split2,
            self.B, self.O1, self.O2, col.n, self.kind == "fc",
        )

    def value(self) -> float:
        if len(self.col) == 0:
            return 0.0
        if self.col.kind == "rn":
            vals = 1.0 - self.P
        elif self.kind == "lower":
            vals = 1.0 - self.B
        else:
            vals = (1.0 - self.B) + self.B * (1.0 - self.O1) * (1.0 - self.O2)
        return float(self.coef * vals.sum())

    def _ratio_terms(self, h_old: np.ndarray, h_new: np.ndarray) -> np.ndarray:
        out = np.zeros_like(h_old)
        ok = 1.0 - h_old > 0.0
        out[ok] = (h_new[ok] - h_old[ok]) / (1.0 - h_old[ok])
        return out

    def gains(self) -> np.ndarray:
        """Marginal gain of one t-step on every dimension (saturated
        coordinates get -inf)."""
        assert self.x is not None
        spec = self.x.spec
        cap = self.h.step_cap(spec.t)
        steps = np.asarray(self.x.steps, dtype=np.int64)
        if self.h.one_node_per_dim:
            h_next = self.h.values_by_steps(steps + 1, spec.t)
            terms = self._ratio_terms(self.hv, h_next)
            out = self.coef * terms * self._acc
            if cap is not None:
                out = np.where(steps >= cap, -np.inf, out)
            return out
        out = np.empty(spec.d, dtype=np.float64)
        for i in range(spec.d):
            if cap is not None and self.x.steps[i] >= cap:
                out[i] = -np.inf
            else:
                out[i] = self.gain(i)
        return out

    def gain(self, i: int) -> float:
        """Exact marginal gain of one t-step on dimension i."""
        assert self.x is not None
        from .strategy import increment

        x2 = increment(self.x, i)
        affected = self.h.affected_nodes(i)
        hv2 = self.hv.copy()
        changed = []
        for u in affected:
            nu = self.h.value(u, x2)
            if nu != hv2[u]:
                hv2[u] = nu
                changed.append(u)
        if not changed:
            return 0.0
        if len(changed) == 1:
            u = changed[0]
            term = 0.0 if 1.0 - self.hv[u] <= 0.0 else (hv2[u] - self.hv[u]) / (1.0 - self.hv[u])
            return float(self.coef * term * self._acc[u])
        return self._recompute_gain(changed, hv2)

    def _recompute_gain(self, changed: list[int], hv2: np.ndarray) -> float:
        col = self.col
        touched = set()
        for u in changed:
            sids, _ = col.entries_of(u)
            touched.update(sids.tolist())
        delta = 0.0
        for sid in touched:
            delta += self._sample_val(sid, hv2) - self._sample_val(sid, self.hv)
        return float(self.coef * delta)

    def _sample_val(self, sid: int, hv: np.ndarray) -> float:
        col = self.col
        lo, hi = int(col.indptr[sid]), int(col.indptr[sid + 1])
        if col.kind == "rn":
            return 1.0 - float(np.prod(1.0 - hv[col.nodes[lo:hi]]))
        s1, s2 = int(col.split1[sid]), int(col.split2[sid])
        b = float(np.prod(1.0 - hv[col.nodes[lo:s1]]))
        if self.kind == "lower":
            return 1.0 - b
        o1 = float(np.prod(1.0 - hv[col.nodes[s1:s2]]))
        o2 = float(np.prod(1.0 - hv[col.nodes[s2:hi]]))
        return (1.0 - b) + b * (1.0 - o1) * (1.0 - o2)

    def commit(self, i: int) -> None:
        """Advance x by one t-step on dimension i, updating all caches."""
        assert self.x is not None
        from .strategy import increment

        x2 = increment(self.x, i)
        affected = self.h.affected_nodes(i)
        col = self.col
        for u in affected:
            h_new = self.h.value(u, x2)
            h_old = float(self.hv[u])
            if h_new == h_old:
                continue
            self.hv[u] = h_new
            sids, parts = col.entries_of(u)
            if col.kind == "re":
                _kernels.re_commit(
                    sids, parts, col.nodes, col.indptr, col.split1, col.split2,
                    self.B, self.O1, self.O2, self._acc, self.hv,
                    h_old, h_new, self.kind == "fc",
                )
            else:
                _kernels.rn_commit(
                    sids, col.nodes, col.indptr, self.P, self._acc, self.hv,
                    h_old, h_new,
                )
        self.x = x2


# ---------------------------------------------------------------------------
# Dump / load
# ---------------------------------------------------------------------------


def save_collection(col: SampleCollection, path: str | Path) -> None:
    """Binary dump (versioned npz of the node-id arrays)."""
    payload = {
        "format_version": np.int64(DUMP_FORMAT_VERSION),
        "kind": np.bytes_(col.kind.encode()),
        "scale": np.float64(col.scale),
        "n": np.int64(col.n),
        "nodes": col.nodes,
        "indptr": col.indptr,
    }
    if col.kind == "re":
        payload["split1"] = col.split1
        payload["split2"] = col.split2
    np.savez_compressed(path, **payload)


def load_collection(path: str | Path) -> SampleCollection:
    with np.load(path) as z:
        version = int(z["format_version"])
        if version != DUMP_FORMAT_VERSION:
            raise ValueError(f"unsupported collection dump version {version}")
        kind = bytes(z["kind"]).decode()
        col = SampleCollection(
            kind=kind,
            scale=float(z["scale"]),
            n=int(z["n"]),
            nodes=z["nodes"],
            indptr=z["indptr"],
            split1=z["split1"] if kind == "re" else None,
            split2=z["split2"] if kind == "re" else None,
        )
    return col
