"""Synthetic attributed-network generation.

Structure comes from standard benchmark models (LFR, Barabasi-Albert,
Watts-Strogatz). Content is controlled by three knobs: skew (entropy of the
cluster-size profile), purity (within-cluster standard deviation of the
continuous attributes, sigma = 1/purity) and assortativity (how strongly
cluster labels align with edges). Labels are mapped onto the network by
swapping down from a community-aligned extreme, or by probabilistic
propagation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .graph import Attribute, AttributeSchema, AttributedGraph, CONTINUOUS, DISCRETE, from_networkx


class GenerationError(RuntimeError):
    """The requested structure or content targets could not be met."""


@dataclass
class SyntheticSpec:
    structure: str = "lfr"  # lfr | ba | ws
    n: int = 1000
    mu: float = 0.1
    degree_exponent: float = 2.5
    community_exponent: float = 1.5
    avg_degree: float = 15.0
    max_degree: int = 60
    ba_m: int = 3
    ws_k: int = 4
    ws_p: float = 0.1
    k: int = 5
    skew: float = 0.0
    purity: float = 10.0
    assortativity: float = 0.0
    n_continuous: int = 2
    n_discrete: int = 1
    assignment_mode: str = "swap"  # swap | propagation
    rng_seed: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError("need n >= k >= 1")
        if not 0.0 < self.mu < 1.0:
            raise ValueError("mixing coefficient mu must lie in (0, 1)")
        if not 0.0 <= self.skew < 1.0:
            raise ValueError("skew target must lie in [0, 1)")
        if self.purity <= 0:
            raise ValueError("purity must be positive")
        if not 0.0 <= self.assortativity <= 1.0:
            raise ValueError("assortativity target must lie in [0, 1]")

    def to_json(self):
        return {f.name: getattr(self, f.name) for f in self.__dataclass_fields__.values()}

    @classmethod
    def from_json(cls, obj):
        return cls(**obj)


def _structure_nx(spec, rng):
    """Raw structure graph plus ground-truth communities (LFR only)."""
    seed = int(rng.integers(2**31 - 1))
    if spec.structure == "ba":
        return nx.barabasi_albert_graph(spec.n, spec.ba_m, seed=seed), None
    if spec.structure == "ws":
        return nx.watts_strogatz_graph(spec.n, spec.ws_k, spec.ws_p, seed=seed), None
    if spec.structure != "lfr":
        raise ValueError(f"unknown structure model {spec.structure!r}")
    last_err = None
    for attempt in range(20):
        try:
            g = nx.LFR_benchmark_graph(
                spec.n,
                spec.degree_exponent,
                spec.community_exponent,
                spec.mu,
                average_degree=spec.avg_degree,
                max_degree=spec.max_degree,
                seed=seed + attempt,
            )
            g.remove_edges_from(nx.selfloop_edges(g))
            comms = {}
            for v in g.nodes:
                key = frozenset(g.nodes[v]["community"])
                comms.setdefault(key, []).append(v)
            return g, [sorted(c) for c in comms.values()]
        except nx.ExceededMaxIterations as err:
            last_err = err
    raise GenerationError(f"LFR generation failed after 20 attempts: {last_err}")


def generate_structure(spec):
    """Connected structure graph (largest component) without attributes."""
    graph, _ = _generate_structure(spec, np.random.default_rng(spec.rng_seed))
    return graph


def _calibrate_mixing(g, comm_of, mu, rng, slack=None, max_attempts_factor=200):
    """Degree-preserving rewiring until the cross-community edge fraction sits
    within ``slack`` of ``mu``.

    The stub-matching construction systematically overshoots the nominal
    mixing (cross edges received from other communities eat into a node's
    intra quota), so the raw graph needs correction. A swap replaces two
    cross edges (a, b), (c, d) with comm(a) == comm(c) by (a, c), (b, d),
    trading at least one cross edge for an intra one; the reverse swap on two
    intra edges from different communities raises mixing when undershooting.
    """
    def norm(u, v):
        return (u, v) if u < v else (v, u)

    m = g.number_of_edges()
    if slack is None:
        slack = 1.5 / m  # one swap moves the count by 1 or 2, so this is exact
    cross = {norm(u, v) for u, v in g.edges if comm_of[u] != comm_of[v]}
    attempts = 0
    max_attempts = max_attempts_factor * m

    def pick_two(pool):
        i, j = rng.integers(len(pool), size=2)
        return pool[i], pool[j]

    while abs(len(cross) / m - mu) > slack:
        if attempts >= max_attempts:
            raise GenerationError(
                f"mixing calibration stalled at {len(cross) / m:.4f} (target {mu})"
            )
        attempts += 1
        lower = len(cross) / m > mu
        if lower:
            pool = list(cross)
        else:
            pool = [norm(u, v) for u, v in g.edges if norm(u, v) not in cross]
        (a, b), (c, d) = pick_two(pool)
        if lower:
            # orient so the new edge (a, c) is intra
            if comm_of[a] == comm_of[d]:
                c, d = d, c
            elif comm_of[b] == comm_of[c]:
                a, b = b, a
            elif comm_of[b] == comm_of[d]:
                a, b, c, d = b, a, d, c
            if comm_of[a] != comm_of[c]:
                continue
        elif comm_of[a] == comm_of[c]:
            # need endpoints from two different communities to create cross edges
            continue
        if len({a, b, c, d}) < 4 or g.has_edge(a, c) or g.has_edge(b, d):
            continue
        g.remove_edge(a, b)
        g.remove_edge(c, d)
        g.add_edge(a, c)
        g.add_edge(b, d)
        cross.discard(norm(a, b))
        cross.discard(norm(c, d))
        if comm_of[a] != comm_of[c]:
            cross.add(norm(a, c))
        if comm_of[b] != comm_of[d]:
            cross.add(norm(b, d))


def _generate_structure(spec, rng):
    g, communities = _structure_nx(spec, rng)
    if communities is not None:
        comm_of = {}
        for cid, comm in enumerate(communities):
            for v in comm:
                comm_of[v] = cid
        _calibrate_mixing(g, comm_of, spec.mu, rng)
    components = sorted(nx.connected_components(g), key=lambda c: (-len(c), min(c)))
    keep = sorted(components[0])
    g = g.subgraph(keep).copy()
    relabel = {v: i for i, v in enumerate(keep)}
    g = nx.relabel_nodes(g, relabel)
    if communities is not None:
        communities = [
            sorted(relabel[v] for v in comm if v in relabel) for comm in communities
        ]
        communities = [c for c in communities if c]
    return from_networkx(g), communities


def measured_mixing(graph, communities):
    """Fraction of edges crossing community boundaries."""
    comm_of = np.empty(graph.n, dtype=np.int64)
    for cid, comm in enumerate(communities):
        comm_of[comm] = cid
    cross = sum(1 for v, w in graph.edges() if comm_of[v] != comm_of[w])
    return cross / graph.num_edges


def skew_of_sizes(sizes):
    """1 - H(sizes) / ln k, the entropy-based cluster-size skew."""
    sizes = np.asarray(sizes, dtype=float)
    k = len(sizes)
    if k == 1:
        return 0.0
    p = sizes / sizes.sum()
    p = p[p > 0]
    h = float(-(p * np.log(p)).sum())
    return 1.0 - h / math.log(k)


def cluster_sizes(n, k, skew_target, tol=0.01):
    """Integer cluster sizes from a geometric profile size_i ~ ratio^i, with
    the ratio bisected until the achieved skew is within ``tol`` of target."""
    if k == 1:
        if skew_target > 0:
            raise GenerationError("skew > 0 requires k >= 2")
        return np.array([n], dtype=np.int64)
    if skew_target >= 1.0 or skew_target < 0.0:
        raise GenerationError("skew target must lie in [0, 1)")
    if n < k:
        raise GenerationError("need n >= k")

    def sizes_for(ratio):
        weights = ratio ** np.arange(k, dtype=float)
        weights /= weights.sum()
        raw = weights * (n - k)  # reserve one node per cluster
        sizes = np.floor(raw).astype(np.int64) + 1
        remainder = n - sizes.sum()
        order = np.argsort(-(raw - np.floor(raw)))
        for i in range(remainder):
            sizes[order[i % k]] += 1
        return np.sort(sizes)[::-1]

    lo, hi = 1.0, 2.0
    while skew_of_sizes(sizes_for(hi)) < skew_target and hi < 1e6:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if skew_of_sizes(sizes_for(mid)) < skew_target:
            lo = mid
        else:
            hi = mid
    sizes = sizes_for(0.5 * (lo + hi))
    if abs(skew_of_sizes(sizes) - skew_target) > tol:
        raise GenerationError(
            f"skew target {skew_target} unreachable (achieved {skew_of_sizes(sizes):.4f})"
        )
    return sizes


def synthesize_attributes(assignment, purity, rng, n_continuous=2, n_discrete=1):
    """Per-node attribute values driven by the cluster assignment.

    Continuous attributes are Gaussian around cluster centers placed at unit
    lattice spacing with sigma = 1/purity; the discrete attribute is the
    cluster id perturbed with flip probability 1/(1+purity).
    """
    assignment = np.asarray(assignment, dtype=np.int64)
    n = len(assignment)
    k = int(assignment.max()) + 1
    sigma = 1.0 / purity
    values = []
    attributes = []
    if n_continuous > 0:
        side = max(1, math.ceil(k ** (1.0 / n_continuous)))
        centers = np.zeros((k, n_continuous))
        for c in range(k):
            rem = c
            for d in range(n_continuous):
                centers[c, d] = rem % side
                rem //= side
        for d in range(n_continuous):
            col = centers[assignment, d] + rng.normal(0.0, sigma, size=n)
            values.append(col)
            attributes.append(
                Attribute(f"x{d}", CONTINUOUS, lo=float(col.min()), hi=float(col.max()))
            )
    flip_p = 1.0 / (1.0 + purity)
    for j in range(n_discrete):
        col = assignment.copy()
        flips = rng.random(n) < flip_p
        col[flips] = rng.integers(0, k, size=int(flips.sum()))
        values.append(col)
        attributes.append(Attribute(f"cat{j}", DISCRETE, cardinality=k,
                                    categories=tuple(str(c) for c in range(k))))
    return values, attributes


class _MixingMatrix:
    """Edge-label mixing counts with O(degree) swap updates."""

    def __init__(self, graph, labels, k):
        self.graph = graph
        self.labels = labels
        self.k = k
        self.e = np.zeros((k, k), dtype=np.int64)
        for v, w in graph.edges():
            self.e[labels[v], labels[w]] += 1
            self.e[labels[w], labels[v]] += 1

    def assortativity(self):
        e = self.e / self.e.sum()
        a = e.sum(axis=1)
        trace = np.trace(e)
        denom = 1.0 - float(a @ a)
        if denom == 0:
            return 1.0
        return (trace - float(a @ a)) / denom

    def _detach(self, v):
        lv = self.labels[v]
        for w in self.graph.neighbors(v):
            lw = self.labels[int(w)]
            self.e[lv, lw] -= 1
            self.e[lw, lv] -= 1

    def _attach(self, v):
        lv = self.labels[v]
        for w in self.graph.neighbors(v):
            lw = self.labels[int(w)]
            self.e[lv, lw] += 1
            self.e[lw, lv] += 1

    def swap(self, u, v):
        self._detach(u)
        self._detach(v)
        self.labels[u], self.labels[v] = self.labels[v], self.labels[u]
        self._attach(u)
        self._attach(v)


def _community_aligned_labels(graph, sizes, communities):
    """Extreme-high assortativity start: pack whole communities into label
    blocks (best-fit decreasing), splitting only the leftovers, so as few
    communities as possible straddle a block boundary."""
    k = len(sizes)
    remaining = [int(s) for s in sizes]
    labels = np.full(graph.n, -1, dtype=np.int64)
    leftovers = []
    for comm in sorted(communities, key=len, reverse=True):
        fits = [(remaining[b], b) for b in range(k) if remaining[b] >= len(comm)]
        if fits:
            _, b = min(fits)
            labels[comm] = b
            remaining[b] -= len(comm)
        else:
            leftovers.append(comm)
    for comm in leftovers:
        nodes = list(comm)
        for b in sorted(range(k), key=lambda b: -remaining[b]):
            take = min(remaining[b], len(nodes))
            if take:
                labels[nodes[:take]] = b
                remaining[b] -= take
                nodes = nodes[take:]
            if not nodes:
                break
    return labels


def assign_with_assortativity(graph, sizes, target, rng, mode="swap",
                              communities=None, tol=0.05):
    """Map cluster labels (with the given block sizes) onto graph nodes so the
    measured categorical assortativity lands within ``tol`` of ``target``.

    SWAP starts from a community-aligned extreme and randomly swaps label
    pairs, which drives assortativity toward zero, stopping once the target
    band is reached. PROPAGATION seeds random labels and adopts neighbor
    labels node by node (re-seeding randomly when above target) until the
    measured value enters the band; it does not preserve block sizes exactly.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    if sizes.sum() != graph.n:
        raise ValueError("cluster sizes must sum to the node count")
    k = len(sizes)
    if mode == "propagation":
        return _assign_propagation(graph, sizes, target, rng, tol)
    if mode != "swap":
        raise ValueError(f"unknown assignment mode {mode!r}")
    if communities is None:
        communities = [sorted(c) for c in
                       nx.community.label_propagation_communities(_to_nx(graph))]
    labels = _community_aligned_labels(graph, sizes, communities)
    mix = _MixingMatrix(graph, labels, k)
    achieved = mix.assortativity()
    # the block packing splits communities at block boundaries; hill-climb
    # swaps recover most of that loss when the start lands below the band
    attempts = no_gain = 0
    while achieved < target - tol and attempts < 20 * graph.n and no_gain < 3000:
        attempts += 1
        no_gain += 1
        u = int(rng.integers(graph.n))
        v = int(rng.integers(graph.n))
        if labels[u] == labels[v]:
            continue
        mix.swap(u, v)
        improved = mix.assortativity()
        if improved > achieved:
            achieved = improved
            no_gain = 0
        else:
            mix.swap(u, v)
    max_swaps = 50 * graph.num_edges
    swaps = 0
    while achieved > target + tol:
        if swaps >= max_swaps:
            raise GenerationError(
                f"assortativity target {target} not reached after {swaps} swaps "
                f"(achieved {achieved:.4f})"
            )
        u = int(rng.integers(graph.n))
        v = int(rng.integers(graph.n))
        if labels[u] == labels[v]:
            continue
        mix.swap(u, v)
        swaps += 1
        achieved = mix.assortativity()
    return labels, achieved


def _assign_propagation(graph, sizes, target, rng, tol, max_steps=None):
    k = len(sizes)
    p_label = sizes / sizes.sum()
    labels = rng.choice(k, size=graph.n, p=p_label)
    mix = _MixingMatrix(graph, labels, k)
    achieved = mix.assortativity()
    if max_steps is None:
        max_steps = 500 * graph.n
    for _ in range(max_steps):
        if abs(achieved - target) <= tol:
            return labels, achieved
        v = int(rng.integers(graph.n))
        if achieved < target:
            nbrs = graph.neighbors(v)
            new = int(labels[int(nbrs[rng.integers(len(nbrs))])])
        else:
            new = int(rng.choice(k, p=p_label))
        if new != labels[v]:
            mix._detach(v)
            labels[v] = new
            mix._attach(v)
            achieved = mix.assortativity()
    raise GenerationError(
        f"propagation did not reach assortativity {target} (achieved {achieved:.4f})"
    )


def _to_nx(graph):
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges())
    return g


GROUND_TRUTH_ATTRIBUTE = "cluster"


def generate(spec):
    """Full pipeline: structure, cluster sizes, label placement, attributes.

    Returns (graph, report); the graph carries the synthesized attributes plus
    a ground-truth cluster-id attribute named ``cluster``, and the report holds
    the achieved skew / assortativity / mixing values.
    """
    rng = np.random.default_rng(spec.rng_seed)
    structure, communities = _generate_structure(spec, rng)
    sizes = cluster_sizes(structure.n, spec.k, spec.skew)
    labels, achieved_a = assign_with_assortativity(
        structure, sizes, spec.assortativity, rng,
        mode=spec.assignment_mode, communities=communities,
    )
    values, attributes = synthesize_attributes(
        labels, spec.purity, rng, spec.n_continuous, spec.n_discrete
    )
    values.append(labels)
    attributes.append(Attribute(GROUND_TRUTH_ATTRIBUTE, DISCRETE, cardinality=spec.k,
                                categories=tuple(str(c) for c in range(spec.k))))
    graph = AttributedGraph(
        [structure.neighbors(v) for v in range(structure.n)],
        AttributeSchema(tuple(attributes)),
        values,
        structure.labels,
    )
    report = {
        "n": graph.n,
        "edges": graph.num_edges,
        "cluster_sizes": sizes.tolist(),
        "achieved_skew": skew_of_sizes(np.bincount(labels, minlength=spec.k)),
        "achieved_assortativity": float(achieved_a),
        "measured_mu": measured_mixing(structure, communities) if communities else None,
    }
    return graph, report
