"""Evaluation measures: distribution distances, coverage, structural
distributions, joint network-content measures, and task scores.

Categorical KS uses the canonical ascending category-id order on both sides;
the ego-relation is normalized by the actual pair count C(d_v + 1, 2) over
the closed neighborhood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.metrics import f1_score, normalized_mutual_info_score, silhouette_score

from .graph import CONTINUOUS, DISCRETE, MISSING_DISCRETE
from .surprise import BinningRule, categorize, support_size


@dataclass(frozen=True)
class MetricValue:
    name: str
    value: float
    direction: str = "lower-better"  # or "higher-better"


def ks_statistic(sample_probs, reference_probs):
    """Max absolute CDF difference between two aligned distributions."""
    p = np.asarray(sample_probs, dtype=float)
    q = np.asarray(reference_probs, dtype=float)
    if p.size == 0 or q.size == 0 or p.sum() <= 0 or q.sum() <= 0:
        raise ValueError("empty distribution")
    if p.shape != q.shape:
        raise ValueError("supports must be aligned")
    return float(np.abs(np.cumsum(p / p.sum()) - np.cumsum(q / q.sum())).max())


def two_sample_ks(x, y):
    """Two-sample KS statistic on raw value samples (pooled support)."""
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    if x.size == 0 or y.size == 0:
        raise ValueError("empty sample")
    support = np.concatenate([x, y])
    cdf_x = np.searchsorted(x, support, side="right") / x.size
    cdf_y = np.searchsorted(y, support, side="right") / y.size
    return float(np.abs(cdf_x - cdf_y).max())


def attribute_distribution(values, attribute, binning=None):
    """Probability vector of an attribute over its canonical support."""
    values = np.asarray(values)
    if attribute.kind == DISCRETE:
        values = values[values != MISSING_DISCRETE]
    else:
        values = values[~np.isnan(values)]
    if values.size == 0:
        raise ValueError("no defined attribute values")
    cats = categorize(values, attribute, binning)
    counts = np.bincount(cats, minlength=support_size(attribute, binning))
    return counts / counts.sum()


def coverage(sample_values, attribute, binning=None):
    """Unique attribute values (or occupied bins) in the sample over the
    attribute cardinality (or bin count)."""
    values = np.asarray(sample_values)
    if attribute.kind == DISCRETE:
        values = values[values != MISSING_DISCRETE]
    else:
        values = values[~np.isnan(values)]
    if values.size == 0:
        return 0.0
    cats = categorize(values, attribute, binning)
    return len(np.unique(cats)) / support_size(attribute, binning)


def categorical_assortativity(graph, labels, k):
    """Newman's assortativity coefficient for a discrete labeling."""
    labels = np.asarray(labels, dtype=np.int64)
    e = np.zeros((k, k), dtype=float)
    for v, w in graph.edges():
        lv, lw = labels[v], labels[w]
        if lv < 0 or lw < 0:
            continue  # missing endpoint
        e[lv, lw] += 1
        e[lw, lv] += 1
    total = e.sum()
    if total == 0:
        raise ValueError("no edges with labeled endpoints")
    e /= total
    a = e.sum(axis=1)
    denom = 1.0 - float(a @ a)
    if denom == 0:
        return 1.0
    return (np.trace(e) - float(a @ a)) / denom


def numeric_assortativity(graph, values):
    """Pearson correlation of a numeric attribute across edge endpoints
    (both orientations)."""
    values = np.asarray(values, dtype=float)
    xs, ys = [], []
    for v, w in graph.edges():
        if math.isnan(values[v]) or math.isnan(values[w]):
            continue
        xs.extend((values[v], values[w]))
        ys.extend((values[w], values[v]))
    if not xs:
        raise ValueError("no edges with defined endpoints")
    x = np.array(xs)
    y = np.array(ys)
    sx = x.std()
    sy = y.std()
    if sx == 0 or sy == 0:
        return 0.0
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))


def assortativity(graph, attr):
    """Attribute assortativity in [-1, 1]; Newman categorical for discrete
    attributes, Pearson-on-edges for continuous."""
    if isinstance(attr, str):
        attr = graph.schema.index(attr)
    attribute = graph.schema[attr]
    values = graph.values[attr]
    if attribute.kind == DISCRETE:
        return categorical_assortativity(graph, values, attribute.cardinality)
    return numeric_assortativity(graph, values)


def star_relation(graph, v, attr):
    """Fraction of v's neighbors sharing v's attribute value."""
    if isinstance(attr, str):
        attr = graph.schema.index(attr)
    values = graph.values[attr]
    nbrs = graph.neighbors(v)
    if len(nbrs) == 0:
        raise ValueError(f"node {v} has no neighbors")
    return float(np.sum(values[nbrs] == values[v]) / len(nbrs))


def ego_relation(graph, v, attr):
    """Fraction of same-valued node pairs in the closed neighborhood of v,
    normalized by the pair count C(d_v + 1, 2)."""
    if isinstance(attr, str):
        attr = graph.schema.index(attr)
    values = graph.values[attr]
    members = np.concatenate([[v], graph.neighbors(v)])
    m = len(members)
    if m < 2:
        raise ValueError(f"node {v} has no neighbors")
    vals = values[members]
    same = 0
    for i in range(m):
        same += int(np.sum(vals[i + 1:] == vals[i]))
    return same / (m * (m - 1) / 2)


def degree_values(graph):
    return graph.degrees.astype(float)


def clustering_coefficients(graph):
    """Local clustering coefficient per node; degree <= 1 contributes 0."""
    out = np.zeros(graph.n)
    neighbor_sets = [set(graph.neighbors(v).tolist()) for v in range(graph.n)]
    for v in range(graph.n):
        d = graph.degree(v)
        if d <= 1:
            continue
        e_v = 0
        nbrs = graph.neighbors(v)
        for i, u in enumerate(nbrs):
            su = neighbor_sets[int(u)]
            for w in nbrs[i + 1:]:
                if int(w) in su:
                    e_v += 1
        out[v] = 2.0 * e_v / (d * (d - 1))
    return out


def path_length_values(graph, rng, max_sources=1000):
    """Pooled BFS distances from up to ``max_sources`` random sources
    (all-pairs when the graph is small)."""
    if graph.n <= max_sources:
        sources = np.arange(graph.n)
    else:
        sources = rng.choice(graph.n, size=max_sources, replace=False)
    pooled = []
    for s in sources:
        dist = np.full(graph.n, -1, dtype=np.int64)
        dist[s] = 0
        queue = [int(s)]
        while queue:
            nxt = []
            for v in queue:
                for w in graph.neighbors(v):
                    w = int(w)
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            queue = nxt
        pooled.append(dist[dist > 0])
    return np.concatenate(pooled).astype(float)


def nmi(labels_a, labels_b):
    """Normalized mutual information between two partitions, in [0, 1]."""
    return float(normalized_mutual_info_score(labels_a, labels_b))


def silhouette(points, labels):
    """Mean silhouette coefficient; raises on a single cluster."""
    return float(silhouette_score(np.asarray(points, dtype=float), np.asarray(labels)))


def weighted_f1(y_true, y_pred):
    return float(f1_score(y_true, y_pred, average="weighted", zero_division=0))


def r_squared(y_true, y_pred):
    """Coefficient of determination; 0 by convention for a constant truth."""
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    ss_tot = float(((y_true - y_true.mean()) ** 2).sum())
    if ss_tot == 0:
        return 0.0
    ss_res = float(((y_true - y_pred) ** 2).sum())
    return 1.0 - ss_res / ss_tot


def mean_performance(series):
    """Mean of per-size expected values (area under the size curve)."""
    series = np.asarray(list(series), dtype=float)
    if series.size == 0:
        raise ValueError("empty series")
    return float(series.mean())
