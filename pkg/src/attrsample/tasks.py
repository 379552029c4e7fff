"""Downstream task pipelines over a sample: data characterization, content
clustering, and classification.

Preprocessing statistics (means, variances, one-hot vocabularies, binning)
always come from the sampled nodes only, never from the evaluation nodes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import CONTINUOUS, DISCRETE
from .metrics import (
    assortativity,
    attribute_distribution,
    clustering_coefficients,
    coverage,
    degree_values,
    ks_statistic,
    nmi,
    path_length_values,
    r_squared,
    silhouette,
    two_sample_ks,
    weighted_f1,
)
from .surprise import categorize, hansen_hurwitz_estimate, support_size


@dataclass
class TaskSpec:
    task: str = "characterize"  # characterize | cluster | classify
    target: str = None  # classify: target attribute; cluster: ground-truth attribute
    features: list = None  # classify: feature attributes (default: all but target)
    k: int = 2  # cluster count
    knn_k: int = 5
    mode: str = None  # cluster: nmi | combo_coverage | silhouette (None = auto)

    def __post_init__(self):
        if self.task not in ("characterize", "cluster", "classify"):
            raise ValueError(f"unknown task {self.task!r}")
        if self.k < 1:
            raise ValueError("cluster count k must be >= 1")
        if self.features and self.target in self.features:
            raise ValueError("classification target must not be a feature")

    def to_json(self):
        return {f.name: getattr(self, f.name) for f in self.__dataclass_fields__.values()}

    @classmethod
    def from_json(cls, obj):
        return cls(**obj)


# ---------------------------------------------------------------------------
# k-means (Lloyd iterations, k-means++ seeding, best of 10 restarts)
# ---------------------------------------------------------------------------


def _kmeanspp_seed(points, k, rng):
    n = len(points)
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[int(rng.integers(n))]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            centers[j] = points[int(rng.integers(n))]
            continue
        probs = d2 / total
        centers[j] = points[int(rng.choice(n, p=probs))]
        d2 = np.minimum(d2, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def _lloyd(points, centers, max_iter=100):
    k = len(centers)
    labels = None
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        if labels is not None and (new_labels == labels).all():
            break
        labels = new_labels
        for j in range(k):
            members = points[labels == j]
            if len(members):
                centers[j] = members.mean(axis=0)
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    sse = float(d2[np.arange(len(points)), labels].sum())
    return labels, centers, sse


def kmeans_fit(points, k, rng, restarts=10, max_iter=100):
    """Lloyd's k-means; returns (labels, centers) of the best-SSE restart."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if len(points) < k:
        raise ValueError(f"fewer points ({len(points)}) than clusters ({k})")
    best = None
    for _ in range(restarts):
        centers = _kmeanspp_seed(points, k, rng)
        labels, centers, sse = _lloyd(points, centers, max_iter)
        if best is None or sse < best[2]:
            best = (labels, centers, sse)
    return best[0], best[1]


def kmeans(points, k, rng=None):
    rng = rng if rng is not None else np.random.default_rng(0)
    labels, _ = kmeans_fit(points, k, rng)
    return labels


# ---------------------------------------------------------------------------
# characterization
# ---------------------------------------------------------------------------


def graph_statistics(graph, rng=None, binning=None):
    """Reference statistics of the full graph, computed once and shared
    across characterization calls."""
    rng = rng if rng is not None else np.random.default_rng(0)
    stats = {
        "attr_dists": [
            attribute_distribution(graph.values[a], graph.schema[a],
                                   (binning or {}).get(a))
            for a in range(len(graph.schema))
        ],
        "degrees": degree_values(graph),
        "clustering": clustering_coefficients(graph),
        "paths": path_length_values(graph, rng),
        "assortativity": [],
    }
    for a in range(len(graph.schema)):
        try:
            stats["assortativity"].append(assortativity(graph, a))
        except ValueError:
            stats["assortativity"].append(None)
    return stats


def characterize(graph, sample, full_stats=None, rng=None, binning=None):
    """Per-attribute KS (averaged), mean coverage, structural KS values, and
    the mean absolute assortativity difference.

    Random-walk samples (kind "rw") report attribute KS on the Hansen-Hurwitz
    degree-reweighted estimate; all others on the raw empirical distribution.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if full_stats is None:
        full_stats = graph_statistics(graph, rng, binning)
    nodes = np.asarray(sample.nodes, dtype=np.int64)
    result = {}

    ks_vals, cov_vals = [], []
    use_hh = sample.kind == "rw" and sample.visits
    for a, attr in enumerate(graph.schema):
        rule = (binning or {}).get(a) if binning else None
        if use_hh:
            visits = np.asarray(sample.visits, dtype=np.int64)
            cats = categorize(graph.values[a][visits], attr, rule)
            est = hansen_hurwitz_estimate(cats, graph.degrees[visits],
                                          support_size(attr, rule))
            sample_dist = est.probabilities
        else:
            sample_dist = attribute_distribution(graph.values[a][nodes], attr, rule)
        ks_vals.append(ks_statistic(sample_dist, full_stats["attr_dists"][a]))
        cov_vals.append(coverage(graph.values[a][nodes], attr, rule))
    if ks_vals:
        result["attribute_ks"] = float(np.mean(ks_vals))
        result["coverage"] = float(np.mean(cov_vals))

    sub = sample.induced_subgraph(graph)
    result["degree_ks"] = two_sample_ks(degree_values(sub), full_stats["degrees"])
    result["clustering_ks"] = two_sample_ks(clustering_coefficients(sub),
                                            full_stats["clustering"])
    try:
        result["path_ks"] = two_sample_ks(path_length_values(sub, rng),
                                          full_stats["paths"])
    except ValueError:
        pass  # no connected pairs in the induced subgraph

    diffs = []
    for a in range(len(graph.schema)):
        ref = full_stats["assortativity"][a]
        if ref is None:
            continue
        try:
            diffs.append(abs(assortativity(sub, a) - ref))
        except ValueError:
            continue
    if diffs:
        result["assortativity_diff"] = float(np.mean(diffs))
    return result


# ---------------------------------------------------------------------------
# clustering
# ---------------------------------------------------------------------------


def _zscore(X, mu=None, sd=None):
    mu = X.mean(axis=0) if mu is None else mu
    sd = X.std(axis=0) if sd is None else sd
    sd = np.where(sd == 0, 1.0, sd)
    return (X - mu) / sd, mu, sd


def cluster_task(graph, sample, spec, rng=None):
    """Clustering quality of the sampled content.

    Modes: "nmi" (k-means against a ground-truth attribute, synthetic data),
    "combo_coverage" (unique discrete attribute combinations found), or
    "silhouette" (compactness of k-means clusters on continuous attributes).
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    nodes = np.asarray(sample.nodes, dtype=np.int64)
    mode = spec.mode
    if mode is None:
        if spec.target is not None:
            mode = "nmi"
        elif graph.schema.discrete_ids:
            mode = "combo_coverage"
        else:
            mode = "silhouette"

    if mode == "nmi":
        truth_id = graph.schema.index(spec.target)
        cont = [a for a in graph.schema.continuous_ids if a != truth_id]
        if not cont:
            return {"nmi": None}
        X = np.column_stack([graph.values[a][nodes] for a in cont]).astype(float)
        Z, _, _ = _zscore(X)
        k = min(spec.k, len(nodes))
        labels = kmeans(Z, k, rng)
        return {"nmi": nmi(graph.values[truth_id][nodes], labels)}

    if mode == "combo_coverage":
        disc = [a for a in graph.schema.discrete_ids if graph.schema[a].name != spec.target]
        if not disc:
            return {"cluster_coverage": None}
        full = {tuple(graph.values[a][v] for a in disc) for v in range(graph.n)}
        seen = {tuple(graph.values[a][v] for a in disc) for v in nodes}
        return {"cluster_coverage": len(seen) / len(full)}

    if mode == "silhouette":
        cont = graph.schema.continuous_ids
        if not cont or len(nodes) <= spec.k:
            return {"silhouette": None}
        X = np.column_stack([graph.values[a][nodes] for a in cont]).astype(float)
        Z, _, _ = _zscore(X)
        labels = kmeans(Z, spec.k, rng)
        if len(np.unique(labels)) < 2:
            return {"silhouette": None}
        return {"silhouette": silhouette(Z, labels)}

    raise ValueError(f"unknown cluster mode {mode!r}")


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


class FeatureEncoder:
    """One-hot + z-score feature map whose statistics come from the training
    nodes only; unseen categories map to an all-zeros one-hot block."""

    def __init__(self, graph, feature_ids):
        self.graph = graph
        self.feature_ids = list(feature_ids)
        self.vocab = {}
        self.mu = None
        self.sd = None

    def fit(self, nodes):
        cont = [a for a in self.feature_ids if self.graph.schema[a].kind == CONTINUOUS]
        if cont:
            X = np.column_stack([self.graph.values[a][nodes] for a in cont]).astype(float)
            _, self.mu, self.sd = _zscore(X)
        for a in self.feature_ids:
            if self.graph.schema[a].kind == DISCRETE:
                self.vocab[a] = {c: i for i, c in
                                 enumerate(sorted(set(self.graph.values[a][nodes].tolist())))}
        return self

    def transform(self, nodes):
        blocks = []
        cont_i = 0
        for a in self.feature_ids:
            vals = self.graph.values[a][nodes]
            if self.graph.schema[a].kind == CONTINUOUS:
                col = (vals.astype(float) - self.mu[cont_i]) / self.sd[cont_i]
                blocks.append(col[:, None])
                cont_i += 1
            else:
                vocab = self.vocab[a]
                onehot = np.zeros((len(nodes), len(vocab)))
                for row, val in enumerate(vals):
                    idx = vocab.get(int(val))
                    if idx is not None:
                        onehot[row, idx] = 1.0
                blocks.append(onehot)
        return np.hstack(blocks)


def knn_predict(X_train, y_train, X_test, k=5, classify=True):
    """Plain Euclidean k-nearest-neighbor prediction; vote ties break toward
    the smallest label."""
    k = min(k, len(X_train))
    d2 = ((X_test[:, None, :] - X_train[None, :, :]) ** 2).sum(axis=2)
    idx = np.argpartition(d2, k - 1, axis=1)[:, :k] if k < len(X_train) else \
        np.tile(np.arange(len(X_train)), (len(X_test), 1))
    if not classify:
        return y_train[idx].mean(axis=1)
    preds = np.empty(len(X_test), dtype=y_train.dtype)
    for i in range(len(X_test)):
        votes = y_train[idx[i]]
        labels, counts = np.unique(votes, return_counts=True)
        preds[i] = labels[np.argmax(counts)]
    return preds


def classify_task(graph, sample, spec, rng=None):
    """Train kNN on the sampled nodes, evaluate on all non-sampled nodes.

    Discrete targets report weighted F1, continuous targets report the kNN
    regression R^2.
    """
    if spec.target is None:
        raise ValueError("classification requires a target attribute")
    target_id = graph.schema.index(spec.target)
    target_attr = graph.schema[target_id]
    if spec.features is not None:
        feature_ids = [graph.schema.index(f) for f in spec.features]
    else:
        feature_ids = [a for a in range(len(graph.schema)) if a != target_id]
    if target_id in feature_ids:
        raise ValueError("target attribute must not be a feature")

    nodes = np.asarray(sample.nodes, dtype=np.int64)
    mask = np.zeros(graph.n, dtype=bool)
    mask[nodes] = True
    test_nodes = np.flatnonzero(~mask)
    if len(test_nodes) == 0:
        raise ValueError("no evaluation nodes left outside the sample")

    encoder = FeatureEncoder(graph, feature_ids).fit(nodes)
    X_train = encoder.transform(nodes)
    X_test = encoder.transform(test_nodes)
    y_train = graph.values[target_id][nodes]
    y_test = graph.values[target_id][test_nodes]

    if target_attr.kind == DISCRETE:
        if len(np.unique(y_train)) < 2:
            warnings.warn("single-class training sample; classifier is degenerate")
        preds = knn_predict(X_train, y_train, X_test, spec.knn_k, classify=True)
        return {"weighted_f1": weighted_f1(y_test, preds)}
    if len(nodes) < 5:
        raise ValueError("continuous targets need at least 5 training points")
    preds = knn_predict(X_train, y_train.astype(float), X_test, spec.knn_k, classify=False)
    return {"r_squared": r_squared(y_test, preds)}


def run_task(graph, sample, spec, full_stats=None, rng=None, binning=None):
    """Dispatch a TaskSpec to its pipeline; returns {metric name: value}."""
    if spec.task == "characterize":
        return characterize(graph, sample, full_stats, rng, binning)
    if spec.task == "cluster":
        return cluster_task(graph, sample, spec, rng)
    return classify_task(graph, sample, spec, rng)
