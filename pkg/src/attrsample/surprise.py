"""Empirical attribute distributions and the information-theoretic surprise
score.

Surprise of a candidate node set is the mean negative log likelihood of its
attribute values under the sample's empirical distribution. A candidate value
never seen in the sample makes the score diverge; divergent scores carry the
number of distinct unseen values so a total order exists for argmax. Zeros in
the sample distribution are deliberately not smoothed: they are what triggers
the preference for unseen values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import CONTINUOUS, DISCRETE


@dataclass(frozen=True)
class BinningRule:
    """Discretization rule for continuous attributes (default: 10 log bins)."""

    kind: str = "log"  # "log" or "linear"
    n_bins: int = 10
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if self.kind not in ("log", "linear"):
            raise ValueError(f"unknown binning kind {self.kind!r}")
        if self.n_bins < 1:
            raise ValueError("bin count must be >= 1")

    def edges(self):
        lo, hi = self.lo, self.hi
        if hi <= lo:
            hi = lo + 1.0
        if self.kind == "linear":
            return np.linspace(lo, hi, self.n_bins + 1)
        shift = 1.0 - lo if lo <= 0 else 0.0
        return np.exp(np.linspace(math.log(lo + shift), math.log(hi + shift), self.n_bins + 1)) - shift

    def bin_indices(self, values):
        """Bin ids in [0, n_bins); out-of-range values clip to the end bins."""
        edges = self.edges()
        idx = np.searchsorted(edges, np.asarray(values, dtype=float), side="right") - 1
        return np.clip(idx, 0, self.n_bins - 1).astype(np.int64)


@dataclass
class EmpiricalDistribution:
    """Counts per category (or bin) id with lazily normalized probabilities."""

    counts: np.ndarray
    total: float = None

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=float)
        if (self.counts < 0).any():
            raise ValueError("negative counts")
        if self.total is None:
            self.total = float(self.counts.sum())

    @property
    def probabilities(self):
        if self.total <= 0:
            raise ValueError("empty distribution")
        return self.counts / self.total

    def __len__(self):
        return len(self.counts)


@dataclass(frozen=True)
class SurpriseScore:
    """Extended nonnegative score; unseen_count >= 1 iff the score is +inf."""

    value: float
    unseen_count: int = 0

    def __post_init__(self):
        if (self.unseen_count >= 1) != math.isinf(self.value):
            raise ValueError("unseen_count >= 1 must coincide with a divergent value")

    @property
    def divergent(self):
        return math.isinf(self.value)

    def rank_key(self):
        """Sort key: finite scores by value, then divergent by unseen count."""
        if self.divergent:
            return (1, self.unseen_count, 0.0)
        return (0, 0, self.value)

    def __add__(self, other):
        if self.divergent or other.divergent:
            return SurpriseScore(math.inf, self.unseen_count + other.unseen_count)
        return SurpriseScore(self.value + other.value)


ZERO_SURPRISE = SurpriseScore(0.0)


def categorize(values, attribute, binning=None):
    """Map raw attribute values to dense category/bin ids."""
    if attribute.kind == DISCRETE:
        return np.asarray(values, dtype=np.int64)
    rule = binning or BinningRule(lo=attribute.lo, hi=attribute.hi)
    return rule.bin_indices(values)


def support_size(attribute, binning=None):
    if attribute.kind == DISCRETE:
        return attribute.cardinality
    return (binning or BinningRule(lo=attribute.lo, hi=attribute.hi)).n_bins


def empirical_distribution(state, attribute_id):
    """Empirical counts of one attribute over the current sample."""
    if len(state.sample) == 0:
        raise ValueError("empty sample")
    return EmpiricalDistribution(state.sample_counts[attribute_id].copy())


def surprise(candidate_counts, dist):
    """Surprise of a candidate set given its per-category counts.

    Finite value is -sum_i p_cand(i) ln p_S(i); any candidate category with
    zero sample probability makes the score diverge, carrying the number of
    distinct unseen categories.
    """
    cand = np.asarray(candidate_counts, dtype=float)
    total = cand.sum()
    if total <= 0:
        raise ValueError("empty candidate set")
    p_s = dist.probabilities
    present = cand > 0
    unseen = present & (p_s == 0)
    n_unseen = int(unseen.sum())
    if n_unseen:
        return SurpriseScore(math.inf, n_unseen)
    seen = present
    value = float(-(cand[seen] / total) @ np.log(p_s[seen]))
    return SurpriseScore(max(0.0, value))


def multi_attribute_surprise(candidate_counts_per_attr, dists):
    """Sum of per-attribute surprise scores; divergence is absorbing and
    unseen counts add across attributes."""
    score = ZERO_SURPRISE
    for counts, dist in zip(candidate_counts_per_attr, dists):
        score = score + surprise(counts, dist)
    return score


def hansen_hurwitz_estimate(category_ids, degrees, n_categories):
    """Degree-reweighted category distribution from a random-walk multiset.

    Each visit of a node with degree d contributes weight 1/d, correcting the
    walk's degree bias. Continuous attributes pass through their binning rule
    before this call, yielding a reweighted bin histogram.
    """
    cats = np.asarray(category_ids, dtype=np.int64)
    degs = np.asarray(degrees, dtype=float)
    if cats.size == 0:
        raise ValueError("empty input")
    if (degs < 1).any():
        raise ValueError("degrees must be >= 1")
    weights = 1.0 / degs
    counts = np.bincount(cats, weights=weights, minlength=n_categories)
    return EmpiricalDistribution(counts, float(weights.sum()))
