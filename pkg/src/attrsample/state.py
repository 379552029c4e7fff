"""Evolving sample state with incremental frontier and candidate bookkeeping.

The state tracks the ordered sample S, the frontier N(S) (non-sample nodes
with a sampled neighbor), per-attribute empirical counts over S, and for each
frontier node v the per-category counts of its candidate set v u delta(v).

Two candidate-set rules exist: the default "excl_sample" takes
delta(v) = N(v) \\ S and is maintained incrementally; the alternative
"excl_sample_and_frontier" takes delta(v) = N(v) \\ (S u N(S)) and is
recomputed lazily at selection time because it changes whenever the frontier
changes.
"""

from __future__ import annotations

import numpy as np

from .graph import CONTINUOUS, DISCRETE, MISSING_DISCRETE
from .surprise import BinningRule, EmpiricalDistribution, categorize, support_size

EXCL_SAMPLE = "excl_sample"
EXCL_SAMPLE_AND_FRONTIER = "excl_sample_and_frontier"


class ContractViolation(RuntimeError):
    """A sampler or caller broke a SampleState precondition."""


class SampleState:
    def __init__(self, graph, delta_rule=EXCL_SAMPLE, binning=None):
        if delta_rule not in (EXCL_SAMPLE, EXCL_SAMPLE_AND_FRONTIER):
            raise ValueError(f"unknown delta rule {delta_rule!r}")
        self.graph = graph
        self.delta_rule = delta_rule
        n = graph.n
        self.cat = []
        self.n_cats = []
        for i, attr in enumerate(graph.schema):
            vals = graph.values[i]
            if attr.kind == DISCRETE and (vals == MISSING_DISCRETE).any():
                raise ValueError(f"attribute {attr.name!r} has missing values; drop them before sampling")
            if attr.kind == CONTINUOUS and np.isnan(vals).any():
                raise ValueError(f"attribute {attr.name!r} has missing values; drop them before sampling")
            rule = (binning or {}).get(i) if binning else None
            self.cat.append(categorize(vals, attr, rule))
            self.n_cats.append(support_size(attr, rule))
        self.sample = []
        self.in_sample = np.zeros(n, dtype=bool)
        self.in_frontier = np.zeros(n, dtype=bool)
        self.sample_counts = [np.zeros(r, dtype=np.int64) for r in self.n_cats]
        self._cand_counts = [np.zeros((n, r), dtype=np.int64) for r in self.n_cats]
        self._cand_size = np.zeros(n, dtype=np.int64)
        self.step = 0

    # -- growth --------------------------------------------------------------

    def extend(self, node):
        """Add one node to the sample (the first addition seeds the trace)."""
        node = int(node)
        if self.in_sample[node]:
            raise ContractViolation(f"node {node} already sampled")
        if self.sample and not self.in_frontier[node]:
            raise ContractViolation(f"node {node} is not in the frontier")
        self.in_sample[node] = True
        self.in_frontier[node] = False
        self.sample.append(node)
        self.step += 1
        for a in range(len(self.cat)):
            self.sample_counts[a][self.cat[a][node]] += 1
        for w in self.graph.neighbors(node):
            w = int(w)
            if self.in_sample[w]:
                continue
            if self.in_frontier[w]:
                # node leaves delta(w)
                for a in range(len(self.cat)):
                    self._cand_counts[a][w, self.cat[a][node]] -= 1
                self._cand_size[w] -= 1
            else:
                self.in_frontier[w] = True
                self._init_candidate_row(w)

    def _init_candidate_row(self, v):
        members = self._candidate_members_default(v)
        self._cand_size[v] = len(members)
        for a in range(len(self.cat)):
            row = np.bincount(self.cat[a][members], minlength=self.n_cats[a])
            self._cand_counts[a][v] = row

    # -- queries ---------------------------------------------------------------

    def frontier_ids(self):
        """Frontier node ids in ascending order."""
        return np.flatnonzero(self.in_frontier)

    def _candidate_members_default(self, v):
        nbrs = self.graph.neighbors(v)
        members = [v] + [int(w) for w in nbrs if not self.in_sample[w]]
        return np.array(members, dtype=np.int64)

    def candidate_members(self, v):
        """Nodes of the candidate set v u delta(v) under the configured rule."""
        if self.delta_rule == EXCL_SAMPLE:
            return self._candidate_members_default(v)
        nbrs = self.graph.neighbors(v)
        members = [v] + [
            int(w) for w in nbrs if not self.in_sample[w] and not self.in_frontier[w]
        ]
        return np.array(members, dtype=np.int64)

    def candidate_matrix(self, attribute_ids):
        """Per-frontier-node candidate category counts.

        Returns (frontier_ids, [counts matrix per requested attribute],
        candidate sizes), rows aligned with frontier_ids.
        """
        ids = self.frontier_ids()
        if self.delta_rule == EXCL_SAMPLE:
            mats = [self._cand_counts[a][ids] for a in attribute_ids]
            return ids, mats, self._cand_size[ids]
        mats = [np.zeros((len(ids), self.n_cats[a]), dtype=np.int64) for a in attribute_ids]
        sizes = np.zeros(len(ids), dtype=np.int64)
        for row, v in enumerate(ids):
            members = self.candidate_members(int(v))
            sizes[row] = len(members)
            for j, a in enumerate(attribute_ids):
                mats[j][row] = np.bincount(self.cat[a][members], minlength=self.n_cats[a])
        return ids, mats, sizes

    def expansion_counts(self):
        """|N(v) \\ (S u N(S))| for each frontier node (greedy expansion)."""
        ids = self.frontier_ids()
        counts = np.zeros(len(ids), dtype=np.int64)
        for row, v in enumerate(ids):
            for w in self.graph.neighbors(int(v)):
                if not self.in_sample[w] and not self.in_frontier[w]:
                    counts[row] += 1
        return ids, counts

    def sample_distribution(self, attribute_id):
        if not self.sample:
            raise ValueError("empty sample")
        return EmpiricalDistribution(self.sample_counts[attribute_id].copy())

    # -- vectorized scoring, used by the surprise-driven samplers -------------

    def surprise_scores(self, attribute_ids):
        """Surprise of every frontier candidate set over the given attributes.

        Returns (frontier_ids, finite values, unseen counts); a candidate with
        unseen_count > 0 has a divergent (+inf) score and its finite entry is
        meaningless.
        """
        ids, mats, sizes = self.candidate_matrix(attribute_ids)
        finite = np.zeros(len(ids))
        unseen = np.zeros(len(ids), dtype=np.int64)
        total = float(len(self.sample))
        for j, a in enumerate(attribute_ids):
            counts_s = self.sample_counts[a]
            seen = counts_s > 0
            log_p = np.zeros(len(counts_s))
            log_p[seen] = np.log(counts_s[seen] / total)
            mat = mats[j]
            finite += -(mat @ log_p) / sizes
            unseen += ((mat > 0) & ~seen).sum(axis=1)
        return ids, finite, unseen
