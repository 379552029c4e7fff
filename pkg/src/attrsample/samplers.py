"""Link-trace sampling policies.

Every sampler is a class with sklearn-style ``get_params``/``set_params`` and
a ``sample(graph, seed_node, size, rng)`` method returning a :class:`Sample`.
Deterministic samplers (XS, BAL, IXS, H-IXS, ExP, VNS, PRIOR, CLUSTER, pIX,
pIM) break every tie by smallest node id and ignore the rng; stochastic ones
(UNI, FF, RW, MHRW, I&M) consume it. Walk-based samplers count distinct nodes
toward the target size and keep the full visit multiset for degree
reweighting.
"""

from __future__ import annotations

import inspect
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .graph import CONTINUOUS, DISCRETE
from .state import EXCL_SAMPLE, SampleState

STEP_CAP_FACTOR = 1000


class SamplingError(RuntimeError):
    """A run could not reach the requested sample size."""


@dataclass
class SamplerSpec:
    """Serializable policy description: which sampler plus its parameters."""

    kind: str
    params: dict = field(default_factory=dict)
    rng_seed: int = 0

    def to_json(self):
        return {"kind": self.kind, "params": dict(self.params), "rng_seed": self.rng_seed}

    @classmethod
    def from_json(cls, obj):
        return cls(kind=obj["kind"], params=dict(obj.get("params", {})),
                   rng_seed=int(obj.get("rng_seed", 0)))


@dataclass
class Sample:
    """Ordered node list produced by one sampling run."""

    nodes: list
    kind: str
    seed_node: int
    params: dict = field(default_factory=dict)
    visits: list = None  # walk visit multiset (RW/MHRW/I&M), else None

    def __len__(self):
        return len(self.nodes)

    def induced_subgraph(self, graph):
        return graph.subgraph(sorted(self.nodes))


def _argbest(ids, values, maximize=True):
    """First (= smallest id, ids are ascending) optimum.

    Float scores are rounded to 12 decimals so that mathematically tied
    candidates tie exactly regardless of summation order.
    """
    values = np.asarray(values)
    if values.dtype.kind == "f":
        values = np.round(values, 12)
    idx = int(np.argmax(values) if maximize else np.argmin(values))
    return int(ids[idx])


def _pick_surprise(ids, finite, unseen):
    """Total order: finite by value, then divergent by unseen count."""
    if len(ids) == 0:
        raise SamplingError("frontier exhausted")
    if unseen.max(initial=0) > 0:
        return _argbest(ids, unseen)
    return _argbest(ids, finite)


class Sampler:
    """Base link-trace sampler: seeds the trace, then asks subclasses for the
    next frontier node until the target size is reached."""

    kind = "base"

    def __init__(self, delta_rule=EXCL_SAMPLE, binning=None):
        self.delta_rule = delta_rule
        self.binning = binning

    # sklearn-style parameter surface ------------------------------------

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self):
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        for name, value in params.items():
            if name not in self._param_names():
                raise ValueError(f"unknown parameter {name!r} for {type(self).__name__}")
            setattr(self, name, value)
        return self

    # run driver ----------------------------------------------------------

    def sample(self, graph, seed_node, size, rng=None):
        if not 1 <= size <= graph.n:
            raise ValueError(f"sample size {size} out of range [1, {graph.n}]")
        if not 0 <= seed_node < graph.n:
            raise ValueError(f"seed node {seed_node} out of range")
        rng = rng if rng is not None else np.random.default_rng(0)
        state = SampleState(graph, self.delta_rule, self.binning)
        ctx = self._start(graph, seed_node, size, rng)
        state.extend(seed_node)
        self._after_extend(state, seed_node, ctx, rng)
        while len(state.sample) < size:
            if not state.in_frontier.any():
                raise SamplingError(
                    f"frontier exhausted after {len(state.sample)} of {size} nodes"
                )
            node = self._next(state, ctx, rng)
            state.extend(node)
            self._after_extend(state, node, ctx, rng)
        return Sample(list(state.sample), self.kind, seed_node, self.get_params(),
                      visits=ctx.get("visits"))

    def _start(self, graph, seed_node, size, rng):
        return {}

    def _after_extend(self, state, node, ctx, rng):
        pass

    def _next(self, state, ctx, rng):
        raise NotImplementedError


class UniformSampler(Sampler):
    """Uniform node sampling; not link-trace, the induced subgraph may be
    disconnected."""

    kind = "uni"

    def __init__(self):
        pass

    def sample(self, graph, seed_node, size, rng=None):
        if not 1 <= size <= graph.n:
            raise ValueError(f"sample size {size} out of range [1, {graph.n}]")
        rng = rng if rng is not None else np.random.default_rng(0)
        nodes = [int(seed_node)]
        remaining = np.ones(graph.n, dtype=bool)
        remaining[seed_node] = False
        if size > 1:
            pool = np.flatnonzero(remaining)
            extra = rng.choice(pool, size=size - 1, replace=False)
            nodes.extend(int(v) for v in extra)
        return Sample(nodes, self.kind, int(seed_node), self.get_params())


class BFSSampler(Sampler):
    """Snowball collection through breadth-first search; neighbors are
    enqueued in ascending id."""

    kind = "bfs"

    def _start(self, graph, seed_node, size, rng):
        return {"queue": deque(), "discovered": set([int(seed_node)])}

    def _after_extend(self, state, node, ctx, rng):
        for w in state.graph.neighbors(node):
            w = int(w)
            if w not in ctx["discovered"]:
                ctx["discovered"].add(w)
                ctx["queue"].append(w)

    def _next(self, state, ctx, rng):
        queue = ctx["queue"]
        while queue:
            v = queue.popleft()
            if not state.in_sample[v]:
                return v
        # defensive refill: restart from the frontier in ascending id
        for v in state.frontier_ids():
            queue.append(int(v))
            ctx["discovered"].add(int(v))
        return self._next(state, ctx, rng)


class ForestFireSampler(Sampler):
    """Burns a geometric number of neighbors per step; a dead fire reignites
    at a uniformly chosen sampled node."""

    kind = "ff"

    def __init__(self, p_f=0.7, delta_rule=EXCL_SAMPLE, binning=None):
        if not 0.0 < p_f < 1.0:
            raise ValueError("burn probability p_f must lie in (0, 1)")
        self.p_f = p_f
        super().__init__(delta_rule, binning)

    def _start(self, graph, seed_node, size, rng):
        return {"sources": deque(), "pending": deque(), "burned": set([int(seed_node)]),
                "cap": STEP_CAP_FACTOR * size}

    def _after_extend(self, state, node, ctx, rng):
        ctx["sources"].append(node)

    def _burn(self, state, ctx, source, rng):
        unburned = [int(w) for w in state.graph.neighbors(source)
                    if int(w) not in ctx["burned"]]
        if not unburned:
            return
        # geometric spread with mean p_f / (1 - p_f), support >= 0
        x = int(rng.geometric(1.0 - self.p_f)) - 1
        x = min(x, len(unburned))
        if x == 0:
            return
        chosen = rng.choice(len(unburned), size=x, replace=False)
        for i in chosen:
            w = unburned[int(i)]
            ctx["burned"].add(w)
            ctx["pending"].append(w)

    def _next(self, state, ctx, rng):
        guard = ctx["cap"]
        while guard > 0:
            guard -= 1
            while ctx["pending"]:
                v = ctx["pending"].popleft()
                if not state.in_sample[v]:
                    return v
            if ctx["sources"]:
                self._burn(state, ctx, ctx["sources"].popleft(), rng)
            else:
                # fire died everywhere: reignite at a random sampled node
                ignite = int(rng.choice(state.sample))
                self._burn(state, ctx, ignite, rng)
        raise SamplingError("forest fire failed to spread within the step cap")


class RandomWalkSampler(Sampler):
    """Classic random walk; the visit multiset is kept so the Hansen-Hurwitz
    estimator can reweight attribute distributions afterwards."""

    kind = "rw"

    def _start(self, graph, seed_node, size, rng):
        return {"current": int(seed_node), "visits": [int(seed_node)],
                "budget": STEP_CAP_FACTOR * size}

    def _next(self, state, ctx, rng):
        current = ctx["current"]
        while ctx["budget"] > 0:
            ctx["budget"] -= 1
            nbrs = state.graph.neighbors(current)
            current = int(nbrs[rng.integers(len(nbrs))])
            ctx["visits"].append(current)
            if not state.in_sample[current]:
                ctx["current"] = current
                return current
        raise SamplingError("random walk exceeded its step cap")


class MHRWSampler(Sampler):
    """Metropolis-Hastings random walk: propose a uniform neighbor w of v and
    accept with min(1, d_v / d_w), giving a uniform stationary distribution.

    ``surprise_weighted`` switches on the experimental content-aware jump rule
    that re-weights the MHRW transition probabilities by candidate surprise
    (divergent surprise capped at the largest finite score plus one).
    """

    kind = "mhrw"

    def __init__(self, surprise_weighted=False, delta_rule=EXCL_SAMPLE, binning=None):
        self.surprise_weighted = surprise_weighted
        super().__init__(delta_rule, binning)

    def _start(self, graph, seed_node, size, rng):
        return {"current": int(seed_node), "visits": [int(seed_node)],
                "budget": STEP_CAP_FACTOR * size}

    def _step(self, state, ctx, rng):
        current = ctx["current"]
        if self.surprise_weighted:
            nxt = self._surprise_jump(state, current, rng)
        else:
            nbrs = state.graph.neighbors(current)
            w = int(nbrs[rng.integers(len(nbrs))])
            d_v = state.graph.degree(current)
            d_w = state.graph.degree(w)
            nxt = w if rng.random() < min(1.0, d_v / d_w) else current
        ctx["current"] = nxt
        ctx["visits"].append(nxt)
        return nxt

    def _surprise_jump(self, state, current, rng):
        nbrs = [int(w) for w in state.graph.neighbors(current)]
        attrs = state.graph.schema.discrete_ids or list(range(len(state.graph.schema)))
        d_v = state.graph.degree(current)
        trans = np.array([min(1.0 / d_v, 1.0 / state.graph.degree(w)) for w in nbrs])
        finite, divergent = [], []
        for w in nbrs:
            members = state.candidate_members(w) if state.in_frontier[w] else np.array([w])
            score = _surprise_of_members(state, members, attrs)
            finite.append(score[0] if not math.isinf(score[0]) else np.nan)
            divergent.append(math.isinf(score[0]))
        finite = np.array(finite)
        cap = (np.nanmax(finite) if not np.isnan(finite).all() else 0.0) + 1.0
        scores = np.where(divergent, cap, finite)
        weights = trans * np.maximum(scores, 1e-12)
        weights = weights / weights.sum()
        return int(nbrs[rng.choice(len(nbrs), p=weights)])

    def _next(self, state, ctx, rng):
        while ctx["budget"] > 0:
            ctx["budget"] -= 1
            nxt = self._step(state, ctx, rng)
            if not state.in_sample[nxt]:
                return nxt
        raise SamplingError("MHRW exceeded its step cap")


def mhrw_visit_counts(graph, start, steps, rng):
    """Visit counts of a plain MHRW chain; used for stationarity checks."""
    counts = np.zeros(graph.n, dtype=np.int64)
    current = int(start)
    degrees = graph.degrees
    block = 100_000
    done = 0
    while done < steps:
        m = min(block, steps - done)
        unif = rng.random(m)
        props = rng.random(m)
        for i in range(m):
            nbrs = graph.neighbors(current)
            w = int(nbrs[int(props[i] * len(nbrs))])
            if unif[i] < min(1.0, degrees[current] / degrees[w]):
                current = w
            counts[current] += 1
        done += m
    return counts


def random_walk_visit_counts(graph, start, steps, rng):
    """Visit counts of a plain random walk; stationary frequency is
    proportional to degree."""
    counts = np.zeros(graph.n, dtype=np.int64)
    current = int(start)
    block = 100_000
    done = 0
    while done < steps:
        m = min(block, steps - done)
        props = rng.random(m)
        for i in range(m):
            nbrs = graph.neighbors(current)
            current = int(nbrs[int(props[i] * len(nbrs))])
            counts[current] += 1
        done += m
    return counts


def _surprise_of_members(state, members, attribute_ids):
    """(finite value, unseen count) of an explicit candidate node set."""
    total = float(len(state.sample))
    finite = 0.0
    unseen = 0
    size = len(members)
    for a in attribute_ids:
        counts_s = state.sample_counts[a]
        cand = np.bincount(state.cat[a][members], minlength=state.n_cats[a])
        seen = counts_s > 0
        unseen += int(((cand > 0) & ~seen).sum())
        sel = (cand > 0) & seen
        if sel.any():
            finite += float(-(cand[sel] / size) @ np.log(counts_s[sel] / total))
    if unseen:
        return (math.inf, unseen)
    return (finite, 0)


class ExpansionSampler(Sampler):
    """Greedy expansion: argmax over the frontier of the number of neighbors
    outside the sample and its frontier."""

    kind = "xs"

    def _next(self, state, ctx, rng):
        ids, counts = state.expansion_counts()
        return _argbest(ids, counts)


class BalancedSampler(Sampler):
    """Adds the frontier node whose own attribute values are least probable
    in the sample (summed over the used attributes)."""

    kind = "bal"

    def __init__(self, attributes=None, delta_rule=EXCL_SAMPLE, binning=None):
        self.attributes = attributes
        super().__init__(delta_rule, binning)

    def _attribute_ids(self, state):
        if self.attributes is not None:
            return list(self.attributes)
        ids = state.graph.schema.discrete_ids
        if not ids:
            ids = list(range(len(state.graph.schema)))
        if not ids:
            raise SamplingError("balanced sampling needs at least one attribute")
        return ids

    def _next(self, state, ctx, rng):
        ids = state.frontier_ids()
        total = float(len(state.sample))
        score = np.zeros(len(ids))
        for a in self._attribute_ids(state):
            p = state.sample_counts[a] / total
            score += p[state.cat[a][ids]]
        return _argbest(ids, score, maximize=False)


class InformationExpansionSampler(Sampler):
    """IXS: maximize candidate-set surprise over the discrete attributes;
    divergent candidates ranked by their count of unseen values."""

    kind = "ixs"

    def __init__(self, attributes=None, delta_rule=EXCL_SAMPLE, binning=None):
        self.attributes = attributes
        super().__init__(delta_rule, binning)

    def _attribute_ids(self, state):
        if self.attributes is not None:
            return list(self.attributes)
        ids = state.graph.schema.discrete_ids
        if not ids:
            ids = list(range(len(state.graph.schema)))
        if not ids:
            raise SamplingError("surprise sampling needs at least one attribute")
        return ids

    def _next(self, state, ctx, rng):
        ids, finite, unseen = state.surprise_scores(self._attribute_ids(state))
        return _pick_surprise(ids, finite, unseen)


class HybridInformationSampler(InformationExpansionSampler):
    """H-IXS: surprise over discrete plus discretized continuous attributes."""

    kind = "hixs"

    def _attribute_ids(self, state):
        if self.attributes is not None:
            return list(self.attributes)
        if not len(state.graph.schema):
            raise SamplingError("surprise sampling needs at least one attribute")
        return list(range(len(state.graph.schema)))


class ExtremalPointSampler(Sampler):
    """ExP: pick the frontier node with the largest mean Euclidean distance
    (over continuous attributes) to the current sample."""

    kind = "exp"

    def __init__(self, standardize=True, delta_rule=EXCL_SAMPLE, binning=None):
        self.standardize = standardize
        super().__init__(delta_rule, binning)

    def sample(self, graph, seed_node, size, rng=None):
        if not graph.schema.continuous_ids:
            raise SamplingError("extremal point sampling requires continuous attributes")
        return super().sample(graph, seed_node, size, rng)

    def _next(self, state, ctx, rng):
        ids = state.frontier_ids()
        cont = state.graph.schema.continuous_ids
        X = np.column_stack([state.graph.values[a] for a in cont]).astype(float)
        if self.standardize:
            xs = X[state.sample]
            mu = xs.mean(axis=0)
            sd = xs.std(axis=0)
            sd[sd == 0] = 1.0
            X = (X - mu) / sd
        sample_pts = X[state.sample]
        frontier_pts = X[ids]
        dists = np.sqrt(
            ((frontier_pts[:, None, :] - sample_pts[None, :, :]) ** 2).sum(axis=2)
        ).mean(axis=1)
        return _argbest(ids, dists)


class MixedIXSMHRWSampler(Sampler):
    """I&M: each step flips a fair coin between an IXS selection and MHRW
    steps until a new distinct node is accepted."""

    kind = "ixm"

    def __init__(self, attributes=None, delta_rule=EXCL_SAMPLE, binning=None):
        self.attributes = attributes
        super().__init__(delta_rule, binning)
        self._ixs = InformationExpansionSampler(attributes, delta_rule, binning)
        self._mhrw = MHRWSampler(delta_rule=delta_rule, binning=binning)

    def _start(self, graph, seed_node, size, rng):
        return {"current": int(seed_node), "visits": [int(seed_node)],
                "budget": STEP_CAP_FACTOR * size}

    def _next(self, state, ctx, rng):
        if rng.random() < 0.5:
            node = self._ixs._next(state, ctx, rng)
            return node
        node = self._mhrw._next(state, ctx, rng)
        return node


class ParetoSampler(Sampler):
    """Pareto-optimal scalarization of surprise against a structural
    objective: expansion size for pIX, MHRW reachability for pIM.

    Divergent surprise is capped at the largest finite score plus one, each
    objective is min-max normalized over the frontier, and the equally
    weighted normalized sum is maximized within the Pareto-nondominated set.
    """

    kind = "pix"
    mode = "pix"

    def __init__(self, attributes=None, delta_rule=EXCL_SAMPLE, binning=None):
        self.attributes = attributes
        super().__init__(delta_rule, binning)
        self._ixs = InformationExpansionSampler(attributes, delta_rule, binning)

    def _structural_objective(self, state, ids):
        raise NotImplementedError

    def _next(self, state, ctx, rng):
        ids, finite, unseen = state.surprise_scores(self._ixs._attribute_ids(state))
        divergent = unseen > 0
        if divergent.all():
            cap = 1.0
        else:
            cap = finite[~divergent].max(initial=0.0) + 1.0
        info = np.where(divergent, cap, finite)
        struct = self._structural_objective(state, ids).astype(float)
        objectives = np.column_stack([info, struct])
        pareto = _pareto_mask(objectives)
        norm = _minmax(objectives)
        totals = norm.sum(axis=1)
        totals[~pareto] = -np.inf
        return _argbest(ids, totals)


def _pareto_mask(points):
    """Nondominated mask under coordinate-wise maximization."""
    m = len(points)
    mask = np.ones(m, dtype=bool)
    for i in range(m):
        if not mask[i]:
            continue
        dominated = (points >= points[i]).all(axis=1) & (points > points[i]).any(axis=1)
        if dominated.any():
            mask[i] = False
    return mask


def _minmax(points):
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    span = hi - lo
    span[span == 0] = 1.0
    return (points - lo) / span


class ParetoIXSampler(ParetoSampler):
    """pIX: objectives (surprise, |delta(v)|)."""

    kind = "pix"

    def _structural_objective(self, state, ids):
        _, _, sizes = state.candidate_matrix([])
        return sizes - 1


class ParetoIMSampler(ParetoSampler):
    """pIM: objectives (surprise, P*), the frontier-normalized MHRW
    reachability score sum_{u in S} min(1/d_v, 1/d_u)."""

    kind = "pim"

    def _structural_objective(self, state, ids):
        inv_sample = 1.0 / state.graph.degrees[state.sample]
        inv_frontier = 1.0 / state.graph.degrees[ids]
        scores = np.minimum(inv_frontier[:, None], inv_sample[None, :]).sum(axis=1)
        return scores / scores.sum()


class PriorSurpriseSampler(Sampler):
    """Oracle-prior surprise: candidate-set surprise scored against a fixed
    attribute distribution instead of the evolving sample distribution."""

    kind = "prior"

    def __init__(self, prior=None, attributes=None, delta_rule=EXCL_SAMPLE, binning=None):
        self.prior = prior  # {attribute id -> probability vector}
        self.attributes = attributes
        super().__init__(delta_rule, binning)

    def _attribute_ids(self, state):
        if self.attributes is not None:
            return list(self.attributes)
        return sorted(self.prior)

    def _next(self, state, ctx, rng):
        if not self.prior:
            raise SamplingError("prior sampling requires a prior distribution")
        attrs = self._attribute_ids(state)
        ids, mats, sizes = state.candidate_matrix(attrs)
        finite = np.zeros(len(ids))
        unseen = np.zeros(len(ids), dtype=np.int64)
        for j, a in enumerate(attrs):
            p = np.asarray(self.prior[a], dtype=float)
            seen = p > 0
            log_p = np.zeros(len(p))
            log_p[seen] = np.log(p[seen])
            finite += -(mats[j] @ log_p) / sizes
            unseen += ((mats[j] > 0) & ~seen).sum(axis=1)
        return _pick_surprise(ids, finite, unseen)


class VNSSampler(Sampler):
    """Variable neighbourhood search: add the frontier node minimizing the KS
    distance between the grown sample distribution and a known prior,
    averaged over attributes."""

    kind = "vns"

    def __init__(self, prior=None, attributes=None, delta_rule=EXCL_SAMPLE, binning=None):
        self.prior = prior
        self.attributes = attributes
        super().__init__(delta_rule, binning)

    def _next(self, state, ctx, rng):
        if not self.prior:
            raise SamplingError("VNS requires a prior distribution")
        attrs = sorted(self.prior) if self.attributes is None else list(self.attributes)
        ids = state.frontier_ids()
        total = len(state.sample) + 1.0
        score = np.zeros(len(ids))
        for a in attrs:
            prior_cdf = np.cumsum(np.asarray(self.prior[a], dtype=float))
            base = np.cumsum(state.sample_counts[a]).astype(float)
            # KS of (S + one node of category c) against the prior, per c
            r = state.n_cats[a]
            ks_per_cat = np.empty(r)
            for c in range(r):
                cdf = base.copy()
                cdf[c:] += 1.0
                ks_per_cat[c] = np.abs(cdf / total - prior_cdf).max()
            score += ks_per_cat[state.cat[a][ids]]
        score /= len(attrs)
        return _argbest(ids, score, maximize=False)


class ClusterAwareSampler(Sampler):
    """Combines content clustering with surprise: k-means over the sample's
    standardized continuous attributes defines a derived cluster-id attribute
    whose surprise is added to the categorical surprise."""

    kind = "cluster"

    def __init__(self, k=2, attributes=None, delta_rule=EXCL_SAMPLE, binning=None):
        if k < 1:
            raise ValueError("cluster count k must be >= 1")
        self.k = k
        self.attributes = attributes
        super().__init__(delta_rule, binning)
        self._ixs = InformationExpansionSampler(attributes, delta_rule, binning)

    def _next(self, state, ctx, rng):
        if len(state.sample) < self.k:
            return self._ixs._next(state, ctx, rng)
        from .tasks import kmeans_fit

        cont = state.graph.schema.continuous_ids
        if not cont:
            raise SamplingError("cluster-aware sampling requires continuous attributes")
        X = np.column_stack([state.graph.values[a] for a in cont]).astype(float)
        xs = X[state.sample]
        mu = xs.mean(axis=0)
        sd = xs.std(axis=0)
        sd[sd == 0] = 1.0
        Z = (X - mu) / sd
        ids = state.frontier_ids()
        member_lists = [state.candidate_members(int(v)) for v in ids]
        # fit over the explored region (sample plus candidates) so candidates
        # in content regions the sample has not reached can diverge
        fit_nodes = sorted(set(state.sample).union(
            int(m) for members in member_lists for m in members
        ))
        k = min(self.k, len(fit_nodes))
        _, centers = kmeans_fit(Z[fit_nodes], k, rng)
        assign = lambda pts: np.argmin(
            ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2), axis=1
        )
        cluster_counts_s = np.bincount(assign(Z[state.sample]), minlength=k)
        total = float(len(state.sample))
        disc = self._ixs._attribute_ids(state) if state.graph.schema.discrete_ids else []

        finite = np.zeros(len(ids))
        unseen = np.zeros(len(ids), dtype=np.int64)
        for row, v in enumerate(ids):
            members = member_lists[row]
            cand = np.bincount(assign(Z[members]), minlength=k)
            seen = cluster_counts_s > 0
            unseen[row] += int(((cand > 0) & ~seen).sum())
            sel = (cand > 0) & seen
            if sel.any():
                finite[row] += float(
                    -(cand[sel] / len(members)) @ np.log(cluster_counts_s[sel] / total)
                )
            if disc:
                f, u = _surprise_of_members(state, members, disc)
                unseen[row] += u
                if not math.isinf(f):
                    finite[row] += f
        return _pick_surprise(ids, finite, unseen)


def estimate_prior_mhrw(graph, seed_node, steps, rng, binning=None):
    """Burn-in MHRW estimate of per-attribute category distributions.

    Fixed-length burn-in stands in for formal chain-convergence diagnostics.
    Returns {attribute id -> probability vector}.
    """
    from .surprise import categorize, support_size

    counts = mhrw_visit_counts(graph, seed_node, steps, rng)
    prior = {}
    for a, attr in enumerate(graph.schema):
        rule = (binning or {}).get(a) if binning else None
        cats = categorize(graph.values[a], attr, rule)
        r = support_size(attr, rule)
        hist = np.bincount(cats, weights=counts, minlength=r)
        prior[a] = hist / hist.sum()
    return prior


_ALIASES = {
    "uni": UniformSampler,
    "bfs": BFSSampler,
    "ff": ForestFireSampler,
    "rw": RandomWalkSampler,
    "mhrw": MHRWSampler,
    "xs": ExpansionSampler,
    "bal": BalancedSampler,
    "ixs": InformationExpansionSampler,
    "exp": ExtremalPointSampler,
    "hixs": HybridInformationSampler,
    "h-ixs": HybridInformationSampler,
    "ixm": MixedIXSMHRWSampler,
    "i&m": MixedIXSMHRWSampler,
    "pix": ParetoIXSampler,
    "pim": ParetoIMSampler,
    "prior": PriorSurpriseSampler,
    "vns": VNSSampler,
    "cluster": ClusterAwareSampler,
}


def make_sampler(spec):
    """Instantiate the sampler described by a SamplerSpec."""
    key = spec.kind.lower()
    if key not in _ALIASES:
        raise ValueError(f"unknown sampler kind {spec.kind!r}")
    return _ALIASES[key](**spec.params)


def run_sampler(graph, spec, seed_node, size):
    """One deterministic sampling run: (spec, seed_node, rng seed) fixes the
    node sequence exactly."""
    sampler = make_sampler(spec)
    rng = np.random.default_rng(spec.rng_seed)
    return sampler.sample(graph, seed_node, size, rng)
