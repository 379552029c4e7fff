"""Independent brute-force re-implementations of the selection rules, used as
per-step oracles. Deliberately written from the definitions with plain Python
sets and math, sharing no code with the library implementations."""

import math

import numpy as np


def _round(x):
    # match the library's 12-decimal tie resolution
    return round(float(x), 12)


def _frontier(graph, sample):
    in_s = set(sample)
    return sorted({
        int(w) for v in sample for w in graph.neighbors(v) if int(w) not in in_s
    })


def _candidate(graph, sample, v):
    """v plus its non-sampled neighbors (default delta rule)."""
    in_s = set(sample)
    return [v] + [int(w) for w in graph.neighbors(v) if int(w) not in in_s]


def _sample_probs(graph, sample, a):
    vals = [int(graph.values[a][v]) for v in sample]
    return {c: vals.count(c) / len(vals) for c in set(vals)}


def oracle_xs(graph, sample):
    in_s = set(sample)
    frontier = _frontier(graph, sample)
    explored = in_s | set(frontier)
    best, best_score = None, -1
    for v in frontier:
        score = sum(1 for w in graph.neighbors(v) if int(w) not in explored)
        if score > best_score:
            best, best_score = v, score
    return best


def surprise_of(graph, sample, members, attrs):
    """(finite value, unseen count) from the definition."""
    finite, unseen = 0.0, 0
    for a in attrs:
        p_s = _sample_probs(graph, sample, a)
        vals = [int(graph.values[a][m]) for m in members]
        distinct_unseen = {c for c in vals if c not in p_s}
        unseen += len(distinct_unseen)
        if not distinct_unseen:
            finite += sum(-math.log(p_s[c]) for c in vals) / len(vals)
    return finite, unseen


def oracle_ixs(graph, sample, attrs):
    frontier = _frontier(graph, sample)
    scored = []
    for v in frontier:
        f, u = surprise_of(graph, sample, _candidate(graph, sample, v), attrs)
        key = (1, u, 0.0) if u else (0, 0, _round(f))
        scored.append((key, v))
    best_key = max(k for k, _ in scored)
    return min(v for k, v in scored if k == best_key)


def oracle_bal(graph, sample, attrs):
    frontier = _frontier(graph, sample)
    best, best_score = None, None
    for v in frontier:
        score = 0.0
        for a in attrs:
            p_s = _sample_probs(graph, sample, a)
            score += p_s.get(int(graph.values[a][v]), 0.0)
        score = _round(score)
        if best_score is None or score < best_score:
            best, best_score = v, score
    return best


def oracle_exp(graph, sample, standardize):
    cont = [a for a, attr in enumerate(graph.schema) if attr.kind == "continuous"]
    X = np.column_stack([graph.values[a] for a in cont]).astype(float)
    if standardize:
        xs = X[list(sample)]
        mu, sd = xs.mean(axis=0), xs.std(axis=0)
        sd = np.where(sd == 0, 1.0, sd)
        X = (X - mu) / sd
    best, best_score = None, None
    for v in _frontier(graph, sample):
        d = _round(np.mean([np.linalg.norm(X[v] - X[s]) for s in sample]))
        if best_score is None or d > best_score:
            best, best_score = v, d
    return best


def oracle_vns(graph, sample, prior):
    frontier = _frontier(graph, sample)
    attrs = sorted(prior)
    best, best_score = None, None
    for v in frontier:
        score = 0.0
        for a in attrs:
            p = list(prior[a])
            counts = [0] * len(p)
            for u in list(sample) + [v]:
                counts[int(graph.values[a][u])] += 1
            total = len(sample) + 1
            ks = 0.0
            cum_s, cum_p = 0.0, 0.0
            for c in range(len(p)):
                cum_s += counts[c] / total
                cum_p += p[c]
                ks = max(ks, abs(cum_s - cum_p))
            score += ks
        score = _round(score / len(attrs))
        if best_score is None or score < best_score:
            best, best_score = v, score
    return best
