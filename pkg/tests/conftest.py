import numpy as np
import pytest

from attrsample.graph import (
    CONTINUOUS,
    DISCRETE,
    Attribute,
    AttributedGraph,
    AttributeSchema,
)


def build_graph(adj, discrete=None, continuous=None, cardinality=None):
    """Small-graph builder: adj is a neighbor list, discrete/continuous are
    dicts name -> value list."""
    attrs, values = [], []
    for name, vals in (discrete or {}).items():
        vals = np.asarray(vals, dtype=np.int64)
        card = cardinality if cardinality is not None else int(vals.max()) + 1
        attrs.append(Attribute(name, DISCRETE, cardinality=card,
                               categories=tuple(str(c) for c in range(card))))
        values.append(vals)
    for name, vals in (continuous or {}).items():
        vals = np.asarray(vals, dtype=float)
        attrs.append(Attribute(name, CONTINUOUS, lo=float(vals.min()), hi=float(vals.max())))
        values.append(vals)
    return AttributedGraph(adj, AttributeSchema(tuple(attrs)), values)


def random_attributed_graph(rng, n_max=50, n_cats=None, ensure_connected=True):
    """Connected random graph with one discrete attribute."""
    n = int(rng.integers(4, n_max + 1))
    adj = [set() for _ in range(n)]
    order = rng.permutation(n)
    for i in range(1, n):  # random spanning tree keeps it connected
        j = order[int(rng.integers(0, i))]
        adj[order[i]].add(int(j))
        adj[int(j)].add(int(order[i]))
    extra = int(rng.integers(0, 2 * n))
    for _ in range(extra):
        v, w = rng.integers(0, n, size=2)
        if v != w:
            adj[int(v)].add(int(w))
            adj[int(w)].add(int(v))
    cats = n_cats if n_cats is not None else int(rng.integers(2, 6))
    colors = rng.integers(0, cats, size=n)
    return build_graph([sorted(a) for a in adj], discrete={"color": colors},
                       cardinality=cats)


def path_graph(n, **kw):
    adj = [[j for j in (i - 1, i + 1) if 0 <= j < n] for i in range(n)]
    return build_graph(adj, **kw)


def ring_graph(n, **kw):
    adj = [sorted({(i - 1) % n, (i + 1) % n}) for i in range(n)]
    return build_graph(adj, **kw)


def complete_graph(n, **kw):
    adj = [[j for j in range(n) if j != i] for i in range(n)]
    return build_graph(adj, **kw)


def star_graph(n_leaves, **kw):
    adj = [list(range(1, n_leaves + 1))] + [[0]] * n_leaves
    return build_graph(adj, **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
