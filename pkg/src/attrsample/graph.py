"""Attributed-graph data model and file ingestion.

The graph is undirected, simple (no self loops, no parallel edges) and uses
dense 0-based node ids internally; external string ids are kept in a side
table so attribute files can be joined after loading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MISSING_DISCRETE = -1

DISCRETE = "discrete"
CONTINUOUS = "continuous"


class GraphFormatError(ValueError):
    """Raised on malformed edge-list or attribute-table input."""


@dataclass(frozen=True)
class Attribute:
    """One column of the attribute schema."""

    name: str
    kind: str  # DISCRETE or CONTINUOUS
    cardinality: int = 0  # discrete only
    lo: float = 0.0  # continuous only: observed range
    hi: float = 0.0
    categories: tuple = ()  # discrete: external labels, index = category id

    def __post_init__(self):
        if self.kind not in (DISCRETE, CONTINUOUS):
            raise ValueError(f"unknown attribute kind {self.kind!r}")
        if self.kind == DISCRETE and self.cardinality < 1:
            raise ValueError("discrete cardinality must be >= 1")
        if self.kind == CONTINUOUS and self.lo > self.hi:
            raise ValueError("continuous range requires lo <= hi")


@dataclass(frozen=True)
class AttributeSchema:
    attributes: tuple = ()

    def __post_init__(self):
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise ValueError("attribute names must be unique")

    def __len__(self):
        return len(self.attributes)

    def __iter__(self):
        return iter(self.attributes)

    def __getitem__(self, i):
        return self.attributes[i]

    def index(self, name):
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise KeyError(name)

    @property
    def discrete_ids(self):
        return [i for i, a in enumerate(self.attributes) if a.kind == DISCRETE]

    @property
    def continuous_ids(self):
        return [i for i, a in enumerate(self.attributes) if a.kind == CONTINUOUS]


class AttributedGraph:
    """Immutable undirected graph plus per-node attribute vectors.

    Parameters
    ----------
    adjacency : list of sorted int arrays, one per node.
    schema : AttributeSchema
    values : list of per-attribute arrays (len n each); discrete arrays are
        int category ids with ``MISSING_DISCRETE`` for missing, continuous
        arrays are float with NaN for missing.
    labels : external node ids, index = internal id.
    """

    def __init__(self, adjacency, schema=None, values=None, labels=None):
        self._adj = [np.asarray(a, dtype=np.int64) for a in adjacency]
        self.n = len(self._adj)
        if self.n == 0:
            raise GraphFormatError("empty graph")
        self.schema = schema if schema is not None else AttributeSchema()
        self.values = list(values) if values is not None else []
        if len(self.values) != len(self.schema):
            raise ValueError("one value array per schema attribute required")
        self.labels = list(labels) if labels is not None else [str(v) for v in range(self.n)]
        self.degrees = np.array([len(a) for a in self._adj], dtype=np.int64)
        self._check_symmetry()

    def _check_symmetry(self):
        for v, nbrs in enumerate(self._adj):
            if len(nbrs) != len(set(nbrs.tolist())):
                raise GraphFormatError(f"parallel edges at node {v}")
            if v in nbrs:
                raise GraphFormatError(f"self loop at node {v}")

    # -- basic accessors ---------------------------------------------------

    def neighbors(self, v):
        return self._adj[v]

    def degree(self, v):
        return int(self.degrees[v])

    @property
    def num_edges(self):
        return int(self.degrees.sum()) // 2

    def edges(self):
        for v in range(self.n):
            for w in self._adj[v]:
                if v < w:
                    yield v, int(w)

    def attribute_values(self, attr):
        """Value array for an attribute given by index or name."""
        if isinstance(attr, str):
            attr = self.schema.index(attr)
        return self.values[attr]

    def has_missing(self):
        for a, vals in zip(self.schema, self.values):
            if a.kind == DISCRETE and (vals == MISSING_DISCRETE).any():
                return True
            if a.kind == CONTINUOUS and np.isnan(vals).any():
                return True
        return False

    # -- derived graphs ----------------------------------------------------

    def subgraph(self, nodes):
        """Induced subgraph on ``nodes``; ids recompacted in the given order."""
        nodes = list(nodes)
        index = {v: i for i, v in enumerate(nodes)}
        keep = np.zeros(self.n, dtype=bool)
        keep[nodes] = True
        adj = []
        for v in nodes:
            nbrs = self._adj[v]
            nbrs = nbrs[keep[nbrs]]
            adj.append(np.sort(np.array([index[int(w)] for w in nbrs], dtype=np.int64)))
        values = []
        for vals in self.values:
            values.append(vals[nodes])
        labels = [self.labels[v] for v in nodes]
        return AttributedGraph(adj, self.schema, values, labels)

    def connected_components(self):
        """List of components, each a sorted list of node ids."""
        seen = np.zeros(self.n, dtype=bool)
        components = []
        for start in range(self.n):
            if seen[start]:
                continue
            seen[start] = True
            stack = [start]
            comp = [start]
            while stack:
                v = stack.pop()
                for w in self._adj[v]:
                    w = int(w)
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
                        comp.append(w)
            components.append(sorted(comp))
        return components


def _build_adjacency(n, edge_set):
    adj = [[] for _ in range(n)]
    for v, w in edge_set:
        adj[v].append(w)
        adj[w].append(v)
    return [np.array(sorted(a), dtype=np.int64) for a in adj]


def load_edge_list(path):
    """Load an edge-list file into an AttributedGraph with empty attributes.

    One edge per line, two whitespace- or comma-separated tokens, ``#``
    comments. Duplicate edges are collapsed and self loops dropped. Node ids
    are remapped to dense integers in first-seen order.
    """
    index = {}
    labels = []
    edge_set = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.replace(",", " ").split()
            if len(tokens) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected two node tokens, got {line!r}")
            ids = []
            for tok in tokens:
                if tok not in index:
                    index[tok] = len(labels)
                    labels.append(tok)
                ids.append(index[tok])
            a, b = ids
            if a == b:
                continue
            edge_set.add((min(a, b), max(a, b)))
    if not labels:
        raise GraphFormatError(f"{path}: no edges found")
    return AttributedGraph(_build_adjacency(len(labels), edge_set), labels=labels)


def load_attributes(path, graph):
    """Join a CSV attribute table onto ``graph``.

    Header row: first column is the node id, remaining columns are prefixed
    ``d:`` (discrete) or ``c:`` (continuous). Empty fields mark MISSING.
    Nodes absent from the table keep MISSING in every attribute; table rows
    for unknown nodes are an error.
    """
    import csv

    index = {lbl: v for v, lbl in enumerate(graph.labels)}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise GraphFormatError(f"{path}: empty attribute table") from None
        cols = []
        for name in header[1:]:
            if name.startswith("d:"):
                cols.append((name[2:], DISCRETE))
            elif name.startswith("c:"):
                cols.append((name[2:], CONTINUOUS))
            else:
                raise GraphFormatError(f"{path}: column {name!r} lacks a d:/c: prefix")
        n = graph.n
        raw = [
            np.full(n, MISSING_DISCRETE, dtype=np.int64) if kind == DISCRETE
            else np.full(n, np.nan) for _, kind in cols
        ]
        interned = [dict() for _ in cols]
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            node = row[0].strip()
            if node not in index:
                raise GraphFormatError(f"{path}:{lineno}: unknown node id {node!r}")
            v = index[node]
            for j, field_ in enumerate(row[1:]):
                field_ = field_.strip()
                if field_ == "":
                    continue  # MISSING
                name, kind = cols[j]
                if kind == DISCRETE:
                    table = interned[j]
                    if field_ not in table:
                        table[field_] = len(table)
                    raw[j][v] = table[field_]
                else:
                    try:
                        raw[j][v] = float(field_)
                    except ValueError:
                        raise GraphFormatError(
                            f"{path}:{lineno}: non-numeric value {field_!r} in c:{name}"
                        ) from None

    attributes = []
    for j, (name, kind) in enumerate(cols):
        if kind == DISCRETE:
            card = max(1, len(interned[j]))
            categories = tuple(sorted(interned[j], key=interned[j].get))
            attributes.append(Attribute(name, DISCRETE, cardinality=card, categories=categories))
        else:
            finite = raw[j][~np.isnan(raw[j])]
            lo = float(finite.min()) if finite.size else 0.0
            hi = float(finite.max()) if finite.size else 0.0
            attributes.append(Attribute(name, CONTINUOUS, lo=lo, hi=hi))
    return AttributedGraph(
        [graph.neighbors(v) for v in range(graph.n)],
        AttributeSchema(tuple(attributes)),
        raw,
        graph.labels,
    )


def save_edge_list(graph, path):
    """Write the graph as whitespace-separated node-label pairs, one edge per
    line, the format ``load_edge_list`` reads back."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v, w in graph.edges():
            fh.write(f"{graph.labels[v]} {graph.labels[w]}\n")


def save_attributes(graph, path):
    """Write the attribute table in the CSV format ``load_attributes`` reads
    back; missing values become empty fields."""
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["node"]
        for attr in graph.schema:
            prefix = "d:" if attr.kind == DISCRETE else "c:"
            header.append(prefix + attr.name)
        writer.writerow(header)
        for v in range(graph.n):
            row = [graph.labels[v]]
            for a, attr in enumerate(graph.schema):
                val = graph.values[a][v]
                if attr.kind == DISCRETE:
                    if val == MISSING_DISCRETE:
                        row.append("")
                    elif attr.categories:
                        row.append(attr.categories[int(val)])
                    else:
                        row.append(str(int(val)))
                else:
                    row.append("" if np.isnan(val) else format(float(val), ".17g"))
            writer.writerow(row)


def largest_connected_component(graph):
    """Induced subgraph on the largest component; ties go to the component
    containing the smallest original id."""
    components = graph.connected_components()
    best = max(components, key=lambda c: (len(c), -c[0]))
    if len(best) == graph.n:
        return graph
    return graph.subgraph(best)


def drop_missing(graph):
    """Remove nodes carrying any MISSING attribute value."""
    keep = np.ones(graph.n, dtype=bool)
    for a, vals in zip(graph.schema, graph.values):
        if a.kind == DISCRETE:
            keep &= vals != MISSING_DISCRETE
        else:
            keep &= ~np.isnan(vals)
    if keep.all():
        return graph
    nodes = np.flatnonzero(keep).tolist()
    if not nodes:
        raise GraphFormatError("all nodes have missing values")
    return graph.subgraph(nodes)


def from_networkx(g, schema=None, values=None):
    """Convert a networkx graph with integer nodes 0..n-1."""
    n = g.number_of_nodes()
    adj = [np.array(sorted(g.neighbors(v)), dtype=np.int64) for v in range(n)]
    return AttributedGraph(adj, schema, values)
