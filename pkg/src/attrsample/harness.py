"""Experiment orchestration: run the (sampler x seed x fraction) grid, score
the configured tasks, aggregate, and emit CSV/JSON reports.

Every sampler sees the identical per-repetition seed-node list (paired
design), and each grid cell derives its own rng from the master seed, so
results do not depend on execution order.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .generator import SyntheticSpec, generate
from .graph import (
    GraphFormatError,
    drop_missing,
    largest_connected_component,
    load_attributes,
    load_edge_list,
)
from .metrics import mean_performance
from .samplers import SamplerSpec, SamplingError, run_sampler
from .tasks import TaskSpec, graph_statistics, run_task

RECORDS_HEADER = "sampler,seed_node,rng_seed,fraction,metric,value"
DEFAULT_FRACTIONS = tuple(l / 100 for l in range(1, 11))


class ExperimentError(RuntimeError):
    """Too many grid cells failed for the report to be trustworthy."""


@dataclass
class ExperimentConfig:
    samplers: list
    tasks: list = field(default_factory=lambda: [TaskSpec()])
    edge_list: str = None
    attributes: str = None
    synthetic: SyntheticSpec = None
    fractions: tuple = DEFAULT_FRACTIONS
    repetitions: int = 100
    output_dir: str = "out"
    master_seed: int = 0
    max_failed_fraction: float = 0.10

    def __post_init__(self):
        if not self.samplers:
            raise ValueError("need at least one sampler")
        if not self.tasks:
            raise ValueError("need at least one task")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        self.fractions = tuple(float(f) for f in self.fractions)
        if not self.fractions or any(not 0 < f <= 1 for f in self.fractions):
            raise ValueError("fractions must lie in (0, 1]")
        if (self.edge_list is None) == (self.synthetic is None):
            raise ValueError("give exactly one graph source: files or a synthetic spec")

    def to_json(self):
        return {
            "samplers": [s.to_json() for s in self.samplers],
            "tasks": [t.to_json() for t in self.tasks],
            "edge_list": self.edge_list,
            "attributes": self.attributes,
            "synthetic": self.synthetic.to_json() if self.synthetic else None,
            "fractions": list(self.fractions),
            "repetitions": self.repetitions,
            "output_dir": self.output_dir,
            "master_seed": self.master_seed,
            "max_failed_fraction": self.max_failed_fraction,
        }

    @classmethod
    def from_json(cls, obj):
        obj = dict(obj)
        obj["samplers"] = [SamplerSpec.from_json(s) for s in obj.get("samplers", [])]
        obj["tasks"] = [TaskSpec.from_json(t) for t in obj.get("tasks", [])]
        syn = obj.get("synthetic")
        obj["synthetic"] = SyntheticSpec.from_json(syn) if syn else None
        if obj.get("fractions"):
            obj["fractions"] = tuple(obj["fractions"])
        else:
            obj["fractions"] = DEFAULT_FRACTIONS
        return cls(**{k: v for k, v in obj.items() if k in cls.__dataclass_fields__})


@dataclass(frozen=True)
class Record:
    sampler: str
    repetition: int  # pairing key; not emitted to CSV
    seed_node: int
    rng_seed: int
    fraction: float
    metric: str
    value: float


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    records: list
    errors: list
    seed_nodes: list
    sampler_labels: list
    graph_report: dict = None

    def metrics(self):
        return sorted({r.metric for r in self.records})

    def cells(self, sampler, metric):
        """(repetition, fraction) -> value for one sampler and metric."""
        return {
            (r.repetition, r.fraction): r.value
            for r in self.records
            if r.sampler == sampler and r.metric == metric
        }


def load_graph(edge_list, attributes=None):
    graph = load_edge_list(edge_list)
    if attributes:
        graph = load_attributes(attributes, graph)
    return graph


def prepare_graph(config):
    """Resolve the config's graph source; returns (graph, generator report)."""
    if config.synthetic is not None:
        return generate(config.synthetic)
    graph = load_graph(config.edge_list, config.attributes)
    if graph.has_missing():
        graph = drop_missing(graph)
    return graph, None


def _sampler_labels(specs):
    labels, seen = [], {}
    for spec in specs:
        base = spec.kind.lower()
        count = seen.get(base, 0)
        seen[base] = count + 1
        labels.append(base if count == 0 else f"{base}#{count + 1}")
    return labels


def _cell_seeds(master_seed, sampler_idx, rep, frac_idx):
    ss = np.random.SeedSequence([master_seed, 7, sampler_idx, rep, frac_idx])
    state = ss.generate_state(2)
    return int(state[0]), int(state[1])


def run_experiment(config, graph=None, graph_report=None):
    if graph is None:
        graph, graph_report = prepare_graph(config)
    lcc = largest_connected_component(graph)
    # seed pool: nodes of the largest component, as ids of the working graph
    if lcc is graph:
        pool = np.arange(graph.n)
    else:
        label_to_id = {lbl: v for v, lbl in enumerate(graph.labels)}
        pool = np.array(sorted(label_to_id[lbl] for lbl in lcc.labels))

    seed_rng = np.random.default_rng(np.random.SeedSequence([config.master_seed, 3]))
    replace_seeds = len(pool) < config.repetitions
    seed_nodes = [
        int(s) for s in seed_rng.choice(pool, size=config.repetitions,
                                        replace=replace_seeds)
    ]

    needs_stats = any(t.task == "characterize" for t in config.tasks)
    full_stats = None
    if needs_stats:
        stats_rng = np.random.default_rng(np.random.SeedSequence([config.master_seed, 5]))
        full_stats = graph_statistics(graph, stats_rng)

    labels = _sampler_labels(config.samplers)
    records, errors = [], []
    total_cells = 0
    for si, spec in enumerate(config.samplers):
        for rep, seed_node in enumerate(seed_nodes):
            for fi, frac in enumerate(config.fractions):
                total_cells += 1
                rng_seed, task_seed = _cell_seeds(config.master_seed, si, rep, fi)
                size = max(1, round(frac * graph.n))
                try:
                    run_spec = replace(spec, rng_seed=rng_seed)
                    sample = run_sampler(graph, run_spec, seed_node, size)
                    for task in config.tasks:
                        task_rng = np.random.default_rng(task_seed)
                        scores = run_task(graph, sample, task, full_stats, task_rng)
                        for metric, value in scores.items():
                            if value is None:
                                continue  # declared N/A cell
                            records.append(Record(labels[si], rep, seed_node,
                                                  rng_seed, frac, metric, float(value)))
                except (SamplingError, ValueError) as exc:
                    errors.append({"sampler": labels[si], "repetition": rep,
                                   "seed_node": seed_node, "fraction": frac,
                                   "error": str(exc)})

    if total_cells and len(errors) / total_cells > config.max_failed_fraction:
        raise ExperimentError(
            f"{len(errors)} of {total_cells} grid cells failed "
            f"(> {config.max_failed_fraction:.0%} tolerance)"
        )
    return ExperimentReport(config, records, errors, seed_nodes, labels, graph_report)


# ---------------------------------------------------------------------------
# aggregation and comparison
# ---------------------------------------------------------------------------


def aggregate(report):
    """Per (sampler, metric): per-fraction mean and standard error, plus the
    overall score (mean of the per-fraction means)."""
    out = {}
    if report.config is not None:
        fractions = report.config.fractions
    else:
        fractions = sorted({r.fraction for r in report.records})
    for sampler in report.sampler_labels:
        out[sampler] = {}
        for metric in report.metrics():
            cells = report.cells(sampler, metric)
            if not cells:
                continue
            per_fraction = {}
            for frac in fractions:
                vals = np.array([v for (rep, f), v in cells.items() if f == frac])
                if vals.size == 0:
                    continue
                stderr = float(vals.std(ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else 0.0
                per_fraction[frac] = {"mean": float(vals.mean()),
                                      "stderr": stderr, "n": int(vals.size)}
            if not per_fraction:
                continue
            overall = mean_performance(v["mean"] for v in per_fraction.values())
            out[sampler][metric] = {"per_fraction": per_fraction, "overall": overall}
    return out


def paired_permutation_p(diffs, resamples=10_000, rng=None):
    """Two-sided sign-flip permutation test on paired differences;
    p = (1 + #extreme) / (1 + resamples)."""
    diffs = np.asarray(diffs, dtype=float)
    if diffs.size < 2:
        return 1.0
    rng = rng if rng is not None else np.random.default_rng(0)
    observed = abs(diffs.mean())
    signs = rng.choice([-1.0, 1.0], size=(resamples, diffs.size))
    perm = np.abs((signs * diffs).mean(axis=1))
    extreme = int((perm >= observed - 1e-12).sum())
    return (1 + extreme) / (1 + resamples)


def compare(report, metric, sampler_a, sampler_b, resamples=10_000, rng=None):
    """Paired comparison over matched (repetition, fraction) cells.

    Returns mean gap a-b, relative gap (a-b)/b, the paired permutation-test
    p-value, and the matched-cell count.
    """
    cells_a = report.cells(sampler_a, metric)
    cells_b = report.cells(sampler_b, metric)
    keys = sorted(cells_a.keys() & cells_b.keys())
    if not keys:
        raise ValueError(f"no matched cells for {sampler_a!r} vs {sampler_b!r} on {metric!r}")
    a = np.array([cells_a[k] for k in keys])
    b = np.array([cells_b[k] for k in keys])
    diffs = a - b
    mean_b = float(b.mean())
    return {
        "metric": metric,
        "a": sampler_a,
        "b": sampler_b,
        "cells": len(keys),
        "mean_gap": float(diffs.mean()),
        "relative_gap": float(diffs.mean() / mean_b) if mean_b != 0 else float("nan"),
        "p_value": paired_permutation_p(diffs, resamples, rng),
    }


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def _fmt(x):
    return format(float(x), ".17g")


def report_emit(report, out_dir):
    """Write records.csv, summary.json, and curves.csv; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    records_path = os.path.join(out_dir, "records.csv")
    with open(records_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(RECORDS_HEADER + "\n")
        for r in report.records:
            fh.write(f"{r.sampler},{r.seed_node},{r.rng_seed},"
                     f"{_fmt(r.fraction)},{r.metric},{_fmt(r.value)}\n")

    aggregates = aggregate(report)
    curves_path = os.path.join(out_dir, "curves.csv")
    with open(curves_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("sampler,metric,fraction,mean,stderr,n\n")
        for sampler in report.sampler_labels:
            for metric, agg in sorted(aggregates.get(sampler, {}).items()):
                for frac, row in sorted(agg["per_fraction"].items()):
                    fh.write(f"{sampler},{metric},{_fmt(frac)},"
                             f"{_fmt(row['mean'])},{_fmt(row['stderr'])},{row['n']}\n")

    summary = {
        "config": report.config.to_json(),
        "seed_nodes": report.seed_nodes,
        "aggregates": {
            sampler: {
                metric: {
                    "overall": agg["overall"],
                    "per_fraction": {_fmt(f): row for f, row in agg["per_fraction"].items()},
                }
                for metric, agg in metrics.items()
            }
            for sampler, metrics in aggregates.items()
        },
        "generator_report": report.graph_report,
        "failed_cells": report.errors,
    }
    summary_path = os.path.join(out_dir, "summary.json")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"records": records_path, "summary": summary_path, "curves": curves_path}


def report_from_records(records):
    """Rebuild a minimal report (no config) from parsed records, enough for
    aggregation and comparison."""
    labels = list(dict.fromkeys(r.sampler for r in records))
    return ExperimentReport(None, list(records), [], [], labels, None)


def load_records(path):
    """Parse a records.csv back into Record rows (repetition index is not in
    the file; rows get a per-(sampler, fraction) running index)."""
    records = []
    counters = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RECORDS_HEADER.split(","):
            raise GraphFormatError(f"{path}: unexpected header {header!r}")
        for row in reader:
            if len(row) != 6:
                raise GraphFormatError(f"{path}: malformed row {row!r}")
            sampler, seed_node, rng_seed, fraction, metric, value = row
            key = (sampler, fraction, metric)
            rep = counters.get(key, 0)
            counters[key] = rep + 1
            records.append(Record(sampler, rep, int(seed_node), int(rng_seed),
                                  float(fraction), metric, float(value)))
    return records
