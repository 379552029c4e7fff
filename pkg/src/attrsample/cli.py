"""Command-line entry point.

Subcommands: ``generate`` (synthetic attributed graph to files), ``sample``
(one sampling run on a graph file), ``experiment`` (full grid from a JSON
config), ``report`` (re-aggregate an emitted records.csv).

Exit codes: 0 ok, 1 usage error, 2 data error, 3 run failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .generator import GenerationError, SyntheticSpec, generate
from .graph import GraphFormatError, drop_missing, save_attributes, save_edge_list
from .harness import (
    ExperimentConfig,
    ExperimentError,
    aggregate,
    load_graph,
    load_records,
    report_emit,
    report_from_records,
    run_experiment,
)
from .samplers import _ALIASES, SamplerSpec, SamplingError, run_sampler

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUN = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="attrsample",
                     description="Task-driven link-trace sampling of attributed networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="synthesize an attributed graph")
    gen.add_argument("--spec", required=True, help="JSON file with generator parameters")
    gen.add_argument("--out", required=True, help="output directory")

    smp = sub.add_parser("sample", help="run one sampler and print the node ids")
    smp.add_argument("--graph", required=True, help="edge-list file")
    smp.add_argument("--attrs", help="attribute CSV file")
    smp.add_argument("--sampler", required=True, help="sampler kind, e.g. uni, bfs, ixs")
    smp.add_argument("--frac", type=float, required=True, help="sample fraction in (0, 1]")
    smp.add_argument("--seed", type=int, required=True, help="seed node id")
    smp.add_argument("--rng-seed", type=int, default=0, help="random seed (default 0)")
    smp.add_argument("--params", default="{}", help="sampler parameters as JSON")

    exp = sub.add_parser("experiment", help="run a sampler/task grid")
    exp.add_argument("--config", required=True, help="JSON experiment config")
    exp.add_argument("--out", help="output directory (overrides the config)")

    rep = sub.add_parser("report", help="re-aggregate an emitted records.csv")
    rep.add_argument("--in", dest="in_dir", required=True, help="directory with records.csv")
    return parser


def _cmd_generate(args):
    with open(args.spec, encoding="utf-8") as fh:
        spec = SyntheticSpec.from_json(json.load(fh))
    graph, report = generate(spec)
    os.makedirs(args.out, exist_ok=True)
    save_edge_list(graph, os.path.join(args.out, "edges.txt"))
    save_attributes(graph, os.path.join(args.out, "attributes.csv"))
    with open(os.path.join(args.out, "generation.json"), "w", encoding="utf-8") as fh:
        json.dump({"spec": spec.to_json(), "report": report}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps(report, sort_keys=True))
    return EXIT_OK


def _cmd_sample(args):
    if not 0 < args.frac <= 1:
        raise UsageError(f"--frac must lie in (0, 1], got {args.frac}")
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--params is not valid JSON: {exc}") from None
    if args.sampler.lower() not in _ALIASES:
        raise UsageError(f"unknown sampler kind {args.sampler!r}")
    graph = load_graph(args.graph, args.attrs)
    if graph.has_missing():
        graph = drop_missing(graph)
    try:
        seed = graph.labels.index(str(args.seed))
    except ValueError:
        raise GraphFormatError(f"seed node {args.seed} not in the graph") from None
    spec = SamplerSpec(kind=args.sampler, params=params, rng_seed=args.rng_seed)
    size = max(1, round(args.frac * graph.n))
    sample = run_sampler(graph, spec, seed, size)
    for v in sample.nodes:
        print(graph.labels[v])
    return EXIT_OK


def _cmd_experiment(args):
    with open(args.config, encoding="utf-8") as fh:
        config = ExperimentConfig.from_json(json.load(fh))
    out_dir = args.out or config.output_dir
    report = run_experiment(config)
    paths = report_emit(report, out_dir)
    print(json.dumps({"records": len(report.records),
                      "failed_cells": len(report.errors),
                      "files": paths}, sort_keys=True))
    return EXIT_OK


def _cmd_report(args):
    records = load_records(os.path.join(args.in_dir, "records.csv"))
    report = report_from_records(records)
    aggregates = aggregate(report)
    for sampler in report.sampler_labels:
        for metric, agg in sorted(aggregates.get(sampler, {}).items()):
            print(f"{sampler}\t{metric}\toverall={agg['overall']:.6f}")
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "sample": _cmd_sample,
    "experiment": _cmd_experiment,
    "report": _cmd_report,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (SamplingError, GenerationError, ExperimentError, ValueError) as exc:
        print(f"run failure: {exc}", file=sys.stderr)
        return EXIT_RUN


if __name__ == "__main__":
    sys.exit(main())
