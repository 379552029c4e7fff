import json

import numpy as np
import pytest

from attrsample.generator import SyntheticSpec
from attrsample.harness import (
    DEFAULT_FRACTIONS,
    RECORDS_HEADER,
    ExperimentConfig,
    ExperimentError,
    ExperimentReport,
    Record,
    aggregate,
    compare,
    load_records,
    paired_permutation_p,
    report_emit,
    report_from_records,
    run_experiment,
)
from attrsample.samplers import SamplerSpec
from attrsample.tasks import TaskSpec

TOL = 1e-9

WS_SPEC = SyntheticSpec(structure="ws", n=30, ws_k=4, ws_p=0.1, k=3,
                        skew=0.0, purity=10.0, assortativity=0.0, rng_seed=1)


def ws_config(**kw):
    base = dict(
        samplers=[SamplerSpec(kind="bfs")],
        tasks=[TaskSpec(task="cluster", mode="combo_coverage")],
        synthetic=WS_SPEC,
        fractions=(0.2,),
        repetitions=1,
        master_seed=42,
    )
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(samplers=[], synthetic=WS_SPEC)
        with pytest.raises(ValueError):
            ws_config(tasks=[])
        with pytest.raises(ValueError):
            ws_config(repetitions=0)
        with pytest.raises(ValueError):
            ws_config(fractions=(0.5, 1.5))
        with pytest.raises(ValueError):
            ws_config(synthetic=None)  # no graph source at all
        with pytest.raises(ValueError):
            ws_config(edge_list="edges.txt")  # two graph sources

    def test_default_fractions_are_one_to_ten_percent(self):
        assert DEFAULT_FRACTIONS == tuple(l / 100 for l in range(1, 11))

    def test_json_round_trip(self):
        config = ws_config(repetitions=3, fractions=(0.1, 0.2))
        clone = ExperimentConfig.from_json(config.to_json())
        assert clone == config


class TestRunExperiment:
    def test_single_cell_yields_one_record_per_metric(self):
        report = run_experiment(ws_config())
        assert len(report.records) == 1  # one metric, one cell
        rec = report.records[0]
        assert rec.metric == "cluster_coverage"
        assert rec.repetition == 0
        assert rec.fraction == 0.2

    def test_paired_seed_nodes_across_samplers(self):
        config = ws_config(
            samplers=[SamplerSpec(kind="bfs"), SamplerSpec(kind="xs")],
            repetitions=4, fractions=(0.1, 0.2))
        report = run_experiment(config)
        assert report.sampler_labels == ["bfs", "xs"]
        for rec in report.records:
            assert rec.seed_node == report.seed_nodes[rec.repetition]

    def test_duplicate_sampler_kinds_get_distinct_labels(self):
        config = ws_config(samplers=[SamplerSpec(kind="bfs"),
                                     SamplerSpec(kind="bfs")])
        report = run_experiment(config)
        assert report.sampler_labels == ["bfs", "bfs#2"]

    def test_rerun_is_byte_identical(self, tmp_path):
        config = ws_config(samplers=[SamplerSpec(kind="bfs"),
                                     SamplerSpec(kind="rw")],
                           repetitions=3, fractions=(0.1, 0.3))
        paths_a = report_emit(run_experiment(config), tmp_path / "a")
        paths_b = report_emit(run_experiment(config), tmp_path / "b")
        for key in ("records", "curves", "summary"):
            with open(paths_a[key], "rb") as fa, open(paths_b[key], "rb") as fb:
                assert fa.read() == fb.read()

    def test_too_many_failed_cells(self):
        # a whole-graph sample leaves no classification evaluation nodes,
        # so every cell fails and the 10% tolerance is exceeded
        config = ws_config(
            tasks=[TaskSpec(task="classify", target="cat0",
                            features=["x0", "x1"])],
            fractions=(1.0,))
        with pytest.raises(ExperimentError):
            run_experiment(config)


class TestPermutationTest:
    def test_identical_samplers_tie(self):
        config = ws_config(samplers=[SamplerSpec(kind="bfs"),
                                     SamplerSpec(kind="bfs")],
                           repetitions=3, fractions=(0.1, 0.2))
        report = run_experiment(config)
        res = compare(report, "cluster_coverage", "bfs", "bfs#2")
        assert abs(res["mean_gap"]) < TOL
        assert res["p_value"] > 0.999

    def test_constant_shift_reaches_resolution_floor(self):
        records = []
        rng_vals = np.random.default_rng(0).random(20)
        for rep, base in enumerate(rng_vals):
            records.append(Record("a", rep, rep, 0, 0.1, "m", base + 0.1))
            records.append(Record("b", rep, rep, 0, 0.1, "m", base))
        report = report_from_records(records)
        res = compare(report, "m", "a", "b", resamples=2000)
        assert abs(res["mean_gap"] - 0.1) < TOL
        assert res["cells"] == 20
        assert res["p_value"] <= 2 / 2001

    def test_single_cell_is_inconclusive(self):
        assert paired_permutation_p([0.7]) == 1.0
        report = report_from_records([Record("a", 0, 0, 0, 0.1, "m", 1.0),
                                      Record("b", 0, 0, 0, 0.1, "m", 0.0)])
        assert compare(report, "m", "a", "b")["p_value"] == 1.0

    def test_no_matched_cells(self):
        report = report_from_records([Record("a", 0, 0, 0, 0.1, "m", 1.0)])
        with pytest.raises(ValueError):
            compare(report, "m", "a", "b")

    def test_sign_symmetric(self):
        diffs = np.random.default_rng(1).normal(0, 1, size=12)
        p = paired_permutation_p(diffs, resamples=4000)
        assert 0 < p <= 1


class TestAggregate:
    def test_per_fraction_and_overall(self):
        records = [
            Record("a", 0, 0, 0, 0.1, "m", 0.2),
            Record("a", 1, 1, 0, 0.1, "m", 0.4),
            Record("a", 0, 0, 0, 0.2, "m", 0.8),
        ]
        agg = aggregate(report_from_records(records))
        m = agg["a"]["m"]
        assert abs(m["per_fraction"][0.1]["mean"] - 0.3) < TOL
        assert m["per_fraction"][0.1]["n"] == 2
        assert m["per_fraction"][0.2]["stderr"] == 0.0
        assert abs(m["overall"] - (0.3 + 0.8) / 2) < TOL


class TestEmission:
    def test_records_header_contract(self, tmp_path):
        report = run_experiment(ws_config())
        paths = report_emit(report, tmp_path)
        with open(paths["records"]) as fh:
            assert fh.readline().rstrip("\n") == \
                "sampler,seed_node,rng_seed,fraction,metric,value"

    def test_empty_report_emits_headers_only(self, tmp_path):
        report = ExperimentReport(ws_config(), [], [], [], ["bfs"], None)
        paths = report_emit(report, tmp_path)
        with open(paths["records"]) as fh:
            assert fh.read() == RECORDS_HEADER + "\n"
        with open(paths["curves"]) as fh:
            assert fh.read() == "sampler,metric,fraction,mean,stderr,n\n"

    def test_summary_round_trips(self, tmp_path):
        config = ws_config(repetitions=2, fractions=(0.1, 0.2))
        report = run_experiment(config)
        paths = report_emit(report, tmp_path)
        with open(paths["summary"]) as fh:
            summary = json.load(fh)
        assert ExperimentConfig.from_json(summary["config"]) == config
        agg = aggregate(report)
        for sampler, metrics in summary["aggregates"].items():
            for metric, row in metrics.items():
                assert abs(row["overall"] - agg[sampler][metric]["overall"]) < TOL

    def test_records_parse_back_losslessly(self, tmp_path):
        config = ws_config(samplers=[SamplerSpec(kind="bfs"),
                                     SamplerSpec(kind="ff")],
                           repetitions=3, fractions=(0.1, 0.2))
        report = run_experiment(config)
        paths = report_emit(report, tmp_path)
        loaded = load_records(paths["records"])
        original = [(r.sampler, r.seed_node, r.rng_seed, r.fraction, r.metric, r.value)
                    for r in report.records]
        parsed = [(r.sampler, r.seed_node, r.rng_seed, r.fraction, r.metric, r.value)
                  for r in loaded]
        assert parsed == original
        # aggregation over the parsed records matches the in-memory one
        agg_a = aggregate(report)
        agg_b = aggregate(report_from_records(loaded))
        for sampler in agg_a:
            for metric in agg_a[sampler]:
                assert abs(agg_a[sampler][metric]["overall"]
                           - agg_b[sampler][metric]["overall"]) < TOL
