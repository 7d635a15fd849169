import json

import pytest

from chordlab.errors import CostCapExceededError, InvalidConfigError
from chordlab.experiments import (
    DEFAULT_COST_CAP,
    ExperimentConfig,
    estimate_cost,
    run_experiment,
)


def _cfg(**kw):
    base = dict(kind="simple_chords", n=50, replicas=400, seed=7)
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfigValidation:
    def test_unknown_kind(self):
        with pytest.raises(InvalidConfigError):
            _cfg(kind="nope")

    def test_bad_replicas(self):
        with pytest.raises(InvalidConfigError):
            _cfg(replicas=0)

    def test_bad_param(self):
        with pytest.raises(InvalidConfigError):
            _cfg(kind="length_class", params={"j": 49})

    def test_model_equivalence_cap(self):
        with pytest.raises(InvalidConfigError):
            _cfg(kind="model_equivalence", n=7)

    def test_cost_cap(self):
        big = ExperimentConfig(
            kind="scc_trivial", n=100_000, replicas=10_000_000, seed=0
        )
        assert estimate_cost(big) > DEFAULT_COST_CAP
        with pytest.raises(CostCapExceededError):
            run_experiment(big)


class TestDeterminism:
    def test_rerun_identical(self):
        a = run_experiment(_cfg()).to_json(include_timing=False)
        b = run_experiment(_cfg()).to_json(include_timing=False)
        assert a == b

    def test_chunking_invariant(self):
        a = run_experiment(_cfg(chunk_size=7)).to_json(include_timing=False)
        b = run_experiment(_cfg(chunk_size=128)).to_json(include_timing=False)
        assert a == b

    def test_workers_invariant(self):
        a = run_experiment(_cfg(chunk_size=50, workers=1)).to_json(include_timing=False)
        b = run_experiment(_cfg(chunk_size=50, workers=3)).to_json(include_timing=False)
        assert a == b

    def test_seed_changes_results(self):
        a = run_experiment(_cfg(seed=1)).to_json(include_timing=False)
        b = run_experiment(_cfg(seed=2)).to_json(include_timing=False)
        assert a != b


class TestReports:
    def test_schema_and_fields(self):
        rep = run_experiment(_cfg())
        obj = json.loads(rep.to_json())
        assert obj["schema"] == "chordlab-report/1"
        assert obj["config"]["kind"] == "simple_chords"
        assert obj["config"]["seed"] == 7
        assert "timing" in obj
        assert obj["timing"]["throughput_replicas_per_s"] > 0
        assert "reference" in obj and obj["reference"]

    def test_empirical_probs_sum_to_one(self):
        rep = run_experiment(_cfg(replicas=500))
        total = sum(row["empirical"] for row in rep.results["rows"])
        assert abs(total - 1.0) <= 1e-12

    def test_timing_excluded_on_request(self):
        rep = run_experiment(_cfg())
        assert "timing" not in json.loads(rep.to_json(include_timing=False))

    def test_csv_rows(self):
        rep = run_experiment(_cfg(kind="degree_cdf", n=60, replicas=300))
        csv = rep.to_csv()
        lines = csv.strip().split("\n")
        assert lines[0].startswith("b,")
        assert len(lines) == 10  # header + 9 default grid points

    def test_reference_computed_in_run(self):
        rep = run_experiment(_cfg(kind="degree_cdf", n=60, replicas=300))
        from chordlab.formulas import degree_cdf_limit

        for row in rep.results["rows"]:
            assert row["reference"] == degree_cdf_limit(row["b"])


class TestKindsSmoke:
    @pytest.mark.parametrize(
        "kind,params",
        [
            ("degree_cdf", {}),
            ("simple_chords", {}),
            ("length_class", {"j": 2}),
            ("joint_lengths", {"k": 1}),
            ("monolithic_fraction", {}),
            ("kcore_vs_len", {"k": 2}),
            ("zk_concentration", {"k": 2}),
            ("scc_trivial", {}),
            ("len_strong_conn", {}),
            ("balanced_clique", {}),
            ("evolution_switching", {"m0": 10}),
            ("extremal_scaling", {}),
        ],
    )
    def test_runs_and_serializes(self, kind, params):
        cfg = ExperimentConfig(
            kind=kind, n=30, replicas=50, seed=3, params=params
        )
        rep = run_experiment(cfg)
        obj = json.loads(rep.to_json())
        assert obj["schema"] == "chordlab-report/1"
        assert rep.to_csv() == "" or rep.to_csv().count("\n") >= 2

    def test_model_equivalence_runs(self):
        cfg = ExperimentConfig(
            kind="model_equivalence", n=3, replicas=2000, seed=3
        )
        rep = run_experiment(cfg)
        assert rep.distances["joint_tv"] < 0.2


class TestWhpRegimes:
    def test_len_strong_conn_high_frequency(self):
        # Len>=k inside a coin-flip orientation is strongly connected in
        # almost every replica once k reaches ~2 log n
        rep = run_experiment(
            ExperimentConfig(
                kind="len_strong_conn", n=500, replicas=150, seed=11,
                params={"k_grid": [12, 25]},
            )
        )
        for row in rep.results["rows"]:
            assert row["strongly_connected_fraction"] >= 0.95

    def test_balanced_clique_found_whp(self):
        rep = run_experiment(
            ExperimentConfig(kind="balanced_clique", n=400, replicas=300, seed=12)
        )
        assert rep.results["rows"][0]["balanced_clique_fraction"] >= 0.95
