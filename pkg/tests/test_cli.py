import json
from pathlib import Path

import numpy as np
import pytest

from graphevolve.cli import main
from graphevolve.datasets import load_tu_dataset, save_tu_dataset
from graphevolve.errors import ConfigError
from graphevolve.evolve import EvolutionReport, IterationRecord
from graphevolve.experiment import (
    CellResult,
    ExperimentConfig,
    TrialResult,
    derive_seed,
    emit_reports,
    result_to_dict,
    run_experiment,
)
from graphevolve.synthetic import make_demo_dataset


@pytest.fixture(scope="module")
def demo_dir(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("demo")
    save_tu_dataset(make_demo_dataset(n_per_class=10, seed=3), path)
    return path


def small_config(demo_dir: Path, **overrides) -> ExperimentConfig:
    defaults = dict(
        dataset_dir=str(demo_dir),
        dataset="DEMO",
        mappings=("random",),
        features=("spectral",),
        classifiers=("knn",),
        dim=12,
        folds=2,
        repeats=1,
        iterations=1,
        seed=5,
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


class TestStatsCommand:
    def test_reports_fixture_statistics(self, fixture_dir, capsys):
        assert main(["stats", "--dataset-dir", str(fixture_dir), "--dataset", "FIXTURE"]) == 0
        out = capsys.readouterr().out
        assert "graphs: 2" in out
        assert "classes: 2" in out
        assert "avg_vertices: 3.0000" in out
        assert "avg_edges: 2.5000" in out
        assert "bias: 50.00%" in out

    def test_missing_dataset_exits_2(self, tmp_path, capsys):
        assert main(["stats", "--dataset-dir", str(tmp_path), "--dataset", "NOPE"]) == 2
        assert "data error" in capsys.readouterr().err


class TestAugmentCommand:
    def test_unaugmentable_dataset_exits_3(self, tmp_path, capsys):
        # complete graphs admit no edge swap, so no variants can be produced
        from graphevolve.datasets import GraphDataset
        from graphevolve.graph import Graph

        k3 = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
        k4 = Graph.from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
        save_tu_dataset(GraphDataset("FULL", (k3, k4), (0, 1), {0: 0, 1: 1}), tmp_path)
        rc = main([
            "augment", "--dataset-dir", str(tmp_path), "--dataset", "FULL",
            "--mapping", "random", "--out-dir", str(tmp_path / "out"),
        ])
        assert rc == 3
        assert "no graph produced" in capsys.readouterr().err

    def test_writes_parseable_tu_files(self, demo_dir, tmp_path, capsys):
        rc = main([
            "augment", "--dataset-dir", str(demo_dir), "--dataset", "DEMO",
            "--mapping", "random", "--seed", "3", "--out-dir", str(tmp_path),
        ])
        assert rc == 0
        original = load_tu_dataset(demo_dir, "DEMO")
        augmented = load_tu_dataset(tmp_path, "DEMO_aug")
        assert len(augmented) == len(original)
        for orig, aug in zip(original.graphs, augmented.graphs):
            assert aug.vertex_count == orig.vertex_count
            assert aug.edge_count == orig.edge_count
        assert augmented.labels == original.labels


class TestRunCommand:
    def test_smoke_run_writes_reports(self, demo_dir, tmp_path, capsys):
        out = tmp_path / "report.json"
        summary = tmp_path / "summary.csv"
        rc = main([
            "run", "--dataset-dir", str(demo_dir), "--dataset", "DEMO",
            "--folds", "2", "--repeats", "1", "--iterations", "1", "--dim", "12",
            "--seed", "7", "--out", str(out), "--csv", str(summary),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert len(payload["cells"]) == 1
        for trial in payload["cells"][0]["trials"]:
            assert 0.0 <= trial["baseline_test_accuracy"] <= 1.0
            assert 0.0 <= trial["final_test_accuracy"] <= 1.0
        lines = summary.read_text().strip().splitlines()
        assert len(lines) == 1 + 1 + 1  # header, one cell, one avg row

    def test_identical_runs_are_byte_identical(self, demo_dir, tmp_path):
        paths = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.json"
            summary = tmp_path / f"{tag}.csv"
            rc = main([
                "run", "--dataset-dir", str(demo_dir), "--dataset", "DEMO",
                "--folds", "2", "--repeats", "1", "--iterations", "1", "--dim", "12",
                "--seed", "11", "--out", str(out), "--csv", str(summary),
            ])
            assert rc == 0
            paths.append((out.read_bytes(), summary.read_bytes()))
        assert paths[0] == paths[1]

    def test_bad_flag_value_exits_1(self, demo_dir, capsys):
        rc = main([
            "run", "--dataset-dir", str(demo_dir), "--dataset", "DEMO",
            "--mapping", "bogus",
        ])
        assert rc == 1
        assert "configuration error" in capsys.readouterr().err

    def test_unknown_subcommand_exits_1(self, capsys):
        assert main(["frobnicate"]) == 1


class TestExperimentHarness:
    def test_trial_grid_shape(self, demo_dir):
        cfg = small_config(demo_dir, repeats=2, folds=2)
        result = run_experiment(cfg)
        assert len(result.cells) == 1
        assert len(result.cells[0].trials) == 4  # repeats * folds
        pairs = {(t.repeat, t.fold) for t in result.cells[0].trials}
        assert pairs == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_multiple_cells(self, demo_dir):
        cfg = small_config(
            demo_dir, mappings=("random", "motif-similarity"), classifiers=("knn", "logreg")
        )
        result = run_experiment(cfg)
        assert len(result.cells) == 4
        combos = {(c.mapping, c.classifier) for c in result.cells}
        assert len(combos) == 4

    def test_baseline_and_evolved_on_identical_test_indices(self, demo_dir):
        # same trial seed -> the baseline inside each report was evaluated
        # on the same fold as the evolved model by construction; accuracies
        # must be valid probabilities in all records
        result = run_experiment(small_config(demo_dir, iterations=2))
        for trial in result.cells[0].trials:
            assert 0.0 <= trial.report.baseline_test_accuracy <= 1.0
            for rec in trial.report.iterations:
                assert 0.0 <= rec.test_accuracy <= 1.0

    def test_invalid_config_rejected(self, demo_dir):
        with pytest.raises(ConfigError):
            small_config(demo_dir, folds=1)
        with pytest.raises(ConfigError):
            small_config(demo_dir, seed=-3)
        with pytest.raises(ConfigError):
            small_config(demo_dir, mappings=("bogus",))

    def test_derive_seed_is_collision_free_on_grid(self):
        seeds = {derive_seed(99, r, f) for r in range(10) for f in range(5)}
        assert len(seeds) == 50
        assert derive_seed(99, 1, 2) == derive_seed(99, 1, 2)
        assert derive_seed(99, 1, 2) != derive_seed(99, 2, 1)

    def test_worker_count_env_override(self, monkeypatch):
        from graphevolve.experiment import WORKERS_ENV, worker_count

        monkeypatch.delenv(WORKERS_ENV, raising=False)
        assert worker_count() == 1
        monkeypatch.setenv(WORKERS_ENV, "4")
        assert worker_count() == 4
        monkeypatch.setenv(WORKERS_ENV, "soon")
        with pytest.raises(ConfigError):
            worker_count()

    def test_parallel_workers_match_sequential(self, demo_dir, monkeypatch):
        from graphevolve.experiment import WORKERS_ENV

        cfg = small_config(demo_dir, iterations=1)
        sequential = run_experiment(cfg)
        monkeypatch.setenv(WORKERS_ENV, "2")
        parallel = run_experiment(cfg)
        assert result_to_dict(sequential) == result_to_dict(parallel)


def fake_cell(baseline: float, evolved: float) -> CellResult:
    report = EvolutionReport(
        baseline_val_accuracy=baseline,
        baseline_test_accuracy=baseline,
        iterations=(
            IterationRecord(
                pool_size=10, accepted=5, threshold=0.5, train_size=20,
                val_accuracy=evolved, test_accuracy=evolved,
            ),
        ),
    )
    return CellResult(
        mapping="random", features="spectral", classifier="knn",
        trials=(TrialResult(repeat=0, fold=0, seed=1, report=report),),
    )


class TestReportEmission:
    def test_relative_improvement_arithmetic(self):
        cell = fake_cell(baseline=0.80, evolved=0.84)
        assert cell.relative_improvement == pytest.approx(0.05)

    def test_zero_iteration_reports_keep_baseline(self, demo_dir, tmp_path):
        cfg = small_config(demo_dir, iterations=0)
        result = run_experiment(cfg)
        cell = result.cells[0]
        assert cell.evolved_mean == pytest.approx(cell.baseline_mean)
        out = tmp_path / "r.json"
        csv_path = tmp_path / "r.csv"
        emit_reports(result, out, csv_path)
        assert out.exists() and csv_path.exists()

    def test_summary_row_per_combination(self, demo_dir, tmp_path):
        cfg = small_config(demo_dir, mappings=("random", "motif-similarity"))
        result = run_experiment(cfg)
        csv_path = tmp_path / "s.csv"
        emit_reports(result, None, csv_path)
        lines = csv_path.read_text().strip().splitlines()
        assert len(lines) == 1 + 2 + 2  # header + cells + per-mapping avg rows

    def test_json_round_trips(self, demo_dir):
        result = run_experiment(small_config(demo_dir))
        payload = result_to_dict(result)
        assert json.loads(json.dumps(payload)) == payload
