"""Smoke tests for the Python bindings: each main operation is exercised once
and cross-checked against an independent computation where one is cheap."""

import json
import math

import pytest

import pho


def test_space_roundtrip():
    space = pho.SearchSpace([("a", [1, 2]), ("b", [0.1, 0.2, 0.3])])
    assert space.grid_size == 6
    grid = pho.enumerate_grid(space)
    assert [c.index for c in grid] == list(range(6))
    assert grid[0].assignments == {"a": 1, "b": 0.1}
    assert grid[5].assignments == {"a": 2, "b": 0.3}

    config = pho.validate_config(space, {"a": 1, "b": 0.2})
    assert config.index == 1
    with pytest.raises(ValueError, match="missing axis"):
        pho.validate_config(space, {"a": 1})

    reloaded = pho.SearchSpace.from_json_text(space.to_json_text())
    assert reloaded.grid_size == 6


def test_default_space_size():
    assert pho.default_boosted_space().grid_size == 540


def test_sampling_reproducible():
    space = pho.SearchSpace([("x", list(range(30)))])
    a = pho.sample_without_replacement(space, 10, seed=42)
    b = pho.sample_without_replacement(space, 10, seed=42)
    assert [c.index for c in a] == [c.index for c in b]
    assert len({c.index for c in a}) == 10


def test_auc_matches_pair_counting():
    scores = [0.2, 0.8, 0.5, 0.5, 0.9, 0.1]
    labels = [0, 1, 0, 1, 1, 0]
    wins = ties = total = 0
    for si, yi in zip(scores, labels):
        if yi != 1:
            continue
        for sj, yj in zip(scores, labels):
            if yj != 0:
                continue
            total += 1
            wins += si > sj
            ties += si == sj
    assert pho.auc_roc(scores, labels) == pytest.approx(
        (wins + 0.5 * ties) / total, abs=1e-12
    )
    with pytest.raises(ValueError):
        pho.auc_roc([0.5, 0.6], [1, 1])


def test_accuracy_threshold_convention():
    assert pho.accuracy([0.5], [1]) == 1.0
    assert pho.accuracy([0.5], [0]) == 0.0


def test_predictor_fit_and_predict():
    fit = pho.fit_early_predictor([(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)])
    assert fit.slope == 2.0
    assert fit.intercept == 1.0
    assert pho.predict(fit, 0.5) == 2.0
    assert pho.pearson([(0, 0), (1, 1), (2, 0), (3, 1)]) == pytest.approx(
        0.4472135955, abs=1e-9
    )


def test_t_test_against_scipy():
    scipy_stats = pytest.importorskip("scipy.stats")
    a = [0.81, 0.76, 0.79, 0.84, 0.80, 0.77]
    b = [0.78, 0.82, 0.75, 0.79, 0.81]
    ours = pho.t_test_two_tailed(a, b)
    reference = scipy_stats.ttest_ind(a, b, equal_var=False)
    assert ours.t_statistic == pytest.approx(reference.statistic, abs=1e-10)
    assert ours.p_value == pytest.approx(reference.pvalue, abs=1e-10)

    paired = pho.t_test_paired(a[:5], b)
    ref_paired = scipy_stats.ttest_rel(a[:5], b)
    assert paired.p_value == pytest.approx(ref_paired.pvalue, abs=1e-10)


def test_summary_quartiles():
    summary = pho.summarize([1.0, 2.0, 3.0, 4.0])
    assert summary.median == 2.5
    assert summary.q1 == 1.75
    assert summary.q3 == 3.25
    assert summary.n == 4


def test_dataset_split_and_synthetic():
    dataset = pho.make_two_gaussian_dataset(100, 3, 1.5, seed=7)
    assert dataset.row_count == 100
    assert dataset.column_count == 3
    pair = pho.split(dataset, 0.67, seed=9)
    assert pair.train.row_count == 67
    assert pair.test.row_count == 33


def test_csv_loading(tmp_path):
    path = tmp_path / "demo.csv"
    path.write_text("color,value,label\nx,1.5,yes\ny,2.0,no\nx,0.5,yes\n")
    dataset = pho.load_csv(str(path), "label", "yes")
    assert dataset.column_names == ["color=x", "color=y", "value"]
    assert dataset.labels == [1, 0, 1]


ANALYTIC_CONFIG = {
    "learner": "analytic",
    "space_file": "SPACE",
    "full_budget": 8,
    "pho": {"n": 3, "m": 2, "k": 2},
    "trials": 4,
    "base_seed": 11,
}

ANALYTIC_SPACE = [
    {"name": "final_value", "values": [0.91, 0.34, 0.55, 0.72, 0.18, 0.66,
                                       0.42, 0.87, 0.29, 0.61, 0.48, 0.77]},
    {"name": "rate", "values": [0.4]},
    {"name": "noise_sd", "values": [0.03]},
]


def analytic_config(tmp_path, **overrides):
    space_path = tmp_path / "space.json"
    space_path.write_text(json.dumps(ANALYTIC_SPACE))
    doc = dict(ANALYTIC_CONFIG, **overrides)
    doc["space_file"] = str(space_path)
    return pho.ExperimentConfig.from_json(json.dumps(doc))


def test_tune_pho_count_contract(tmp_path):
    config = analytic_config(tmp_path)
    result = pho.run_pho_once(config)
    assert len(result.fully_trained) == 5  # n + k
    assert len(result.partially_trained_only) == 7
    assert result.ledger.total_cost_units == 5 * 8 + 7 * 2
    assert not result.predictor.degenerate

    as_dict = result.to_dict()
    assert as_dict["kind"] == "tune_result"
    assert as_dict["counts"]["fully_trained"] == 5


def test_random_search_budget(tmp_path):
    config = analytic_config(tmp_path)
    result = pho.run_random_search_once(config, budget=40.0)
    assert len(result.fully_trained) == 5  # floor(40 / 8)
    assert result.ledger.total_cost_units == 40.0


def test_pool_ranks_every_candidate(tmp_path):
    config = analytic_config(tmp_path)
    pool = pho.run_pool_once(config)
    assert len(pool) == 12
    finals = [final for _, _, final in pool]
    assert finals == sorted(finals)


def test_comparison_report_deterministic(tmp_path):
    config = analytic_config(tmp_path)
    report = pho.run_comparison(config)
    assert report["kind"] == "comparison_report"
    assert len(report["rows"]) == 4
    assert report["failed_trials"] == 0
    assert report["t_tests"]["welch"] is not None
    assert report["t_tests"]["paired"] is not None
    again = pho.run_comparison(config)
    assert report == again


def test_emit_report_files(tmp_path):
    config = analytic_config(tmp_path, trials=2)
    out_dir = tmp_path / "out"
    pho.emit_report_files(config, str(out_dir))
    for name in ("report.json", "trials.csv", "fig1_traces.csv", "fig2_pool.csv",
                 "fig3_scatter.csv"):
        assert (out_dir / name).exists(), name
    report = json.loads((out_dir / "report.json").read_text())
    assert len(report["rows"]) == 2
    fig2 = (out_dir / "fig2_pool.csv").read_text().splitlines()
    assert fig2[0] == "rank,final_metric"
    assert len(fig2) == 1 + 12
