"""Predictive hyperparameter tuning.

Partially train every candidate configuration, predict each one's final
validation metric from its early metric with a simple linear regression,
fully train only the predicted top performers, and compare the result
against equal-budget random search.
"""

from ._core import (
    BudgetLedger,
    Configuration,
    DataError,
    Dataset,
    EarlyPredictor,
    ExperimentConfig,
    MetricError,
    SearchSpace,
    SplitPair,
    Summary,
    TTestResult,
    TuneResult,
    ValidationError,
    __version__,
    accuracy,
    auc_roc,
    config_at,
    default_boosted_space,
    emit_report_files,
    enumerate_grid,
    fit_early_predictor,
    load_csv,
    make_two_gaussian_dataset,
    pearson,
    predict,
    run_comparison,
    run_pho_once,
    run_pool_once,
    run_random_search_once,
    sample_without_replacement,
    split,
    summarize,
    t_test_paired,
    t_test_two_tailed,
    validate_config,
)

__all__ = [
    "BudgetLedger",
    "Configuration",
    "DataError",
    "Dataset",
    "EarlyPredictor",
    "ExperimentConfig",
    "MetricError",
    "SearchSpace",
    "SplitPair",
    "Summary",
    "TTestResult",
    "TuneResult",
    "ValidationError",
    "__version__",
    "accuracy",
    "auc_roc",
    "config_at",
    "default_boosted_space",
    "emit_report_files",
    "enumerate_grid",
    "fit_early_predictor",
    "load_csv",
    "make_two_gaussian_dataset",
    "pearson",
    "predict",
    "run_comparison",
    "run_pho_once",
    "run_pool_once",
    "run_random_search_once",
    "sample_without_replacement",
    "split",
    "summarize",
    "t_test_paired",
    "t_test_two_tailed",
    "validate_config",
]
