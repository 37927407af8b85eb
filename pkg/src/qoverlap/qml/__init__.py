"""Quantum-kernel classification and online learning on the overlap circuit."""

from .bootstrap import BootstrapResult, bootstrap_accuracy, resample_counts
from .datasets import DEFAULT_PARAMS, KINDS, Dataset, gen_dataset, train_test_split
from .kernel import KernelResult, exact_kernel, kernel_from_counts, kernel_matrix, kernel_to_csv, sampled_kernel
from .online import (SpsaConfig, SpsaTrace, gain_at, init_t, overlap_cost, perturb_at, run_online_learning,
                     spsa_step, run_learning_tasks, summarize_traces, summary_json)
from .pipeline import ClassificationResult, classify, classify_kind
from .svm import DEFAULT_C, SvmModel, accuracy, decision_function, dual_objective, svm_predict, svm_train

__all__ = [
    "BootstrapResult", "bootstrap_accuracy", "resample_counts",
    "DEFAULT_PARAMS", "KINDS", "Dataset", "gen_dataset", "train_test_split",
    "KernelResult", "exact_kernel", "kernel_from_counts", "kernel_matrix", "kernel_to_csv", "sampled_kernel",
    "SpsaConfig", "SpsaTrace", "gain_at", "init_t", "overlap_cost", "perturb_at", "run_online_learning",
    "spsa_step", "run_learning_tasks", "summarize_traces", "summary_json",
    "ClassificationResult", "classify", "classify_kind",
    "DEFAULT_C", "SvmModel", "accuracy", "decision_function", "dual_objective", "svm_predict", "svm_train",
]
