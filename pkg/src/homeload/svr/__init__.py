"""Epsilon-SVR trained by sequential minimal optimization."""

from .kernels import KINDS, KernelSpec, kernel_block, kernel_diag, kernel_eval, kernel_row
from .model import (
    SMORegressor,
    SvrHyperParams,
    SvrModel,
    decision_function,
    kkt_report,
    load_svr,
    predict_svr,
    save_svr,
    train_svr,
)
from .smo import SmoResult, solve

__all__ = [
    "KINDS", "KernelSpec", "kernel_block", "kernel_diag", "kernel_eval", "kernel_row",
    "SMORegressor", "SvrHyperParams", "SvrModel", "decision_function", "kkt_report",
    "load_svr", "predict_svr", "save_svr", "train_svr", "SmoResult", "solve",
]
