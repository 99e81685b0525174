"""Subtractive-clustering fuzzy rule-based regression."""

from .clustering import (
    ClusterSet,
    FcmParams,
    SbcParams,
    fcm_refine,
    potentials,
    subtractive_cluster,
)
from .rules import (
    FuzzyRuleBase,
    SubtractiveFuzzyRegressor,
    build_rulebase,
    firing_log,
    load_rulebase,
    predict_frbs,
    predict_rules,
    save_rulebase,
)

__all__ = [
    "ClusterSet", "FcmParams", "SbcParams", "fcm_refine", "potentials", "subtractive_cluster",
    "FuzzyRuleBase", "SubtractiveFuzzyRegressor", "build_rulebase", "firing_log",
    "load_rulebase", "predict_frbs", "predict_rules", "save_rulebase",
]
