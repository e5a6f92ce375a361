"""Sparse optimistic information directed sampling for sparse linear bandits."""

__version__ = "0.1.0"

from .env import History, HistoryRecord, Instance, RegretTrace, cumulative_regret, gap, make_benchmark_instance, pull
from .policy import ExploratoryDesign, Policy, exploratory_design, fgts_policy, mixture_policy, sample_action, soids_policy
from .posterior import GridPosterior, ParameterSamples, SamplerConfig, grid_posterior, mcmc_sample
from .prior import RelaxedPrior, SubsetPrior
from .soids import SoidsAgent, SoidsConfig, run_soids, soids_round
from .surrogate import SurrogateStats, info_ratio, surrogate_stats

__all__ = [
    "ExploratoryDesign", "GridPosterior", "History", "HistoryRecord", "Instance", "ParameterSamples", "Policy",
    "RegretTrace", "RelaxedPrior", "SamplerConfig", "SoidsAgent", "SoidsConfig", "SubsetPrior", "SurrogateStats",
    "cumulative_regret", "exploratory_design", "fgts_policy", "gap", "grid_posterior", "info_ratio",
    "make_benchmark_instance", "mcmc_sample", "mixture_policy", "pull", "run_soids", "sample_action", "soids_policy",
    "soids_round", "surrogate_stats",
]
