"""Valid p-values for tests with a nuisance parameter, with the Monte Carlo studies around them."""

from vpv._core import (
    DEFAULT_GOF_BETA,
    DEFAULT_SEED,
    DEFAULT_TWO_SAMPLE_BETA,
    DataError,
    DomainError,
    ParameterError,
    UsageError,
    format_csv,
    gof_vpv,
    kolmogorov_null_cdf,
    lr_interval,
    normal_lr_analysis,
    reproduce,
    reproduce_targets,
    run,
    shapiro_wilk,
    solve_exp_system,
    two_sample_vpv,
    wilcoxon_signed_rank,
)

__all__ = [
    "DEFAULT_GOF_BETA",
    "DEFAULT_SEED",
    "DEFAULT_TWO_SAMPLE_BETA",
    "DataError",
    "DomainError",
    "ParameterError",
    "UsageError",
    "format_csv",
    "gof_vpv",
    "kolmogorov_null_cdf",
    "lr_interval",
    "normal_lr_analysis",
    "reproduce",
    "reproduce_targets",
    "run",
    "shapiro_wilk",
    "solve_exp_system",
    "two_sample_vpv",
    "wilcoxon_signed_rank",
]
