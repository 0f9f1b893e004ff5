"""Pseudo-label filtering for noisy student training of speech recognizers."""

from ._core import (
    AlignmentStats,
    DataError,
    Error,
    FilterConfig,
    NGramModel,
    cer,
    cli_main,
    edit_distance,
    rescore_nbest,
    simulate,
    speaking_rate,
    threshold_for_iteration,
    tokenize,
)

__all__ = [
    "AlignmentStats",
    "DataError",
    "Error",
    "FilterConfig",
    "NGramModel",
    "cer",
    "cli_main",
    "edit_distance",
    "rescore_nbest",
    "simulate",
    "speaking_rate",
    "threshold_for_iteration",
    "tokenize",
]
