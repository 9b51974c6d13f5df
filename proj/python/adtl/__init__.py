from ._adtl import (
    CSV_HEADER,
    benchmark_csv,
    compute_ads_dot,
    learn,
    machine_size,
    minimize_dot,
    random_machine_dot,
    separating_word_dot,
)

__all__ = [
    "CSV_HEADER",
    "benchmark_csv",
    "compute_ads_dot",
    "learn",
    "machine_size",
    "minimize_dot",
    "random_machine_dot",
    "separating_word_dot",
]
