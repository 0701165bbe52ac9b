"""Displacement analysis for hash tables with coalesced chains.

Exact tables under late- and early-insertion, the limiting displacement
distributions and moments, a seeded Monte Carlo harness, and an exhaustive
small-case oracle.  The hot replay kernel is a compiled extension with a
pure-Python fallback (see ``coalhash._kernel.HAVE_COMPILED``).
"""

from ._kernel import HAVE_COMPILED
from .limits import (
    LimitDistribution,
    LimitSpec,
    QuadratureError,
    build_distribution,
    mean_limit,
    moment_tail_bound,
    p_closed_small_k,
    p_limit,
    probe_stats_unsuccessful,
    tail_asymptotic_ratio,
    tail_bound,
    var_limit,
)
from .mc import (
    ConcentrationResult,
    ExperimentConfig,
    ExperimentReport,
    YuleCheckResult,
    build_random_table,
    concentration_test,
    replicate_stream,
    run_concentration,
    run_experiment,
    yule_check,
)
from .oracle import (
    ENUMERATION_GUARD,
    ExactDistribution,
    OracleMcResult,
    OracleTableResult,
    enumerate_exact,
    oracle_vs_mc,
    oracle_vs_table,
)
from .table import (
    Cell,
    DisplacementHistogram,
    HashTable,
    Policy,
    TableFullError,
    new_table,
)

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "ConcentrationResult",
    "DisplacementHistogram",
    "ENUMERATION_GUARD",
    "ExactDistribution",
    "ExperimentConfig",
    "ExperimentReport",
    "HAVE_COMPILED",
    "HashTable",
    "LimitDistribution",
    "LimitSpec",
    "OracleMcResult",
    "OracleTableResult",
    "Policy",
    "QuadratureError",
    "TableFullError",
    "YuleCheckResult",
    "build_distribution",
    "build_random_table",
    "concentration_test",
    "enumerate_exact",
    "mean_limit",
    "moment_tail_bound",
    "new_table",
    "oracle_vs_mc",
    "oracle_vs_table",
    "p_closed_small_k",
    "p_limit",
    "probe_stats_unsuccessful",
    "replicate_stream",
    "run_concentration",
    "run_experiment",
    "tail_asymptotic_ratio",
    "tail_bound",
    "var_limit",
    "yule_check",
    "__version__",
]
