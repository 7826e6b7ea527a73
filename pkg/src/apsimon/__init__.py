"""Exact tools for ApSimon's mints: verification, optimal search, decoding."""

from .core import (
    ENTRY_MAX,
    CostKind,
    FeasibilityReport,
    InfeasibleSchemeError,
    InvalidSchemeError,
    Scheme,
    ZeroVectorError,
    bounds,
    canonical_direction,
    canonical_form,
    cost,
    factorial_scheme,
    subset_sum,
    verify_scheme,
)
from .decoder import AllGenuine, FakeSet, Inconsistent, decode, ratio_table, simulate_weighings
from .known_eps import search_known_eps, verify_injective
from .search import (
    CapacityResult,
    ConfigError,
    PartialState,
    SearchConfig,
    SearchResult,
    Status,
    capacity_max_mints,
    extend,
    search_optimal,
)

__version__ = "0.1.0"
