"""Variant with a known fake-coin deviation.

When the deviation is known, each weighing reveals its subset sum exactly,
so a scheme works as soon as the map from fake sets (the empty one included)
to subset-sum vectors is injective. Any number of weighings is allowed.
"""

from __future__ import annotations

import time
from typing import Optional

from .core import FeasibilityReport, Scheme, SubsetMask, all_subset_sums
from .search import (
    ConfigError,
    SearchResult,
    SearchStats,
    Status,
    _BudgetExhausted,
    _Engine,
    level_iter,
)


def verify_injective(scheme: Scheme) -> FeasibilityReport:
    """Injectivity of mask -> subset sum over all 2^n masks.

    The witness is the lexicographically smallest equal pair ``(mask1, mask2)``.
    """
    sums = all_subset_sums(scheme)
    first: dict[tuple, SubsetMask] = {}
    witness = None
    for mask, s in enumerate(sums):
        m1 = first.setdefault(s, mask)
        if m1 != mask and (witness is None or m1 < witness[0]):
            witness = (m1, mask)
    if witness is None:
        return FeasibilityReport(True)
    return FeasibilityReport(False, witness)


def search_known_eps(n: int, k: int, node_limit: Optional[int] = None,
                     time_limit: Optional[float] = None) -> SearchResult:
    """Minimum of sum over mints of the column maximum, over injective k-row schemes.

    Seeded with the powers-of-two scheme (row 0 = 1, 2, 4, ...), which is
    injective for any k and costs 2^n - 1.
    """
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"n must be a positive integer, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise ConfigError(f"k must be a positive integer, got {k!r}")
    t0 = time.monotonic()
    deadline = t0 + time_limit if time_limit else None
    seed_cost = 2**n - 1
    eng = _Engine(n, k=k, limit=seed_cost + 1, mode="injective",
                  node_limit=node_limit, deadline=deadline)
    exhausted = False
    try:
        for v0 in level_iter(seed_cost, k):
            if n * max(v0) >= eng.limit:
                break
            eng.run_branch(v0)
    except _BudgetExhausted:
        exhausted = True
    stats: SearchStats = eng.stats
    stats.elapsed = time.monotonic() - t0
    if eng.best_cost is None:
        seed = Scheme(((*(2**r for r in range(n)),),) + ((0,) * n,) * (k - 1))
        return SearchResult(Status.BEST_SO_FAR, seed_cost, seed, stats)
    status = Status.BEST_SO_FAR if exhausted else Status.OPTIMAL
    return SearchResult(status, eng.best_cost, Scheme.from_columns(eng.best_columns), stats)
