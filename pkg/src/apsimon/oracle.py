"""Slow reference implementations for cross-checking.

Nothing here reuses the subset-sum, direction or search code; only the
scheme container and the small result/enum types are shared.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Optional

from .core import CostKind, FeasibilityReport, Scheme


def _sums(scheme: Scheme) -> list[tuple[int, ...]]:
    n = scheme.n_mints
    out = []
    for mask in range(1 << n):
        out.append(tuple(sum(row[r] for r in range(n) if mask >> r & 1) for row in scheme.rows))
    return out


def naive_verify(scheme: Scheme) -> FeasibilityReport:
    """All-pairs 2x2 cross-product test over non-empty subsets (two weighings only)."""
    if scheme.n_weighings != 2:
        raise ValueError("naive_verify handles exactly two weighings")
    sums = _sums(scheme)
    total = len(sums)
    for m1 in range(1, total):
        a1, b1 = sums[m1]
        for m2 in range(m1 + 1, total):
            a2, b2 = sums[m2]
            if a1 * b2 - a2 * b1 == 0:
                return FeasibilityReport(False, (m1, m2))
    return FeasibilityReport(True)


def naive_injective(scheme: Scheme) -> FeasibilityReport:
    """Pairwise equality test over all subsets, empty one included."""
    sums = _sums(scheme)
    for m1, m2 in combinations(range(len(sums)), 2):
        if sums[m1] == sums[m2]:
            return FeasibilityReport(False, (m1, m2))
    return FeasibilityReport(True)


def _column_cost(col, kind: CostKind) -> int:
    if kind is CostKind.GRAND_SUM:
        return sum(col)
    return max(col)


def _scheme_cost(cols, kind: CostKind) -> int:
    if kind is CostKind.MAX_ENTRY:
        return max(max(c) for c in cols)
    return sum(_column_cost(c, kind) for c in cols)


def _multisets(vectors, n, kind, ceiling):
    """Non-decreasing index sequences of length n whose cost stays <= ceiling."""

    def rec(start, picked, acc):
        if len(picked) == n:
            yield list(picked)
            return
        for i in range(start, len(vectors)):
            c = _column_cost(vectors[i], kind)
            new = max(acc, c) if kind is CostKind.MAX_ENTRY else acc + c
            if new > ceiling:
                continue
            picked.append(vectors[i])
            yield from rec(i, picked, new)
            picked.pop()

    yield from rec(0, [], 0)


def _all_vectors(k: int, top: int) -> list[tuple[int, ...]]:
    return [v for v in product(range(top + 1), repeat=k) if any(v)]


def _exhaustive(n, k, kind, ceiling, check) -> Optional[tuple[int, Scheme]]:
    # raise the ceiling one unit at a time; the first level with a feasible
    # multiset holds the minimum
    for target in range(1, ceiling + 1):
        for cols in _multisets(_all_vectors(k, target), n, kind, target):
            if _scheme_cost(cols, kind) != target:
                continue
            scheme = Scheme.from_columns(cols)
            if check(scheme).feasible:
                return target, scheme
    return None


def exhaustive_min_cost(n: int, kind: CostKind, cost_ceiling: int) -> Optional[tuple[int, Scheme]]:
    """Cheapest feasible two-weighing scheme with cost <= cost_ceiling, or None.

    Every multiset of columns with entries <= cost_ceiling is tried; only
    mint order is factored out.
    """
    return _exhaustive(n, 2, kind, cost_ceiling, naive_verify)


def exhaustive_known_eps(n: int, k: int, cost_ceiling: int) -> Optional[tuple[int, Scheme]]:
    """Cheapest injective k-weighing scheme under TotalMax with cost <= cost_ceiling."""
    return _exhaustive(n, k, CostKind.TOTAL_MAX, cost_ceiling, naive_injective)
