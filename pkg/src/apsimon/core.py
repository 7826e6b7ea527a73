"""Schemes, exact subset sums, collinearity classes and cost functions.

A scheme is a ``k x n`` matrix of coin counts: row ``j`` lists how many coins
of each mint go into weighing ``j``. For the classic problem ``k == 2`` and
the columns are the per-mint vectors ``(P_r, Q_r)``. Mints are numbered from
1 in user-facing text and from 0 in bitmasks (bit ``r - 1`` is mint ``r``).
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

ENTRY_MAX = 10**6
FACTORIAL_N_MAX = 20
# subset sums are treated as signed 128-bit integers
INT_LIMIT = 2**127

IntVector = tuple[int, ...]
Direction = tuple[int, ...]
SubsetMask = int


class InvalidSchemeError(ValueError):
    pass


class ZeroVectorError(ValueError):
    pass


class InfeasibleSchemeError(ValueError):
    pass


class CostKind(enum.Enum):
    TOTAL_MAX = "total-max"
    GRAND_SUM = "grand-sum"
    MAX_ENTRY = "max-entry"


def _check_width(x: int) -> int:
    if not -INT_LIMIT <= x < INT_LIMIT:
        raise OverflowError(f"value {x} exceeds the 128-bit exact-integer range")
    return x


@dataclass(frozen=True)
class Scheme:
    """Coin counts per weighing (rows) per mint (columns)."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise InvalidSchemeError("a scheme needs at least one weighing row")
        n = len(rows[0])
        if n == 0:
            raise InvalidSchemeError("a scheme needs at least one mint")
        for row in rows:
            if len(row) != n:
                raise InvalidSchemeError("all weighing rows must have the same length")
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise InvalidSchemeError(f"coin counts must be integers, got {x!r}")
                if x < 0:
                    raise InvalidSchemeError(f"negative coin count {x}")
                if x > ENTRY_MAX:
                    raise OverflowError(f"coin count {x} exceeds ENTRY_MAX={ENTRY_MAX}")
        for r in range(n):
            if not any(row[r] for row in rows):
                raise InvalidSchemeError(f"mint {r + 1} is not used in any weighing")

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]]) -> "Scheme":
        columns = [tuple(c) for c in columns]
        if not columns:
            raise InvalidSchemeError("a scheme needs at least one mint")
        return cls(tuple(zip(*columns)))

    @property
    def n_mints(self) -> int:
        return len(self.rows[0])

    @property
    def n_weighings(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.rows))

    def to_json(self) -> dict:
        return {"mints": self.n_mints, "weighings": [list(row) for row in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "Scheme":
        try:
            rows = data["weighings"]
            n = data["mints"]
        except (KeyError, TypeError) as exc:
            raise InvalidSchemeError(f"malformed scheme JSON: {exc}") from None
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InvalidSchemeError("'weighings' must be a list of lists")
        scheme = cls(tuple(tuple(r) for r in rows))
        if n != scheme.n_mints:
            raise InvalidSchemeError(f"'mints' is {n} but rows have {scheme.n_mints} entries")
        return scheme

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    witness: Optional[tuple[SubsetMask, SubsetMask]] = None

    def to_json(self) -> dict:
        out: dict = {"feasible": self.feasible}
        if self.witness is not None:
            out["witness"] = [mask_to_indices(m) for m in self.witness]
        return out


def mask_from_indices(indices: Iterable[int]) -> SubsetMask:
    """Bitmask from 1-based mint numbers."""
    mask = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"mint numbers start at 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def mask_to_indices(mask: SubsetMask) -> list[int]:
    out = []
    r = 1
    while mask:
        if mask & 1:
            out.append(r)
        mask >>= 1
        r += 1
    return out


def subset_sum(scheme: Scheme, mask: SubsetMask) -> IntVector:
    if not 0 <= mask < 1 << scheme.n_mints:
        raise ValueError(f"mask {mask} out of range for {scheme.n_mints} mints")
    out = []
    for row in scheme.rows:
        total = 0
        for r, x in enumerate(row):
            if mask >> r & 1:
                total += x
        out.append(_check_width(total))
    return tuple(out)


def all_subset_sums(scheme: Scheme) -> list[IntVector]:
    """Subset sums indexed by mask, built by adding one lowest bit at a time."""
    n = scheme.n_mints
    k = scheme.n_weighings
    cols = scheme.columns
    sums: list[IntVector] = [(0,) * k] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        prev = sums[mask & (mask - 1)]
        col = cols[low]
        sums[mask] = tuple(_check_width(prev[j] + col[j]) for j in range(k))
    return sums


def canonical_direction(v: Sequence[int]) -> Direction:
    g = math.gcd(*v)
    if g == 0:
        raise ZeroVectorError("the zero vector has no direction")
    for x in v:
        if x:
            if x < 0:
                g = -g
            break
    return tuple(x // g for x in v)


def verify_scheme(scheme: Scheme) -> FeasibilityReport:
    """Check that all non-empty subset sums are pairwise non-collinear.

    On failure the witness is the lexicographically smallest colliding pair
    ``(mask1, mask2)`` with ``mask1 < mask2``.
    """
    sums = all_subset_sums(scheme)
    first: dict[Direction, SubsetMask] = {}
    witness = None
    for mask in range(1, len(sums)):
        d = canonical_direction(sums[mask])
        m1 = first.setdefault(d, mask)
        # masks arrive in increasing order, so the first repeat of the class
        # with the smallest representative gives the smallest pair
        if m1 != mask and (witness is None or m1 < witness[0]):
            witness = (m1, mask)
    if witness is None:
        return FeasibilityReport(True)
    return FeasibilityReport(False, witness)


def cost(scheme: Scheme, kind: CostKind) -> int:
    if kind is CostKind.TOTAL_MAX:
        return sum(max(col) for col in scheme.columns)
    if kind is CostKind.GRAND_SUM:
        return sum(sum(row) for row in scheme.rows)
    if kind is CostKind.MAX_ENTRY:
        return max(max(row) for row in scheme.rows)
    raise ValueError(f"unknown cost kind {kind!r}")


def column_cost(col: Sequence[int], kind: CostKind) -> int:
    """Contribution of a single mint column to the scheme cost (MaxEntry: the column max)."""
    if kind is CostKind.GRAND_SUM:
        return sum(col)
    return max(col)


def factorial_scheme(n: int) -> Scheme:
    """P_r = r!, Q_r = 1."""
    if n < 1:
        raise ValueError("need at least one mint")
    if n > FACTORIAL_N_MAX or math.factorial(n) > ENTRY_MAX:
        raise OverflowError(f"{n}! does not fit the coin-count limit ENTRY_MAX={ENTRY_MAX}")
    return Scheme((tuple(math.factorial(r) for r in range(1, n + 1)), (1,) * n))


def bounds(n: int, capacity_witness: Optional[tuple[int, int]] = None) -> tuple[int, int]:
    """Lower and upper bounds on the TotalMax optimum for ``n`` mints.

    ``capacity_witness=(c, m)`` asserts that a feasible scheme for ``m >= n``
    mints with every count at most ``c`` is known; dropping mints keeps it
    feasible, so ``c * n`` coins suffice.
    """
    if n < 1:
        raise ValueError("need at least one mint")
    upper = sum(math.factorial(r) for r in range(1, n + 1))
    if capacity_witness is not None:
        c, m = capacity_witness
        if m < n:
            raise ValueError(f"capacity witness covers {m} mints, fewer than {n}")
        upper = min(upper, c * n)
    return n, upper


def canonical_form(scheme: Scheme) -> Scheme:
    """Representative of the scheme under mint permutations and row permutations.

    Columns are sorted by ``(max, entries...)``; among the row permutations the
    one whose sorted column sequence is largest is kept.
    """
    k = scheme.n_weighings
    best = None
    for perm in itertools.permutations(range(k)):
        cols = sorted(
            (tuple(col[j] for j in perm) for col in scheme.columns),
            key=column_order_key,
        )
        key = [column_order_key(c) for c in cols]
        if best is None or key > best[0]:
            best = (key, cols)
    return Scheme.from_columns(best[1])


def column_order_key(col: Sequence[int]) -> tuple:
    return (max(col), *col)
