"""Simulating the weighings and recovering the fake set from the readings.

Weights are exact rationals (``fractions.Fraction``). The deviation of each
reading from the all-genuine weight is ``eps * W`` times the subset sum of the
fake mints; dividing out the unknown factor leaves the sum's direction, which
a feasible scheme maps back to a single fake set.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import (
    Direction,
    InfeasibleSchemeError,
    Scheme,
    SubsetMask,
    all_subset_sums,
    canonical_direction,
    mask_to_indices,
    verify_scheme,
)

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"num/den"`` or ``"num"``; decimals and exponents are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    m = _RATIONAL_RE.match(str(text))
    if not m:
        raise ValueError(f"not a rational of the form num/den: {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class AllGenuine:
    def to_json(self) -> dict:
        return {"outcome": "AllGenuine"}


@dataclass(frozen=True)
class FakeSet:
    mask: SubsetMask

    def __post_init__(self):
        if self.mask <= 0:
            raise ValueError("a fake set must contain at least one mint")

    def to_json(self) -> dict:
        return {"outcome": "FakeSet", "mask": self.mask, "mints": mask_to_indices(self.mask)}


@dataclass(frozen=True)
class Inconsistent:
    reason: str

    def to_json(self) -> dict:
        return {"outcome": "Inconsistent", "reason": self.reason}


DecodeOutcome = Union[AllGenuine, FakeSet, Inconsistent]


def simulate_weighings(scheme: Scheme, genuine_weight, epsilon, fake: SubsetMask) -> list[Fraction]:
    w = parse_rational(genuine_weight)
    eps = parse_rational(epsilon)
    if w <= 0:
        raise ValueError("genuine weight must be positive")
    if not 0 <= fake < 1 << scheme.n_mints:
        raise ValueError(f"fake mask {fake} out of range for {scheme.n_mints} mints")
    if fake and eps == 0:
        raise ValueError("epsilon must be nonzero when some mint is fake")
    fake_w = w * (1 + eps)
    out = []
    for row in scheme.rows:
        total = Fraction(0)
        for r, count in enumerate(row):
            total += count * (fake_w if fake >> r & 1 else w)
        out.append(total)
    return out


def ratio_table(scheme: Scheme) -> dict[Direction, SubsetMask]:
    """Direction of every non-empty subset sum, mapped back to its mask."""
    report = verify_scheme(scheme)
    if not report.feasible:
        raise InfeasibleSchemeError(f"scheme is infeasible, colliding subsets {report.witness}")
    sums = all_subset_sums(scheme)
    return {canonical_direction(sums[mask]): mask for mask in range(1, len(sums))}


def _integer_direction(values: Sequence[Fraction]) -> Direction:
    scale = math.lcm(*(v.denominator for v in values))
    return canonical_direction([int(v * scale) for v in values])


def decode(scheme: Scheme, genuine_weight, observed: Sequence, table=None) -> DecodeOutcome:
    """Fake set implied by two observed weighing totals.

    ``table`` may be passed to reuse a precomputed :func:`ratio_table`.
    """
    if scheme.n_weighings != 2:
        raise ValueError("decoding needs exactly two weighings")
    if len(observed) != 2:
        raise ValueError(f"expected two observed weights, got {len(observed)}")
    w = parse_rational(genuine_weight)
    if w <= 0:
        raise ValueError("genuine weight must be positive")
    if table is None:
        table = ratio_table(scheme)
    obs = [parse_rational(x) for x in observed]
    dev = [o - w * sum(row) for o, row in zip(obs, scheme.rows)]
    if not any(dev):
        return AllGenuine()
    mask = table.get(_integer_direction(dev))
    if mask is None:
        return Inconsistent("unknown direction")
    return FakeSet(mask)
