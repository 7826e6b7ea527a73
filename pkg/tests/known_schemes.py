"""Frozen schemes and values used across the suite.

Every scheme listed as feasible was checked with the naive cross-product
oracle; the derived optima were produced by the exhaustive oracle or by brute
force over column multisets before being written down here.
"""

from apsimon.core import Scheme

WORKED = Scheme(((0, 1, 2), (1, 1, 0)))
# the cap-2 listing with (2, 1) in place of (2, 0); not feasible
TYPO_VARIANT = Scheme.from_columns([(0, 1), (1, 1), (2, 1)])
COLLINEAR_TRIPLE = Scheme.from_columns([(1, 0), (0, 1), (1, 1)])

# TotalMax optima from the sequence 1, 2, 4, 8, 15
SEQUENCE = {1: 1, 2: 2, 3: 4, 4: 8, 5: 15}

# feasible schemes with n <= 5 (decoder round trips, invariant checks)
FEASIBLE = [
    Scheme(((1,), (0,))),
    Scheme(((1,), (1,))),
    Scheme.from_columns([(1, 0), (0, 1)]),
    Scheme.from_columns([(1, 0), (1, 1)]),
    WORKED,
    Scheme.from_columns([(0, 1), (1, 1), (2, 0)]),
    Scheme(((1, 2, 6), (1, 1, 1))),
    Scheme(((1, 2, 6, 24), (1, 1, 1, 1))),
    Scheme(((1, 2, 6, 24, 120), (1, 1, 1, 1, 1))),
    Scheme(((1, 1, 0, 4), (0, 1, 2, 1))),
    Scheme(((0, 1, 1, 2), (1, 1, 4, 0))),
    Scheme(((1, 2, 2, 0, 5), (1, 0, 1, 5, 4))),
    Scheme.from_columns([(1, 0), (2, 1), (2, 2), (0, 3)]),
    Scheme.from_columns([(2, 0), (0, 3), (1, 4), (4, 2), (4, 4)]),
]

# cap -> most mints, by brute force over distinct-column sets with entries <= cap
CAPACITY = {1: 2, 2: 3, 3: 4, 4: 5}

# n -> optimum by cost kind, exhaustive oracle
GRAND_SUM = {1: 1, 2: 2, 3: 5, 4: 10}
MAX_ENTRY = {1: 1, 2: 1, 3: 2, 4: 3}

# (n, k) -> known-epsilon optimum, exhaustive oracle
KNOWN_EPS = {(1, 1): 1, (2, 1): 3, (3, 1): 7, (4, 1): 15,
             (1, 2): 1, (2, 2): 2, (3, 2): 4, (4, 2): 6}

# optimum for six mints under the same criterion (search and oracle-checked witness)
SIX_MINTS_OPTIMUM = 28
SIX_MINTS_WITNESS = Scheme.from_columns([(1, 0), (2, 1), (2, 2), (5, 1), (5, 8), (0, 10)])
