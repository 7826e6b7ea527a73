import pytest

from apsimon.core import CostKind, Scheme
from apsimon.oracle import exhaustive_known_eps, exhaustive_min_cost, naive_injective, naive_verify

from known_schemes import COLLINEAR_TRIPLE, WORKED


def test_naive_worked():
    assert naive_verify(WORKED).feasible


def test_naive_collinear_triple():
    r = naive_verify(COLLINEAR_TRIPLE)
    assert not r.feasible
    assert r.witness == (0b011, 0b100)


def test_naive_single_mint():
    assert naive_verify(Scheme(((1,), (0,)))).feasible


def test_naive_needs_two_rows():
    with pytest.raises(ValueError):
        naive_verify(Scheme(((1, 2),)))


def test_exhaustive_two_mints():
    c, s = exhaustive_min_cost(2, CostKind.TOTAL_MAX, 4)
    assert c == 2
    assert naive_verify(s).feasible


def test_exhaustive_three_mints():
    c, s = exhaustive_min_cost(3, CostKind.TOTAL_MAX, 9)
    assert c == 4
    assert naive_verify(s).feasible


def test_three_coins_do_not_cover_three_mints():
    assert exhaustive_min_cost(3, CostKind.TOTAL_MAX, 3) is None


def test_naive_injective():
    assert naive_injective(Scheme(((1, 2, 4),))).feasible
    assert not naive_injective(Scheme(((1, 2, 3),))).feasible


def test_exhaustive_known_eps_small():
    assert exhaustive_known_eps(3, 1, 7)[0] == 7
    assert exhaustive_known_eps(3, 1, 6) is None
