import math

import pytest
from hypothesis import given, strategies as st

from siftbound.application.rbound import (PRINTED_TABLE, direct_rhs, implicit_rhs,
                                          r_bound_direct, r_bound_iterative, r_table)
from siftbound.errors import DomainError


def test_direct_at_eight():
    assert r_bound_direct(8) == 199
    assert r_bound_direct(8, "2beta+1") == 306
    rhs = (16 + (math.log(math.log(8)) + 1.24351) / math.log(3)) * 11 + 4
    assert direct_rhs(8) == pytest.approx(rhs, rel=1e-15)


@given(st.integers(8, 10 ** 6))
def test_direct_is_largest_strictly_below(beta):
    r, rhs = r_bound_direct(beta), direct_rhs(beta)
    assert r < rhs <= r + 1


def test_fixed_points():
    assert [d["computed_bound"] for d in r_table()] == [25, 44, 76, 118, 169, 230, 300]
    assert [d["computed_bound"] for d in r_table("beta+3")] == [32, 44, 65, 92, 123, 159, 200]


@pytest.mark.parametrize("beta", range(1, 8))
def test_fixed_point_is_maximal(beta):
    d = r_bound_iterative(beta)
    r = d["computed_bound"]
    assert r < implicit_rhs(r, beta)
    # brute check well past the scan cut-off
    assert all(s >= implicit_rhs(s, beta) for s in range(r + 1, 5000))


def test_printed_table_shape():
    # the printed values are (2b+1)(2b+2) for b >= 2
    assert all(PRINTED_TABLE[b] == (2 * b + 1) * (2 * b + 2) for b in range(2, 8))


def test_domains():
    with pytest.raises(DomainError):
        r_bound_direct(7)
    with pytest.raises(DomainError):
        r_bound_iterative(8)
    with pytest.raises(DomainError):
        direct_rhs(9, "bogus")
