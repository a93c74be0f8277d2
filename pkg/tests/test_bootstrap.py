import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from siftbound.bootstrap import (
    A1, A3, B2_PUBLISHED, C_PUBLISHED, PRINTED, b1_constant, b1_reference,
    bootstrap_step, compare_printed, epsilon_bound, euler_product_C, printed_interval,
    ladder_constants,
)
from siftbound.interval import Interval

fracs = st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 9)


@settings(max_examples=250, deadline=None)
@given(fracs, fracs)
def test_interval_arithmetic_encloses_rationals(a, b):
    A, B = Interval(a), Interval(b)
    assert (A + B).contains(Interval(a + b)) and (A - B).contains(Interval(a - b))
    assert (A * B).contains(Interval(a * b))
    if b != 0:
        assert (A / B).contains(Interval(a / b))
        q = (A / B)
        assert q.lo_fraction() <= a / b <= q.hi_fraction()


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=10 ** 6, max_denominator=10 ** 6))
def test_interval_elementary_functions(a):
    mpmath.mp.dps = 50
    x = mpmath.mpf(a.numerator) / a.denominator
    for iv, ref in ((Interval(a).log(), mpmath.log(x)), (Interval(a).sqrt(), mpmath.sqrt(x))):
        assert mpmath.mpf(iv.lo) <= ref <= mpmath.mpf(iv.hi)
    if a < 100:
        e = Interval(a).exp()
        assert mpmath.mpf(e.lo) <= mpmath.exp(x) <= mpmath.mpf(e.hi)


def test_interval_rejects_empty():
    with pytest.raises(ValueError):
        Interval(2, 1)
    with pytest.raises(ZeroDivisionError):
        Interval(-1, 1).reciprocal()


def test_euler_product_nesting():
    c4 = euler_product_C(10 ** 4)
    c5 = euler_product_C(10 ** 5)
    assert c4.contains(c5)
    assert c5.contains(0.05476218)
    assert c5.overlaps(C_PUBLISHED)


def test_seed_step():
    lo, hi, x0 = bootstrap_step([0], [A3], 10, C_PUBLISHED)
    want_lo = -(A1 * A3)
    want_hi = 3 * A1 * A3
    assert lo[1].overlaps(want_lo) and hi[1].overlaps(want_hi)
    assert lo[0].overlaps(C_PUBLISHED)


def test_thresholds_advance_by_49():
    cs = ladder_constants()
    th = cs.thresholds
    assert th == [10, 490, 24010, 1176490, 57648010]
    assert all(b == 49 * a for a, b in zip(th[1:], th[2:])) and th[1] == 49 * th[0]


def test_lower_below_upper():
    L = ladder_constants().ladder
    for k, v in L.items():
        if k.endswith("-"):
            assert v.hi < L[k[:-1] + "+"].lo


def test_symmetric_third_coefficients():
    L = ladder_constants().ladder
    assert (-L["C3-"]).lo == L["C3+"].lo and (-L["C3-"]).hi == L["C3+"].hi
    assert (-L["C3*-"]).lo == L["C3*+"].lo


def test_printed_values_reproduced_except_second_pair():
    cmp = compare_printed(ladder_constants().ladder)
    off = sorted(k for k, v in cmp.items() if not v["ok"])
    # the printed C2-/C2+ disagree with the displayed recursion; everything else matches
    assert off == ["C2+", "C2-"]
    assert cmp["C1-"]["computed"].startswith("0.34952")
    assert cmp["C5*+"]["computed"].startswith("23261.03")


def test_printed_interval_direction():
    c2 = printed_interval("C2-")
    assert c2.lo_fraction() <= Fraction("-4.0927") and Fraction("-4.0926") <= c2.hi_fraction()
    assert c2.hi_fraction() - Fraction("-4.0926") < Fraction(1, 10 ** 30)
    c1 = printed_interval("C1-")
    assert Fraction("0.34952") - c1.lo_fraction() < Fraction(1, 10 ** 30)


def test_epsilon():
    e8 = epsilon_bound(7 ** 8)
    assert e8.hi < 0.146081
    assert epsilon_bound(7 ** 10).hi < e8.lo
    e4 = epsilon_bound(7 ** 4)
    assert 0 < e4.lo and math.isfinite(e4.hi)
    # with the denominators as displayed the bound is weaker
    assert epsilon_bound(7 ** 8, "displayed").lo > 0.146081


def test_b1_formula_against_mpmath():
    b = b1_constant()
    assert b.lo > 0 and b.width <= 1e-8
    ref = b1_reference()
    # the formula and L'(0)/L(0) from mpmath agree to the accuracy of the ingested constant
    assert abs(b.mid - ref["L'(0)/L(0)"]) < 1e-7
    assert abs(ref["L'(1,chi)"] - 0.2226629869686) < 1e-12


def test_b2_bracket():
    assert B2_PUBLISHED.contains(Fraction("0.0790359"))
