import math

import mpmath
import pytest
import sympy

from siftbound.application.tail import (E16, THRESHOLD, abundancy_contradiction,
                                        final_from_parts, integral1, integral2,
                                        integral3, reciprocal_sum_small, tail_integrals)
from siftbound.bootstrap import published_lower, recomputed_lower, ladder_constants
from siftbound.envelope import load_envelope
from siftbound.errors import DomainError


@pytest.fixture(scope="module")
def consts():
    return recomputed_lower(ladder_constants())


def _quad_oracle(c):
    k = ("C", "C1-", "C2-", "C3-", "C4-", "C5*-")
    co = [mpmath.mpf(str(c[n].lo)) for n in k]

    def f(u):
        return 2 * u ** 3 / sum(a * u ** (5 - i) for i, a in enumerate(co))
    return float(mpmath.quad(f, [24.4, 100, 1000, mpmath.inf]))


def test_integral1_encloses_quadrature(consts):
    lo, hi, simp = integral1(consts)
    q = _quad_oracle(consts)
    assert lo <= q <= hi and lo <= simp <= hi
    # simp carries the 2/(C u) tail majorant past 1e4, about 1.2e-6 above q
    assert 0 < simp - q < 2e-6
    assert hi < 1.38771


def test_integral1_with_printed_values_is_larger():
    # the printed ladder constants give an integral above the stated bound
    lo, hi, _ = integral1(published_lower())
    assert lo > 1.38771


def test_integral2():
    assert integral2() == pytest.approx(2 * 3.4 / (441 * 0.0790359), rel=1e-6)
    assert integral2() < 0.1951


def test_integral3_against_float_sum():
    t = load_envelope()
    lw = 0.5 * 25 - math.log(9)
    oracle = 0.0
    for a, b, k in zip(t.u_lo, t.u_hi, t.K):
        a, b = max(float(a), lw), float(b)
        if b > a:
            oracle += 2 / float(k) * (1 / a - 1 / b)
    v = integral3(lw, t)
    assert v >= oracle and v == pytest.approx(oracle, rel=1e-9)
    assert v < 1.07486


def test_full_tail(consts):
    rep = tail_integrals(9, math.exp(25), consts)
    assert abundancy_contradiction(rep, 0.00633) == "contradiction"
    assert rep.final_sum < THRESHOLD
    with pytest.raises(DomainError):
        tail_integrals(9, 1000.0, consts)


def test_arithmetic_of_the_parts():
    assert final_from_parts(0.91872, 0.00633) < 0.92506
    assert final_from_parts(0.91872, 0.06) < THRESHOLD
    assert final_from_parts(0.91872, 0.07) > THRESHOLD
    assert THRESHOLD == pytest.approx(0.980829, abs=1e-6)


def _brute(lo, hi):
    def least13(n):
        return min(q for q in sympy.factorint(n) if q % 3 == 1)
    s = 0.0
    for p in sympy.primerange(math.floor(lo) + 1, hi + 1):
        p1 = least13(p * p + p + 1)
        if p1 > lo and least13(p1 * p1 + p1 + 1) > lo:
            s += 1 / p
    return s


@pytest.mark.parametrize("lo,hi", [(40, 2000), (100, 5000), (13, 300)])
def test_reciprocal_sum_brute(lo, hi):
    v, info = reciprocal_sum_small(hi, lo)
    assert info["unresolved"] == []
    assert v == pytest.approx(_brute(lo, hi), rel=1e-12)


def test_reciprocal_sum_empty_at_e16():
    assert reciprocal_sum_small(E16)[0] == 0.0
