import math
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from siftbound.density import rho
from siftbound.largesieve import (
    check_omega_sizes, count_survivors, omega_set, sieve_bound, sift_problem,
)


def brute_survivors(x, sign, w):
    s = 1 if sign == "+" else -1
    ps = [p for p in sympy.primerange(5, int(math.floor(w)) + 1)]
    out = []
    for n in range(1, (x - s) // 6 + 1):
        m = 6 * n + s
        if all(m * (m * m + m + 1) % p for p in ps):
            out.append(n)
    return out


def test_omega_examples():
    assert len(omega_set(7, "+")) == 3
    assert omega_set(5, "+") == {4}
    assert omega_set(2, "+") == omega_set(3, "-") == frozenset()


def test_omega_sizes_match_rho():
    assert check_omega_sizes(10 ** 4, "+") and check_omega_sizes(10 ** 4, "-")
    sp = sift_problem(1000, "-", 50)
    assert all(len(v) == rho(p) for p, v in sp.omega.items())


def test_hand_example():
    # n in [1, 9] avoiding 4 mod 5: 4 and 9 are removed
    assert count_survivors(60, "+", 5) == 7
    assert count_survivors(60, "+", 5) == len(brute_survivors(60, "+", 5))


def test_no_sifting_below_five():
    assert count_survivors(1000, "+", 4) == (1000 - 1) // 6
    assert count_survivors(1000, "-", 1) == (1000 + 1) // 6


@pytest.mark.parametrize("sign", "+-")
def test_count_against_brute(sign):
    assert count_survivors(10 ** 4, sign, 20) == len(brute_survivors(10 ** 4, sign, 20))
    assert count_survivors(30000, sign, 97.5) == len(brute_survivors(30000, sign, 97.5))


def test_survivors_are_coprime():
    c, mask = count_survivors(10 ** 5, "-", 60, return_mask=True)
    ns = [n for n in range(len(mask)) if mask[n]]
    ps = list(sympy.primerange(5, 61))
    for n in random.Random(0).sample(ns, 100):
        m = 6 * n - 1
        assert all(math.gcd(m * (m * m + m + 1), p) == 1 for p in ps)


def test_sieve_bound_examples():
    assert sieve_bound(1666.5, 20) == pytest.approx(2066.5 / 2.65, rel=1e-12)
    assert sieve_bound(5, 1) == 6
    assert sieve_bound(0, 10) == pytest.approx(50)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10 ** 6), st.floats(1, 1000), st.sampled_from("+-"))
def test_survivors_below_large_sieve_bound(x, w, sign):
    s = 1 if sign == "+" else -1
    assert count_survivors(x, sign, w) <= sieve_bound((x - s) / 6, w)
