"""Sifting the progressions 6n+1 and 6n-1.

For a 4-perfect N of the shape considered here, every prime q with q^2 || N
has m = q in one of the classes 6n +- 1, and no small prime p may divide
m (m^2 + m + 1). The residues of n mod p excluded this way form omega_set;
count_survivors counts what is left by brute force and sieve_bound is the
large-sieve majorant (X + w^2) / M_g(w).
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .density import mg_fast, rho
from .errors import CapacityError, DomainError
from .primes import small_primes

SIFT_LIMIT = 10 ** 8


def _sign(sign):
    if sign in ("+", 1, "plus"):
        return 1
    if sign in ("-", -1, "minus"):
        return -1
    raise DomainError(f"bad sign {sign!r}")


def omega_set(p, sign):
    """Residues n mod p with (6n+s)((6n+s)^2 + (6n+s) + 1) = 0 mod p."""
    p = int(p)
    s = _sign(sign)
    if p < 5:
        if p in (2, 3):
            return frozenset()
        raise DomainError("p must be prime")
    out = set()
    for n in range(p):
        m = (6 * n + s) % p
        if m * (m * m + m + 1) % p == 0:
            out.add(n)
    return frozenset(out)


def _omega_fast(p, s):
    # roots of m(m^2+m+1) mod p, mapped back through m = 6n + s
    inv6 = pow(6, -1, p)
    ms = [0]
    if p % 3 == 1:
        # m^2 + m + 1 = 0 has the two primitive cube roots of unity
        ms += _cube_roots(p)
    return sorted(((m - s) * inv6) % p for m in ms)


def _cube_roots(p):
    # a primitive cube root of unity is h^((p-1)/3) for any non-cube h
    for h in range(2, p):
        w = pow(h, (p - 1) // 3, p)
        if w != 1:
            return [w, w * w % p]
    raise DomainError("no cube root of unity")


@dataclass
class SiftProblem:
    X: float
    sign: int
    w: float
    omega: dict = field(default_factory=dict)


def sift_problem(x, sign, w):
    s = _sign(sign)
    X = (x - s) / 6
    om = {2: frozenset(), 3: frozenset()}
    for p in small_primes(int(math.floor(w))).tolist():
        if p >= 5:
            om[p] = frozenset(_omega_fast(p, s))
    return SiftProblem(X, s, float(w), om)


def count_survivors(x, sign, w, return_mask=False):
    """Exact count of 1 <= n <= (x -+ 1)/6 outside every omega_set(p), 5 <= p <= w."""
    x = int(x)
    if x > SIFT_LIMIT:
        raise CapacityError(f"brute force limited to x <= {SIFT_LIMIT}")
    s = _sign(sign)
    top = (x - s) // 6
    if top < 1:
        return (0, np.zeros(0, dtype=bool)) if return_mask else 0
    alive = np.ones(top + 1, dtype=bool)
    alive[0] = False
    for p in small_primes(int(math.floor(w))).tolist():
        if p < 5:
            continue
        for r in _omega_fast(p, s):
            alive[r::p] = False
    c = int(alive.sum())
    return (c, alive) if return_mask else c


def sieve_bound(X, w):
    """(X + w^2) / M_g(w), rounded up past the M_g error bound."""
    if w < 1:
        raise DomainError("need w >= 1")
    m, err = mg_fast(w)
    return (X + w * w) / (m - err)


def check_omega_sizes(limit, sign):
    """True if |omega_set(p)| = rho(p) for all 5 <= p <= limit."""
    s = _sign(sign)
    return all(len(set(_omega_fast(p, s))) == rho(p)
               for p in small_primes(limit).tolist() if p >= 5)
