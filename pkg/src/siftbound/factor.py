"""Primality testing and factorization up to 2^128.

Miller-Rabin with a fixed witness set is deterministic below 2^64; above
that a Baillie-PSW test (strong base 2 plus strong Lucas) is used and the
verdict is flagged ``probable_prime``. Factoring is trial division against
a primorial product tree followed by Pollard rho with Brent's cycle
detection and seeds 1, 2, 3, ...
"""
import math
import os
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpz

from .errors import CapacityError, DomainError
from .primes import small_primes

MAX_N = 2 ** 128
PRIME = "prime"
COMPOSITE = "composite"
PROBABLE = "probable_prime"
UNKNOWN = "unknown"

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)  # exact below 3.3e24


def _strong_probable(n, a):
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a, n):
    a %= n
    r = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                r = -r
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            r = -r
        a %= n
    return r if n == 1 else 0


def _strong_lucas(n):
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
        if D == 13 and math.isqrt(n) ** 2 == n:
            return False
    P, Q = 1, (1 - D) // 4
    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # binary ladder for U_d, V_d
    U, V, Qk = 1, P, Q % n
    inv2 = (n + 1) // 2
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n):
    """'prime', 'composite' or 'probable_prime' (only for n >= 2^64)."""
    n = int(n)
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n >= MAX_N:
        raise CapacityError("n exceeds 2^128")
    return _classify(n)


def _classify(n):
    """is_prime without the capacity check (used for chain numbers)."""
    if n < 2:
        return COMPOSITE
    for p in _MR_BASES:
        if n == p:
            return PRIME
        if n % p == 0:
            return COMPOSITE
    if n < 37 * 37:
        return PRIME
    if n < 2 ** 64:
        ok = all(_strong_probable(n, a) for a in _MR_BASES)
        return PRIME if ok else COMPOSITE
    if not _strong_probable(n, 2) or not _strong_lucas(n):
        return COMPOSITE
    return PROBABLE


def is_probable_prime(n):
    return is_prime(n) != COMPOSITE


# trial division against a product tree of the small primes

class _SmallPrimeTree:
    def __init__(self, bound):
        self.bound = bound
        ps = [mpz(p) for p in small_primes(bound).tolist()]
        self.levels = [ps]
        while len(self.levels[-1]) > 1:
            lv = self.levels[-1]
            self.levels.append([lv[i] * lv[i + 1] if i + 1 < len(lv) else lv[i]
                                for i in range(0, len(lv), 2)])
        self.root = self.levels[-1][0] if ps else mpz(1)

    def divisors(self, n):
        """Primes <= bound dividing n, ascending."""
        g = gmpy2.gcd(n, self.root)
        if g == 1:
            return []
        out = []
        stack = [(len(self.levels) - 1, 0, g)]
        while stack:
            lv, i, g = stack.pop()
            if lv == 0:
                out.append(int(self.levels[0][i]))
                continue
            for j in (2 * i + 1, 2 * i):
                if j < len(self.levels[lv - 1]):
                    h = gmpy2.gcd(g, self.levels[lv - 1][j])
                    if h > 1:
                        stack.append((lv - 1, j, h))
        return sorted(out)


_TREES = {}


def _tree(bound):
    if bound not in _TREES:
        _TREES[bound] = _SmallPrimeTree(bound)
    return _TREES[bound]


def small_factors(n, bound=100000):
    """Primes <= bound dividing n (one gcd against the primorial, then a descent)."""
    return _tree(int(bound)).divisors(mpz(n))


@dataclass
class FactorBudget:
    trial_bound: int = 100000
    rho_iterations: int = 2 ** 20  # per seed
    rho_seeds: int = 64


@dataclass
class Factorization:
    n: int
    factors: tuple = ()          # ((p, e), ...) ascending
    cofactor: int = 1            # unresolved composite part, 1 when complete
    prime_status: dict = field(default_factory=dict)
    hints_used: list = field(default_factory=list)

    @property
    def status(self):
        return "complete" if self.cofactor == 1 else "partial"

    def product(self):
        r = self.cofactor
        for p, e in self.factors:
            r *= p ** e
        return r

    def primes(self):
        return [p for p, _ in self.factors]

    def probabilistic(self):
        return any(v == PROBABLE for v in self.prime_status.values())

    def as_dict(self):
        return {"n": str(self.n), "factors": [[str(p), e] for p, e in self.factors],
                "cofactor": str(self.cofactor), "status": self.status,
                "probable_primes": [str(p) for p, v in self.prime_status.items() if v == PROBABLE]}

    def __str__(self):
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        if self.cofactor != 1:
            parts.append(f"[{self.cofactor}]")
        return " * ".join(parts) if parts else "1"


def _brent(n, seed, max_iter):
    """One Pollard-Brent run with x -> x^2 + seed; a nontrivial factor or None."""
    n = mpz(n)
    y, c, m = mpz(seed + 1), mpz(seed), 128
    g = r = q = mpz(1)
    x = ys = y
    it = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gmpy2.gcd(q, n)
            k += m
        it += r
        r *= 2
        if it > max_iter:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gmpy2.gcd(abs(x - ys), n)
            if g > 1:
                break
    if g == n:
        return None
    return int(g)


_HINTS = {}


def load_hints(path):
    """Read externally supplied factors: one ``n factor`` pair per line.

    Blank lines and '#' comments are skipped. A hint is only used when the
    factor actually divides the cofactor being split, and the resulting
    pieces still go through the primality test.
    """
    count = 0
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            a, b = line.split()[:2]
            _HINTS.setdefault(int(a), []).append(int(b))
            count += 1
    return count


BUNDLED_HINTS = os.path.join(os.path.dirname(__file__), "data", "chain_hints.txt")


def load_bundled_hints():
    """Hints shipped with the package for the chain sweep up to 10^5."""
    return load_hints(BUNDLED_HINTS) if os.path.exists(BUNDLED_HINTS) else 0


def clear_hints():
    _HINTS.clear()


def hints_for(n):
    return list(_HINTS.get(int(n), []))


def factorize(n, budget=None):
    """Factor n <= 2^128 by trial division and Pollard-Brent.

    Budget exhaustion leaves the unsplit part as an exposed cofactor;
    hints loaded with load_hints are tried before rho.
    """
    n = int(n)
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    if n >= MAX_N:
        raise CapacityError("n exceeds 2^128")
    return _factor_any(n, budget)


def _factor_any(n, budget=None):
    budget = budget or FactorBudget()
    counts = {}
    rest = n
    for p in small_factors(rest, budget.trial_bound):
        while rest % p == 0:
            rest //= p
            counts[p] = counts.get(p, 0) + 1
    pending = [rest] if rest > 1 else []
    hard = []
    used = []
    while pending:
        m = pending.pop()
        if m == 1:
            continue
        if _classify(m) != COMPOSITE:
            counts[m] = counts.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            pending += [r, r]
            continue
        hint = next((h for h in _HINTS.get(m, []) + _HINTS.get(n, [])
                     if 1 < h < m and m % h == 0), None)
        if hint:
            used.append((m, hint))
            pending += [hint, m // hint]
            continue
        d = None
        for seed in range(1, budget.rho_seeds + 1):
            d = _brent(m, seed, budget.rho_iterations)
            if d:
                break
        if d:
            pending += [d, m // d]
        else:
            hard.append(m)
    cof = math.prod(hard)
    facs = tuple(sorted(counts.items()))
    status = {p: _classify(p) for p, _ in facs}
    return Factorization(n, facs, cof, status, used)


def smallest_p3(n, budget=None):
    """Least prime factor of n that is 1 mod 3; None if there is none and
    'unknown' when an unresolved cofactor could still hide a smaller one."""
    n = int(n)
    if n < 2:
        raise DomainError("need n >= 2")
    f = factorize(n, budget)
    cands = [p for p, _ in f.factors if p % 3 == 1]
    best = min(cands) if cands else None
    if f.cofactor != 1:
        # every prime of the cofactor exceeds the trial bound
        tb = (budget or FactorBudget()).trial_bound
        if best is None or best > tb:
            return UNKNOWN
    return best
