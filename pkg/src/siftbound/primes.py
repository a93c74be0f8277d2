"""Segmented prime sieve and the Chebyshev-type sums

    theta(x)  = sum_{p<=x} log p
    theta3(x) = sum_{p<=x, p=1 mod 3} log p
    Pi(x)     = sum_{p<=x} rho(p) log p / p

with rho(2)=rho(3)=0, rho(p)=3 for p=1 mod 3 and rho(p)=1 for p=2 mod 3.
"""
import math
from dataclasses import dataclass

import gmpy2
import numpy as np

from .errors import CapacityError, DomainError
from .numerics import UNIT, blocked_cumsum

PRIME_CEILING = 2 ** 63 - 1   # numpy int64 storage
DEFAULT_SEGMENT = 2 ** 20     # odd entries per segment
HP = 128                      # bits for the single-point sums

# bracket constants for Pi(x) - 2 log x
LOWER_ALL = -4.42202
LOWER_SHARP = -4.4208407
Y0 = 13800380471
UPPER_TAIL = ((Y0, -4.41961), (7 ** 8, -4.41935), (7 ** 4, -4.33649))


def small_primes(n):
    """All primes <= n by a plain (unsegmented) odd sieve."""
    n = int(n)
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    s = np.ones(n // 2 + 1, dtype=bool)  # s[i] <-> 2i+1
    s[0] = False
    for i in range(1, (math.isqrt(n) - 1) // 2 + 1):
        if s[i]:
            p = 2 * i + 1
            s[p * p // 2::p] = False
    odd = 2 * np.flatnonzero(s).astype(np.int64) + 1
    odd = odd[odd <= n]
    return np.concatenate([np.array([2], dtype=np.int64), odd])


def iter_prime_blocks(lo, hi, segment_size=DEFAULT_SEGMENT):
    """Yield ascending int64 arrays whose concatenation is the primes in [lo, hi]."""
    lo, hi = int(lo), int(hi)
    if lo < 0 or hi < lo:
        if hi < lo:
            return
        raise DomainError("need 0 <= lo <= hi")
    if hi > PRIME_CEILING:
        raise CapacityError(f"hi={hi} exceeds the 64-bit prime ceiling")
    if lo <= 2 <= hi:
        yield np.array([2], dtype=np.int64)
    base = small_primes(math.isqrt(hi))[1:]  # odd base primes
    start = max(lo, 3) | 1                    # first odd >= max(lo,3)
    span = 2 * int(segment_size)
    while start <= hi:
        end = min(start + span - 1, hi)       # inclusive
        m = (end - start) // 2 + 1            # odd numbers start, start+2, ...
        seg = np.ones(m, dtype=bool)
        lim = math.isqrt(end)
        for p in base:
            p = int(p)
            if p > lim:
                break
            q = max(p * p, ((start + p - 1) // p) * p)
            if q % 2 == 0:
                q += p
            if q > end:
                continue
            seg[(q - start) // 2::p] = False
        vals = start + 2 * np.flatnonzero(seg).astype(np.int64)
        if start == 1:
            vals = vals[vals > 1]
        if vals.size:
            yield vals
        start = end + 1 if (end + 1) % 2 else end + 2


def enumerate_primes(lo, hi, segment_size=DEFAULT_SEGMENT):
    """Ascending primes in [lo, hi]; memory per step is one segment."""
    for block in iter_prime_blocks(lo, hi, segment_size):
        for p in block.tolist():
            yield p


def primes_array(lo, hi, segment_size=DEFAULT_SEGMENT):
    blocks = list(iter_prime_blocks(lo, hi, segment_size))
    if not blocks:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(blocks)


def rho_array(p):
    p = np.asarray(p, dtype=np.int64)
    r = np.where(p % 3 == 1, 3, 1).astype(np.int64)
    r[p <= 3] = 0
    return r


class PrimeTable:
    """Immutable table of the primes <= limit with their classes mod 3."""

    def __init__(self, limit, segment_size=DEFAULT_SEGMENT):
        if limit > PRIME_CEILING:
            raise CapacityError("limit exceeds the 64-bit prime ceiling")
        self.limit = int(limit)
        self.segment_size = int(segment_size)
        self.primes = primes_array(2, self.limit, segment_size) if limit >= 2 \
            else np.zeros(0, dtype=np.int64)
        self.residues = (self.primes % 3).astype(np.int8)
        self.primes.flags.writeable = False
        self.residues.flags.writeable = False

    def __len__(self):
        return int(self.primes.size)

    def __iter__(self):
        return iter(self.primes.tolist())

    def count_upto(self, x):
        return int(np.searchsorted(self.primes, math.floor(x), side="right"))

    def rho(self):
        return rho_array(self.primes)


@dataclass(frozen=True)
class ChebyshevSums:
    x: float
    theta: float
    theta3: float
    pi_rho: float
    error_bound: float  # bound on the error of the extended precision sums
    terms: int

    @property
    def pi_rho_minus_2logx(self):
        return self.pi_rho - 2 * math.log(self.x)


def chebyshev(x, segment_size=DEFAULT_SEGMENT):
    """theta, theta3 and Pi at a single point x.

    theta and theta3 are logs of exact block products of primes; Pi is
    accumulated term by term in 128-bit binary arithmetic. The reported
    bound covers the extended precision sums; the float fields are those
    sums rounded to nearest.
    """
    if x < 2:
        raise DomainError("chebyshev needs x >= 2")
    if x > PRIME_CEILING:
        raise CapacityError("x beyond the 64-bit prime ceiling")
    ctx = gmpy2.context(precision=HP)
    n = 0
    with gmpy2.context(ctx):
        th = gmpy2.mpfr(0)
        th3 = gmpy2.mpfr(0)
        pr = gmpy2.mpfr(0)
        for block in iter_prime_blocks(2, int(math.floor(x)), segment_size):
            lst = block.tolist()
            n += len(lst)
            for k in range(0, len(lst), 512):
                chunk = lst[k:k + 512]
                th += gmpy2.log(gmpy2.mpz(math.prod(chunk)))
                one = [p for p in chunk if p % 3 == 1]
                if one:
                    th3 += gmpy2.log(gmpy2.mpz(math.prod(one)))
                for p in chunk:
                    if p > 3:
                        pr += (3 if p % 3 == 1 else 1) * gmpy2.log(p) / p
        # each operation has relative error <= 2^-HP; (n + 4) roundings per sum
        eps = 2.0 ** (-HP + 1) * (n + 8)
        bound = float(eps * (abs(th) + abs(pr))) + 1e-300
    return ChebyshevSums(float(x), float(th), float(th3), float(pr), bound, n)


def check_pi_bracket(x):
    """Test Pi(x) - 2 log x against the applicable bracket."""
    if x <= 1:
        raise DomainError("need x > 1")
    v = chebyshev(x).pi_rho_minus_2logx if x >= 2 else -2 * math.log(x)
    upper = 0.0
    for y, c in UPPER_TAIL:
        if x >= y:
            upper = c
            break
    return {"x": float(x), "value": v, "lower_bound": LOWER_ALL,
            "upper_bound": upper, "lower_ok": v > LOWER_ALL,
            "upper_ok": v < upper}


def pi_rho_profile(limit, segment_size=DEFAULT_SEGMENT):
    """Primes <= limit with the prefix sums of rho(p) log p / p (float64).

    Returns (primes, prefix, bound); prefix[k] = Pi(primes[k]).
    """
    pr = primes_array(2, limit, segment_size)
    r = rho_array(pr)
    terms = r * np.log(pr.astype(np.float64)) / pr
    pref, bound = blocked_cumsum(terms)
    # log, product and quotient each add one rounding per term
    bound += 4 * UNIT * float(terms.sum())
    return pr, pref, bound


def pi_rho_on_grid(xs, limit=None, profile=None):
    """Vector of Pi(x) - 2 log x at the points xs, plus the float error bound."""
    xs = np.asarray(xs, dtype=np.float64)
    if profile is None:
        profile = pi_rho_profile(int(limit or xs.max()))
    pr, pref, bound = profile
    idx = np.searchsorted(pr, np.floor(xs), side="right")
    vals = np.where(idx > 0, pref[np.maximum(idx - 1, 0)], 0.0)
    return vals - 2 * np.log(xs), bound


def pi_rho_extremes(limit, profile=None):
    """Exact inf and sup of Pi(x) - 2 log x over (1, limit] (up to float error).

    The function is a step function minus 2 log x; its supremum is taken at
    a prime (right-continuous value) or approached as x -> 1+, its infimum
    at a left limit before a prime or at x = limit.
    """
    if profile is None:
        profile = pi_rho_profile(limit)
    pr, pref, bound = profile
    lg = 2 * np.log(pr.astype(np.float64))
    at = pref - lg
    before = np.concatenate([[0.0], pref[:-1]]) - lg
    last = (pref[-1] if pr.size else 0.0) - 2 * math.log(limit)
    inf_vals = np.append(before, last)
    k = int(np.argmin(inf_vals))
    inf_at = int(pr[k]) if k < pr.size else int(limit)
    sup = max(float(at.max()) if pr.size else -math.inf, 0.0 - 0.0)
    # as x -> 1+ the value tends to 0 from below and is never attained
    sup_at = "1+" if sup == 0.0 else int(pr[int(np.argmax(at))])
    return {"inf": float(inf_vals[k]), "inf_left_of": inf_at,
            "sup": float(sup), "sup_at": sup_at,
            "sup_attained_max": float(at.max()) if pr.size else None,
            "error_bound": bound + 4 * UNIT * 2 * math.log(limit)}


# alternative name kept for callers of the original interface
check_lemma23 = check_pi_bracket
