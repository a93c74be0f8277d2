"""The sieve density rho and the weights g, mu_g, Lambda_g built from it,
with the partial sums

    M_g(x) = sum_{n<=x} g(n)
    E(x)   = sum_{n<=x} Lambda_g(n) - 2 log x
    Delta(x) = sum_{d<=x} g(d) E(x/d).

Exact routines work with Fractions (and with exact rational coefficients of
log p for the logarithmic identities); the fast routines use binary64 with
an explicit error bound.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from .errors import CapacityError, DomainError
from .numerics import UNIT, Neumaier, blocked_cumsum
from .primes import iter_prime_blocks, primes_array, small_primes

KAPPA = 2
EXACT_LIMIT = 10 ** 6
A1 = 4.62077
A2 = 3.66778
A3 = 0.347454


@dataclass(frozen=True)
class DensityConfig:
    kappa: int = KAPPA

    @staticmethod
    def rho(p):
        if p <= 3:
            return 0
        return 3 if p % 3 == 1 else 1


def rho(p):
    return DensityConfig.rho(int(p))


def _factor_small(n):
    """Prime factorization of a modest n by trial division."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def g_prime(p):
    r = rho(p)
    return Fraction(r, p - r)


def g(n):
    """g(n) as an exact rational; zero off the squarefree integers."""
    if n < 1:
        raise DomainError("n must be positive")
    v = Fraction(1)
    for p, e in _factor_small(n).items():
        if e > 1:
            return Fraction(0)
        v *= g_prime(p)
    return v


def mu_g(n):
    """Completely multiplicative with mu_g(p) = -g(p)."""
    if n < 1:
        raise DomainError("n must be positive")
    v = Fraction(1)
    for p, e in _factor_small(n).items():
        v *= (-g_prime(p)) ** e
    return v


def lambda_g(n):
    """Lambda_g(n) as (c, p) meaning c * log p; (0, None) off prime powers."""
    if n < 1:
        raise DomainError("n must be positive")
    f = _factor_small(n)
    if len(f) != 1:
        return Fraction(0), None
    (p, e), = f.items()
    return -(-g_prime(p)) ** e, p


@dataclass(frozen=True)
class DensitySums:
    x: float
    mg: float
    lambda_sum: float
    e_of_x: float
    delta: float
    error_bound: float


# M_g

class _GTable:
    """Primes >= 5 up to a limit with g(p) and prefix sums of g(p)."""

    def __init__(self, limit):
        self.limit = int(limit)
        p = primes_array(5, max(self.limit, 5))
        self.p = p
        r = np.where(p % 3 == 1, 3.0, 1.0)
        self.gp = r / (p - r)
        pref, bound = blocked_cumsum(self.gp)
        self.G = np.concatenate([[0.0], pref])
        # each g(p) is one division away from exact
        self.G_err = bound + UNIT * float(self.G[-1])


_TABLE = [None]


def _table(x):
    t = _TABLE[0]
    if t is None or t.limit < x:
        t = _GTable(max(int(x), 1000))
        _TABLE[0] = t
    return t


def mg_fast(x):
    """(M_g(x), error bound) by descent over squarefree prime products.

    Every squarefree n > 1 is counted as a leaf m * p with p its largest
    prime factor; for each internal node m the leaves are summed at once
    from the prefix sums of g(p).
    """
    x = int(math.floor(x))
    if x < 1:
        raise DomainError("need x >= 1")
    if x < 5:
        return 1.0, 0.0
    t = _table(x)
    P, G, gp = t.p, t.G, t.gp
    Pl = P.tolist()
    npr = int(np.searchsorted(P, x, side="right"))
    acc = Neumaier()
    acc.add(1.0)
    err = 0.0
    stack = [(1, 1.0, 0, 0)]
    while stack:
        m, gm, i, depth = stack.pop()
        lim = x // m
        j = int(np.searchsorted(P, lim, side="right"))
        if j > i:
            term = gm * (G[j] - G[i])
            acc.add(term)
            err += gm * 2 * t.G_err + (depth + 3) * UNIT * abs(term)
        k = i
        while k + 1 < npr and Pl[k] * Pl[k + 1] <= lim:
            stack.append((m * Pl[k], gm * gp[k], k + 1, depth + 1))
            k += 1
    return acc.value, err + acc.error_bound()


def mg_exact(x):
    """M_g(x) as an exact Fraction (x <= 10^6)."""
    return mg_exact_many([x])[0]


class _PrimeGSums:
    """Exact sums of g(p) over index ranges of the primes 5 <= p <= top.

    A product tree stores (num, den) with den = prod (p - rho) and
    num / den = sum rho / (p - rho) over each node's range.
    """

    def __init__(self, top):
        self.top = top
        self.ps = [int(p) for p in small_primes(top) if p >= 5]
        self.nodes = {}
        if self.ps:
            self._build(0, len(self.ps))

    def _build(self, lo, hi):
        if hi - lo == 1:
            p = self.ps[lo]
            r = rho(p)
            v = (gmpy2.mpz(r), gmpy2.mpz(p - r))
        else:
            mid = (lo + hi) // 2
            a, b = self._build(lo, mid), self._build(mid, hi)
            v = (a[0] * b[1] + b[0] * a[1], a[1] * b[1])
        self.nodes[lo, hi] = v
        return v

    def range_sum(self, i, j):
        """sum of g(p_k) for i <= k < j, as an mpq."""
        parts = []

        def rec(lo, hi):
            if j <= lo or hi <= i:
                return
            if i <= lo and hi <= j:
                parts.append(self.nodes[lo, hi])
                return
            mid = (lo + hi) // 2
            rec(lo, mid)
            rec(mid, hi)
        if i < j:
            rec(0, len(self.ps))
        num, den = gmpy2.mpz(0), gmpy2.mpz(1)
        for a, b in parts:
            num, den = num * b + a * den, den * b
        return gmpy2.mpq(num, den)


def mg_exact_many(xs):
    """Exact M_g at several points.

    With F(y, i) the sum of g(m) over m <= y whose prime factors are all at
    least p_i, F(y, i) = 1 + sum_k g(p_k) F(y / p_k, k + 1). Primes with
    p_k p_{k+1} > y only contribute g(p_k) and are summed as one range.
    F is memoised, so nearby query points share the work.
    """
    import bisect
    xs = [int(math.floor(v)) for v in xs]
    top = max(xs)
    if top > EXACT_LIMIT:
        raise CapacityError(f"exact mode limited to x <= {EXACT_LIMIT}")
    if top < 1:
        raise DomainError("need x >= 1")
    T = _PrimeGSums(top)
    ps = T.ps
    gs = [gmpy2.mpq(rho(p), p - rho(p)) for p in ps]
    memo = {}

    def F(y, i):
        key = (y, i)
        if key in memo:
            return memo[key]
        j = bisect.bisect_right(ps, y)
        tot = gmpy2.mpq(1)
        k = i
        while k < j and k + 1 < len(ps) and ps[k] * ps[k + 1] <= y:
            tot += gs[k] * F(y // ps[k], k + 1)
            k += 1
        tot += T.range_sum(k, j)
        memo[key] = tot
        return tot

    out = []
    for x in xs:
        v = F(x, 0) if x >= 1 else gmpy2.mpq(0)
        out.append(Fraction(int(v.numerator), int(v.denominator)))
    return out


def _mg_exact_walk(xs):
    """Exact M_g at several points with one depth-first descent.

    A second exact route: works with the integer D = prod (p - rho(p))
    over 5 <= p <= max(xs); D g(n) is an integer obtained by exact
    division along the descent. Slow beyond 10^5.
    """
    xs = [int(math.floor(v)) for v in xs]
    top = max(xs)
    if top > EXACT_LIMIT:
        raise CapacityError(f"exact mode limited to x <= {EXACT_LIMIT}")
    if top < 1:
        raise DomainError("need x >= 1")
    ps = [int(p) for p in small_primes(top) if p >= 5]
    D = gmpy2.mpz(1)
    for p in ps:
        D *= p - rho(p)
    qs = sorted(set(xs))
    buckets = [gmpy2.mpz(0)] * (len(qs) + 1)

    def bucket(n):
        # index of the smallest query >= n
        lo, hi = 0, len(qs)
        while lo < hi:
            mid = (lo + hi) // 2
            if qs[mid] < n:
                lo = mid + 1
            else:
                hi = mid
        return lo

    nps = len(ps)
    rr = [rho(p) for p in ps]

    def walk(n, v, i):
        # depth first, so only the current path holds big integers
        buckets[bucket(n)] += v
        for k in range(i, nps):
            p = ps[k]
            if n * p > top:
                break
            walk(n * p, v // (p - rr[k]) * rr[k], k + 1)

    walk(1, D, 0)
    run = gmpy2.mpz(0)
    vals = {}
    for q, b in zip(qs, buckets):
        run += b
        vals[q] = Fraction(int(run), int(D))
    return [vals[v] for v in xs]


def _g_segment(a, b, base):
    """g(n) for a <= n < b as float64, via a multiplicative sieve."""
    n = np.arange(a, b, dtype=np.int64)
    gv = np.ones(b - a)
    prod = np.ones(b - a, dtype=np.int64)
    for q in (2, 3):
        s = (-a) % q
        gv[s::q] = 0.0
    for p in base:
        p = int(p)
        if p * p >= b:
            break
        r = 3.0 if p % 3 == 1 else 1.0
        s = (-a) % p
        gv[s::p] *= r / (p - r)
        prod[s::p] *= p
        pp = p * p
        s = (-a) % pp
        gv[s::pp] = 0.0
    rest = n // prod
    big = rest > 1
    rr = np.where(rest % 3 == 1, 3.0, 1.0)
    gv = np.where(big, gv * rr / (rest - rr), gv)
    return gv


def mg_at_points(xs, segment=2 ** 22, progress=None):
    """M_g at many points from one segmented pass of the g-sieve.

    Returns (values, error bound) with the bound valid for every point.
    """
    xs = np.floor(np.asarray(xs, dtype=np.float64)).astype(np.int64)
    if xs.size == 0:
        return np.zeros(0), 0.0
    top = int(xs.max())
    if top < 1:
        raise DomainError("need x >= 1")
    order = np.argsort(xs)
    out = np.empty(xs.size)
    base = small_primes(math.isqrt(top) + 1)
    base = base[base >= 5]
    run = Neumaier()
    blk_bound = 0.0
    qi = 0
    a = 1
    while a <= top and qi < xs.size:
        b = min(a + segment, top + 1)
        gv = _g_segment(a, b, base)
        pref, bd = blocked_cumsum(gv)
        blk_bound += bd
        base_val = run.value
        while qi < xs.size and xs[order[qi]] < b:
            x = xs[order[qi]]
            out[order[qi]] = base_val + (pref[x - a] if x >= a else 0.0)
            qi += 1
        run.add(math.fsum(gv))
        a = b
        if progress:
            progress(b)
    total = run.value
    # per-term error: at most ~12 roundings for the products and divisions
    bound = blk_bound + run.error_bound() + 16 * UNIT * total + UNIT * total
    return out, bound


def mg(x, mode="fast"):
    """DensitySums at a single point (Delta only for x <= 10^5)."""
    if x < 1:
        raise DomainError("need x >= 1")
    if mode == "exact":
        v = float(mg_exact(x))
        err = 0.0
    else:
        v, err = mg_fast(x)
    lam, e, lerr = lambda_sum_and_E(x, with_error=True) if x > 1 else (0.0, 0.0, 0.0)
    d = delta(x) if x <= 10 ** 5 else math.nan
    return DensitySums(float(x), v, lam, e, d, err + lerr)


# Lambda_g and E

def _prime_powers(limit):
    """Sorted prime powers q = p^e <= limit (p >= 5) with their Lambda_g values."""
    P = primes_array(5, max(int(limit), 5))
    vals, pts = [], []
    r = np.where(P % 3 == 1, 3.0, 1.0)
    gp = r / (P - r)
    lg = np.log(P.astype(np.float64))
    e = 1
    q = P.astype(object) if False else P.copy()
    mask = q <= limit
    while mask.any():
        qq = q[mask]
        pts.append(qq)
        vals.append(-((-gp[mask]) ** e) * lg[mask])
        e += 1
        with np.errstate(over="ignore"):
            nxt = q * P
        mask = mask & (P <= limit // np.maximum(q, 1)) & (nxt <= limit)
        q = np.where(mask, nxt, q)
    pts = np.concatenate(pts) if pts else np.zeros(0, dtype=np.int64)
    vals = np.concatenate(vals) if vals else np.zeros(0)
    o = np.argsort(pts, kind="stable")
    return pts[o], vals[o]


class LambdaProfile:
    """Prefix sums of Lambda_g over the prime powers up to a limit."""

    def __init__(self, limit):
        self.limit = int(limit)
        self.q, self.v = _prime_powers(self.limit)
        pref, bound = blocked_cumsum(self.v)
        self.S = pref
        # log and power evaluation: a few roundings per term
        self.bound = bound + 8 * UNIT * float(np.abs(self.v).sum())

    def lambda_sum(self, x):
        x = np.asarray(x, dtype=np.float64)
        k = np.searchsorted(self.q, np.floor(x), side="right")
        return np.where(k > 0, self.S[np.maximum(k - 1, 0)], 0.0)

    def E(self, x):
        x = np.asarray(x, dtype=np.float64)
        return self.lambda_sum(x) - KAPPA * np.log(x)

    def extremes(self, lo=1.0):
        """inf and sup of E over [lo, limit] (lo=1 means the open end 1+).

        E is a step function minus 2 log x, so the sup is approached at a
        jump point (or at lo) and the inf at a left limit before a jump
        (or at the right end).
        """
        q, S = self.q, self.S
        lq = KAPPA * np.log(q.astype(np.float64))
        at = S - lq
        before = np.concatenate([[0.0], S[:-1]]) - lq
        sel = q >= lo
        sel_before = q > lo
        cands_sup = list(at[sel])
        cands_inf = list(before[sel_before]) + list(at[sel])
        start = float(self.lambda_sum(lo)) - KAPPA * math.log(lo) if lo > 1 else 0.0
        cands_sup.append(start)
        cands_inf.append(start if lo > 1 else 0.0)
        endv = float(self.E(self.limit))
        cands_inf.append(endv)
        return {"inf": float(min(cands_inf)), "sup": float(max(cands_sup)),
                "sup_attained": lo > 1, "error_bound": self.bound + 4 * UNIT * math.log(self.limit)}


def lambda_sum_and_E(x, with_error=False):
    """(sum_{n<=x} Lambda_g(n), E(x)), accumulated with compensation."""
    if x <= 1:
        raise DomainError("need x > 1")
    acc = Neumaier()
    X = int(math.floor(x))
    for block in iter_prime_blocks(5, X):
        for p in block.tolist():
            r = rho(p)
            gp = r / (p - r)
            lp = math.log(p)
            q = p
            e = 1
            while q <= X:
                acc.add(-((-gp) ** e) * lp)
                q *= p
                e += 1
    s = acc.value
    e = s - KAPPA * math.log(x)
    if with_error:
        return s, e, acc.error_bound(6 * UNIT)
    return s, e


def _squarefree_with_g(x):
    """All squarefree d <= x with g(d) != 0 as (d, g(d) Fraction)."""
    ps = [int(p) for p in small_primes(int(x)) if p >= 5]
    out = []
    stack = [(1, Fraction(1), 0)]
    while stack:
        d, gd, i = stack.pop()
        out.append((d, gd))
        for k in range(i, len(ps)):
            p = ps[k]
            if d * p > x:
                break
            stack.append((d * p, gd * g_prime(p), k + 1))
    out.sort()
    return out


def delta(x):
    """Delta(x) = sum_{d<=x} g(d) E(x/d) in binary64 (E(1) = 0)."""
    if x < 1:
        raise DomainError("need x >= 1")
    prof = LambdaProfile(max(int(x), 5))
    acc = Neumaier()
    for d, gd in _squarefree_with_g(x):
        y = x / d
        if y > 1:
            acc.add(float(gd) * float(prof.E(y)))
    return acc.value


# exact logarithmic identities: values are dicts p -> Fraction meaning
# sum c_p log p

def _ladd(acc, other, scale=1):
    for p, c in other.items():
        v = acc.get(p, 0) + scale * c
        if v:
            acc[p] = v
        else:
            acc.pop(p, None)
    return acc


def _log_of(n):
    return {p: Fraction(e) for p, e in _factor_small(int(n)).items()}


def lambda_sum_exact(y):
    """sum_{n<=y} Lambda_g(n) as exact coefficients of log p."""
    y = int(math.floor(y))
    out = {}
    for p in small_primes(y).tolist():
        if p < 5:
            continue
        gp = g_prime(p)
        c = Fraction(0)
        q, e = p, 1
        while q <= y:
            c += -(-gp) ** e
            q *= p
            e += 1
        if c:
            out[p] = c
    return out


def check_identity(x):
    """sum g(n) log n == kappa sum g(d) log(x/d) + Delta(x), exactly.

    Both sides are built as exact rational combinations of log p; x must
    be an integer so that log x is such a combination as well.
    """
    x = int(x)
    if x < 1:
        raise DomainError("need x >= 1")
    if x > 10 ** 4:
        raise CapacityError("check_identity is limited to x <= 10^4")
    sq = _squarefree_with_g(x)
    lhs = {}
    for n, gn in sq:
        _ladd(lhs, _log_of(n), gn)
    rhs = {}
    logx = _log_of(x)
    cache = {}
    for d, gd in sq:
        lxd = _ladd(dict(logx), _log_of(d), -1)      # log(x/d)
        _ladd(rhs, lxd, KAPPA * gd)
        y = x // d
        if y not in cache:
            cache[y] = lambda_sum_exact(y)
        e_part = _ladd(dict(cache[y]), lxd, -KAPPA)  # E(x/d)
        _ladd(rhs, e_part, gd)
    return lhs == rhs


def check_inversion(n):
    """sum_{d|n} g(d) mu_g(n/d) == [n == 1] exactly."""
    s = Fraction(0)
    for d in _divisors(n):
        s += g(d) * mu_g(n // d)
    return s == (1 if n == 1 else 0)


def check_convolution(n):
    """g(n) log n == sum_{d|n} g(d) Lambda_g(n/d) exactly (log p coefficients)."""
    lhs = {}
    _ladd(lhs, _log_of(n), g(n))
    rhs = {}
    for d in _divisors(n):
        c, p = lambda_g(n // d)
        if p:
            _ladd(rhs, {p: c}, g(d))
    return lhs == rhs


def _divisors(n):
    ds = [1]
    for p, e in _factor_small(n).items():
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def check_mg_log2_bound(x):
    """Compare M_g(x) with A3 log^2 x; reported, never asserted."""
    if x < 10:
        raise DomainError("need x >= 10")
    if x <= 10 ** 4:
        v = float(mg_exact(x))
        err = 0.0
    else:
        v, err = mg_fast(x)
    rhs = A3 * math.log(x) ** 2
    return {"x": float(x), "mg": v, "bound": rhs, "ok": v + err < rhs,
            "error_bound": err}


# alternative name kept for callers of the original interface
check_lemma25 = check_mg_log2_bound
