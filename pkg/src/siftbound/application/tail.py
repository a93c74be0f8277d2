"""The reciprocal-sum contradiction for primes above e^16.

With w = sqrt(x)/L the sum of 1/p over prime divisors p > x of N is at most

    8/(L sqrt x) + (1/3 + 1/L^2 + 1/(3 e^12)) * (I1 + I2 + I3)

where, writing f for a lower bound of M_g(e^u),

    I1 = int_{24.4}^inf 2u^3/P(u) du     (P(u) = u^3 * polynomial lower form)
    I2 = int_{21}^{24.4} 2/(21^2 B2) du
    I3 = int_{log w}^{21} 2/f(u) du      (regenerated envelope table).

Adding the primes below x and comparing with log(8/3) gives the verdict.
"""
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from ..bootstrap import B2_PUBLISHED, published_lower
from ..envelope import U_CONST, U_POLY, load_envelope, poly_coeffs
from ..errors import DataGatedError, DomainError, VerificationError
from ..interval import Interval

U_CUT = 1e4
RATIO = 5e-4            # geometric node spacing for the trapezoid enclosure
THRESHOLD = math.log(8 / 3)
E16 = math.exp(16)


@dataclass
class TailReport:
    L: float
    x: float
    w: float
    integral1: float
    integral1_lo: float
    integral1_simpson: float
    integral2: float
    integral3: float
    weight: float
    weighted: float
    tail_total: float
    small_sum: float = math.nan
    final_sum: float = math.nan
    threshold: float = THRESHOLD
    verdict: str = "inconclusive"
    notes: tuple = ()

    def as_dict(self):
        d = asdict(self)
        d["notes"] = list(self.notes)
        return d


# exact polynomial helpers, ascending coefficients

def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padd(a, b, s=1):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x + s * y for x, y in zip(a, b)]


def _pder(a):
    return [i * a[i] for i in range(1, len(a))] or [Fraction(0)]


def _pshift(a, s):
    """Coefficients of a(t + s)."""
    out = [Fraction(0)]
    for c in reversed(a):
        out = _padd(_pmul(out, [Fraction(s), Fraction(1)]), [c])
    return out


def _nonneg_from(a, s):
    """Sufficient test that a(u) >= 0 for all u >= s: shifted coefficients >= 0."""
    return all(c >= 0 for c in _pshift(a, s))


def _lower_poly(constants):
    """P(u) = C u^5 + C1 u^4 + ... + C5, from the lower interval ends."""
    c = [iv.lo_fraction() for iv in poly_coeffs(constants)]
    return list(reversed(c))


def check_convexity(P, u0):
    """True if 2u^3/P(u) is positive, decreasing and convex on [u0, inf)."""
    A = [Fraction(0)] * 3 + [Fraction(2)]
    dA, ddA = _pder(A), _pder(_pder(A))
    dP, ddP = _pder(P), _pder(_pder(P))
    q = _padd(_pmul(_padd(_pmul(ddA, P), _pmul(A, ddP), -1), P),
              _pmul(_pmul([Fraction(2)], dP), _padd(_pmul(dA, P), _pmul(A, dP), -1)), -1)
    decreasing = _padd(_pmul(A, dP), _pmul(dA, P), -1)   # A P' - A' P >= 0
    return _nonneg_from(P, u0) and _nonneg_from(q, u0) and _nonneg_from(decreasing, u0)


def _f_interval(P, u):
    U = Interval(u)
    v = Interval(0)
    for c in reversed(P):
        v = v * U + Interval(c)
    return Interval(2) * U * U * U / v


def _simpson(f, a, b, tol, depth=50):
    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6 * (fa + 4 * flm + fm)
        right = (b - m) / 6 * (fm + 4 * frm + fb)
        if depth <= 0 or abs(left + right - whole) <= 15 * tol:
            return left + right + (left + right - whole) / 15
        return (rec(a, m, fa, flm, fm, left, tol / 2, depth - 1)
                + rec(m, b, fm, frm, fb, right, tol / 2, depth - 1))
    fa, fb, fm = f(a), f(b), f((a + b) / 2)
    return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth)


def integral1(constants=None, u0=U_POLY, u_cut=U_CUT, ratio=RATIO, tol=1e-6):
    """(lower, upper, simpson) for int_{u0}^inf 2u^3/P(u) du.

    Trapezoid (upper) and midpoint (lower) on a geometric grid are a
    rigorous enclosure for a convex integrand; beyond u_cut the integrand
    is below 2/(C u^2) once C1 u^4 + ... + C5 >= 0 there.
    """
    constants = constants or published_lower()
    P = _lower_poly(constants)
    if not check_convexity(P, Fraction(u0).limit_denominator(1000)):
        raise VerificationError("integrand not convex and decreasing on the range")
    if not _nonneg_from(P[:5], Fraction(int(u_cut))):
        raise VerificationError("tail majorant 2/(C u^2) not valid past u_cut")
    nodes = [Fraction(u0).limit_denominator(1000)]
    r = Fraction(ratio).limit_denominator(10 ** 6)
    while nodes[-1] < u_cut:
        nodes.append(min(nodes[-1] * (1 + r), Fraction(int(u_cut))))
    # rationals blow up; round the nodes to 1e-9 while keeping them exact
    nodes = [Fraction(round(float(v) * 10 ** 9), 10 ** 9) for v in nodes]
    fv = [_f_interval(P, u) for u in nodes]
    up = Interval(0)
    lo = Interval(0)
    for k in range(len(nodes) - 1):
        h = Interval(nodes[k + 1] - nodes[k])
        up = up + h * (fv[k] + fv[k + 1]) / 2
        lo = lo + h * _f_interval(P, (nodes[k] + nodes[k + 1]) / 2)
    C = poly_coeffs(constants)[0]
    tail = Interval(2) / (C * Interval(int(u_cut)))
    up = up + tail
    fP = [float(c) for c in P]

    def f(u):
        return 2 * u ** 3 / np.polyval(fP[::-1], u)
    simp = _simpson(f, float(u0), float(u_cut), tol) + 2 / (float(C.mid) * u_cut)
    return float(lo.lo), float(up.hi), simp


def integral2(B2=None, u_lo=U_CONST, u_hi=U_POLY):
    """(u_hi - u_lo) * 2 / (21^2 B2), rounded up."""
    B = Interval.coerce(B2 or B2_PUBLISHED)
    v = Interval(Fraction(u_hi).limit_denominator(1000) - Fraction(u_lo).limit_denominator(1000)) * 2 / (B * 441)
    return float(v.hi)


def integral3(log_w, table=None, u_hi=U_CONST):
    """int_{log w}^{21} 2/(K u^2) du over the envelope pieces, rounded up."""
    table = table or load_envelope()
    if table.u_lo[0] > log_w or table.top < u_hi - 1e-9:
        raise DataGatedError("envelope table does not cover [log w, 21]")
    total = Interval(0)
    for a, b, K in zip(table.u_lo, table.u_hi, table.K):
        a, b = max(a, log_w), min(b, u_hi)
        if b <= a:
            continue
        A, B = Interval(Fraction(a)), Interval(Fraction(b))
        if K <= 0:
            raise VerificationError("envelope has a nonpositive piece")
        total = total + Interval(2) / Interval(K) * (A.reciprocal() - B.reciprocal())
    return float(total.hi)


def tail_integrals(L, x, constants=None, B2=None, table=None, require_i3=True):
    """TailReport for given L and x (x as a float or via log x)."""
    if not x > math.exp(12):
        raise DomainError("need x > e^12")
    w = math.sqrt(x) / L
    if not w > math.exp(6):
        raise DomainError("need w = sqrt(x)/L > e^6")
    log_w = math.log(x) / 2 - math.log(L)
    if log_w > U_CONST:
        raise DomainError("log w above 21 is not supported")
    notes = []
    i1_lo, i1, simp = integral1(constants)
    i2 = integral2(B2)
    try:
        i3 = integral3(log_w, table)
    except DataGatedError as exc:
        if require_i3:
            raise
        i3 = math.nan
        notes.append(str(exc))
    wgt = Interval(1) / 3 + Interval(1) / (Interval(Fraction(L)) ** 2) \
        + (Interval(3) * Interval(12).exp()).reciprocal()
    s = Interval(i1) + Interval(i2) + (Interval(i3) if i3 == i3 else Interval(0))
    weighted = wgt * s
    extra = Interval(8) / (Interval(Fraction(L)) * Interval(Fraction(x)).sqrt())
    total = weighted + extra
    return TailReport(L=L, x=x, w=w, integral1=i1, integral1_lo=i1_lo,
                      integral1_simpson=simp, integral2=i2, integral3=i3,
                      weight=float(wgt.hi), weighted=float(weighted.hi),
                      tail_total=float(total.hi), notes=tuple(notes))


def abundancy_contradiction(report, small_sum):
    """final = e^16/(e^16 - 1) (tail + small); contradiction iff final < log(8/3)."""
    e16 = Interval(16).exp()
    factor = e16 / (e16 - 1)
    final = factor * (Interval(Fraction(report.tail_total)) + Interval(Fraction(small_sum)))
    report.small_sum = small_sum
    report.final_sum = float(final.hi)
    thr = Interval(Fraction(8, 3)).log()
    report.verdict = "contradiction" if final.hi < thr.lo else "inconclusive"
    return report.verdict


def final_from_parts(tail_total, small_sum):
    """The combination on printed decimals, for the arithmetic checks."""
    e16 = Interval(16).exp()
    return float((e16 / (e16 - 1) * (Interval(Fraction(str(tail_total))) + Interval(Fraction(str(small_sum))))).hi)


# primes in (e^16, hi] that survive the membership filters

def _cube_roots_of_unity(q):
    for h in range(2, q):
        r = pow(h, (q - 1) // 3, q)
        if r != 1:
            return r, r * r % q
    raise DomainError("q must be 1 mod 3")


def _remainders(P, ns):
    """P mod n for every n, by a remainder tree."""
    levels = [[gmpy2.mpz(n) for n in ns]]
    while len(levels[-1]) > 1:
        cur = levels[-1]
        levels.append([cur[i] * cur[i + 1] if i + 1 < len(cur) else cur[i]
                       for i in range(0, len(cur), 2)])
    rems = [P % levels[-1][0]]
    for lev in reversed(levels[:-1]):
        rems = [rems[i // 2] % lev[i] for i in range(len(lev))]
    return rems


def reciprocal_sum_small(hi, lo=None, budget=None):
    """Sum of 1/p over primes lo < p <= hi with p_1 > lo and p_3(p_1^2+p_1+1) > lo.

    p_1 is the least prime factor = 1 mod 3 of p^2 + p + 1. Since every
    prime factor of m^2 + m + 1 other than 3 is 1 mod 3, both filters say
    that no prime q = 1 mod 3 with q <= lo divides the relevant value.
    Returns (sum, details) with unresolved primes counted in.
    """
    from ..factor import FactorBudget, factorize
    from ..primes import primes_array, small_primes
    lo = E16 if lo is None else lo
    hi_i, lo_i = int(math.floor(hi)), int(math.floor(lo))
    if hi_i <= lo_i:
        return 0.0, {"count": 0, "unresolved": [], "survivors_first": 0}
    if hi_i > 10 ** 10:
        raise DomainError("desk mode limited to hi <= 1e10")
    budget = budget or FactorBudget()
    ps = primes_array(lo_i + 1, hi_i)
    alive = np.ones(ps.size, dtype=bool)
    qs = [q for q in small_primes(lo_i).tolist() if q % 3 == 1]
    # first filter: p mod q avoids the two roots of t^2 + t + 1
    base = lo_i + 1
    span = hi_i - base + 1
    mark = np.ones(span, dtype=bool)
    for q in qs:
        for r in _cube_roots_of_unity(q):
            s = (r - base) % q
            mark[s::q] = False
    alive &= mark[ps - base]
    cand = ps[alive].tolist()
    P = gmpy2.mpz(1)
    for q in qs:
        P *= q
    unresolved = []
    p1s = []
    keep = []
    for p in cand:
        m = p * p + p + 1
        while m % 3 == 0:
            m //= 3
        # all prime factors of m exceed lo, and m < lo^3: prime or two primes
        if gmpy2.is_prime(m, 30):
            p1 = m
        else:
            fz = factorize(m, budget)
            if fz.cofactor != 1:
                unresolved.append(p)
                continue
            p1 = min(fz.primes())
        p1s.append(p1 * p1 + p1 + 1)
        keep.append(p)
    total = math.fsum(1 / p for p in unresolved)
    passed = []
    if p1s:
        for p, v, n in zip(keep, _remainders(P, p1s), p1s):
            if gmpy2.gcd(v, n) == 1:
                passed.append(p)
    total += math.fsum(1 / p for p in passed)
    return total, {"count": len(passed), "unresolved": unresolved,
                   "survivors_first": len(cand)}
