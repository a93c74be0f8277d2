"""Explicit constants in outward-rounded interval arithmetic.

Covers the Euler product for C = C_rho, the constant B1 = L'(0,chi)/L(0,chi)
for the non-principal character mod 3, the error term eps(x) of the
Lambda_g sum, and the recursive ladder that turns the bracket on E(x)
into a two-sided asymptotic expansion

    M_g(x) = C log^2 x + C1 log x + C2 + C3/log x + C4/log^2 x + C5/log^3 x

valid for x >= x1 = 57648010.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

from .errors import DomainError, VerificationError
from .interval import Interval, _DOWN, _UP
from .primes import iter_prime_blocks

A1 = Interval("4.62077")
A2 = Interval("3.66778")
A3 = Interval("0.347454")
X1 = 57648010
Y0 = 13800380471
Y1 = 2 * 10 ** 10
LOG49 = Interval(49).log()

# published bracket for C and the literature value of L'(1, chi)
C_PUBLISHED = Interval("0.0547621780808", "0.0547621781")
L1_PRIME = Interval("0.2226629689", "0.2226629690")
B2_PUBLISHED = Interval("0.0790359", "0.0790360")

# printed ladder values; the starred ones are intermediates
PRINTED = {
    "C1-": "0.34952", "C1+": "0.55827",
    "C2-": "-4.0926", "C2+": "5.4214",
    "C3-": "-32.137", "C3+": "32.137",
    "C4-": "-261.51", "C4+": "262.06",
    "C5*-": "-21876.28", "C5*+": "23261.02",
    "C2*-": "-33.434", "C2*+": "40.836",
    "C3*-": "-313.26", "C3*+": "313.26",
    "C4*-": "-2641.81", "C4*+": "2678.01",
}
# the fourteen printed numbers (C3+ and C3*+ are printed as negatives)
PRINTED_GROUPS = [("C1-",), ("C1+",), ("C2-",), ("C2+",), ("C3-", "C3+"),
                  ("C4-",), ("C4+",), ("C5*-",), ("C5*+",), ("C2*-",),
                  ("C2*+",), ("C3*-", "C3*+"), ("C4*-",), ("C4*+",)]


def printed_interval(key):
    """The printed (truncated) value widened by one unit of its last digit."""
    txt = PRINTED[key]
    digits = len(txt.split(".")[1])
    v = Fraction(txt)
    unit = Fraction(1, 10 ** digits)
    return Interval(v - unit, v) if v < 0 else Interval(v, v + unit)


def published_lower(C=None):
    """C and the printed lower coefficients, as used for the tail integral."""
    out = {"C": C or C_PUBLISHED}
    for k in ("C1-", "C2-", "C3-", "C4-", "C5*-"):
        out[k] = printed_interval(k)
    return out


def recomputed_lower(constants):
    L = constants.ladder
    out = {"C": constants.C}
    for k in ("C1-", "C2-", "C3-", "C4-", "C5*-"):
        out[k] = L[k]
    return out


def l1_chi():
    """L(1, chi) = pi / (3 sqrt 3)."""
    return Interval.pi() / (3 * Interval(3).sqrt())


def euler_product_C(limit, segment_size=2 ** 20):
    """Enclosure of C from the Euler product over p <= limit plus a tail bound.

    C = L(1,chi)/12 * prod_{p=1(3)} (p-1)^3/(p^2(p-3)) * prod_{p=2(3),p>=5} (p^2-1)/p^2
    """
    limit = int(limit)
    if limit < 10 ** 4:
        raise DomainError("limit must be at least 10^4")
    lo = gmpy2.mpfr(1)
    hi = gmpy2.mpfr(1)
    for block in iter_prime_blocks(5, limit, segment_size):
        lst = block.tolist()
        for k in range(0, len(lst), 256):
            num = gmpy2.mpz(1)
            den = gmpy2.mpz(1)
            for p in lst[k:k + 256]:
                if p % 3 == 1:
                    num *= (p - 1) ** 3
                    den *= p * p * (p - 3)
                else:
                    num *= p * p - 1
                    den *= p * p
            q = mpq(num, den)
            with gmpy2.context(_DOWN):
                lo = lo * gmpy2.mpfr(q)
            with gmpy2.context(_UP):
                hi = hi * gmpy2.mpfr(q)
    # tails: sum over odd n >= m of 1/n^2 < 1/(2(m-1)), m the first odd > limit
    m = limit + 1 if limit % 2 == 0 else limit + 2
    s = Interval(mpq(1, 2 * (m - 1)))
    up = (Interval(3) + Interval(mpq(8, limit - 3))) * s
    tail = Interval(1 - s.hi, up.exp().hi)
    return l1_chi() / 12 * Interval._raw(lo, hi) * tail


def b1_constant(l1_prime=L1_PRIME):
    """log(2 pi/3) + gamma - L'(1,chi)/L(1,chi) with the ingested L'(1,chi)."""
    return (2 * Interval.pi() / 3).log() + Interval.euler_gamma() - l1_prime / l1_chi()


def b1_reference(dps=30):
    """L'(0,chi)/L(0,chi) evaluated directly with mpmath (independent route)."""
    import mpmath
    with mpmath.workdps(dps):
        chi = [0, 1, -1]
        L0 = mpmath.dirichlet(0, chi)
        dL0 = mpmath.dirichlet(0, chi, 1)
        dL1 = mpmath.dirichlet(1, chi, 1)
        return {"L'(0)/L(0)": float(dL0 / L0), "L'(1,chi)": float(dL1),
                "L(0,chi)": float(L0)}


# eps(x): error of replacing the Lambda_g sum by Pi(x)

_P1 = (7, 13, 19, 31)
_P2 = (5, 11, 17, 23, 29)


def epsilon_bound(x, variant="derived"):
    """The majorant eps(x) as an Interval.

    variant picks the coefficient of the small-prime sums:
      displayed: (p-1) for p = 1 mod 3 and (p-1) for p = 2 mod 3
      derived:   (p-3) for p = 1 mod 3, as in the termwise bound it comes
                 from, and (p-1) for p = 2 mod 3
      rigorous:  (p-3)^2/3 and (p-1)^2, which also absorbs p^e <= x
    """
    if x < 7 ** 4:
        raise DomainError("eps(x) needs x >= 7^4")
    X = Interval(x)
    lx = X.log()
    tot = Interval(0)
    for p in _P1:
        P = Interval(p)
        eta = Interval(mpq(p - 3, 3)).log() / P.log()
        coef = {"displayed": Interval(p - 1), "derived": Interval(p - 3),
                "rigorous": Interval(mpq((p - 3) ** 2, 3))}[variant]
        tot = tot + coef * P.log() / (P * (eta * lx).exp())
    for p in _P2:
        P = Interval(p)
        lam = Interval(p - 1).log() / P.log()
        coef = Interval((p - 1) ** 2) if variant == "rigorous" else Interval(p - 1)
        tot = tot + coef * P.log() / (P * (lam * lx).exp())
    tot = tot + Interval("1.2375") * (Interval("-0.317") * lx).exp()
    tot = tot + 3 * (lx + Interval("0.00266")) / (X.sqrt() - 3)
    cube = (lx / 3).exp()
    tot = tot + 9 * (lx + Interval("0.08557")) / ((cube - 3) ** 2)
    return tot


# the recursive ladder

def bootstrap_step(lower, upper, x0, C=None):
    """One pass of the recursion.

    lower, upper: coefficient lists [a_0..a_i0], [b_0..b_i0] of a bracket
    sum a_i log^{2-i} u < M_g(u) < sum b_i log^{2-i} u valid for u >= x0.
    Returns (new_lower, new_upper, new_x0); the new lists have one more
    entry. Higher terms of the new bracket are dropped only when that
    weakens it (nonnegative lower terms, nonpositive upper terms).
    """
    C = C or C_PUBLISHED
    a = [Interval.coerce(v) for v in lower]
    b = [Interval.coerce(v) for v in upper]
    n = max(len(a), len(b))
    a += [Interval(0)] * (max(n, 3) - len(a))
    b += [Interval(0)] * (max(n, 3) - len(b))
    seed = all(v.lo == 0 and v.hi == 0 for v in a)
    # with a = 0 the upper bound on Delta is just Delta < 0, valid for u > 1
    x_new = x0 if seed else 49 * x0
    l = LOG49
    f = 1 - l / Interval(49 * x0).log()
    lo = [C, 3 * A2 * a[0] - A1 * b[0],
          Interval("1.5") * A2 * (a[1] - 2 * a[0] * l) - A1 * b[1],
          A2 * (a[0] * l * l - a[1] * l + a[2]) - A1 * b[2]]
    hi = [C, 3 * A1 * b[0] - A2 * a[0],
          Interval("1.5") * A1 * b[1] - A2 * (a[1] - 2 * a[0] * l),
          A1 * b[2] - A2 * (a[0] * l * l - a[1] * l + a[2])]
    for i in range(3, n):
        fi = f ** (2 - i)
        ai = a[i]
        # (1 - log49/t)^(2-i) lies in [1, f^(2-i)] for t >= log(49 x0); both
        # brackets need a lower bound for a_i times that factor
        if ai.hi <= 0:
            term = ai * fi
        elif ai.lo >= 0:
            term = ai
        else:
            term = ai.hull(ai * fi)
        lo.append(3 * A2 / (i + 1) * term - A1 * b[i])
        hi.append(3 * A1 * b[i] / (i + 1) - A2 * term)
    keep = n + 1
    for j in range(keep, len(lo)):
        if lo[j].lo < 0 or hi[j].hi > 0:
            keep = j + 1
    return lo[:keep], hi[:keep], x_new


@dataclass
class ConstantSet:
    C: Interval
    A1: Interval = A1
    A2: Interval = A2
    A3: Interval = A3
    x1: int = X1
    y0: int = Y0
    y1: int = Y1
    B1: Interval = None
    B2: Interval = None
    ladder: dict = field(default_factory=dict)
    thresholds: list = field(default_factory=list)
    sources: dict = field(default_factory=dict)

    def lower_coeffs(self):
        L = self.ladder
        return [self.C, L["C1-"], L["C2-"], L["C3-"], L["C4-"], L["C5*-"]]

    def upper_coeffs(self):
        L = self.ladder
        return [self.C, L["C1+"], L["C2+"], L["C3+"], L["C4+"], L["C5*+"]]

    def as_dict(self):
        def iv(v):
            return {"lo": repr(float(v.lo)), "hi": repr(float(v.hi))}
        out = {"C": iv(self.C), "A1": "4.62077", "A2": "3.66778", "A3": "0.347454",
               "x1": self.x1, "y0": self.y0, "y1": self.y1,
               "B1": iv(self.B1) if self.B1 else None,
               "B2": iv(self.B2) if self.B2 else None,
               "thresholds": self.thresholds,
               "ladder": {k: iv(v) for k, v in self.ladder.items()},
               "sources": self.sources}
        return out


def ladder_constants(C=None):
    """Run the recursion from the seed b0 = A3 and name the coefficients."""
    C = C or C_PUBLISHED
    lo, hi, x0 = bootstrap_step([0], [A3], 10, C)
    th = [x0]
    lo, hi, x0 = bootstrap_step(lo, hi, x0, C)
    th.append(x0)
    L = {"C1-": lo[1], "C1+": hi[1], "C2*-": lo[2], "C2*+": hi[2]}
    lo, hi, x0 = bootstrap_step(lo, hi, x0, C)
    th.append(x0)
    L.update({"C2-": lo[2], "C2+": hi[2], "C3*-": lo[3], "C3*+": hi[3]})
    lo, hi, x0 = bootstrap_step(lo, hi, x0, C)
    th.append(x0)
    L.update({"C3-": lo[3], "C3+": hi[3], "C4*-": lo[4], "C4*+": hi[4]})
    lo, hi, x0 = bootstrap_step(lo, hi, x0, C)
    th.append(x0)
    L.update({"C4-": lo[4], "C4+": hi[4], "C5*-": lo[5], "C5*+": hi[5]})
    if x0 != X1:
        raise VerificationError(f"ladder ends at {x0}, expected {X1}")
    for k in L:
        if k.endswith("-"):
            other = k[:-1] + "+"
            if not L[k].hi < L[other].lo:
                raise VerificationError(f"{k} not below {other}")
    prov = {"C": "published bracket" if C is C_PUBLISHED else "computed",
            "A1": "published", "A2": "published", "A3": "published",
            "L'(1,chi)": "literature value 0.2226629689", "B2": "published"}
    return ConstantSet(C=C, B1=b1_constant(), B2=B2_PUBLISHED, ladder=L,
                       thresholds=th, sources=prov)


def _trunc(v, digits):
    q = gmpy2.mpq(v)
    s = 10 ** digits
    t = int(q * s)  # toward zero
    return t


def compare_printed(ladder, printed=PRINTED):
    """For each printed constant: does the enclosure truncate to the printed
    digits within one unit of the last place?"""
    out = {}
    for k, txt in printed.items():
        iv = ladder[k]
        digits = len(txt.split(".")[1])
        target = int(round(float(txt) * 10 ** digits))
        lo_t = _trunc(iv.lo, digits)
        hi_t = _trunc(iv.hi, digits)
        ok = abs(lo_t - target) <= 1 and abs(hi_t - target) <= 1
        out[k] = {"printed": txt, "computed": f"{iv.mid:.{digits + 3}f}", "ok": ok}
    return out


# alternative name kept for callers of the original interface
theorem21_constants = ladder_constants
