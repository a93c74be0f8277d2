"""Closed intervals with outward rounding on MPFR floats.

Every endpoint operation runs under an explicit rounding mode (down for
lower ends, up for upper ends), so an Interval always contains the exact
real result of the operation on any points of its operands.
"""
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpq, mpz

PREC = 128
_DOWN = gmpy2.context(precision=PREC, round=gmpy2.RoundDown)
_UP = gmpy2.context(precision=PREC, round=gmpy2.RoundUp)


def _conv(x, ctx):
    with gmpy2.context(ctx):
        if isinstance(x, Fraction):
            return mpfr(mpq(x.numerator, x.denominator))
        if isinstance(x, int):
            return mpfr(mpz(x))
        if isinstance(x, str):
            return mpfr(x)
        return mpfr(x)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if isinstance(lo, Interval):
            self.lo, self.hi = lo.lo, lo.hi
            return
        self.lo = _conv(lo, _DOWN)
        self.hi = _conv(lo if hi is None else hi, _UP)
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def _raw(cls, lo, hi):
        r = cls.__new__(cls)
        r.lo, r.hi = lo, hi
        return r

    # constructors for constants
    @classmethod
    def pi(cls):
        with gmpy2.context(_DOWN):
            a = gmpy2.const_pi()
        with gmpy2.context(_UP):
            b = gmpy2.const_pi()
        return cls._raw(a, b)

    @classmethod
    def euler_gamma(cls):
        with gmpy2.context(_DOWN):
            a = gmpy2.const_euler()
        with gmpy2.context(_UP):
            b = gmpy2.const_euler()
        return cls._raw(a, b)

    @staticmethod
    def coerce(x):
        return x if isinstance(x, Interval) else Interval(x)

    def __add__(self, o):
        o = Interval.coerce(o)
        with gmpy2.context(_DOWN):
            a = self.lo + o.lo
        with gmpy2.context(_UP):
            b = self.hi + o.hi
        return Interval._raw(a, b)

    __radd__ = __add__

    def __neg__(self):
        # negation is exact at equal precision, but only inside our context
        with gmpy2.context(_DOWN):
            a = -self.hi
        with gmpy2.context(_UP):
            b = -self.lo
        return Interval._raw(a, b)

    def __sub__(self, o):
        return self + (-Interval.coerce(o))

    def __rsub__(self, o):
        return Interval.coerce(o) - self

    def __mul__(self, o):
        o = Interval.coerce(o)
        ends = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        with gmpy2.context(_DOWN):
            a = min(x * y for x, y in ends)
        with gmpy2.context(_UP):
            b = max(x * y for x, y in ends)
        return Interval._raw(a, b)

    __rmul__ = __mul__

    def reciprocal(self):
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        with gmpy2.context(_DOWN):
            a = 1 / self.hi
        with gmpy2.context(_UP):
            b = 1 / self.lo
        return Interval._raw(a, b)

    def __truediv__(self, o):
        return self * Interval.coerce(o).reciprocal()

    def __rtruediv__(self, o):
        return Interval.coerce(o) * self.reciprocal()

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return (self ** (-k)).reciprocal()
        r = Interval(1)
        base = self
        if k % 2 == 0 and self.lo < 0 < self.hi:
            with gmpy2.context(_UP):
                m = max(-self.lo, self.hi)
                b = m ** k
            return Interval._raw(mpfr(0), b)
        for _ in range(k):
            r = r * base
        return r

    def _mono(self, fn):
        with gmpy2.context(_DOWN):
            a = fn(self.lo)
        with gmpy2.context(_UP):
            b = fn(self.hi)
        return Interval._raw(a, b)

    def log(self):
        if self.lo <= 0:
            raise ValueError("log of nonpositive interval")
        return self._mono(gmpy2.log)

    def exp(self):
        return self._mono(gmpy2.exp)

    def sqrt(self):
        if self.lo < 0:
            raise ValueError("sqrt of negative interval")
        return self._mono(gmpy2.sqrt)

    def loglog(self):
        return self.log().log()

    # queries
    @property
    def mid(self):
        return float((self.lo + self.hi) / 2)

    @property
    def width(self):
        with gmpy2.context(_UP):
            return float(self.hi - self.lo)

    def contains(self, x):
        x = Interval.coerce(x)
        return self.lo <= x.lo and x.hi <= self.hi

    def overlaps(self, o):
        o = Interval.coerce(o)
        return not (self.hi < o.lo or o.hi < self.lo)

    def lt(self, x):
        """Certainly below x."""
        return self.hi < Interval.coerce(x).lo

    def gt(self, x):
        return self.lo > Interval.coerce(x).hi

    def hull(self, o):
        o = Interval.coerce(o)
        return Interval._raw(min(self.lo, o.lo), max(self.hi, o.hi))

    def lo_fraction(self):
        return Fraction(*self.lo.as_integer_ratio())

    def hi_fraction(self):
        return Fraction(*self.hi.as_integer_ratio())

    def __float__(self):
        return self.mid

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    def fmt(self, digits=12):
        return f"[{float(self.lo):.{digits}g}, {float(self.hi):.{digits}g}]"
