"""Bookkeeping for sums over nontrivial zeros of zeta and L(s, chi_3).

Tables are plain text, one positive ordinate per line, '#' comments. No
table is bundled: the functions that need one take it as an argument and
the CLI reports such checks as data-gated.

Partial summation over zeros uses a zero-counting estimate of the form
|N(t) - main(t)| <= R(t):

    chi3: main(t) = (t/pi) log(3t/(2 pi e)),   |gamma| <= t counted
    zeta: main(t) = (t/(2 pi)) log(t/(2 pi e)), 0 < gamma <= t counted

For zeta the result is doubled so that both signs of gamma are included.
"""
import hashlib
import math
from dataclasses import dataclass

import mpmath

from .errors import DomainError, SiftboundError

CHI3_CUT = 8583.0
CHI3_GRH = 1e8 / 3
ZETA_CUT = 74920.0
ZETA_RH = 3e12
KINDS = ("zeta", "chi3")


class ZeroTableError(SiftboundError):
    pass


@dataclass(frozen=True)
class ZeroTable:
    kind: str
    ordinates: tuple
    source: str = ""
    checksum: str = ""

    def __len__(self):
        return len(self.ordinates)

    @property
    def top(self):
        return self.ordinates[-1] if self.ordinates else 0.0


def _check_kind(kind):
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}")


def parse_zeros(text, kind, source=""):
    _check_kind(kind)
    vals = []
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            v = float(s.split()[0])
        except ValueError:
            raise ZeroTableError(f"line {i}: cannot parse {s!r}") from None
        if not v > 0 or not math.isfinite(v):
            raise ZeroTableError(f"line {i}: ordinate must be positive")
        if vals and v <= vals[-1]:
            raise ZeroTableError(f"line {i}: ordinates not strictly ascending")
        vals.append(v)
    digest = hashlib.sha256(text.encode()).hexdigest()
    return ZeroTable(kind, tuple(vals), source, digest)


def load_zeros(path, kind):
    with open(path, encoding="utf-8") as fh:
        return parse_zeros(fh.read(), kind, str(path))


def inverse_square_sum(table, T):
    """2 * sum_{0 < gamma <= T} 1/(gamma^2 + 1/4)."""
    if table.ordinates and T < table.ordinates[0]:
        return 0.0
    if T > table.top:
        raise ZeroTableError(f"table stops at {table.top}, below T={T}")
    return 2 * math.fsum(1 / (g * g + 0.25) for g in table.ordinates if g <= T)


def _main(t, kind):
    if kind == "chi3":
        return t / math.pi * math.log(3 * t / (2 * math.pi * math.e))
    return t / (2 * math.pi) * math.log(t / (2 * math.pi * math.e))


def zero_count_bound(T, kind, form="simplified"):
    """main(T) + R(T): the cited upper bound for the zero count.

    For chi3 form 'raw' uses 0.247 log(3T) + 9.359 and 'simplified' the
    weaker 0.247 log T + 9.7.
    """
    _check_kind(kind)
    if T < math.e:
        raise DomainError("need T >= e")
    return _main(T, kind) + _remainder(T, kind, form)


def _remainder(t, kind, form="simplified"):
    if kind == "chi3":
        if form == "raw":
            return 0.247 * math.log(3 * t) + 9.359
        return 0.247 * math.log(t) + 9.7
    return 0.112 * math.log(t) + 0.278 * math.log(math.log(t)) + 3.385 + 1 / (5 * t)


def tail_bound(T, U, kind, variant="displayed"):
    """Majorant for the sum of 1/|gamma|^2 over T <= |gamma| <= U.

    Partial summation gives  N/t^2 |_T^U + 2 int_T^U N(t)/t^3 dt. The
    'displayed' variant weights the remainder integral by 1 instead of 2
    (as printed); 'rigorous' keeps the factor 2. U may be math.inf.
    """
    _check_kind(kind)
    if not (math.e <= T <= U):
        raise DomainError("need e <= T <= U")
    w = 1.0 if variant == "displayed" else 2.0
    if variant not in ("displayed", "rigorous"):
        raise DomainError(f"unknown variant {variant!r}")
    inf = math.isinf(U)
    if kind == "chi3":
        c = math.log(3 / (2 * math.pi * math.e))
        s = -_main(T, kind) / T ** 2 + _remainder(T, kind) / T ** 2
        s += 2 / math.pi * (1 + math.log(T)) / T + 2 / math.pi * c / T
        s += w * (0.247 * (1 + 2 * math.log(T)) / (4 * T ** 2) + 9.7 / (2 * T ** 2))
        if not inf:
            s += _main(U, kind) / U ** 2 + _remainder(U, kind) / U ** 2
            s -= 2 / math.pi * (1 + math.log(U)) / U + 2 / math.pi * c / U
            s -= w * (0.247 * (1 + 2 * math.log(U)) / (4 * U ** 2) + 9.7 / (2 * U ** 2))
        return s
    # zeta: same shape with main(t) = (t/2pi)(log t - log(2 pi e)),
    # remainder integral done numerically (it contains log log t)
    c = math.log(2 * math.pi * math.e)
    s = -_main(T, kind) / T ** 2 + _remainder(T, kind) / T ** 2
    s += 1 / math.pi * ((1 + math.log(T)) / T - c / T)
    rint = mpmath.quad(lambda t: _rem_mp(t) / t ** 3, [T, U if not inf else mpmath.inf])
    s += w * float(rint)
    if not inf:
        s += _main(U, kind) / U ** 2 + _remainder(U, kind) / U ** 2
        s -= 1 / math.pi * ((1 + math.log(U)) / U - c / U)
    return 2 * s


def _rem_mp(t):
    return 0.112 * mpmath.log(t) + 0.278 * mpmath.log(mpmath.log(t)) + 3.385 + 1 / (5 * t)


def zero_sum_enclosure(table, kind):
    """Coefficients (a, b) with |sum x^(rho-1)/(rho(rho-1))| < a + b x^(-1/2).

    b collects the tabulated inverse-square sum and the majorant between
    the table cut and the verified height; a is the tail beyond that height.
    """
    cut, top = (CHI3_CUT, CHI3_GRH) if kind == "chi3" else (ZETA_CUT, ZETA_RH)
    b_tab = inverse_square_sum(table, cut)
    b_mid = tail_bound(cut, top, kind)
    a = tail_bound(top, math.inf, kind)
    return {"a": a, "b": b_tab + b_mid, "tabulated": b_tab, "middle": b_mid}
