"""Piecewise lower bound u -> f(u) with M_g(e^u) >= f(u).

Three regimes:
  u >= 24.4        C u^2 + C1- u + C2- + C3-/u + C4-/u^2 + C5*-/u^3
  21 <= u < 24.4   21^2 B2, by monotonicity of M_g from M_g(e^21) = 21^2 B2
  log 10 <= u < 21 a table of pieces [u_k, u_{k+1}] with K_k u^2

The table is regenerated from the g-sieve: on a piece, M_g(e^u) is at least
M_g(floor(e^{u_k})) since g >= 0, so K_k = (M_g(e^{u_k}) - err) / u_{k+1}^2
rounded down is valid across the whole piece.
"""
import csv
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DataGatedError, DomainError
from .interval import Interval

U_POLY = 24.4
U_CONST = 21.0
U_MIN = math.log(10)
STEP = 0.001          # 0.01 is too coarse for the I3 bound, see README
K_DIGITS = 8
DATA_FILE = os.path.join(os.path.dirname(__file__), "data", "envelope.csv")


@dataclass(frozen=True)
class EnvelopeTable:
    u_lo: tuple
    u_hi: tuple
    K: tuple          # Fractions with K_DIGITS decimals, rounded down

    def __len__(self):
        return len(self.K)

    @property
    def top(self):
        return float(self.u_hi[-1]) if self.u_hi else 0.0

    def pairs(self):
        """(K_i, t_i) with M_g(x) >= K_i log^2 x on the piece ending at t_i."""
        return [(float(k), math.exp(float(b))) for k, b in zip(self.K, self.u_hi)]

    def lookup(self, u):
        i = int(np.searchsorted(np.array(self.u_hi, dtype=float), u, side="left"))
        if i >= len(self.K) or u < self.u_lo[0]:
            raise DomainError(f"u={u} outside the table")
        return i


def grid(u_lo=U_MIN, u_hi=U_CONST, step=STEP):
    """Decimal grid k*step (exact Fractions) covering [u_lo, u_hi]."""
    st = Fraction(str(step))
    # decimal text of the float, so 1.01 is not read as 1.0100000000000000088
    k0 = math.floor(Fraction(repr(float(u_lo))) / st)
    k1 = math.ceil(Fraction(repr(float(u_hi))) / st)
    return [k * st for k in range(k0, k1 + 1)]


def build_envelope(u_hi=U_CONST, step=STEP, u_lo=U_MIN, progress=None):
    """Regenerate the table from one pass of the g-sieve up to e^u_hi.

    Returns (table, M_g at the last grid point, error bound).
    """
    from .density import mg_at_points
    us = grid(u_lo, u_hi, step)
    # nudged down so that floor(e^u_k) is never overestimated
    xs = np.floor(np.exp(np.array([float(u) for u in us])) * (1 - 1e-14))
    vals, err = mg_at_points(xs, progress=progress)
    scale = 10 ** K_DIGITS
    K = []
    for k in range(len(us) - 1):
        lower = Fraction(float(vals[k])) - Fraction(err)
        K.append(Fraction(math.floor(lower / us[k + 1] ** 2 * scale), scale))
    return EnvelopeTable(tuple(us[:-1]), tuple(us[1:]), tuple(K)), float(vals[-1]), err


def save_envelope(table, path=DATA_FILE):
    with open(path, "w", newline="") as fh:
        fh.write("# u_lo,u_hi,K  (M_g(e^u) >= K u^2 for u_lo <= u <= u_hi)\n")
        w = csv.writer(fh, lineterminator="\n")
        for a, b, k in zip(table.u_lo, table.u_hi, table.K):
            w.writerow([_dec(a), _dec(b), _dec(k)])


def _dec(q):
    # exact decimal text of a Fraction whose denominator divides a power of 10
    q = Fraction(q)
    d = 0
    while (q * 10 ** d).denominator != 1:
        d += 1
    n = q * 10 ** d
    s = str(abs(n.numerator)).rjust(d + 1, "0")
    body = s if d == 0 else s[:-d] + "." + s[-d:]
    return ("-" if q < 0 else "") + body


def load_envelope(path=DATA_FILE):
    if not os.path.exists(path):
        raise DataGatedError(f"no envelope table at {path}")
    lo, hi, K = [], [], []
    with open(path) as fh:
        for row in csv.reader(l for l in fh if not l.startswith("#")):
            lo.append(Fraction(row[0]))
            hi.append(Fraction(row[1]))
            K.append(Fraction(row[2]))
    return EnvelopeTable(tuple(lo), tuple(hi), tuple(K))


def poly_coeffs(constants):
    """Lower coefficients (C, C1-, C2-, C3-, C4-, C5*-) as Intervals."""
    return [Interval.coerce(constants[k]) for k in ("C", "C1-", "C2-", "C3-", "C4-", "C5*-")]


def poly_lower(u, constants):
    """C u^2 + C1- u + C2- + C3-/u + C4-/u^2 + C5*-/u^3 as an Interval."""
    c = poly_coeffs(constants)
    U = u if isinstance(u, Interval) else Interval(Fraction(u))
    return c[0] * U * U + c[1] * U + c[2] + c[3] / U + c[4] / (U * U) + c[5] / (U * U * U)


def mg_lower_envelope(u, constants=None, B2=None, table=None):
    """A lower bound for M_g(e^u) as a float (rounded down)."""
    from .bootstrap import B2_PUBLISHED, published_lower
    if u < U_MIN:
        raise DomainError("need u >= log 10")
    if u >= U_POLY:
        v = poly_lower(Fraction(u), constants or published_lower())
        return float(v.lo)
    if u >= U_CONST:
        b = Interval.coerce(B2 or B2_PUBLISHED) * 441
        return float(b.lo)
    table = table or load_envelope()
    i = table.lookup(u)
    return float(table.K[i]) * u * u * (1 - 4e-16)
