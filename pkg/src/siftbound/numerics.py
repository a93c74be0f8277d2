"""Small summation helpers with explicit roundoff bounds."""
import math

import numpy as np

UNIT = 2.0 ** -53  # unit roundoff of binary64


class Neumaier:
    """Compensated running sum; also tracks sum of |terms| for error bounds."""

    __slots__ = ("s", "c", "abs_sum", "n")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0
        self.abs_sum = 0.0
        self.n = 0

    def add(self, x):
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t
        self.abs_sum += abs(x)
        self.n += 1

    @property
    def value(self):
        return self.s + self.c

    def error_bound(self, term_rel_err=0.0):
        # compensated summation: 2u|S| + O(n u^2) sum|x|, plus per-term error
        u = UNIT
        return (2 * u + 2 * self.n * u * u + term_rel_err) * self.abs_sum + u * abs(self.value)


def blocked_cumsum(terms, block=1024):
    """Prefix sums of a float64 array with a rigorous-ish error bound.

    The array is cut into blocks; inside a block np.cumsum is used, block
    totals are formed with math.fsum and then accumulated. Returns (prefix, bound)
    where bound majorizes |computed - exact| for every prefix (terms taken as
    exact floats).
    """
    terms = np.asarray(terms, dtype=np.float64)
    n = terms.size
    if n == 0:
        return np.zeros(0), 0.0
    nb = (n + block - 1) // block
    pad = nb * block - n
    t = np.concatenate([terms, np.zeros(pad)]) if pad else terms
    t = t.reshape(nb, block)
    inner = np.cumsum(t, axis=1)
    totals = np.array([math.fsum(row) for row in t])
    base = np.concatenate([[0.0], np.cumsum(totals)[:-1]])
    out = (inner + base[:, None]).reshape(-1)[:n]
    abs_total = float(np.abs(terms).sum()) * (1 + 1e-10)
    bound = (block + nb + 3) * UNIT * abs_total
    return out, bound
